#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace codesurvey::textfile {

// Sectioned key=value text format used for survey schemas, scripted agent
// rules, and run configs. Grammar:
//
//   # comment (full line only)
//   [section_name]
//   key = value
//   key = "quoted value with \" \\ \n \t \r escapes"
//
// Repeated keys are preserved in order; repeated section names open new
// sections. Unquoted values are trimmed. Blank lines are ignored.

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line(line) {}
    int line;
};

struct Section {
    std::string name;
    int line = 0;  // 1-based line of the [header]
    std::vector<std::pair<std::string, std::string>> entries;

    // First value for key, or fallback.
    const std::string& get(const std::string& key, const std::string& fallback = "") const;
    bool has(const std::string& key) const;
    std::vector<std::string> all(const std::string& key) const;
};

std::vector<Section> parse(const std::string& text);
std::vector<Section> parse_file(const std::string& path);

// Inverse of parse: quotes values when needed so parse(serialize(s)) == s.
std::string serialize(const std::vector<Section>& sections);

std::string quote_if_needed(const std::string& value);

}  // namespace codesurvey::textfile
