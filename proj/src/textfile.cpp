#include "codesurvey/textfile.hpp"

#include <fstream>
#include <sstream>

namespace codesurvey::textfile {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Parses a double-quoted value starting at s[0] == '"'. The closing quote
// must be the last non-space character on the line.
std::string parse_quoted(const std::string& s, int line) {
    std::string out;
    size_t i = 1;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '\\') {
            if (i + 1 >= s.size()) throw ParseError("dangling escape in quoted value", line);
            char e = s[++i];
            switch (e) {
                case '"': out.push_back('"'); break;
                case '\\': out.push_back('\\'); break;
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                case 'r': out.push_back('\r'); break;
                default: throw ParseError(std::string("unknown escape \\") + e, line);
            }
        } else if (c == '"') {
            if (!trim(s.substr(i + 1)).empty())
                throw ParseError("trailing content after closing quote", line);
            return out;
        } else {
            out.push_back(c);
        }
    }
    throw ParseError("unterminated quoted value", line);
}

}  // namespace

const std::string& Section::get(const std::string& key, const std::string& fallback) const {
    for (const auto& [k, v] : entries)
        if (k == key) return v;
    return fallback;
}

bool Section::has(const std::string& key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return true;
    return false;
}

std::vector<std::string> Section::all(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries)
        if (k == key) out.push_back(v);
    return out;
}

std::vector<Section> parse(const std::string& text) {
    std::vector<Section> sections;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        if (s[0] == '[') {
            if (s.back() != ']') throw ParseError("unterminated section header", line);
            std::string name = trim(s.substr(1, s.size() - 2));
            if (name.empty()) throw ParseError("empty section name", line);
            sections.push_back(Section{name, line, {}});
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", line);
        std::string key = trim(s.substr(0, eq));
        if (key.empty()) throw ParseError("empty key", line);
        if (sections.empty()) throw ParseError("entry before any [section]", line);
        std::string rhs = trim(s.substr(eq + 1));
        std::string value = (!rhs.empty() && rhs[0] == '"') ? parse_quoted(rhs, line) : rhs;
        sections.back().entries.emplace_back(key, value);
    }
    return sections;
}

std::vector<Section> parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string quote_if_needed(const std::string& value) {
    bool need = value.empty();
    for (char c : value) {
        if (c == '"' || c == '\\' || c == '\n' || c == '\t' || c == '\r' || c == '#') need = true;
    }
    if (!value.empty() && (value.front() == ' ' || value.back() == ' ')) need = true;
    if (!need) return value;
    std::string out = "\"";
    for (char c : value) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

std::string serialize(const std::vector<Section>& sections) {
    std::string out;
    bool first = true;
    for (const auto& sec : sections) {
        if (!first) out.push_back('\n');
        first = false;
        out += "[" + sec.name + "]\n";
        for (const auto& [k, v] : sec.entries) out += k + " = " + quote_if_needed(v) + "\n";
    }
    return out;
}

}  // namespace codesurvey::textfile
