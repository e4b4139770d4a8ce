#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace codesurvey::csv {

// RFC 4180 with LF record separators. A field is quoted iff it contains
// a comma, double quote, CR, or LF. Parsing accepts both LF and CRLF and
// embedded newlines inside quoted fields.

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line(line) {}
    int line;
};

std::string encode_field(const std::string& field);
std::string encode_row(const std::vector<std::string>& fields);

struct Row {
    std::vector<std::string> fields;
    int line = 0;  // 1-based line the record started on
};

std::vector<Row> parse(const std::string& text);
std::vector<Row> parse_file(const std::string& path);

}  // namespace codesurvey::csv
