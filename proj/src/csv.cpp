#include "codesurvey/csv.hpp"

#include <fstream>
#include <sstream>

namespace codesurvey::csv {

std::string encode_field(const std::string& field) {
    bool need = false;
    for (char c : field) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            need = true;
            break;
        }
    }
    if (!need) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string encode_row(const std::vector<std::string>& fields) {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += encode_field(fields[i]);
    }
    out.push_back('\n');
    return out;
}

std::vector<Row> parse(const std::string& text) {
    std::vector<Row> rows;
    size_t i = 0;
    int line = 1;
    const size_t n = text.size();
    while (i < n) {
        Row row;
        row.line = line;
        std::string field;
        bool quoted = false;
        bool any = false;
        for (;;) {
            if (quoted) {
                if (i >= n) throw ParseError("unterminated quoted field", row.line);
                char c = text[i++];
                if (c == '"') {
                    if (i < n && text[i] == '"') {
                        field.push_back('"');
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    if (c == '\n') ++line;
                    field.push_back(c);
                }
            } else if (i >= n) {
                row.fields.push_back(field);
                break;
            } else {
                char c = text[i++];
                if (c == '"' && field.empty() && !any) {
                    quoted = true;
                    any = true;
                } else if (c == ',') {
                    row.fields.push_back(field);
                    field.clear();
                    any = false;
                } else if (c == '\n' || (c == '\r' && i < n && text[i] == '\n')) {
                    if (c == '\r') ++i;
                    ++line;
                    row.fields.push_back(field);
                    break;
                } else if (c == '"') {
                    throw ParseError("quote inside unquoted field", row.line);
                } else {
                    field.push_back(c);
                    any = true;
                }
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Row> parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

}  // namespace codesurvey::csv
