#include <doctest.h>

#include <string>
#include <vector>

#include "codesurvey/csv.hpp"
#include "codesurvey/rng.hpp"

using namespace codesurvey;

TEST_CASE("encode_field quotes exactly when needed") {
    CHECK(csv::encode_field("plain") == "plain");
    CHECK(csv::encode_field("") == "");
    CHECK(csv::encode_field("with space") == "with space");
    CHECK(csv::encode_field("a,b") == "\"a,b\"");
    CHECK(csv::encode_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv::encode_field("line\nbreak") == "\"line\nbreak\"");
    CHECK(csv::encode_field("cr\rhere") == "\"cr\rhere\"");
}

TEST_CASE("encode_row joins with commas and ends with LF") {
    CHECK(csv::encode_row({"a", "b", "c"}) == "a,b,c\n");
    CHECK(csv::encode_row({"a,b", "c"}) == "\"a,b\",c\n");
    CHECK(csv::encode_row({""}) == "\n");
    CHECK(csv::encode_row({"", ""}) == ",\n");
}

TEST_CASE("parse handles the rfc 4180 shapes") {
    auto rows = csv::parse("aaa,bbb,ccc\nzzz,yyy,xxx\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].fields == std::vector<std::string>{"aaa", "bbb", "ccc"});
    CHECK(rows[1].fields == std::vector<std::string>{"zzz", "yyy", "xxx"});

    rows = csv::parse("\"aaa\",\"b\"\"bb\",\"ccc\"\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].fields == std::vector<std::string>{"aaa", "b\"bb", "ccc"});

    rows = csv::parse("\"aaa\",\"b\nbb\",\"ccc\"\nafter,row\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].fields == std::vector<std::string>{"aaa", "b\nbb", "ccc"});
    CHECK(rows[0].line == 1);
    CHECK(rows[1].line == 3);  // embedded newline advanced the counter
}

TEST_CASE("parse accepts crlf and missing trailing newline") {
    auto rows = csv::parse("a,b\r\nc,d\r\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].fields == std::vector<std::string>{"a", "b"});
    CHECK(rows[1].fields == std::vector<std::string>{"c", "d"});

    rows = csv::parse("a,b");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].fields == std::vector<std::string>{"a", "b"});

    // A lone CR is data, not a record separator.
    rows = csv::parse("a\rb,c\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].fields == std::vector<std::string>{"a\rb", "c"});
}

TEST_CASE("empty and blank-line edges") {
    CHECK(csv::parse("").empty());
    auto rows = csv::parse("\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].fields == std::vector<std::string>{""});
    rows = csv::parse("a\n\nb\n");
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].fields == std::vector<std::string>{""});
}

TEST_CASE("parse errors carry the record's starting line") {
    try {
        csv::parse("ok,row\nbad\"field,x\n");
        FAIL("expected ParseError");
    } catch (const csv::ParseError& e) {
        CHECK(std::string(e.what()) == "quote inside unquoted field (line 2)");
        CHECK(e.line == 2);
    }
    try {
        csv::parse("a,b\n\"unterminated\n");
        FAIL("expected ParseError");
    } catch (const csv::ParseError& e) {
        CHECK(std::string(e.what()) == "unterminated quoted field (line 2)");
        CHECK(e.line == 2);
    }
}

namespace {

std::string random_field(SplitMix64& rng) {
    static const std::string alphabet = "ab,\"\n\r 7-";
    size_t len = rng.bounded(10);
    std::string out;
    for (size_t i = 0; i < len; ++i) out.push_back(alphabet[rng.bounded(alphabet.size())]);
    return out;
}

}  // namespace

TEST_CASE("parse inverts encode_row on adversarial tables") {
    SplitMix64 rng(0xc57);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<std::vector<std::string>> table;
        size_t nrows = 1 + rng.bounded(20);
        for (size_t r = 0; r < nrows; ++r) {
            std::vector<std::string> row;
            size_t nfields = 1 + rng.bounded(8);
            for (size_t f = 0; f < nfields; ++f) row.push_back(random_field(rng));
            table.push_back(std::move(row));
        }
        std::string text;
        for (const auto& row : table) text += csv::encode_row(row);
        auto parsed = csv::parse(text);
        REQUIRE(parsed.size() == table.size());
        int last_line = 0;
        for (size_t r = 0; r < table.size(); ++r) {
            CHECK(parsed[r].fields == table[r]);
            CHECK(parsed[r].line > last_line);
            last_line = parsed[r].line;
        }
    }
}
