#include <doctest.h>

#include <string>
#include <vector>

#include "codesurvey/rng.hpp"
#include "codesurvey/textfile.hpp"

using namespace codesurvey;
namespace tf = codesurvey::textfile;

TEST_CASE("parse handles comments, blanks, repeats and quoting") {
    const std::string doc =
        "# survey config\n"
        "\n"
        "[agent]\n"
        "model = gpt-4o\n"
        "keyword = bpf\n"
        "keyword = verifier\n"
        "note = \"line one\\nline two\"\n"
        "empty = \"\"\n"
        "hash = value # not a comment\n"
        "\n"
        "[agent]\n"
        "model = second\n";
    auto sections = tf::parse(doc);
    REQUIRE(sections.size() == 2);
    CHECK(sections[0].name == "agent");
    CHECK(sections[0].line == 3);
    CHECK(sections[0].get("model") == "gpt-4o");
    CHECK(sections[0].all("keyword") == std::vector<std::string>{"bpf", "verifier"});
    CHECK(sections[0].get("note") == "line one\nline two");
    CHECK(sections[0].get("empty") == "");
    CHECK(sections[0].has("empty"));
    CHECK_FALSE(sections[0].has("missing"));
    CHECK(sections[0].get("missing", "fallback") == "fallback");
    // '#' only starts a comment at the beginning of a line.
    CHECK(sections[0].get("hash") == "value # not a comment");
    CHECK(sections[1].get("model") == "second");
    CHECK(sections[1].line == 11);
}

TEST_CASE("unquoted values are trimmed, inner spaces and '=' survive") {
    auto sections = tf::parse("[s]\nk =   a  b=c   \n");
    REQUIRE(sections.size() == 1);
    CHECK(sections[0].get("k") == "a  b=c");
}

TEST_CASE("quoted values keep exact spacing and escapes") {
    auto sections = tf::parse("[s]\nk = \" spaced \\t\\r\\\\ \\\" out \"  \n");
    CHECK(sections[0].get("k") == " spaced \t\r\\ \" out ");
}

TEST_CASE("parse errors carry messages and line numbers") {
    auto expect_error = [](const std::string& text, const std::string& what, int line) {
        try {
            tf::parse(text);
            FAIL("expected ParseError for: " << text);
        } catch (const tf::ParseError& e) {
            CHECK(std::string(e.what()) == what + " (line " + std::to_string(line) + ")");
            CHECK(e.line == line);
        }
    };
    expect_error("[s]\nkey value\n", "expected key = value", 2);
    expect_error("[s\nk = v\n", "unterminated section header", 1);
    expect_error("[]\n", "empty section name", 1);
    expect_error("[s]\n = v\n", "empty key", 2);
    expect_error("k = v\n", "entry before any [section]", 1);
    expect_error("[s]\nk = \"abc\n", "unterminated quoted value", 2);
    expect_error("[s]\nk = \"abc\\\n", "dangling escape in quoted value", 2);
    expect_error("[s]\nk = \"a\\q\"\n", "unknown escape \\q", 2);
    expect_error("[s]\n\n\nk = \"a\" junk\n", "trailing content after closing quote", 4);
}

TEST_CASE("quote_if_needed leaves plain values alone") {
    CHECK(tf::quote_if_needed("plain-value_1.2") == "plain-value_1.2");
    CHECK(tf::quote_if_needed("a b") == "a b");
    CHECK(tf::quote_if_needed("") == "\"\"");
    CHECK(tf::quote_if_needed(" lead") == "\" lead\"");
    CHECK(tf::quote_if_needed("tab\there") == "\"tab\\there\"");
}

namespace {

std::string random_value(SplitMix64& rng) {
    static const std::string alphabet = "ab z\"\\\n\t\r#=[]().-";
    size_t len = rng.bounded(12);
    std::string out;
    for (size_t i = 0; i < len; ++i) out.push_back(alphabet[rng.bounded(alphabet.size())]);
    return out;
}

}  // namespace

TEST_CASE("parse inverts serialize on adversarial documents") {
    SplitMix64 rng(0xabcdef);
    for (int iter = 0; iter < 300; ++iter) {
        std::vector<tf::Section> sections;
        size_t nsec = 1 + rng.bounded(4);
        for (size_t s = 0; s < nsec; ++s) {
            tf::Section sec;
            sec.name = "sec" + std::to_string(rng.bounded(3));
            size_t nent = rng.bounded(6);
            for (size_t e = 0; e < nent; ++e)
                sec.entries.emplace_back("k" + std::to_string(rng.bounded(4)), random_value(rng));
            sections.push_back(std::move(sec));
        }
        auto parsed = tf::parse(tf::serialize(sections));
        REQUIRE(parsed.size() == sections.size());
        for (size_t s = 0; s < sections.size(); ++s) {
            CHECK(parsed[s].name == sections[s].name);
            CHECK(parsed[s].entries == sections[s].entries);
        }
    }
}

TEST_CASE("serialize golden output") {
    std::vector<tf::Section> sections;
    sections.push_back(tf::Section{"first", 0, {{"a", "1"}, {"b", "two words"}}});
    sections.push_back(tf::Section{"second", 0, {{"c", "line\nbreak"}}});
    CHECK(tf::serialize(sections) ==
          "[first]\n"
          "a = 1\n"
          "b = two words\n"
          "\n"
          "[second]\n"
          "c = \"line\\nbreak\"\n");
}
