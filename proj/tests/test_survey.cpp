#include <doctest.h>

#include <string>
#include <vector>

#include "codesurvey/survey.hpp"
#include "support.hpp"

using namespace codesurvey;

TEST_CASE("bundled schema golden structure") {
    SurveySchema s = testsupport::bundled_schema();
    CHECK(s.id == "commit_survey_v1");
    CHECK(s.title == "eBPF commit survey");
    CHECK(s.description.find("kernel expert") != std::string::npos);
    REQUIRE(s.questions.size() == 7);

    const auto& q = s.questions;
    CHECK(q[0].id == "summary");
    CHECK(q[0].kind == QuestionKind::SummaryText);
    CHECK(q[0].prompt == "Provide a one-sentence summary of the commit (max 30 words).");
    CHECK(q[0].max_words == 30);
    CHECK(q[0].choices.empty());
    CHECK_FALSE(q[0].allow_unsure);

    CHECK(q[1].id == "keywords");
    CHECK(q[1].kind == QuestionKind::KeywordList);
    CHECK(q[1].prompt == "Extract up to three keywords from the commit.");
    CHECK(q[1].max_items == 3);
    CHECK(q[1].choices.empty());

    CHECK(q[2].id == "commit_classification");
    CHECK(q[2].kind == QuestionKind::SingleChoice);
    CHECK(q[2].prompt == "What is the main type of the commit?");
    CHECK(q[2].choices.size() == 11);
    CHECK(q[2].allow_unsure);

    CHECK(q[3].id == "commit_complexity");
    CHECK(q[3].kind == QuestionKind::SingleChoice);
    CHECK(q[3].prompt == "Estimate the complexity of implementing this commit.");
    CHECK(q[3].choices.size() == 6);
    CHECK(q[3].allow_unsure);

    CHECK(q[4].id == "major_related_implementation_component");
    CHECK(q[4].kind == QuestionKind::SingleChoice);
    CHECK(q[4].prompt == "What is the main implementation component modified?");
    CHECK(q[4].choices.size() == 13);
    CHECK(q[4].allow_unsure);

    CHECK(q[5].id == "major_related_logic_component");
    CHECK(q[5].kind == QuestionKind::SingleChoice);
    CHECK(q[5].prompt == "What is the main logic component affected?");
    CHECK(q[5].choices.size() == 11);
    CHECK(q[5].allow_unsure);

    CHECK(q[6].id == "usecases_or_submodule_events");
    CHECK(q[6].kind == QuestionKind::MultiChoice);
    CHECK(q[6].prompt ==
          "What eBPF use cases or subsystem events does the commit relate to?");
    CHECK(q[6].choices.size() == 18);
    CHECK(q[6].allow_unsure);
}

TEST_CASE("bundled schema option labels are verbatim") {
    SurveySchema s = testsupport::bundled_schema();
    const Question& cls = *s.find("commit_classification");
    CHECK(cls.choices.front() == Choice{"a", "Bug fix"});
    CHECK(cls.choices[1] == Choice{"b", "New feature"});
    CHECK(cls.choices[7] == Choice{"h", "Security fix"});
    CHECK(cls.choices[8] == Choice{"i", "Merge commit"});
    CHECK(cls.choices.back() == Choice{"k", kUnsureLabel});

    const Question& impl = *s.find("major_related_implementation_component");
    CHECK(impl.choices.front() == Choice{"a", "eBPF verifier"});
    CHECK(impl.choices[5] == Choice{"f", "libbpf library"});
    CHECK(impl.choices[11] == Choice{"l", "Unrelated to eBPF subsystem"});
    CHECK(impl.choices.back() == Choice{"m", kUnsureLabel});

    const Question& logic = *s.find("major_related_logic_component");
    CHECK(logic.choices[5] == Choice{"f", "BPF Type Format (BTF) logic"});
    CHECK(logic.choices.back() == Choice{"k", kUnsureLabel});

    const Question& use = *s.find("usecases_or_submodule_events");
    CHECK(use.choices.front() == Choice{"a", "XDP-related programs"});
    CHECK(use.choices[5] == Choice{"f", "Kernel probes (kprobe/ftrace)"});
    CHECK(use.choices[13] == Choice{"n", "Improves overall eBPF infrastructure"});
    CHECK(use.choices.back() == Choice{"r", kUnsureLabel});

    // Every choice question offers the unsure escape hatch exactly once, last.
    for (const auto& q : s.questions) {
        if (!q.is_choice()) continue;
        int unsure = 0;
        for (const auto& c : q.choices)
            if (c.label == kUnsureLabel) ++unsure;
        CHECK(unsure == 1);
        CHECK(q.choices.back().label == kUnsureLabel);
    }
}

TEST_CASE("schema serialization round-trips exactly") {
    SurveySchema s = testsupport::bundled_schema();
    SurveySchema again = parse_survey_schema(serialize_survey_schema(s));
    CHECK(again == s);
}

namespace {

const char* kMinimalSchema =
    "[survey]\n"
    "id = t\n"
    "[question]\n"
    "id = q1\n"
    "kind = single_choice\n"
    "prompt = Pick one.\n"
    "choice = a | First\n"
    "choice = b | Second\n";

void expect_schema_error(const std::string& text, const std::string& needle) {
    try {
        parse_survey_schema(text);
        FAIL("expected error containing: " << needle);
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
}

}  // namespace

TEST_CASE("schema parse errors") {
    CHECK(parse_survey_schema(kMinimalSchema).questions.size() == 1);
    expect_schema_error("[question]\nid = q\nkind = summary_text\nprompt = p\nmax_words = 5\n",
                        "missing [survey] section");
    expect_schema_error("[survey]\nid = t\n", "survey has no questions");
    expect_schema_error("[survey]\ntitle = no id\n", "[survey] missing id");
    expect_schema_error(std::string(kMinimalSchema) + "[survey]\nid = t2\n",
                        "duplicate [survey] section");
    expect_schema_error(std::string(kMinimalSchema) + "[question]\nkind = single_choice\n",
                        "[question] missing id");
    expect_schema_error(std::string(kMinimalSchema) + kMinimalSchema + "x = y\n",
                        "duplicate [survey] section");
    expect_schema_error(
        std::string(kMinimalSchema) +
            "[question]\nid = q1\nkind = single_choice\nprompt = p\nchoice = a | A\nchoice = b | B\n",
        "duplicate question id: q1");
    expect_schema_error("[survey]\nid = t\n[question]\nid = q\nkind = wat\nprompt = p\n",
                        "question q: unknown kind");
    expect_schema_error("[survey]\nid = t\n[question]\nid = q\nkind = summary_text\n",
                        "question q: missing prompt");
    expect_schema_error(
        "[survey]\nid = t\n[question]\nid = q\nkind = single_choice\nprompt = p\nchoice = a First\n",
        "choice needs 'code | label'");
    expect_schema_error(
        "[survey]\nid = t\n[question]\nid = q\nkind = single_choice\nprompt = p\nchoice = | First\n",
        "empty choice code or label");
    expect_schema_error(
        "[survey]\nid = t\n[question]\nid = q\nkind = single_choice\nprompt = p\n"
        "choice = a | A\nchoice = a | B\n",
        "duplicate code a");
    expect_schema_error(
        "[survey]\nid = t\n[question]\nid = q\nkind = single_choice\nprompt = p\n"
        "choice = ab | A\nchoice = c | B\n",
        "not a single lowercase letter");
    expect_schema_error(
        "[survey]\nid = t\n[question]\nid = q\nkind = single_choice\nprompt = p\nchoice = a | A\n",
        "choice question needs at least 2 options");
    expect_schema_error(
        "[survey]\nid = t\n[question]\nid = q\nkind = summary_text\nprompt = p\n"
        "max_words = 5\nchoice = a | A\n",
        "text question has options");
    expect_schema_error(
        "[survey]\nid = t\n[question]\nid = q\nkind = single_choice\nprompt = p\n"
        "allow_unsure = true\nchoice = a | A\nchoice = b | B\n",
        "allow_unsure needs exactly one option labeled");
    expect_schema_error(
        "[survey]\nid = t\n[question]\nid = q\nkind = single_choice\nprompt = p\n"
        "allow_unsure = yes\nchoice = a | A\nchoice = b | B\n",
        "allow_unsure must be true or false");
    expect_schema_error("[survey]\nid = t\n[question]\nid = q\nkind = summary_text\nprompt = p\n",
                        "summary_text needs max_words");
    expect_schema_error("[survey]\nid = t\n[question]\nid = q\nkind = keyword_list\nprompt = p\n",
                        "keyword_list needs max_items");
    expect_schema_error("[survey]\nid = t\n[other]\nx = y\n", "unknown section [other]");
}

TEST_CASE("count_words is whitespace-delimited") {
    CHECK(count_words("") == 0);
    CHECK(count_words("   \t\n") == 0);
    CHECK(count_words("one") == 1);
    CHECK(count_words("  spread   out\twords \n here ") == 4);
    CHECK(count_words("hyphen-stays one") == 2);
}

TEST_CASE("validate_answer emits stable violations") {
    SurveySchema s = testsupport::bundled_schema();
    const Question& summary = *s.find("summary");
    const Question& keywords = *s.find("keywords");
    const Question& cls = *s.find("commit_classification");
    const Question& use = *s.find("usecases_or_submodule_events");

    CHECK(validate_answer(summary, Answer::of_text("Fixes a verifier bug.")).empty());
    CHECK(validate_answer(summary, Answer::of_items({"x"})) ==
          std::vector<std::string>{"question 'summary': expected a text answer, got a list"});
    CHECK(validate_answer(summary, Answer::of_text("   ")) ==
          std::vector<std::string>{"question 'summary': summary must not be empty"});
    std::string long_text;
    for (int i = 0; i < 31; ++i) long_text += "w" + std::to_string(i) + " ";
    CHECK(validate_answer(summary, Answer::of_text(long_text)) ==
          std::vector<std::string>{"question 'summary': summary has 31 words, limit is 30"});

    CHECK(validate_answer(keywords, Answer::of_items({"bpf", "verifier"})).empty());
    CHECK(validate_answer(keywords, Answer::of_text("bpf")) ==
          std::vector<std::string>{"question 'keywords': expected a list, got plain text"});
    CHECK(validate_answer(keywords, Answer::of_items({})) ==
          std::vector<std::string>{"question 'keywords': provide at least one keyword"});
    CHECK(validate_answer(keywords, Answer::of_items({"a", "b", "c", "d"})) ==
          std::vector<std::string>{"question 'keywords': 4 keywords given, limit is 3"});
    CHECK(validate_answer(keywords, Answer::of_items({"ok", " "})) ==
          std::vector<std::string>{"question 'keywords': keywords must not be empty"});

    CHECK(validate_answer(cls, Answer::of_items({"a"})).empty());
    CHECK(validate_answer(cls, Answer::of_items({})) ==
          std::vector<std::string>{
              "question 'commit_classification': select exactly one option, got 0"});
    CHECK(validate_answer(cls, Answer::of_items({"a", "b"})) ==
          std::vector<std::string>{
              "question 'commit_classification': select exactly one option, got 2"});
    CHECK(validate_answer(cls, Answer::of_items({"z"})) ==
          std::vector<std::string>{
              "question 'commit_classification': unknown option code 'z'"});

    CHECK(validate_answer(use, Answer::of_items({"a", "b", "n"})).empty());
    CHECK(validate_answer(use, Answer::of_items({})) ==
          std::vector<std::string>{
              "question 'usecases_or_submodule_events': select at least one option"});
    CHECK(validate_answer(use, Answer::of_items({"a", "a"})) ==
          std::vector<std::string>{
              "question 'usecases_or_submodule_events': option 'a' repeated"});
    CHECK(validate_answer(use, Answer::of_items({"a", "zz"})) ==
          std::vector<std::string>{
              "question 'usecases_or_submodule_events': unknown option code 'zz'"});
}

TEST_CASE("canonicalize_answer maps codes, labels and prefixed forms") {
    SurveySchema s = testsupport::bundled_schema();
    const Question& cls = *s.find("commit_classification");

    auto codes = [&](const CanonicalizeResult& r) { return r.answer.items(); };

    CHECK(codes(canonicalize_answer(cls, std::string("a"))) == std::vector<std::string>{"a"});
    CHECK(codes(canonicalize_answer(cls, std::string("A"))) == std::vector<std::string>{"a"});
    CHECK(codes(canonicalize_answer(cls, std::string("  b  "))) == std::vector<std::string>{"b"});
    CHECK(codes(canonicalize_answer(cls, std::string("Bug fix"))) ==
          std::vector<std::string>{"a"});
    CHECK(codes(canonicalize_answer(cls, std::string("BUG FIX "))) ==
          std::vector<std::string>{"a"});
    CHECK(codes(canonicalize_answer(cls, std::string("b) New feature"))) ==
          std::vector<std::string>{"b"});
    CHECK(codes(canonicalize_answer(cls, std::string("c. Performance optimization"))) ==
          std::vector<std::string>{"c"});
    CHECK(codes(canonicalize_answer(cls, std::string("H: Security fix"))) ==
          std::vector<std::string>{"h"});

    auto bad = canonicalize_answer(cls, std::string("definitely new"));
    CHECK_FALSE(bad.ok());
    CHECK(bad.errors == std::vector<std::string>{
                            "question 'commit_classification': unknown option: definitely new"});
    // Bare "a)" is not a code, a label, or a prefixed label; it round-trips
    // through the retry protocol instead of being guessed at.
    CHECK_FALSE(canonicalize_answer(cls, std::string("a)")).ok());

    const Question& use = *s.find("usecases_or_submodule_events");
    auto multi = canonicalize_answer(
        use, std::vector<std::string>{"a", "Socket-related programs", "N"});
    CHECK(multi.ok());
    CHECK(codes(multi) == std::vector<std::string>{"a", "b", "n"});

    auto mixed = canonicalize_answer(use, std::vector<std::string>{"a", "nope", "also nope"});
    CHECK(mixed.errors.size() == 2);
    CHECK(codes(mixed) == std::vector<std::string>{"a"});
}

TEST_CASE("canonicalize_answer passes text kinds through trimmed") {
    SurveySchema s = testsupport::bundled_schema();
    const Question& summary = *s.find("summary");
    const Question& keywords = *s.find("keywords");

    auto r = canonicalize_answer(summary, std::string("  Tidy sentence.  "));
    CHECK(r.ok());
    CHECK(r.answer.text() == "Tidy sentence.");

    auto k = canonicalize_answer(keywords, std::vector<std::string>{" bpf ", "verifier"});
    CHECK(k.ok());
    CHECK(k.answer.items() == std::vector<std::string>{"bpf", "verifier"});

    // A bare string on a list question becomes a one-element list.
    auto one = canonicalize_answer(keywords, std::string("bpf"));
    CHECK(one.answer.items() == std::vector<std::string>{"bpf"});
}

TEST_CASE("response_contract golden") {
    SurveySchema s = testsupport::bundled_schema();
    CHECK(response_contract(s) ==
          "{\"summary\": \"<one sentence, at most 30 words>\", "
          "\"keywords\": [\"<keyword>\", ... up to 3], "
          "\"commit_classification\": [\"<exactly one option code a-k>\"], "
          "\"commit_complexity\": [\"<exactly one option code a-f>\"], "
          "\"major_related_implementation_component\": [\"<exactly one option code a-m>\"], "
          "\"major_related_logic_component\": [\"<exactly one option code a-k>\"], "
          "\"usecases_or_submodule_events\": [\"<one or more option codes a-r>\"]}");
}

TEST_CASE("find_code and find_label lookups") {
    SurveySchema s = testsupport::bundled_schema();
    const Question& cls = *s.find("commit_classification");
    REQUIRE(cls.find_code("a") != nullptr);
    CHECK(cls.find_code("a")->label == "Bug fix");
    CHECK(cls.find_code("A") == nullptr);  // codes are exact
    CHECK(cls.find_label(" bug FIX ") != nullptr);
    CHECK(cls.find_label("bogus") == nullptr);
    CHECK(s.find("nope") == nullptr);
}
