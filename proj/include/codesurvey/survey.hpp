#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace codesurvey {

// Closed-vocabulary survey administered once per commit. Question kinds:
//   summary_text   free text, bounded by max_words
//   keyword_list   up to max_items short free-text items
//   single_choice  exactly one option code
//   multi_choice   one or more option codes
enum class QuestionKind { SummaryText, KeywordList, SingleChoice, MultiChoice };

// Label answered when the agent cannot decide. Choice questions must offer it
// so "don't know" is never forced into a substantive option.
inline constexpr const char* kUnsureLabel = "I'm not sure";

struct Choice {
    std::string code;   // single lowercase letter, stable across schema versions
    std::string label;  // full text presented to the agent

    bool operator==(const Choice&) const = default;
};

struct Question {
    std::string id;
    QuestionKind kind;
    std::string prompt;
    std::vector<Choice> choices;  // empty for text kinds
    int max_words = 0;            // summary_text only
    int max_items = 0;            // keyword_list only
    bool allow_unsure = false;    // requires exactly one choice labeled kUnsureLabel

    const Choice* find_code(const std::string& code) const;
    // Case-insensitive, trimmed label lookup.
    const Choice* find_label(const std::string& label) const;
    bool is_choice() const {
        return kind == QuestionKind::SingleChoice || kind == QuestionKind::MultiChoice;
    }

    bool operator==(const Question&) const = default;
};

struct SurveySchema {
    std::string id;
    std::string title;
    std::string description;
    std::vector<Question> questions;

    const Question* find(const std::string& question_id) const;

    bool operator==(const SurveySchema&) const = default;
};

// One commit's answer to one question. Text for summary_text; items for
// keyword_list; option codes for choice kinds.
struct Answer {
    std::variant<std::string, std::vector<std::string>> value;

    bool is_text() const { return std::holds_alternative<std::string>(value); }
    const std::string& text() const { return std::get<std::string>(value); }
    const std::vector<std::string>& items() const {
        return std::get<std::vector<std::string>>(value);
    }

    static Answer of_text(std::string t) { return Answer{std::move(t)}; }
    static Answer of_items(std::vector<std::string> v) { return Answer{std::move(v)}; }
};

// Outcome of administering the survey for one commit. When ok, answers holds
// one validated entry per schema question; when failed, answers is empty and
// failure_reason names the final round of violations. completed_at is wall
// clock and deliberately kept out of the persisted dataset so equal runs
// serialize to equal bytes.
struct SurveyResponse {
    std::string commit_hash;
    std::map<std::string, Answer> answers;
    int attempts = 0;
    std::string model;
    int64_t completed_at = 0;
    bool ok = false;
    std::string failure_reason;
};

std::string to_string(QuestionKind kind);
std::optional<QuestionKind> question_kind_from_string(const std::string& s);

// Schema text format: one [survey] section (id, title, description) followed
// by [question] sections (id, kind, prompt, then per-option "choice = code | label",
// and max_words / max_items for the text kinds). Throws textfile::ParseError or
// std::runtime_error with the offending question id on structural problems.
SurveySchema parse_survey_schema(const std::string& text);
SurveySchema load_survey_schema(const std::string& path);

// Inverse of parse_survey_schema; parse(serialize(s)) reproduces s exactly.
std::string serialize_survey_schema(const SurveySchema& schema);

// Whitespace-delimited word count; used for the summary length rule.
int count_words(const std::string& text);

// Validates one answer against its question. Empty result means valid.
// Violations are stable, human-readable sentences fed back to the agent.
std::vector<std::string> validate_answer(const Question& question, const Answer& answer);

// Maps a raw model answer onto the closed vocabulary. Choice entries may be a
// bare code or a full label, both case-insensitive and trimmed; text kinds
// pass through trimmed. A bare string on a list question becomes a one-element
// list. Cardinality is not checked here, that is validate_answer's job. Each
// unmappable entry is reported with the raw string that failed.
struct CanonicalizeResult {
    Answer answer;
    std::vector<std::string> errors;  // "unknown option: <raw>" per unmappable entry
    bool ok() const { return errors.empty(); }
};
CanonicalizeResult canonicalize_answer(const Question& question, const std::string& raw_value);
CanonicalizeResult canonicalize_answer(const Question& question,
                                       const std::vector<std::string>& raw_values);

// JSON object the agent must return: {"question_id": <shape>, ...} with a
// short shape description per question. Deterministic text.
std::string response_contract(const SurveySchema& schema);

}  // namespace codesurvey
