#include "codesurvey/survey.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "codesurvey/textfile.hpp"

namespace codesurvey {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

const Choice* Question::find_code(const std::string& code) const {
    for (const auto& c : choices)
        if (c.code == code) return &c;
    return nullptr;
}

const Choice* Question::find_label(const std::string& label) const {
    std::string want = lower(trim(label));
    for (const auto& c : choices)
        if (lower(c.label) == want) return &c;
    return nullptr;
}

const Question* SurveySchema::find(const std::string& question_id) const {
    for (const auto& q : questions)
        if (q.id == question_id) return &q;
    return nullptr;
}

std::string to_string(QuestionKind kind) {
    switch (kind) {
        case QuestionKind::SummaryText: return "summary_text";
        case QuestionKind::KeywordList: return "keyword_list";
        case QuestionKind::SingleChoice: return "single_choice";
        case QuestionKind::MultiChoice: return "multi_choice";
    }
    return "?";
}

std::optional<QuestionKind> question_kind_from_string(const std::string& s) {
    if (s == "summary_text") return QuestionKind::SummaryText;
    if (s == "keyword_list") return QuestionKind::KeywordList;
    if (s == "single_choice") return QuestionKind::SingleChoice;
    if (s == "multi_choice") return QuestionKind::MultiChoice;
    return std::nullopt;
}

SurveySchema parse_survey_schema(const std::string& text) {
    auto sections = textfile::parse(text);
    SurveySchema schema;
    bool saw_survey = false;
    std::set<std::string> seen_ids;
    for (const auto& sec : sections) {
        if (sec.name == "survey") {
            if (saw_survey) throw std::runtime_error("duplicate [survey] section");
            saw_survey = true;
            schema.id = sec.get("id");
            schema.title = sec.get("title");
            schema.description = sec.get("description");
            if (schema.id.empty()) throw std::runtime_error("[survey] missing id");
        } else if (sec.name == "question") {
            Question q;
            q.id = sec.get("id");
            if (q.id.empty())
                throw std::runtime_error("[question] missing id (line " +
                                         std::to_string(sec.line) + ")");
            if (!seen_ids.insert(q.id).second)
                throw std::runtime_error("duplicate question id: " + q.id);
            auto kind = question_kind_from_string(sec.get("kind"));
            if (!kind) throw std::runtime_error("question " + q.id + ": unknown kind");
            q.kind = *kind;
            q.prompt = sec.get("prompt");
            if (q.prompt.empty()) throw std::runtime_error("question " + q.id + ": missing prompt");
            for (const auto& raw : sec.all("choice")) {
                size_t bar = raw.find('|');
                if (bar == std::string::npos)
                    throw std::runtime_error("question " + q.id + ": choice needs 'code | label'");
                Choice c{trim(raw.substr(0, bar)), trim(raw.substr(bar + 1))};
                if (c.code.empty() || c.label.empty())
                    throw std::runtime_error("question " + q.id + ": empty choice code or label");
                if (q.find_code(c.code))
                    throw std::runtime_error("question " + q.id + ": duplicate code " + c.code);
                q.choices.push_back(std::move(c));
            }
            if (sec.has("max_words")) q.max_words = std::stoi(sec.get("max_words"));
            if (sec.has("max_items")) q.max_items = std::stoi(sec.get("max_items"));
            if (sec.has("allow_unsure")) {
                const std::string& v = sec.get("allow_unsure");
                if (v != "true" && v != "false")
                    throw std::runtime_error("question " + q.id + ": allow_unsure must be true or false");
                q.allow_unsure = v == "true";
            }
            for (const auto& c : q.choices)
                if (c.code.size() != 1 || c.code[0] < 'a' || c.code[0] > 'z')
                    throw std::runtime_error("question " + q.id + ": choice code '" + c.code +
                                             "' is not a single lowercase letter");
            if (q.is_choice() && q.choices.size() < 2)
                throw std::runtime_error("question " + q.id +
                                         ": choice question needs at least 2 options");
            if (!q.is_choice() && !q.choices.empty())
                throw std::runtime_error("question " + q.id + ": text question has options");
            if (q.allow_unsure) {
                int unsure = 0;
                for (const auto& c : q.choices)
                    if (c.label == kUnsureLabel) ++unsure;
                if (unsure != 1)
                    throw std::runtime_error("question " + q.id + ": allow_unsure needs exactly " +
                                             "one option labeled \"" + kUnsureLabel + "\"");
            }
            if (q.kind == QuestionKind::SummaryText && q.max_words <= 0)
                throw std::runtime_error("question " + q.id + ": summary_text needs max_words");
            if (q.kind == QuestionKind::KeywordList && q.max_items <= 0)
                throw std::runtime_error("question " + q.id + ": keyword_list needs max_items");
            schema.questions.push_back(std::move(q));
        } else {
            throw std::runtime_error("unknown section [" + sec.name + "] (line " +
                                     std::to_string(sec.line) + ")");
        }
    }
    if (!saw_survey) throw std::runtime_error("missing [survey] section");
    if (schema.questions.empty()) throw std::runtime_error("survey has no questions");
    return schema;
}

SurveySchema load_survey_schema(const std::string& path) {
    auto sections = textfile::parse_file(path);
    return parse_survey_schema(textfile::serialize(sections));
}

std::string serialize_survey_schema(const SurveySchema& schema) {
    std::vector<textfile::Section> sections;
    textfile::Section head{"survey", 0, {}};
    head.entries.emplace_back("id", schema.id);
    head.entries.emplace_back("title", schema.title);
    head.entries.emplace_back("description", schema.description);
    sections.push_back(std::move(head));
    for (const auto& q : schema.questions) {
        textfile::Section sec{"question", 0, {}};
        sec.entries.emplace_back("id", q.id);
        sec.entries.emplace_back("kind", to_string(q.kind));
        sec.entries.emplace_back("prompt", q.prompt);
        if (q.max_words > 0) sec.entries.emplace_back("max_words", std::to_string(q.max_words));
        if (q.max_items > 0) sec.entries.emplace_back("max_items", std::to_string(q.max_items));
        if (q.allow_unsure) sec.entries.emplace_back("allow_unsure", "true");
        for (const auto& c : q.choices) sec.entries.emplace_back("choice", c.code + " | " + c.label);
        sections.push_back(std::move(sec));
    }
    return textfile::serialize(sections);
}

int count_words(const std::string& text) {
    int n = 0;
    bool in_word = false;
    for (unsigned char c : text) {
        bool ws = std::isspace(c) != 0;
        if (!ws && !in_word) ++n;
        in_word = !ws;
    }
    return n;
}

std::vector<std::string> validate_answer(const Question& q, const Answer& answer) {
    std::vector<std::string> v;
    auto expect_items = [&]() -> const std::vector<std::string>* {
        if (answer.is_text()) {
            v.push_back("question '" + q.id + "': expected a list, got plain text");
            return nullptr;
        }
        return &answer.items();
    };
    switch (q.kind) {
        case QuestionKind::SummaryText: {
            if (!answer.is_text()) {
                v.push_back("question '" + q.id + "': expected a text answer, got a list");
                break;
            }
            if (trim(answer.text()).empty())
                v.push_back("question '" + q.id + "': summary must not be empty");
            else if (int w = count_words(answer.text()); w > q.max_words)
                v.push_back("question '" + q.id + "': summary has " + std::to_string(w) +
                            " words, limit is " + std::to_string(q.max_words));
            break;
        }
        case QuestionKind::KeywordList: {
            const auto* items = expect_items();
            if (!items) break;
            if (items->empty())
                v.push_back("question '" + q.id + "': provide at least one keyword");
            else if (static_cast<int>(items->size()) > q.max_items)
                v.push_back("question '" + q.id + "': " + std::to_string(items->size()) +
                            " keywords given, limit is " + std::to_string(q.max_items));
            for (const auto& item : *items)
                if (trim(item).empty()) {
                    v.push_back("question '" + q.id + "': keywords must not be empty");
                    break;
                }
            break;
        }
        case QuestionKind::SingleChoice: {
            const auto* items = expect_items();
            if (!items) break;
            if (items->size() != 1) {
                v.push_back("question '" + q.id + "': select exactly one option, got " +
                            std::to_string(items->size()));
            }
            for (const auto& code : *items)
                if (!q.find_code(code))
                    v.push_back("question '" + q.id + "': unknown option code '" + code + "'");
            break;
        }
        case QuestionKind::MultiChoice: {
            const auto* items = expect_items();
            if (!items) break;
            if (items->empty()) v.push_back("question '" + q.id + "': select at least one option");
            std::set<std::string> seen;
            for (const auto& code : *items) {
                if (!q.find_code(code))
                    v.push_back("question '" + q.id + "': unknown option code '" + code + "'");
                else if (!seen.insert(code).second)
                    v.push_back("question '" + q.id + "': option '" + code + "' repeated");
            }
            break;
        }
    }
    return v;
}

CanonicalizeResult canonicalize_answer(const Question& q, const std::string& raw_value) {
    if (q.kind == QuestionKind::SummaryText) {
        CanonicalizeResult res;
        res.answer = Answer::of_text(trim(raw_value));
        return res;
    }
    return canonicalize_answer(q, std::vector<std::string>{raw_value});
}

CanonicalizeResult canonicalize_answer(const Question& q,
                                       const std::vector<std::string>& raw_values) {
    CanonicalizeResult res;
    if (!q.is_choice()) {
        std::vector<std::string> trimmed;
        trimmed.reserve(raw_values.size());
        for (const auto& v : raw_values) trimmed.push_back(trim(v));
        res.answer = Answer::of_items(std::move(trimmed));
        return res;
    }
    std::vector<std::string> codes;
    for (const auto& raw : raw_values) {
        std::string t = trim(raw);
        // Bare code: exact or case-insensitive match on a short token.
        if (const Choice* c = q.find_code(t)) {
            codes.push_back(c->code);
            continue;
        }
        if (t.size() <= 2) {
            if (const Choice* c = q.find_code(lower(t))) {
                codes.push_back(c->code);
                continue;
            }
        }
        if (const Choice* c = q.find_label(t)) {
            codes.push_back(c->code);
            continue;
        }
        // "a) Label" or "a. Label" style.
        if (t.size() > 2 && (t[1] == ')' || t[1] == '.' || t[1] == ':')) {
            std::string code = lower(t.substr(0, 1));
            if (const Choice* c = q.find_code(code)) {
                codes.push_back(c->code);
                continue;
            }
        }
        res.errors.push_back("question '" + q.id + "': unknown option: " + raw);
    }
    res.answer = Answer::of_items(std::move(codes));
    return res;
}

std::string response_contract(const SurveySchema& schema) {
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (const auto& q : schema.questions) {
        if (!first) out << ", ";
        first = false;
        out << "\"" << q.id << "\": ";
        switch (q.kind) {
            case QuestionKind::SummaryText:
                out << "\"<one sentence, at most " << q.max_words << " words>\"";
                break;
            case QuestionKind::KeywordList:
                out << "[\"<keyword>\", ... up to " << q.max_items << "]";
                break;
            case QuestionKind::SingleChoice:
                out << "[\"<exactly one option code " << q.choices.front().code << "-"
                    << q.choices.back().code << ">\"]";
                break;
            case QuestionKind::MultiChoice:
                out << "[\"<one or more option codes " << q.choices.front().code << "-"
                    << q.choices.back().code << ">\"]";
                break;
        }
    }
    out << "}";
    return out.str();
}

}  // namespace codesurvey
