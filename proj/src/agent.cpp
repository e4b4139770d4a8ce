#include "codesurvey/agent.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "codesurvey/textfile.hpp"
#include "codesurvey/timeutil.hpp"

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

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

// Cuts at most `budget` bytes without splitting a UTF-8 sequence.
std::string truncate_utf8(const std::string& s, size_t budget) {
    if (s.size() <= budget) return s;
    size_t cut = budget;
    while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
    return s.substr(0, cut);
}

constexpr const char* kTruncationMarker = "[truncated]";

}  // namespace

Prompt build_prompt(const SurveySchema& schema, const CommitRecord& commit, size_t body_budget) {
    Prompt p;

    std::ostringstream sys;
    sys << schema.title << "\n\n" << schema.description << "\n\nQuestions:\n";
    int n = 0;
    for (const auto& q : schema.questions) {
        sys << ++n << ". " << q.prompt;
        switch (q.kind) {
            case QuestionKind::SummaryText:
                sys << " [text, at most " << q.max_words << " words]\n";
                break;
            case QuestionKind::KeywordList:
                sys << " [list of at most " << q.max_items << " keywords]\n";
                break;
            case QuestionKind::SingleChoice:
                sys << " [choose exactly one option code]\n";
                break;
            case QuestionKind::MultiChoice:
                sys << " [choose one or more option codes]\n";
                break;
        }
        for (const auto& c : q.choices) sys << "   " << c.code << ") " << c.label << "\n";
    }
    sys << "\nRespond with ONLY one JSON object, no code fences, shaped exactly like:\n"
        << response_contract(schema) << "\n\nRules:\n"
        << "- Answer choice questions with option codes (the letters), one per selection.\n"
        << "- If you are not sure, choose the \"" << kUnsureLabel
        << "\" option instead of guessing.\n"
        << "- Do not include any keys other than the question ids above.\n";
    p.system_text = sys.str();

    std::ostringstream user;
    user << "Commit: " << commit.hash << "\n"
         << "Author: " << commit.author_name << " <" << commit.author_email << ">\n"
         << "AuthorDate: " << timeutil::format_rfc3339(commit.author_date) << "\n"
         << "CommitDate: " << timeutil::format_rfc3339(commit.commit_date) << "\n"
         << "Parents: " << commit.parent_count() << "\n"
         << "Subject: " << commit.subject << "\n\n"
         << "Changed files (" << commit.files.size() << " files, +" << commit.insertions_total()
         << " -" << commit.deletions_total() << "):\n";
    for (const auto& f : commit.files) {
        if (f.binary) user << "-\t-\t" << f.path << "\n";
        else user << f.insertions << "\t" << f.deletions << "\t" << f.path << "\n";
    }
    user << "\nBody:\n";
    if (commit.body.size() <= body_budget) {
        user << commit.body;
    } else {
        user << truncate_utf8(commit.body, body_budget) << "\n" << kTruncationMarker;
    }
    p.user_text = user.str();
    return p;
}

Prompt build_retry_prompt(const Prompt& base, const SurveySchema& schema,
                          const std::vector<std::string>& violations) {
    Prompt p = base;
    std::ostringstream add;
    add << "\n\n" << kCorrectionMarker << " Problems:\n";
    for (const auto& v : violations) add << "- " << v << "\n";
    add << "Respond again with ONLY one JSON object matching this contract:\n"
        << response_contract(schema) << "\n";
    p.user_text += add.str();
    return p;
}

PromptFacts parse_prompt_facts(const std::string& user_text) {
    // Correction blocks are appended after the body; cut them off so facts
    // are identical on every attempt.
    std::string text = user_text;
    size_t corr = text.find(std::string("\n\n") + kCorrectionMarker);
    if (corr != std::string::npos) text = text.substr(0, corr);

    PromptFacts facts;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) break;  // end of header block
        if (line.rfind("Commit: ", 0) == 0) facts.hash = line.substr(8);
        else if (line.rfind("Parents: ", 0) == 0) facts.parent_count = std::stoi(line.substr(9));
        else if (line.rfind("Subject: ", 0) == 0) facts.subject = line.substr(9);
    }
    size_t body = text.find("\nBody:\n");
    if (body != std::string::npos) facts.body = text.substr(body + 7);
    return facts;
}

// --- scripted rules ----------------------------------------------------------

namespace {

RuleCondition parse_condition(const std::string& raw, const std::string& rule_name) {
    std::string s = trim(raw);
    RuleCondition c;
    if (s == "always") return c;
    std::istringstream in(s);
    std::string field, op;
    in >> field >> op;
    if (field == "parent_count") {
        if (op != ">=") throw std::runtime_error("rule " + rule_name +
                                                 ": parent_count only supports >=");
        int n = 0;
        if (!(in >> n)) throw std::runtime_error("rule " + rule_name + ": parent_count >= needs a number");
        c.kind = RuleCondition::Kind::MinParents;
        c.min_parents = n;
        return c;
    }
    if (field != "subject" && field != "body" && field != "message")
        throw std::runtime_error("rule " + rule_name + ": unknown field '" + field + "'");
    std::string rest;
    std::getline(in, rest);
    rest = trim(rest);
    if (rest.size() >= 2 && rest.front() == '"' && rest.back() == '"')
        rest = rest.substr(1, rest.size() - 2);
    if (rest.empty()) throw std::runtime_error("rule " + rule_name + ": condition needs text");
    c.field = field;
    c.text = rest;
    if (op == "contains") c.kind = RuleCondition::Kind::Contains;
    else if (op == "starts_with") c.kind = RuleCondition::Kind::StartsWith;
    else if (op == "equals") c.kind = RuleCondition::Kind::Equals;
    else throw std::runtime_error("rule " + rule_name + ": unknown operator '" + op + "'");
    return c;
}

std::vector<std::string> parse_answer_value(const std::string& raw) {
    std::string s = trim(raw);
    if (s.size() >= 2 && s.front() == '[' && s.back() == ']') {
        std::vector<std::string> out;
        std::string inner = s.substr(1, s.size() - 2);
        size_t start = 0;
        while (start <= inner.size()) {
            size_t comma = inner.find(',', start);
            std::string item = trim(comma == std::string::npos ? inner.substr(start)
                                                               : inner.substr(start, comma - start));
            if (!item.empty()) out.push_back(item);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return out;
    }
    return {s};
}

void collect_answers(const textfile::Section& sec,
                     std::vector<std::pair<std::string, std::vector<std::string>>>& out) {
    for (const auto& [key, value] : sec.entries) {
        if (key.rfind("answer.", 0) != 0) continue;
        std::string qid = key.substr(7);
        if (qid.empty()) throw std::runtime_error("empty question id in '" + key + "'");
        auto values = parse_answer_value(value);
        bool replaced = false;
        for (auto& [id, vals] : out)
            if (id == qid) {
                vals = values;
                replaced = true;
            }
        if (!replaced) out.emplace_back(qid, values);
    }
}

bool condition_holds(const RuleCondition& c, const PromptFacts& facts) {
    switch (c.kind) {
        case RuleCondition::Kind::Always: return true;
        case RuleCondition::Kind::MinParents: return facts.parent_count >= c.min_parents;
        default: break;
    }
    std::string hay;
    if (c.field == "subject") hay = facts.subject;
    else if (c.field == "body") hay = facts.body;
    else hay = facts.subject + "\n" + facts.body;
    hay = lower(hay);
    std::string needle = lower(c.text);
    switch (c.kind) {
        case RuleCondition::Kind::Contains: return hay.find(needle) != std::string::npos;
        case RuleCondition::Kind::StartsWith: return hay.rfind(needle, 0) == 0;
        case RuleCondition::Kind::Equals: return hay == needle;
        default: return false;
    }
}

std::string first_words(const std::string& text, int n) {
    std::istringstream in(text);
    std::string word, out;
    int k = 0;
    while (k < n && in >> word) {
        if (k) out += " ";
        out += word;
        ++k;
    }
    return out;
}

std::string expand_placeholders(const std::string& value, const PromptFacts& facts) {
    std::string out;
    size_t i = 0;
    while (i < value.size()) {
        if (value[i] != '{') {
            out.push_back(value[i++]);
            continue;
        }
        size_t close = value.find('}', i);
        if (close == std::string::npos) {
            out.append(value.substr(i));
            break;
        }
        std::string ph = value.substr(i + 1, close - i - 1);
        if (ph == "hash") out += facts.hash;
        else if (ph == "hash8") out += facts.hash.substr(0, std::min<size_t>(8, facts.hash.size()));
        else if (ph == "subject") out += facts.subject;
        else if (ph.rfind("subject|words:", 0) == 0)
            out += first_words(facts.subject, std::stoi(ph.substr(14)));
        else out += "{" + ph + "}";
        i = close + 1;
    }
    return out;
}

}  // namespace

ScriptedRules parse_rules(const std::string& text) {
    auto sections = textfile::parse(text);
    ScriptedRules rules;
    rules.id = "scripted-rules";
    std::vector<std::pair<std::string, std::vector<std::string>>> defaults;
    for (const auto& sec : sections) {
        if (sec.name == "rules") {
            if (sec.has("id")) rules.id = sec.get("id");
        } else if (sec.name == "defaults") {
            collect_answers(sec, defaults);
        } else if (sec.name == "rule") {
            ScriptedRule rule;
            rule.name = sec.get("name", "rule " + std::to_string(rules.rules.size() + 1));
            for (const auto& raw : sec.all("when")) {
                RuleCondition c = parse_condition(raw, rule.name);
                if (c.kind != RuleCondition::Kind::Always) rule.conditions.push_back(c);
            }
            rule.answers = defaults;
            collect_answers(sec, rule.answers);
            if (rule.answers.empty())
                throw std::runtime_error("rule " + rule.name + " has no answers");
            rules.rules.push_back(std::move(rule));
        } else if (sec.name == "faults") {
            const std::string& mode = sec.get("mode", "none");
            if (mode == "none") rules.fault_mode = FaultMode::None;
            else if (mode == "malformed_until_correction")
                rules.fault_mode = FaultMode::MalformedUntilCorrection;
            else if (mode == "always_malformed") rules.fault_mode = FaultMode::AlwaysMalformed;
            else throw std::runtime_error("unknown fault mode '" + mode + "'");
        } else {
            throw std::runtime_error("unknown section [" + sec.name + "] in rules file");
        }
    }
    if (rules.rules.empty()) throw std::runtime_error("rules file has no [rule] sections");
    for (size_t i = 0; i + 1 < rules.rules.size(); ++i)
        if (rules.rules[i].conditions.empty())
            throw std::runtime_error("rule " + rules.rules[i].name +
                                     " is unconditional but not last; it would shadow later rules");
    if (!rules.rules.back().conditions.empty())
        throw std::runtime_error("last rule must be unconditional (the default answer)");
    return rules;
}

ScriptedRules load_rules(const std::string& path) {
    return parse_rules(textfile::serialize(textfile::parse_file(path)));
}

// --- backends ----------------------------------------------------------------

namespace {

class ScriptedBackend : public Backend {
  public:
    explicit ScriptedBackend(ScriptedRules rules) : rules_(std::move(rules)) {}

    std::string complete(const Prompt& prompt) override {
        bool corrected = prompt.user_text.find(kCorrectionMarker) != std::string::npos;
        if (rules_.fault_mode == FaultMode::AlwaysMalformed ||
            (rules_.fault_mode == FaultMode::MalformedUntilCorrection && !corrected)) {
            return "I could not produce the JSON object this time. Please see my notes: "
                   "the commit looks routine but the format escaped me.";
        }
        PromptFacts facts = parse_prompt_facts(prompt.user_text);
        const ScriptedRule* hit = nullptr;
        for (const auto& rule : rules_.rules) {
            bool all = true;
            for (const auto& c : rule.conditions) all = all && condition_holds(c, facts);
            if (all) {
                hit = &rule;
                break;
            }
        }
        // Unreachable: parse_rules guarantees an unconditional final rule.
        if (!hit) throw std::runtime_error("no scripted rule matched " + facts.hash);
        nlohmann::ordered_json j;
        for (const auto& [qid, values] : hit->answers) {
            if (values.size() == 1 && qid == "summary") {
                j[qid] = expand_placeholders(values[0], facts);
            } else {
                nlohmann::ordered_json arr = nlohmann::ordered_json::array();
                for (const auto& v : values) arr.push_back(expand_placeholders(v, facts));
                j[qid] = std::move(arr);
            }
        }
        return j.dump();
    }

    std::string model_name() const override { return rules_.id; }

  private:
    ScriptedRules rules_;
};

class HttpChatBackend : public Backend {
  public:
    HttpChatBackend(const BackendConfig& config, std::string api_key)
        : config_(config), api_key_(std::move(api_key)) {
        // Split base_url into origin and path prefix.
        if (config_.base_url.rfind("http://", 0) != 0 &&
            config_.base_url.rfind("https://", 0) != 0)
            throw std::runtime_error("base_url must start with http:// or https://");
        size_t scheme = config_.base_url.find("://");
        size_t path = config_.base_url.find('/', scheme + 3);
        if (path == std::string::npos) {
            origin_ = config_.base_url;
        } else {
            origin_ = config_.base_url.substr(0, path);
            prefix_ = config_.base_url.substr(path);
            while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
        }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
        if (origin_.rfind("https://", 0) == 0)
            throw std::runtime_error("built without TLS support; use an http:// base_url");
#endif
    }

    std::string complete(const Prompt& prompt) override {
        nlohmann::ordered_json body;
        body["model"] = config_.model;
        body["temperature"] = config_.temperature;
        body["messages"] = nlohmann::ordered_json::array(
            {{{"role", "system"}, {"content", prompt.system_text}},
             {{"role", "user"}, {"content", prompt.user_text}}});
        std::string payload = body.dump();

        std::string last_error;
        for (int try_no = 0; try_no < 4; ++try_no) {
            if (try_no > 0) {
                int ms = std::min(250 * (1 << (try_no - 1)), 2000);
                std::this_thread::sleep_for(std::chrono::milliseconds(ms));
            }
            httplib::Client client(origin_);
            client.set_connection_timeout(config_.timeout_ms / 1000,
                                          (config_.timeout_ms % 1000) * 1000);
            client.set_read_timeout(config_.timeout_ms / 1000, (config_.timeout_ms % 1000) * 1000);
            httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
            auto res = client.Post(prefix_ + "/chat/completions", headers, payload,
                                   "application/json");
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 429 || res->status >= 500) {
                last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
                continue;
            }
            if (res->status < 200 || res->status >= 300)
                throw std::runtime_error("HTTP " + std::to_string(res->status) + ": " + res->body);
            try {
                auto j = nlohmann::json::parse(res->body);
                return j.at("choices").at(0).at("message").at("content").get<std::string>();
            } catch (const nlohmann::json::exception& e) {
                throw std::runtime_error(std::string("unexpected completion response: ") +
                                         e.what());
            }
        }
        throw std::runtime_error("request failed after retries: " + last_error);
    }

    std::string model_name() const override { return config_.model; }

  private:
    BackendConfig config_;
    std::string api_key_;
    std::string origin_;
    std::string prefix_;
};

}  // namespace

std::unique_ptr<Backend> make_backend(const BackendConfig& config) {
    if (config.kind == BackendKind::Scripted) {
        if (config.rules_path.empty())
            throw std::runtime_error("scripted backend requires a rules file");
        ScriptedRules rules = load_rules(config.rules_path);
        return std::make_unique<ScriptedBackend>(std::move(rules));
    }
    if (config.base_url.empty()) throw std::runtime_error("http_chat backend requires base_url");
    if (config.model.empty()) throw std::runtime_error("http_chat backend requires a model id");
    const char* key = std::getenv(config.api_key_env.c_str());
    if (!key || !*key)
        throw std::runtime_error("API key environment variable " + config.api_key_env +
                                 " is not set");
    return std::make_unique<HttpChatBackend>(config, key);
}

std::string complete(const BackendConfig& config, const Prompt& prompt) {
    return make_backend(config)->complete(prompt);
}

// --- response parsing ----------------------------------------------------------

namespace {

// First balanced top-level JSON object in raw, string/escape aware.
std::optional<std::string> extract_json_object(const std::string& raw) {
    size_t start = raw.find('{');
    while (start != std::string::npos) {
        int depth = 0;
        bool in_string = false, escaped = false;
        for (size_t i = start; i < raw.size(); ++i) {
            char c = raw[i];
            if (in_string) {
                if (escaped) escaped = false;
                else if (c == '\\') escaped = true;
                else if (c == '"') in_string = false;
            } else if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) return raw.substr(start, i - start + 1);
            }
        }
        start = raw.find('{', start + 1);
    }
    return std::nullopt;
}

}  // namespace

ParsedResponse parse_response(const SurveySchema& schema, const std::string& raw) {
    ParsedResponse out;
    auto text = extract_json_object(raw);
    if (!text) {
        out.violations.push_back("no JSON object found in response");
        return out;
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(*text);
    } catch (const nlohmann::json::exception& e) {
        out.violations.push_back(std::string("response is not valid JSON: ") + e.what());
        return out;
    }
    if (!j.is_object()) {
        out.violations.push_back("response JSON is not an object");
        return out;
    }
    for (const auto& [key, value] : j.items()) {
        if (!schema.find(key)) out.notes.push_back("ignoring unknown key: " + key);
    }
    for (const auto& q : schema.questions) {
        if (!j.contains(q.id)) {
            out.violations.push_back("missing answer: " + q.id);
            continue;
        }
        const auto& v = j.at(q.id);
        CanonicalizeResult canon;
        if (v.is_string()) {
            canon = canonicalize_answer(q, v.get<std::string>());
        } else if (v.is_array()) {
            std::vector<std::string> items;
            bool bad = false;
            for (const auto& e : v) {
                if (e.is_string()) items.push_back(e.get<std::string>());
                else if (e.is_number() || e.is_boolean()) items.push_back(e.dump());
                else bad = true;
            }
            if (bad) {
                out.violations.push_back("question '" + q.id +
                                         "': list entries must be strings");
                continue;
            }
            canon = canonicalize_answer(q, items);
        } else if (v.is_number() || v.is_boolean()) {
            canon = canonicalize_answer(q, v.dump());
        } else {
            out.violations.push_back("question '" + q.id + "': unexpected value type");
            continue;
        }
        if (!canon.ok()) {
            for (const auto& e : canon.errors) out.violations.push_back(e);
            continue;
        }
        auto violations = validate_answer(q, canon.answer);
        if (!violations.empty()) {
            out.violations.insert(out.violations.end(), violations.begin(), violations.end());
            continue;
        }
        out.answers.emplace(q.id, std::move(canon.answer));
    }
    if (!out.violations.empty()) out.answers.clear();
    return out;
}

// --- run loop ----------------------------------------------------------------

namespace {

class TokenBucket {
  public:
    explicit TokenBucket(int per_minute)
        : capacity_(std::max(1, per_minute)),
          tokens_(capacity_),
          rate_per_sec_(capacity_ / 60.0),
          last_(std::chrono::steady_clock::now()) {}

    void take() {
        std::unique_lock<std::mutex> lock(mu_);
        for (;;) {
            refill();
            if (tokens_ >= 1.0) {
                tokens_ -= 1.0;
                return;
            }
            double wait_s = (1.0 - tokens_) / rate_per_sec_;
            lock.unlock();
            std::this_thread::sleep_for(std::chrono::duration<double>(wait_s));
            lock.lock();
        }
    }

  private:
    void refill() {
        auto now = std::chrono::steady_clock::now();
        double dt = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        tokens_ = std::min(static_cast<double>(capacity_), tokens_ + dt * rate_per_sec_);
    }

    std::mutex mu_;
    int capacity_;
    double tokens_;
    double rate_per_sec_;
    std::chrono::steady_clock::time_point last_;
};

}  // namespace

std::string attempt_log_line(const AttemptLogEntry& entry) {
    nlohmann::ordered_json j;
    j["hash"] = entry.hash;
    j["attempt"] = entry.attempt;
    j["status"] = entry.status;
    j["violations"] = entry.violations;
    j["latency_ms"] = entry.latency_ms;
    j["prompt_bytes"] = entry.prompt_bytes;
    j["response_bytes"] = entry.response_bytes;
    if (!entry.notes.empty()) j["notes"] = entry.notes;
    return j.dump();
}

RunResult run_survey(const BackendConfig& config, const SurveySchema& schema,
                     const std::vector<CommitRecord>& commits, const RunOptions& options) {
    std::unique_ptr<Backend> backend = make_backend(config);  // config errors throw here
    const int max_attempts = std::max(1, config.max_retries);

    std::vector<size_t> todo;
    for (size_t i = 0; i < commits.size(); ++i)
        if (!options.skip_hashes.count(commits[i].hash)) todo.push_back(i);

    std::vector<SurveyResponse> responses(commits.size());
    std::vector<std::vector<AttemptLogEntry>> logs(commits.size());
    std::vector<char> produced(commits.size(), 0);

    TokenBucket bucket(config.requests_per_minute);
    std::atomic<size_t> cursor{0};

    auto worker = [&]() {
        for (;;) {
            size_t k = cursor.fetch_add(1);
            if (k >= todo.size()) return;
            size_t idx = todo[k];
            const CommitRecord& commit = commits[idx];
            Prompt base = build_prompt(schema, commit, config.body_budget);

            SurveyResponse resp;
            resp.commit_hash = commit.hash;
            resp.model = backend->model_name();
            std::vector<std::string> violations;
            for (int attempt = 1; attempt <= max_attempts; ++attempt) {
                Prompt prompt =
                    attempt == 1 ? base : build_retry_prompt(base, schema, violations);
                bucket.take();
                AttemptLogEntry log;
                log.hash = commit.hash;
                log.attempt = attempt;
                log.prompt_bytes = prompt.system_text.size() + prompt.user_text.size();
                auto t0 = std::chrono::steady_clock::now();
                std::string raw;
                bool got_text = true;
                try {
                    raw = backend->complete(prompt);
                } catch (const std::exception& e) {
                    got_text = false;
                    violations = {std::string("backend error: ") + e.what()};
                }
                log.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - t0)
                                     .count();
                log.response_bytes = raw.size();
                if (got_text) {
                    ParsedResponse parsed = parse_response(schema, raw);
                    log.notes = parsed.notes;
                    if (parsed.ok()) {
                        resp.answers = std::move(parsed.answers);
                        resp.ok = true;
                        resp.attempts = attempt;
                        resp.completed_at = static_cast<int64_t>(std::time(nullptr));
                        log.status = "ok";
                        logs[idx].push_back(std::move(log));
                        break;
                    }
                    violations = std::move(parsed.violations);
                }
                bool last = attempt == max_attempts;
                log.status = last ? "failed" : "retry";
                log.violations = violations;
                logs[idx].push_back(std::move(log));
                if (last) {
                    resp.ok = false;
                    resp.attempts = attempt;
                    resp.completed_at = static_cast<int64_t>(std::time(nullptr));
                    resp.failure_reason = join(violations, "; ");
                }
            }
            responses[idx] = std::move(resp);
            produced[idx] = 1;
        }
    };

    int workers = std::clamp(options.workers, 1, 64);
    if (static_cast<size_t>(workers) > todo.size() && !todo.empty())
        workers = static_cast<int>(todo.size());
    if (todo.empty()) workers = 0;
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    RunResult result;
    for (size_t i = 0; i < commits.size(); ++i) {
        if (!produced[i]) continue;
        result.responses.push_back(std::move(responses[i]));
        for (auto& entry : logs[i]) result.log.push_back(std::move(entry));
    }
    return result;
}

}  // namespace codesurvey
