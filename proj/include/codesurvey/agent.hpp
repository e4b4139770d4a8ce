#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "codesurvey/ingest.hpp"
#include "codesurvey/survey.hpp"

namespace codesurvey {

// The two texts sent per completion. system_text carries the survey (title,
// description, every question with its full option list, response contract,
// answering rules); user_text carries the commit under review.
struct Prompt {
    std::string system_text;
    std::string user_text;
};

inline constexpr size_t kDefaultBodyBudget = 32 * 1024;

// First line of every correction block. The scripted backend keys its fault
// injection off this marker, which keeps fault state out of the backend.
inline constexpr const char* kCorrectionMarker = "Your previous response was invalid.";

Prompt build_prompt(const SurveySchema& schema, const CommitRecord& commit,
                    size_t body_budget = kDefaultBodyBudget);

// base prompt + enumerated violations + restated response contract.
Prompt build_retry_prompt(const Prompt& base, const SurveySchema& schema,
                          const std::vector<std::string>& violations);

enum class BackendKind { HttpChat, Scripted };

struct BackendConfig {
    BackendKind kind = BackendKind::Scripted;
    std::string base_url;      // http_chat: e.g. https://api.openai.com/v1
    std::string model;         // http_chat model id; scripted reports the rules id
    std::string api_key_env = "OPENAI_API_KEY";
    double temperature = 0.0;
    int timeout_ms = 120000;
    int max_retries = 3;  // total attempts per commit, correction rounds included
    int requests_per_minute = 600;
    std::string rules_path;  // scripted
    size_t body_budget = kDefaultBodyBudget;
};

// --- Scripted backend rules ------------------------------------------------
//
// Ordered [rule] sections; the first whose conditions all hold answers the
// commit; the final rule must be unconditional. Conditions read fields parsed
// back out of user_text, so the scripted backend sees exactly what an LLM
// would. An optional [faults] section injects malformed responses for
// feedback-loop testing.

struct RuleCondition {
    enum class Kind { Always, Contains, StartsWith, Equals, MinParents };
    Kind kind = Kind::Always;
    std::string field;  // subject | body | message
    std::string text;   // matched case-insensitively
    int min_parents = 0;
};

struct ScriptedRule {
    std::string name;
    std::vector<RuleCondition> conditions;  // AND
    // question id -> raw values; placeholders {hash} {hash8} {subject|words:N}
    // expand against the commit before the JSON is built.
    std::vector<std::pair<std::string, std::vector<std::string>>> answers;
};

enum class FaultMode { None, MalformedUntilCorrection, AlwaysMalformed };

struct ScriptedRules {
    std::string id;  // reported as the model name
    std::vector<ScriptedRule> rules;
    FaultMode fault_mode = FaultMode::None;
};

ScriptedRules parse_rules(const std::string& text);
ScriptedRules load_rules(const std::string& path);

// Commit fields the scripted backend recovers from user_text.
struct PromptFacts {
    std::string hash;
    std::string subject;
    std::string body;
    int parent_count = 0;
};
PromptFacts parse_prompt_facts(const std::string& user_text);

// ---------------------------------------------------------------------------

class Backend {
  public:
    virtual ~Backend() = default;
    // Returns raw model text. Throws on transport/config failure; the caller
    // turns exceptions into retryable violations.
    virtual std::string complete(const Prompt& prompt) = 0;
    virtual std::string model_name() const = 0;
};

// Validates the config (http_chat needs base_url and the API key env var set;
// scripted needs a readable rules file) and builds the backend. Throws
// std::runtime_error naming what is missing.
std::unique_ptr<Backend> make_backend(const BackendConfig& config);

// One-shot convenience around make_backend + complete.
std::string complete(const BackendConfig& config, const Prompt& prompt);

// Raw model text -> validated answers or the violation list for the feedback
// loop. Extracts the first balanced JSON object (code fences tolerated),
// canonicalizes each value, then runs validate_answer. Violations are data.
struct ParsedResponse {
    std::map<std::string, Answer> answers;
    std::vector<std::string> violations;
    std::vector<std::string> notes;  // ignored unknown keys and similar
    bool ok() const { return violations.empty(); }
};
ParsedResponse parse_response(const SurveySchema& schema, const std::string& raw);

struct AttemptLogEntry {
    std::string hash;
    int attempt = 0;
    std::string status;  // "ok", "retry", "failed"
    std::vector<std::string> violations;
    int64_t latency_ms = 0;
    size_t prompt_bytes = 0;
    size_t response_bytes = 0;
    std::vector<std::string> notes;
};

std::string attempt_log_line(const AttemptLogEntry& entry);

struct RunOptions {
    int workers = 1;
    // Resume support: hashes already answered; their commits are skipped.
    std::set<std::string> skip_hashes;
};

struct RunResult {
    // One response per processed commit, in input order (skipped ones absent).
    std::vector<SurveyResponse> responses;
    // Every attempt, grouped by commit in input order.
    std::vector<AttemptLogEntry> log;
};

// Administers the survey over the commit stream with a bounded worker pool
// and shared token-bucket rate limiting. Output is a pure function of
// (config, schema, commits): worker count and completion timing never change
// it. Per-commit errors become failed rows; only config errors throw.
RunResult run_survey(const BackendConfig& config, const SurveySchema& schema,
                     const std::vector<CommitRecord>& commits, const RunOptions& options = {});

}  // namespace codesurvey
