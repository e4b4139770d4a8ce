#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "codesurvey/dataset.hpp"
#include "codesurvey/survey.hpp"

namespace codesurvey {

// Mirrors the published consistency evidence: tally discrepancies under 0.05%
// of total commits are taken as consistent.
inline constexpr double kDefaultConsistencyThreshold = 0.0005;

struct ValidationReport {
    std::string check_name;
    int64_t count_a = 0;
    int64_t count_b = 0;
    int64_t discrepancy = 0;  // |count_a - count_b|
    int64_t total = 0;        // ok rows considered
    double discrepancy_rate = 0.0;
    double threshold = kDefaultConsistencyThreshold;
    bool passed = true;
    std::vector<std::string> flagged_hashes;  // sorted; tally checks leave it empty
};

// Cross-question tallies that should agree if the agent answers coherently.
// Both count over ok rows only; an empty dataset passes with rate 0.
ValidationReport check_merge_consistency(const SurveySchema& schema, const Dataset& dataset,
                                         double threshold = kDefaultConsistencyThreshold);
ValidationReport check_unrelated_consistency(const SurveySchema& schema, const Dataset& dataset,
                                             double threshold = kDefaultConsistencyThreshold);

// Per-row contradictions. Rows are flagged, never removed; downstream
// exclusions stay explicit. Results sorted by hash.
struct FlaggedRow {
    std::string hash;
    std::vector<std::string> reasons;
};
std::vector<FlaggedRow> row_logic_checks(const SurveySchema& schema, const Dataset& dataset);

// k distinct indices drawn uniformly from [0, n) via seeded SplitMix64 and a
// partial Fisher-Yates shuffle; the reference sequence is pinned in the docs
// and tests. Throws when k > n.
std::vector<size_t> sample_indices(size_t n, size_t k, uint64_t seed);

// Expert-review export: sampled rows with commit context, every answer cell,
// and an empty expert_rating column. bodies (hash -> body) restores full
// commit messages when the corpus is at hand; otherwise the subject stands in.
std::string review_sample_csv(const SurveySchema& schema, const Dataset& dataset, size_t k,
                              uint64_t seed,
                              const std::map<std::string, std::string>& bodies = {});

// validation_report.json payload.
std::string validation_report_json(const std::vector<ValidationReport>& reports,
                                   const std::vector<FlaggedRow>& flagged);

}  // namespace codesurvey
