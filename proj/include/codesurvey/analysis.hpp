#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "codesurvey/dataset.hpp"
#include "codesurvey/ingest.hpp"
#include "codesurvey/survey.hpp"

namespace codesurvey {

// Contiguous monthly series: values[i] belongs to month_at(i). Months are
// gap-free by construction; absent months hold 0.
struct TimelineSeries {
    std::string label;
    int start_month = 0;  // timeutil::month_index encoding (year*12 + month-1)
    std::vector<double> values;
    bool smoothed = false;
    int window_months = 0;

    int month_at(size_t i) const { return start_month + static_cast<int>(i); }
};

struct DistributionEntry {
    std::string code;
    std::string label;
    int64_t count = 0;
    double share = 0.0;
};

struct RankedCount {
    std::string key;
    int64_t count = 0;
    double share = 0.0;  // of the whole group, so top-n shares sum to <= 1
};

struct FeatureComponentMatrix {
    std::vector<std::string> feature_keywords;
    std::vector<std::string> components;         // implementation-component labels
    std::vector<std::vector<int64_t>> cells;     // [keyword][component]
};

struct CorrelationResult {
    TimelineSeries instruction_changes;  // verifier rows with instruction logic
    TimelineSeries verifier_bugs;        // verifier rows classified bug fix
    std::optional<double> correlation;   // null when undefined
};

// Pearson coefficient; nullopt for fewer than 2 points or zero variance.
std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b);

// Per-choice answer counts over ok rows. Multi-choice rows contribute one
// count per selected code; shares normalize over total contributions.
// Zero-count options are omitted; descending count, ties in option order.
std::vector<DistributionEntry> distribution(const SurveySchema& schema, const Dataset& dataset,
                                            const std::string& question_id);

// Timeline exclusions, applied explicitly before bucketing: failed rows;
// rows either component question marks unrelated; merge rows whose use-case
// answer picks more than one substantive option (multi-component mainline
// merges). Merges pointing at a single component survive as regular commits.
Dataset clean_for_timeline(const SurveySchema& schema, const Dataset& dataset);

// One gap-free series per choice (zero-count choices included) bucketed by
// UTC calendar month of commit_date, spanning the dataset's ok-row range.
// Expects an already-cleaned dataset for the published timeline semantics.
std::vector<TimelineSeries> monthly_series(const SurveySchema& schema, const Dataset& dataset,
                                           const std::string& question_id);

// Centered moving average; boundary windows truncate to the months that exist
// and divide by the actual window size. Window 1 is the identity.
TimelineSeries smooth(const TimelineSeries& series, int window_months = 3);

enum class FeatureMode { All, HelpersKfuncs, ExcludingHelpersKfuncs };

// Cumulative introduced-feature counts per feature_type, one series per type
// passing the mode filter. All modes share the full table's month range, so
// the helpers_kfuncs and excluding_helpers_kfuncs outputs partition the full
// output exactly.
std::vector<TimelineSeries> cumulative_features(const std::vector<FeatureRecord>& features,
                                                FeatureMode mode);

enum class BugGroupBy { File, ImplementationComponent };

// Bug-frequency ranking over ok rows classified "Bug fix" ("Security fix"
// opt-in via include_security). File grouping explodes each row over its
// changed paths. Descending count, ties by key ascending, top n.
std::vector<RankedCount> top_buggy(const SurveySchema& schema, const Dataset& dataset,
                                   BugGroupBy group_by, int n, bool include_security = false);

// Monthly verifier instruction-logic changes vs verifier bug fixes, both
// smoothed (window 3) over the dataset's ok-row month range, plus their
// Pearson correlation (null when undefined).
CorrelationResult verifier_instruction_correlation(const SurveySchema& schema,
                                                   const Dataset& dataset);

// Classification-over-time for rows whose implementation component equals
// component_label, cleaned and smoothed like the main timelines, spanning the
// cleaned dataset's full range so per-label series sum to the full series.
std::vector<TimelineSeries> component_lifecycle(const SurveySchema& schema, const Dataset& dataset,
                                                const std::string& component_label);

// cells[k][c] = ok rows mentioning keyword k (case-insensitive substring over
// subject plus body when supplied) whose implementation component is c.
FeatureComponentMatrix feature_component_matrix(
    const SurveySchema& schema, const Dataset& dataset,
    const std::vector<std::string>& feature_keywords,
    const std::map<std::string, std::string>& bodies = {});

}  // namespace codesurvey
