#include "codesurvey/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "codesurvey/csv.hpp"
#include "codesurvey/rng.hpp"
#include "codesurvey/timeutil.hpp"

namespace codesurvey {

namespace {

// Code of the choice with this exact label, or "" when absent. Checks against
// schemas lacking the option degenerate to zero counts, which is correct: the
// dataset cannot contain answers the vocabulary never offered.
std::string code_for_label(const SurveySchema& schema, const std::string& question_id,
                           const std::string& label) {
    const Question* q = schema.find(question_id);
    if (!q) return "";
    for (const auto& c : q->choices)
        if (c.label == label) return c.code;
    return "";
}

std::string code_for_label_prefix(const SurveySchema& schema, const std::string& question_id,
                                  const std::string& prefix) {
    const Question* q = schema.find(question_id);
    if (!q) return "";
    for (const auto& c : q->choices)
        if (c.label.rfind(prefix, 0) == 0) return c.code;
    return "";
}

ValidationReport tally_check(const std::string& name, const Dataset& dataset,
                             const std::string& question_a, const std::string& code_a,
                             const std::string& question_b, const std::string& code_b,
                             double threshold) {
    ValidationReport r;
    r.check_name = name;
    r.threshold = threshold;
    for (const auto& row : dataset.rows) {
        if (!row.ok()) continue;
        ++r.total;
        if (!code_a.empty() && dataset.cell(row, question_a) == code_a) ++r.count_a;
        if (!code_b.empty() && dataset.cell(row, question_b) == code_b) ++r.count_b;
    }
    r.discrepancy = std::llabs(r.count_a - r.count_b);
    r.discrepancy_rate = r.total == 0 ? 0.0 : static_cast<double>(r.discrepancy) / r.total;
    r.passed = r.discrepancy_rate <= r.threshold;
    return r;
}

}  // namespace

ValidationReport check_merge_consistency(const SurveySchema& schema, const Dataset& dataset,
                                         double threshold) {
    return tally_check("merge_consistency", dataset, "commit_classification",
                       code_for_label(schema, "commit_classification", "Merge commit"),
                       "commit_complexity",
                       code_for_label_prefix(schema, "commit_complexity", "Merge-like"),
                       threshold);
}

ValidationReport check_unrelated_consistency(const SurveySchema& schema, const Dataset& dataset,
                                             double threshold) {
    const std::string unrelated = "Unrelated to eBPF subsystem";
    return tally_check(
        "unrelated_consistency", dataset, "major_related_implementation_component",
        code_for_label(schema, "major_related_implementation_component", unrelated),
        "major_related_logic_component",
        code_for_label(schema, "major_related_logic_component", unrelated), threshold);
}

std::vector<FlaggedRow> row_logic_checks(const SurveySchema& schema, const Dataset& dataset) {
    const std::string merge_cls = code_for_label(schema, "commit_classification", "Merge commit");
    const std::string merge_cpx = code_for_label_prefix(schema, "commit_complexity", "Merge-like");
    const std::string unrelated = "Unrelated to eBPF subsystem";
    const std::string unrel_impl =
        code_for_label(schema, "major_related_implementation_component", unrelated);
    const std::string unrel_logic =
        code_for_label(schema, "major_related_logic_component", unrelated);

    std::vector<FlaggedRow> out;
    for (const auto& row : dataset.rows) {
        if (!row.ok()) continue;
        std::vector<std::string> reasons;
        bool is_merge_cls =
            !merge_cls.empty() && dataset.cell(row, "commit_classification") == merge_cls;
        bool is_merge_cpx =
            !merge_cpx.empty() && dataset.cell(row, "commit_complexity") == merge_cpx;
        bool impl_unrel = !unrel_impl.empty() &&
                          dataset.cell(row, "major_related_implementation_component") == unrel_impl;
        bool logic_unrel = !unrel_logic.empty() &&
                           dataset.cell(row, "major_related_logic_component") == unrel_logic;

        if (is_merge_cls && !is_merge_cpx)
            reasons.push_back("merge classification without merge-like complexity");
        if (is_merge_cpx && !is_merge_cls)
            reasons.push_back("merge-like complexity without merge classification");
        if (row.parent_count >= 2 && !is_merge_cls)
            reasons.push_back("structural merge, non-merge classification");
        if (is_merge_cls && row.parent_count < 2)
            reasons.push_back("merge classification, single parent");
        if (impl_unrel && !logic_unrel)
            reasons.push_back("implementation unrelated, logic related");
        if (logic_unrel && !impl_unrel)
            reasons.push_back("logic unrelated, implementation related");

        if (!reasons.empty()) out.push_back({row.hash, std::move(reasons)});
    }
    std::sort(out.begin(), out.end(),
              [](const FlaggedRow& a, const FlaggedRow& b) { return a.hash < b.hash; });
    return out;
}

std::vector<size_t> sample_indices(size_t n, size_t k, uint64_t seed) {
    if (k > n)
        throw std::runtime_error("sample size " + std::to_string(k) + " exceeds dataset size " +
                                 std::to_string(n));
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    SplitMix64 rng(seed);
    for (size_t i = 0; i < k; ++i) {
        size_t j = i + static_cast<size_t>(rng.bounded(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

std::string review_sample_csv(const SurveySchema& schema, const Dataset& dataset, size_t k,
                              uint64_t seed, const std::map<std::string, std::string>& bodies) {
    Dataset sorted = dataset;
    sort_rows(sorted);  // sampling is over the canonical order, not file order

    std::vector<std::string> header = {"hash", "commit_date", "subject", "message"};
    for (const auto& q : schema.questions) header.push_back(q.id);
    header.push_back("status");
    header.push_back("expert_rating");
    std::string out = csv::encode_row(header);

    for (size_t i : sample_indices(sorted.rows.size(), k, seed)) {
        const DatasetRow& row = sorted.rows[i];
        std::string message = row.subject;
        auto it = bodies.find(row.hash);
        if (it != bodies.end() && !it->second.empty()) message += "\n\n" + it->second;
        std::vector<std::string> fields = {row.hash, timeutil::format_rfc3339(row.commit_date),
                                           row.subject, message};
        for (const auto& q : schema.questions) fields.push_back(sorted.cell(row, q.id));
        fields.push_back(row.status);
        fields.emplace_back();  // expert_rating, filled by the reviewer
        out += csv::encode_row(fields);
    }
    return out;
}

std::string validation_report_json(const std::vector<ValidationReport>& reports,
                                   const std::vector<FlaggedRow>& flagged) {
    nlohmann::ordered_json j;
    bool all_passed = true;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json c;
        c["check_name"] = r.check_name;
        c["count_a"] = r.count_a;
        c["count_b"] = r.count_b;
        c["discrepancy"] = r.discrepancy;
        c["total"] = r.total;
        c["discrepancy_rate"] = r.discrepancy_rate;
        c["threshold"] = r.threshold;
        c["passed"] = r.passed;
        c["flagged_hashes"] = r.flagged_hashes;
        checks.push_back(std::move(c));
        all_passed = all_passed && r.passed;
    }
    j["checks"] = std::move(checks);
    nlohmann::ordered_json flags = nlohmann::ordered_json::array();
    for (const auto& f : flagged) {
        nlohmann::ordered_json e;
        e["hash"] = f.hash;
        e["reasons"] = f.reasons;
        flags.push_back(std::move(e));
    }
    j["row_flags"] = std::move(flags);
    j["passed"] = all_passed;
    return j.dump(2) + "\n";
}

}  // namespace codesurvey
