#include "codesurvey/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>

#include "codesurvey/timeutil.hpp"

namespace codesurvey {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

const Question& require_question(const SurveySchema& schema, const std::string& question_id) {
    const Question* q = schema.find(question_id);
    if (!q) throw std::runtime_error("unknown question: " + question_id);
    return *q;
}

std::string code_for_label(const SurveySchema& schema, const std::string& question_id,
                           const std::string& label) {
    const Question* q = schema.find(question_id);
    if (!q) return "";
    for (const auto& c : q->choices)
        if (c.label == label) return c.code;
    return "";
}

// Month range [min, max] over ok rows; false when there are none.
bool ok_month_range(const Dataset& dataset, int& min_month, int& max_month) {
    bool any = false;
    for (const auto& row : dataset.rows) {
        if (!row.ok()) continue;
        int m = timeutil::month_index(row.commit_date);
        if (!any) {
            min_month = max_month = m;
            any = true;
        } else {
            min_month = std::min(min_month, m);
            max_month = std::max(max_month, m);
        }
    }
    return any;
}

}  // namespace

std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::runtime_error("pearson: length mismatch");
    size_t n = a.size();
    if (n < 2) return std::nullopt;
    double mean_a = 0, mean_b = 0;
    for (size_t i = 0; i < n; ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= n;
    mean_b /= n;
    double cov = 0, var_a = 0, var_b = 0;
    for (size_t i = 0; i < n; ++i) {
        double da = a[i] - mean_a, db = b[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0) return std::nullopt;
    return cov / std::sqrt(var_a * var_b);
}

std::vector<DistributionEntry> distribution(const SurveySchema& schema, const Dataset& dataset,
                                            const std::string& question_id) {
    const Question& q = require_question(schema, question_id);
    std::map<std::string, int64_t> counts;
    int64_t total = 0;
    for (const auto& row : dataset.rows) {
        if (!row.ok()) continue;
        for (const auto& code : split_list(dataset.cell(row, question_id))) {
            ++counts[code];
            ++total;
        }
    }
    std::vector<DistributionEntry> out;
    auto option_rank = [&](const std::string& code) -> size_t {
        for (size_t i = 0; i < q.choices.size(); ++i)
            if (q.choices[i].code == code) return i;
        return q.choices.size();  // codes outside the schema sort last
    };
    for (const auto& [code, count] : counts) {
        DistributionEntry e;
        e.code = code;
        const Choice* c = q.find_code(code);
        e.label = c ? c->label : code;
        e.count = count;
        e.share = total == 0 ? 0.0 : static_cast<double>(count) / total;
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [&](const DistributionEntry& x, const DistributionEntry& y) {
        if (x.count != y.count) return x.count > y.count;
        size_t rx = option_rank(x.code), ry = option_rank(y.code);
        if (rx != ry) return rx < ry;
        return x.code < y.code;
    });
    return out;
}

Dataset clean_for_timeline(const SurveySchema& schema, const Dataset& dataset) {
    const std::string unrelated = "Unrelated to eBPF subsystem";
    const std::string unrel_impl =
        code_for_label(schema, "major_related_implementation_component", unrelated);
    const std::string unrel_logic =
        code_for_label(schema, "major_related_logic_component", unrelated);
    const std::string merge_cls = code_for_label(schema, "commit_classification", "Merge commit");

    // Substantive use-case selections exclude the bookkeeping sentinels.
    std::set<std::string> non_substantive;
    if (const Question* uq = schema.find("usecases_or_submodule_events")) {
        for (const auto& c : uq->choices)
            if (c.label == "Merge commit" || c.label == kUnsureLabel)
                non_substantive.insert(c.code);
    }

    Dataset out = dataset;
    out.rows.clear();
    for (const auto& row : dataset.rows) {
        if (!row.ok()) continue;
        if (!unrel_impl.empty() &&
            dataset.cell(row, "major_related_implementation_component") == unrel_impl)
            continue;
        if (!unrel_logic.empty() &&
            dataset.cell(row, "major_related_logic_component") == unrel_logic)
            continue;
        if (!merge_cls.empty() && dataset.cell(row, "commit_classification") == merge_cls) {
            int substantive = 0;
            for (const auto& code : split_list(dataset.cell(row, "usecases_or_submodule_events")))
                if (!non_substantive.count(code)) ++substantive;
            if (substantive > 1) continue;  // multi-component mainline merge
        }
        out.rows.push_back(row);
    }
    return out;
}

std::vector<TimelineSeries> monthly_series(const SurveySchema& schema, const Dataset& dataset,
                                           const std::string& question_id) {
    const Question& q = require_question(schema, question_id);
    int min_month = 0, max_month = 0;
    if (!ok_month_range(dataset, min_month, max_month)) return {};
    size_t span = static_cast<size_t>(max_month - min_month + 1);

    std::vector<TimelineSeries> out;
    std::map<std::string, size_t> series_of_code;
    for (const auto& c : q.choices) {
        TimelineSeries s;
        s.label = c.label;
        s.start_month = min_month;
        s.values.assign(span, 0.0);
        series_of_code[c.code] = out.size();
        out.push_back(std::move(s));
    }
    for (const auto& row : dataset.rows) {
        if (!row.ok()) continue;
        size_t bucket = static_cast<size_t>(timeutil::month_index(row.commit_date) - min_month);
        for (const auto& code : split_list(dataset.cell(row, question_id))) {
            auto it = series_of_code.find(code);
            if (it == series_of_code.end()) continue;  // outside the vocabulary
            out[it->second].values[bucket] += 1.0;
        }
    }
    return out;
}

TimelineSeries smooth(const TimelineSeries& series, int window_months) {
    if (window_months < 1) throw std::runtime_error("smoothing window must be >= 1");
    TimelineSeries out = series;
    out.smoothed = true;
    out.window_months = window_months;
    if (window_months == 1) return out;
    const int n = static_cast<int>(series.values.size());
    const int left = (window_months - 1) / 2;
    const int right = window_months / 2;
    for (int i = 0; i < n; ++i) {
        int lo = std::max(0, i - left);
        int hi = std::min(n - 1, i + right);
        double sum = 0;
        for (int k = lo; k <= hi; ++k) sum += series.values[k];
        out.values[i] = sum / (hi - lo + 1);
    }
    return out;
}

std::vector<TimelineSeries> cumulative_features(const std::vector<FeatureRecord>& features,
                                                FeatureMode mode) {
    if (features.empty()) return {};
    auto in_mode = [mode](const std::string& type) {
        bool hk = type == "helper" || type == "kfunc";
        switch (mode) {
            case FeatureMode::All: return true;
            case FeatureMode::HelpersKfuncs: return hk;
            case FeatureMode::ExcludingHelpersKfuncs: return !hk;
        }
        return false;
    };
    // Full-table range for every mode, so mode outputs partition mode All.
    int min_month = timeutil::month_index(features.front().introduced_date);
    int max_month = min_month;
    for (const auto& f : features) {
        int m = timeutil::month_index(f.introduced_date);
        min_month = std::min(min_month, m);
        max_month = std::max(max_month, m);
    }
    size_t span = static_cast<size_t>(max_month - min_month + 1);

    std::vector<TimelineSeries> out;
    std::map<std::string, size_t> series_of_type;
    for (const char* type : kFeatureTypes) {
        if (!in_mode(type)) continue;
        bool present = false;
        for (const auto& f : features) present = present || f.feature_type == type;
        if (!present) continue;
        TimelineSeries s;
        s.label = type;
        s.start_month = min_month;
        s.values.assign(span, 0.0);
        series_of_type[type] = out.size();
        out.push_back(std::move(s));
    }
    for (const auto& f : features) {
        auto it = series_of_type.find(f.feature_type);
        if (it == series_of_type.end()) continue;
        size_t bucket = static_cast<size_t>(timeutil::month_index(f.introduced_date) - min_month);
        out[it->second].values[bucket] += 1.0;
    }
    for (auto& s : out)
        for (size_t i = 1; i < s.values.size(); ++i) s.values[i] += s.values[i - 1];
    return out;
}

std::vector<RankedCount> top_buggy(const SurveySchema& schema, const Dataset& dataset,
                                   BugGroupBy group_by, int n, bool include_security) {
    if (n < 1) throw std::runtime_error("top_buggy: n must be >= 1");
    const std::string bug_code = code_for_label(schema, "commit_classification", "Bug fix");
    const std::string sec_code = code_for_label(schema, "commit_classification", "Security fix");
    const Question* impl = schema.find("major_related_implementation_component");

    std::map<std::string, int64_t> counts;
    int64_t total = 0;
    for (const auto& row : dataset.rows) {
        if (!row.ok()) continue;
        const std::string& cls = dataset.cell(row, "commit_classification");
        bool is_bug = !bug_code.empty() && cls == bug_code;
        if (include_security && !sec_code.empty() && cls == sec_code) is_bug = true;
        if (!is_bug) continue;
        if (group_by == BugGroupBy::File) {
            for (const auto& path : split_list(row.files)) {
                ++counts[path];
                ++total;
            }
        } else {
            const std::string& code = dataset.cell(row, "major_related_implementation_component");
            const Choice* c = impl ? impl->find_code(code) : nullptr;
            ++counts[c ? c->label : code];
            ++total;
        }
    }
    std::vector<RankedCount> out;
    for (const auto& [key, count] : counts)
        out.push_back({key, count, total == 0 ? 0.0 : static_cast<double>(count) / total});
    std::sort(out.begin(), out.end(), [](const RankedCount& a, const RankedCount& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.key < b.key;
    });
    if (out.size() > static_cast<size_t>(n)) out.resize(n);
    return out;
}

CorrelationResult verifier_instruction_correlation(const SurveySchema& schema,
                                                   const Dataset& dataset) {
    const std::string verifier =
        code_for_label(schema, "major_related_implementation_component", "eBPF verifier");
    const std::string instruction =
        code_for_label(schema, "major_related_logic_component", "eBPF instruction logic");
    const std::string bug = code_for_label(schema, "commit_classification", "Bug fix");

    CorrelationResult res;
    res.instruction_changes.label = "Verifier instruction-logic changes";
    res.verifier_bugs.label = "Verifier bug fixes";
    int min_month = 0, max_month = 0;
    if (!ok_month_range(dataset, min_month, max_month)) return res;
    size_t span = static_cast<size_t>(max_month - min_month + 1);
    res.instruction_changes.start_month = min_month;
    res.verifier_bugs.start_month = min_month;
    res.instruction_changes.values.assign(span, 0.0);
    res.verifier_bugs.values.assign(span, 0.0);

    for (const auto& row : dataset.rows) {
        if (!row.ok()) continue;
        if (verifier.empty() ||
            dataset.cell(row, "major_related_implementation_component") != verifier)
            continue;
        size_t bucket = static_cast<size_t>(timeutil::month_index(row.commit_date) - min_month);
        if (!instruction.empty() && dataset.cell(row, "major_related_logic_component") == instruction)
            res.instruction_changes.values[bucket] += 1.0;
        if (!bug.empty() && dataset.cell(row, "commit_classification") == bug)
            res.verifier_bugs.values[bucket] += 1.0;
    }
    res.instruction_changes = smooth(res.instruction_changes, 3);
    res.verifier_bugs = smooth(res.verifier_bugs, 3);
    res.correlation = pearson(res.instruction_changes.values, res.verifier_bugs.values);
    return res;
}

std::vector<TimelineSeries> component_lifecycle(const SurveySchema& schema, const Dataset& dataset,
                                                const std::string& component_label) {
    const Question& impl = require_question(schema, "major_related_implementation_component");
    const Choice* target = nullptr;
    for (const auto& c : impl.choices)
        if (c.label == component_label) target = &c;
    if (!target) throw std::runtime_error("unknown implementation component: " + component_label);

    Dataset cleaned = clean_for_timeline(schema, dataset);
    // Bucket over the cleaned dataset's full range so lifecycles across all
    // labels sum to the full cleaned timeline.
    Dataset filtered = cleaned;
    filtered.rows.clear();
    for (const auto& row : cleaned.rows)
        if (cleaned.cell(row, "major_related_implementation_component") == target->code)
            filtered.rows.push_back(row);

    int min_month = 0, max_month = 0;
    if (!ok_month_range(cleaned, min_month, max_month)) return {};
    size_t span = static_cast<size_t>(max_month - min_month + 1);

    const Question& cls = require_question(schema, "commit_classification");
    std::vector<TimelineSeries> out;
    std::map<std::string, size_t> series_of_code;
    for (const auto& c : cls.choices) {
        TimelineSeries s;
        s.label = c.label;
        s.start_month = min_month;
        s.values.assign(span, 0.0);
        series_of_code[c.code] = out.size();
        out.push_back(std::move(s));
    }
    for (const auto& row : filtered.rows) {
        auto it = series_of_code.find(filtered.cell(row, "commit_classification"));
        if (it == series_of_code.end()) continue;
        size_t bucket = static_cast<size_t>(timeutil::month_index(row.commit_date) - min_month);
        out[it->second].values[bucket] += 1.0;
    }
    for (auto& s : out) s = smooth(s, 3);
    return out;
}

FeatureComponentMatrix feature_component_matrix(
    const SurveySchema& schema, const Dataset& dataset,
    const std::vector<std::string>& feature_keywords,
    const std::map<std::string, std::string>& bodies) {
    if (feature_keywords.empty())
        throw std::runtime_error("feature_component_matrix: keyword list is empty");
    const Question& impl = require_question(schema, "major_related_implementation_component");

    FeatureComponentMatrix m;
    m.feature_keywords = feature_keywords;
    for (const auto& c : impl.choices) m.components.push_back(c.label);
    m.cells.assign(feature_keywords.size(), std::vector<int64_t>(m.components.size(), 0));

    std::vector<std::string> needles;
    for (const auto& k : feature_keywords) needles.push_back(lower(k));

    for (const auto& row : dataset.rows) {
        if (!row.ok()) continue;
        const std::string& code = dataset.cell(row, "major_related_implementation_component");
        int comp = -1;
        for (size_t i = 0; i < impl.choices.size(); ++i)
            if (impl.choices[i].code == code) comp = static_cast<int>(i);
        if (comp < 0) continue;
        std::string hay = row.subject;
        auto it = bodies.find(row.hash);
        if (it != bodies.end()) hay += "\n" + it->second;
        hay = lower(hay);
        for (size_t k = 0; k < needles.size(); ++k)
            if (hay.find(needles[k]) != std::string::npos) ++m.cells[k][comp];
    }
    return m;
}

}  // namespace codesurvey
