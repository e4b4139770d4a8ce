// Python bindings. Every CLI subcommand is reachable through run_cli; the
// direct entry points cover corpus and schema loading, the scripted survey
// backend, dataset persistence, and the validation and analysis operations.
// Aggregates cross the boundary as plain dicts and lists; Schema, Dataset,
// and TimelineSeries stay opaque handles.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "codesurvey/agent.hpp"
#include "codesurvey/analysis.hpp"
#include "codesurvey/cli.hpp"
#include "codesurvey/dataset.hpp"
#include "codesurvey/ingest.hpp"
#include "codesurvey/survey.hpp"
#include "codesurvey/timeutil.hpp"
#include "codesurvey/validation.hpp"

namespace py = pybind11;
using namespace codesurvey;

namespace {

py::dict commit_to_dict(const CommitRecord& c) {
    py::dict d;
    d["hash"] = c.hash;
    d["author_name"] = c.author_name;
    d["author_email"] = c.author_email;
    d["author_date"] = c.author_date;
    d["commit_date"] = c.commit_date;
    d["subject"] = c.subject;
    d["body"] = c.body;
    d["parents"] = c.parents;
    py::list files;
    for (const auto& f : c.files) {
        py::dict fd;
        fd["path"] = f.path;
        fd["insertions"] = f.insertions;
        fd["deletions"] = f.deletions;
        fd["binary"] = f.binary;
        files.append(fd);
    }
    d["files"] = files;
    return d;
}

py::dict row_to_dict(const Dataset& ds, const DatasetRow& r) {
    py::dict d;
    d["hash"] = r.hash;
    d["author_name"] = r.author_name;
    d["author_email"] = r.author_email;
    d["author_date"] = r.author_date;
    d["commit_date"] = r.commit_date;
    d["subject"] = r.subject;
    d["parent_count"] = r.parent_count;
    d["file_count"] = r.file_count;
    d["insertions"] = r.insertions;
    d["deletions"] = r.deletions;
    d["files"] = split_list(r.files);
    py::dict answers;
    for (size_t i = 0; i < ds.question_ids.size() && i < r.answer_cells.size(); ++i)
        answers[py::str(ds.question_ids[i])] = r.answer_cells[i];
    d["answers"] = answers;
    d["attempts"] = r.attempts;
    d["model"] = r.model;
    d["status"] = r.status;
    d["failure_reason"] = r.failure_reason;
    d["ok"] = r.ok();
    return d;
}

py::dict report_to_dict(const ValidationReport& r) {
    py::dict d;
    d["check_name"] = r.check_name;
    d["count_a"] = r.count_a;
    d["count_b"] = r.count_b;
    d["discrepancy"] = r.discrepancy;
    d["total"] = r.total;
    d["discrepancy_rate"] = r.discrepancy_rate;
    d["threshold"] = r.threshold;
    d["passed"] = r.passed;
    d["flagged_hashes"] = r.flagged_hashes;
    return d;
}

BugGroupBy group_from(const std::string& s) {
    if (s == "file") return BugGroupBy::File;
    if (s == "component") return BugGroupBy::ImplementationComponent;
    throw std::invalid_argument("group_by must be 'file' or 'component'");
}

FeatureMode mode_from(const std::string& s) {
    if (s == "all") return FeatureMode::All;
    if (s == "helpers_kfuncs") return FeatureMode::HelpersKfuncs;
    if (s == "excluding_helpers_kfuncs") return FeatureMode::ExcludingHelpersKfuncs;
    throw std::invalid_argument(
        "mode must be 'all', 'helpers_kfuncs' or 'excluding_helpers_kfuncs'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Commit survey toolkit: git history mining, closed-vocabulary commit "
        "surveys, consistency validation, and evolution analyses.";
    m.attr("__version__") = "0.1.0";

    py::class_<SurveySchema>(m, "Schema")
        .def_property_readonly("id", [](const SurveySchema& s) { return s.id; })
        .def_property_readonly("title", [](const SurveySchema& s) { return s.title; })
        .def_property_readonly("description", [](const SurveySchema& s) { return s.description; })
        .def("questions",
             [](const SurveySchema& s) {
                 py::list out;
                 for (const auto& q : s.questions) {
                     py::dict d;
                     d["id"] = q.id;
                     d["kind"] = to_string(q.kind);
                     d["prompt"] = q.prompt;
                     d["max_words"] = q.max_words;
                     d["max_items"] = q.max_items;
                     d["allow_unsure"] = q.allow_unsure;
                     py::list options;
                     for (const auto& c : q.choices) {
                         py::dict o;
                         o["code"] = c.code;
                         o["label"] = c.label;
                         options.append(o);
                     }
                     d["options"] = options;
                     out.append(d);
                 }
                 return out;
             })
        .def("__repr__", [](const SurveySchema& s) {
            return "<Schema " + s.id + ", " + std::to_string(s.questions.size()) + " questions>";
        });

    py::class_<Dataset>(m, "Dataset")
        .def_property_readonly("schema_id", [](const Dataset& d) { return d.schema_id; })
        .def_property_readonly("question_ids", [](const Dataset& d) { return d.question_ids; })
        .def("__len__", [](const Dataset& d) { return d.rows.size(); })
        .def("rows",
             [](const Dataset& d) {
                 py::list out;
                 for (const auto& r : d.rows) out.append(row_to_dict(d, r));
                 return out;
             })
        .def("to_csv", [](const Dataset& d) { return to_csv(d); })
        .def("__repr__", [](const Dataset& d) {
            return "<Dataset " + d.schema_id + ", " + std::to_string(d.rows.size()) + " rows>";
        });

    py::class_<TimelineSeries>(m, "TimelineSeries")
        .def_readonly("label", &TimelineSeries::label)
        .def_readonly("start_month", &TimelineSeries::start_month)
        .def_readonly("values", &TimelineSeries::values)
        .def_readonly("smoothed", &TimelineSeries::smoothed)
        .def_readonly("window_months", &TimelineSeries::window_months)
        .def("months",
             [](const TimelineSeries& s) {
                 std::vector<std::string> out;
                 out.reserve(s.values.size());
                 for (size_t i = 0; i < s.values.size(); ++i)
                     out.push_back(timeutil::month_label(s.month_at(i)));
                 return out;
             })
        .def("__repr__", [](const TimelineSeries& s) {
            return "<TimelineSeries " + s.label + ", " + std::to_string(s.values.size()) +
                   " months>";
        });

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a CLI subcommand; returns (exit_code, stdout, stderr).");

    m.def("load_schema", &load_survey_schema, py::arg("path"));

    m.def(
        "load_corpus",
        [](const std::string& path) {
            py::list out;
            for (const auto& c : load_corpus(path)) out.append(commit_to_dict(c));
            return out;
        },
        py::arg("path"));

    m.def(
        "extract_commits",
        [](const std::string& repo, const std::string& grep, const std::string& since,
           const std::string& until, size_t max_commits) {
            ExtractOptions opt;
            opt.repo_path = repo;
            opt.grep = grep;
            opt.since = since;
            opt.until = until;
            opt.max_commits = max_commits;
            py::list out;
            for (const auto& c : extract_commits(opt)) out.append(commit_to_dict(c));
            return out;
        },
        py::arg("repo"), py::arg("grep") = "", py::arg("since") = "", py::arg("until") = "",
        py::arg("max_commits") = 0);

    m.def(
        "read_dataset", [](const std::string& path) { return read_csv(path); }, py::arg("path"));
    m.def(
        "read_dataset",
        [](const std::string& path, const SurveySchema& schema) { return read_csv(path, schema); },
        py::arg("path"), py::arg("schema"));
    m.def("merge", &merge_datasets, py::arg("base"), py::arg("delta"));

    m.def(
        "run_scripted_survey",
        [](const std::string& corpus, const SurveySchema& schema, const std::string& rules,
           int workers) {
            BackendConfig cfg;
            cfg.kind = BackendKind::Scripted;
            cfg.rules_path = rules;
            std::vector<CommitRecord> commits = load_corpus(corpus);
            RunOptions opt;
            opt.workers = workers;
            RunResult run = run_survey(cfg, schema, commits, opt);
            std::map<std::string, const CommitRecord*> by_hash;
            for (const auto& c : commits) by_hash[c.hash] = &c;
            Dataset ds = make_dataset(schema);
            for (const auto& r : run.responses)
                ds.rows.push_back(make_row(*by_hash.at(r.commit_hash), schema, r));
            sort_rows(ds);
            return ds;
        },
        py::arg("corpus"), py::arg("schema"), py::arg("rules"), py::arg("workers") = 1,
        "Survey a corpus with the scripted backend; returns the joined dataset.");

    m.def(
        "check_merge_consistency",
        [](const SurveySchema& s, const Dataset& d, double threshold) {
            return report_to_dict(check_merge_consistency(s, d, threshold));
        },
        py::arg("schema"), py::arg("dataset"), py::arg("threshold") = kDefaultConsistencyThreshold);
    m.def(
        "check_unrelated_consistency",
        [](const SurveySchema& s, const Dataset& d, double threshold) {
            return report_to_dict(check_unrelated_consistency(s, d, threshold));
        },
        py::arg("schema"), py::arg("dataset"), py::arg("threshold") = kDefaultConsistencyThreshold);
    m.def(
        "row_logic_checks",
        [](const SurveySchema& s, const Dataset& d) {
            py::list out;
            for (const auto& f : row_logic_checks(s, d)) {
                py::dict e;
                e["hash"] = f.hash;
                e["reasons"] = f.reasons;
                out.append(e);
            }
            return out;
        },
        py::arg("schema"), py::arg("dataset"));
    m.def("sample_indices", &sample_indices, py::arg("n"), py::arg("k"), py::arg("seed"));
    m.def("review_sample_csv", &review_sample_csv, py::arg("schema"), py::arg("dataset"),
          py::arg("k"), py::arg("seed"), py::arg("bodies") = std::map<std::string, std::string>{});

    m.def(
        "distribution",
        [](const SurveySchema& s, const Dataset& d, const std::string& question_id) {
            py::list out;
            for (const auto& e : distribution(s, d, question_id)) {
                py::dict x;
                x["code"] = e.code;
                x["label"] = e.label;
                x["count"] = e.count;
                x["share"] = e.share;
                out.append(x);
            }
            return out;
        },
        py::arg("schema"), py::arg("dataset"), py::arg("question_id"));
    m.def("clean_for_timeline", &clean_for_timeline, py::arg("schema"), py::arg("dataset"));
    m.def("monthly_series", &monthly_series, py::arg("schema"), py::arg("dataset"),
          py::arg("question_id"));
    m.def("smooth", &smooth, py::arg("series"), py::arg("window_months") = 3);
    m.def(
        "load_feature_table",
        [](const std::string& path) {
            py::list out;
            for (const auto& f : load_feature_table(path)) {
                py::dict d;
                d["name"] = f.name;
                d["feature_type"] = f.feature_type;
                d["introduced_date"] = f.introduced_date;
                d["introduced_commit"] = f.introduced_commit;
                out.append(d);
            }
            return out;
        },
        py::arg("path"));
    m.def(
        "cumulative_features",
        [](const std::string& features_csv, const std::string& mode) {
            return cumulative_features(load_feature_table(features_csv), mode_from(mode));
        },
        py::arg("features_csv"), py::arg("mode") = "all");
    m.def(
        "top_buggy",
        [](const SurveySchema& s, const Dataset& d, const std::string& group_by, int n,
           bool include_security) {
            py::list out;
            for (const auto& e : top_buggy(s, d, group_from(group_by), n, include_security)) {
                py::dict x;
                x["key"] = e.key;
                x["count"] = e.count;
                x["share"] = e.share;
                out.append(x);
            }
            return out;
        },
        py::arg("schema"), py::arg("dataset"), py::arg("group_by") = "file", py::arg("n") = 10,
        py::arg("include_security") = false);
    m.def(
        "verifier_instruction_correlation",
        [](const SurveySchema& s, const Dataset& d) {
            CorrelationResult r = verifier_instruction_correlation(s, d);
            py::dict out;
            out["correlation"] = r.correlation;
            out["instruction_changes"] = r.instruction_changes;
            out["verifier_bugs"] = r.verifier_bugs;
            return out;
        },
        py::arg("schema"), py::arg("dataset"));
    m.def("component_lifecycle", &component_lifecycle, py::arg("schema"), py::arg("dataset"),
          py::arg("component_label") = "libbpf library");
    m.def(
        "feature_component_matrix",
        [](const SurveySchema& s, const Dataset& d, const std::vector<std::string>& keywords,
           const std::map<std::string, std::string>& bodies) {
            FeatureComponentMatrix mtx = feature_component_matrix(s, d, keywords, bodies);
            py::dict out;
            out["keywords"] = mtx.feature_keywords;
            out["components"] = mtx.components;
            out["cells"] = mtx.cells;
            return out;
        },
        py::arg("schema"), py::arg("dataset"), py::arg("keywords"),
        py::arg("bodies") = std::map<std::string, std::string>{});
    m.def("pearson", &pearson, py::arg("a"), py::arg("b"));
}
