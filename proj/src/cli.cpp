#include "codesurvey/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "codesurvey/agent.hpp"
#include "codesurvey/analysis.hpp"
#include "codesurvey/chart.hpp"
#include "codesurvey/csv.hpp"
#include "codesurvey/dataset.hpp"
#include "codesurvey/ingest.hpp"
#include "codesurvey/survey.hpp"
#include "codesurvey/timeutil.hpp"
#include "codesurvey/validation.hpp"

namespace fs = std::filesystem;

namespace codesurvey {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

// Thrown for problems an operator fixes by changing flags, config, or files
// in place (exit 2), as opposed to failures during processing (exit 3).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require_file(const std::string& path, const std::string& what) {
    if (path.empty()) throw ConfigError(what + " is required");
    if (!fs::exists(path)) throw ConfigError(what + " not found: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

// Best effort: the writer that follows stays the authority on failure.
void ensure_parent_dir(const std::string& path) {
    fs::path parent = fs::path(path).parent_path();
    if (parent.empty()) return;
    std::error_code ec;
    fs::create_directories(parent, ec);
}

std::string slug(const std::string& label) {
    std::string out;
    for (char c : label) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        else if (!out.empty() && out.back() != '_')
            out.push_back('_');
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out;
}

std::string fixed(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::map<std::string, std::string> bodies_from_corpus(const std::string& corpus_path) {
    std::map<std::string, std::string> bodies;
    if (corpus_path.empty()) return bodies;
    for (const auto& c : load_corpus(corpus_path)) bodies[c.hash] = c.body;
    return bodies;
}

// --- ingest -------------------------------------------------------------------

struct IngestArgs {
    std::string repo, grep, since, until, out;
    size_t max_commits = 0;
};

int cmd_ingest(const IngestArgs& a, std::ostream& out) {
    require_file(a.repo, "--repo");
    if (!a.since.empty() && !timeutil::parse_date(a.since))
        throw ConfigError("--since must be YYYY-MM-DD");
    if (!a.until.empty() && !timeutil::parse_date(a.until))
        throw ConfigError("--until must be YYYY-MM-DD");
    if (a.out.empty()) throw ConfigError("--out is required");

    ExtractOptions opts;
    opts.repo_path = a.repo;
    opts.grep = a.grep;
    opts.since = a.since;
    opts.until = a.until;
    opts.max_commits = a.max_commits;
    std::vector<CommitRecord> commits = extract_commits(opts);
    ensure_parent_dir(a.out);
    write_corpus(a.out, commits);
    out << commits.size() << " commits\n";
    return kExitOk;
}

// --- survey -------------------------------------------------------------------

struct SurveyArgs {
    std::string corpus, repo, grep, since, until;
    std::string schema_path, out, log_path;
    std::string backend = "scripted";
    std::string rules, base_url, model, api_key_env = "OPENAI_API_KEY";
    double temperature = 0.0;
    int timeout_ms = 120000;
    int max_retries = 3;
    int rpm = 600;
    int workers = 1;
    size_t body_budget = kDefaultBodyBudget;
    bool resume = false;
};

int cmd_survey(const SurveyArgs& a, std::ostream& out) {
    if (a.corpus.empty() == a.repo.empty())
        throw ConfigError("exactly one of --corpus or --repo is required");
    require_file(a.schema_path, "--schema");
    if (a.out.empty()) throw ConfigError("--out is required");
    if (a.max_retries < 1) throw ConfigError("--max-retries must be >= 1");
    if (a.workers < 1) throw ConfigError("--workers must be >= 1");
    if (a.rpm < 1) throw ConfigError("--rpm must be >= 1");
    if (a.temperature < 0.0 || a.temperature > 1.0)
        throw ConfigError("--temperature must be in [0,1]");

    BackendConfig backend;
    if (a.backend == "scripted") {
        backend.kind = BackendKind::Scripted;
        require_file(a.rules, "--rules");
        backend.rules_path = a.rules;
    } else if (a.backend == "http") {
        backend.kind = BackendKind::HttpChat;
        if (a.base_url.empty()) throw ConfigError("--base-url is required for the http backend");
        if (a.model.empty()) throw ConfigError("--model is required for the http backend");
        backend.base_url = a.base_url;
        backend.model = a.model;
    } else {
        throw ConfigError("--backend must be scripted or http");
    }
    backend.api_key_env = a.api_key_env;
    backend.temperature = a.temperature;
    backend.timeout_ms = a.timeout_ms;
    backend.max_retries = a.max_retries;
    backend.requests_per_minute = a.rpm;
    backend.body_budget = a.body_budget;

    SurveySchema schema = load_survey_schema(a.schema_path);

    std::vector<CommitRecord> commits;
    if (!a.corpus.empty()) {
        require_file(a.corpus, "--corpus");
        commits = load_corpus(a.corpus);
    } else {
        require_file(a.repo, "--repo");
        ExtractOptions opts;
        opts.repo_path = a.repo;
        opts.grep = a.grep;
        opts.since = a.since;
        opts.until = a.until;
        commits = extract_commits(opts);
    }

    Dataset existing = make_dataset(schema);
    RunOptions run_opts;
    run_opts.workers = a.workers;
    bool resuming = a.resume && fs::exists(a.out);
    if (resuming) {
        existing = read_csv(a.out, schema);
        for (const auto& row : existing.rows) run_opts.skip_hashes.insert(row.hash);
    }

    // Config errors (bad rules file, missing API key env) surface here, before
    // any request is made; they are operator errors, not runtime failures.
    RunResult run;
    try {
        run = run_survey(backend, schema, commits, run_opts);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }

    std::map<std::string, const CommitRecord*> by_hash;
    for (const auto& c : commits) by_hash[c.hash] = &c;
    Dataset fresh = make_dataset(schema);
    size_t ok = 0, failed = 0;
    for (const auto& resp : run.responses) {
        fresh.rows.push_back(make_row(*by_hash.at(resp.commit_hash), schema, resp));
        (resp.ok ? ok : failed) += 1;
    }
    Dataset final_ds = resuming ? merge_datasets(existing, fresh) : fresh;
    ensure_parent_dir(a.out);
    write_csv(final_ds, a.out);
    write_codebook(schema, (fs::path(a.out).parent_path() / "codebook.csv").string());

    std::string log_path = a.log_path.empty()
                               ? (fs::path(a.out).parent_path() / "run_log.jsonl").string()
                               : a.log_path;
    ensure_parent_dir(log_path);
    std::ofstream log(log_path, resuming ? std::ios::app : std::ios::trunc);
    if (!log) throw std::runtime_error("cannot write " + log_path);
    for (const auto& entry : run.log) log << attempt_log_line(entry) << "\n";

    size_t skipped = run_opts.skip_hashes.size();
    out << "surveyed " << run.responses.size() << " commits (" << ok << " ok, " << failed
        << " failed, " << skipped << " already present)\n";
    out << "wrote " << a.out << " (" << final_ds.rows.size() << " rows)\n";
    return kExitOk;
}

// --- validate -----------------------------------------------------------------

struct ValidateArgs {
    std::string dataset, schema_path, out_dir, corpus;
    double threshold = kDefaultConsistencyThreshold;
    size_t sample = 50;
    uint64_t seed = 42;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
    require_file(a.dataset, "--dataset");
    require_file(a.schema_path, "--schema");
    if (!a.corpus.empty()) require_file(a.corpus, "--corpus");

    SurveySchema schema = load_survey_schema(a.schema_path);
    Dataset dataset = read_csv(a.dataset, schema);
    fs::path dir = a.out_dir.empty() ? fs::path(a.dataset).parent_path() : fs::path(a.out_dir);
    fs::create_directories(dir.empty() ? "." : dir);

    std::vector<ValidationReport> reports = {
        check_merge_consistency(schema, dataset, a.threshold),
        check_unrelated_consistency(schema, dataset, a.threshold),
    };
    std::vector<FlaggedRow> flagged = row_logic_checks(schema, dataset);
    write_file((dir / "validation_report.json").string(),
               validation_report_json(reports, flagged));

    size_t k = std::min(a.sample, dataset.rows.size());
    write_file((dir / "review_sample.csv").string(),
               review_sample_csv(schema, dataset, k, a.seed, bodies_from_corpus(a.corpus)));

    bool all_passed = true;
    for (const auto& r : reports) {
        out << r.check_name << ": " << r.count_a << " vs " << r.count_b << " over " << r.total
            << " rows, rate " << fixed(r.discrepancy_rate, 6) << " (threshold "
            << fixed(r.threshold, 6) << ") -> " << (r.passed ? "pass" : "FAIL") << "\n";
        all_passed = all_passed && r.passed;
    }
    out << flagged.size() << " rows flagged by row-level logic checks\n";
    out << "wrote " << (dir / "validation_report.json").string() << " and "
        << (dir / "review_sample.csv").string() << " (" << k << " rows)\n";
    return all_passed ? kExitOk : kExitCheckFailed;
}

// --- analyze ------------------------------------------------------------------

struct AnalyzeArgs {
    std::string dataset, schema_path, features, out_dir = ".", corpus;
    std::vector<std::string> only;
    std::vector<std::string> keywords;
    std::string component = "libbpf library";
    int window = 3;
    int top_n = 10;
    bool include_security = false;
};

std::string timeline_csv(const std::vector<TimelineSeries>& series) {
    std::vector<std::string> header = {"month"};
    for (const auto& s : series) header.push_back(s.label);
    std::string out = csv::encode_row(header);
    if (series.empty()) return out;
    size_t span = series[0].values.size();
    for (size_t i = 0; i < span; ++i) {
        std::vector<std::string> row = {timeutil::month_label(series[0].month_at(i))};
        for (const auto& s : series) row.push_back(fixed(s.values[i], 6));
        out += csv::encode_row(row);
    }
    return out;
}

struct ProductSink {
    fs::path dir;
    nlohmann::ordered_json products = nlohmann::ordered_json::array();

    void add(const std::string& name, const std::string& kind,
             const std::vector<std::pair<std::string, std::string>>& data_files,
             const std::vector<std::pair<std::string, std::string>>& charts) {
        nlohmann::ordered_json p;
        p["name"] = name;
        p["kind"] = kind;
        nlohmann::ordered_json data = nlohmann::ordered_json::array();
        for (const auto& [file, content] : data_files) {
            write_file((dir / file).string(), content);
            data.push_back(file);
        }
        nlohmann::ordered_json chart_list = nlohmann::ordered_json::array();
        for (const auto& [file, content] : charts) {
            write_file((dir / file).string(), content);
            chart_list.push_back(file);
        }
        p["data"] = std::move(data);
        p["charts"] = std::move(chart_list);
        products.push_back(std::move(p));
    }
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
    require_file(a.dataset, "--dataset");
    require_file(a.schema_path, "--schema");
    if (!a.corpus.empty()) require_file(a.corpus, "--corpus");
    if (a.window < 1) throw ConfigError("--window must be >= 1");
    if (a.top_n < 1) throw ConfigError("--top must be >= 1");

    SurveySchema schema = load_survey_schema(a.schema_path);
    Dataset dataset = read_csv(a.dataset, schema);

    // The default run is the full product set reproducing the published
    // analyses; --only narrows it.
    std::vector<std::string> wanted = a.only;
    if (wanted.empty()) {
        wanted = {
            "distribution:commit_classification",
            "timeline:commit_classification",
            "timeline:major_related_implementation_component",
            "timeline:major_related_logic_component",
            "timeline:usecases_or_submodule_events",
            "cumulative_features",
            "top_buggy",
            "verifier_instruction_correlation",
            "component_lifecycle",
        };
        if (!a.keywords.empty()) wanted.push_back("feature_component_matrix");
    }
    auto needs = [&](const std::string& prefix) {
        for (const auto& w : wanted)
            if (w == prefix || w.rfind(prefix + ":", 0) == 0) return true;
        return false;
    };
    if (needs("cumulative_features")) require_file(a.features, "--features");
    if (needs("feature_component_matrix") && a.keywords.empty())
        throw ConfigError("feature_component_matrix needs --keywords");

    fs::create_directories(a.out_dir.empty() ? "." : a.out_dir);
    ProductSink sink{fs::path(a.out_dir)};
    Dataset cleaned = clean_for_timeline(schema, dataset);
    std::map<std::string, std::string> bodies = bodies_from_corpus(a.corpus);

    for (const std::string& product : wanted) {
        std::string kind = product, arg;
        if (size_t colon = product.find(':'); colon != std::string::npos) {
            kind = product.substr(0, colon);
            arg = product.substr(colon + 1);
        }
        if (kind == "distribution") {
            if (arg.empty()) throw ConfigError("distribution needs a question id (distribution:<id>)");
            auto dist = distribution(schema, dataset, arg);
            std::string data = csv::encode_row({"code", "label", "count", "share"});
            for (const auto& e : dist)
                data += csv::encode_row({e.code, e.label, std::to_string(e.count),
                                         fixed(e.share, 9)});
            std::string base = "distribution_" + slug(arg);
            std::vector<std::pair<std::string, std::string>> charts;
            if (!dist.empty())
                charts.emplace_back(base + ".svg",
                                    chart::render_pie(dist, "Distribution: " + arg));
            sink.add(product, "distribution", {{base + ".csv", data}}, charts);
        } else if (kind == "timeline") {
            if (arg.empty()) throw ConfigError("timeline needs a question id (timeline:<id>)");
            auto series = monthly_series(schema, cleaned, arg);
            for (auto& s : series) s = smooth(s, a.window);
            std::string base = "timeline_" + slug(arg);
            std::vector<std::pair<std::string, std::string>> charts;
            if (!series.empty())
                charts.emplace_back(base + ".svg",
                                    chart::render_line(series, "Monthly commits: " + arg));
            sink.add(product, "timeline", {{base + ".csv", timeline_csv(series)}}, charts);
        } else if (kind == "cumulative_features") {
            auto features = load_feature_table(a.features);
            const std::pair<FeatureMode, std::string> modes[] = {
                {FeatureMode::All, "all"},
                {FeatureMode::HelpersKfuncs, "helpers_kfuncs"},
                {FeatureMode::ExcludingHelpersKfuncs, "excluding_helpers_kfuncs"},
            };
            std::vector<std::pair<std::string, std::string>> data, charts;
            for (const auto& [mode, mode_name] : modes) {
                auto series = cumulative_features(features, mode);
                data.emplace_back("cumulative_features_" + mode_name + ".csv",
                                  timeline_csv(series));
                if (!series.empty())
                    charts.emplace_back(
                        "cumulative_features_" + mode_name + ".svg",
                        chart::render_line(series, "Cumulative features (" + mode_name + ")"));
            }
            sink.add(product, "cumulative_features", data, charts);
        } else if (kind == "top_buggy") {
            std::vector<std::pair<std::string, std::string>> data, charts;
            const std::pair<BugGroupBy, std::string> groups[] = {
                {BugGroupBy::File, "file"},
                {BugGroupBy::ImplementationComponent, "component"},
            };
            for (const auto& [group, group_name] : groups) {
                auto ranking = top_buggy(schema, dataset, group, a.top_n, a.include_security);
                std::string csv_data = csv::encode_row({"key", "count", "share"});
                for (const auto& r : ranking)
                    csv_data += csv::encode_row({r.key, std::to_string(r.count),
                                                 fixed(r.share, 9)});
                data.emplace_back("top_buggy_" + group_name + ".csv", csv_data);
                if (!ranking.empty())
                    charts.emplace_back("top_buggy_" + group_name + ".svg",
                                        chart::render_bar(ranking, "Bug-fix commits by " +
                                                                       group_name));
            }
            sink.add(product, "top_buggy", data, charts);
        } else if (kind == "verifier_instruction_correlation") {
            CorrelationResult corr = verifier_instruction_correlation(schema, dataset);
            nlohmann::ordered_json j;
            if (corr.correlation) j["correlation"] = *corr.correlation;
            else j["correlation"] = nullptr;
            nlohmann::ordered_json months = nlohmann::ordered_json::array();
            for (size_t i = 0; i < corr.instruction_changes.values.size(); ++i)
                months.push_back(timeutil::month_label(corr.instruction_changes.month_at(i)));
            j["months"] = std::move(months);
            j["instruction_changes"] = corr.instruction_changes.values;
            j["verifier_bugs"] = corr.verifier_bugs.values;
            std::vector<std::pair<std::string, std::string>> charts;
            if (!corr.instruction_changes.values.empty())
                charts.emplace_back(
                    "verifier_instruction_correlation.svg",
                    chart::render_line({corr.instruction_changes, corr.verifier_bugs},
                                       "Verifier instruction changes vs verifier bug fixes"));
            sink.add(product, "correlation",
                     {{"verifier_instruction_correlation.json", j.dump(2) + "\n"}}, charts);
        } else if (kind == "component_lifecycle") {
            std::string label = arg.empty() ? a.component : arg;
            auto series = component_lifecycle(schema, dataset, label);
            std::string base = "component_lifecycle_" + slug(label);
            std::vector<std::pair<std::string, std::string>> charts;
            if (!series.empty())
                charts.emplace_back(base + ".svg",
                                    chart::render_line(series, "Lifecycle: " + label));
            sink.add(product, "component_lifecycle", {{base + ".csv", timeline_csv(series)}},
                     charts);
        } else if (kind == "feature_component_matrix") {
            auto matrix = feature_component_matrix(schema, dataset, a.keywords, bodies);
            std::vector<std::string> header = {"keyword"};
            for (const auto& c : matrix.components) header.push_back(c);
            std::string csv_data = csv::encode_row(header);
            for (size_t k = 0; k < matrix.feature_keywords.size(); ++k) {
                std::vector<std::string> row = {matrix.feature_keywords[k]};
                for (int64_t v : matrix.cells[k]) row.push_back(std::to_string(v));
                csv_data += csv::encode_row(row);
            }
            sink.add(product, "matrix", {{"feature_component_matrix.csv", csv_data}},
                     {{"feature_component_matrix.svg",
                       chart::render_heatmap(matrix, "Feature-component interdependencies")}});
        } else {
            throw ConfigError("unknown analysis product: " + product);
        }
    }

    nlohmann::ordered_json manifest;
    manifest["dataset"] = a.dataset;
    manifest["products"] = std::move(sink.products);
    write_file((fs::path(a.out_dir) / "analysis_manifest.json").string(),
               manifest.dump(2) + "\n");
    out << wanted.size() << " analysis products -> " << a.out_dir << "\n";
    return kExitOk;
}

// --- report -------------------------------------------------------------------

struct ReportArgs {
    std::string dir = ".";
    std::string out_file;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
    fs::path dir(a.dir);
    require_file(dir.string(), "--dir");
    std::string out_path = a.out_file.empty() ? (dir / "report.html").string() : a.out_file;

    std::ostringstream html;
    html << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
         << "<title>Commit survey report</title>\n"
         << "<style>body{font-family:sans-serif;max-width:1080px;margin:2em auto;padding:0 "
            "1em}h2{border-bottom:1px solid #ccc;padding-bottom:4px}table{border-collapse:"
            "collapse}td,th{border:1px solid #bbb;padding:4px 10px;text-align:left}</style>\n"
         << "</head>\n<body>\n<h1>Commit survey report</h1>\n";

    fs::path vr = dir / "validation_report.json";
    if (fs::exists(vr)) {
        auto j = nlohmann::json::parse(read_file(vr.string()));
        html << "<h2>Validation</h2>\n<table>\n<tr><th>check</th><th>count_a</th>"
             << "<th>count_b</th><th>total</th><th>rate</th><th>threshold</th>"
             << "<th>passed</th></tr>\n";
        for (const auto& c : j.at("checks")) {
            html << "<tr><td>" << c.at("check_name").get<std::string>() << "</td><td>"
                 << c.at("count_a").get<int64_t>() << "</td><td>" << c.at("count_b").get<int64_t>()
                 << "</td><td>" << c.at("total").get<int64_t>() << "</td><td>"
                 << fixed(c.at("discrepancy_rate").get<double>(), 6) << "</td><td>"
                 << fixed(c.at("threshold").get<double>(), 6) << "</td><td>"
                 << (c.at("passed").get<bool>() ? "yes" : "NO") << "</td></tr>\n";
        }
        html << "</table>\n<p>" << j.at("row_flags").size()
             << " rows flagged by row-level logic checks.</p>\n";
    }

    fs::path manifest_path = dir / "analysis_manifest.json";
    if (fs::exists(manifest_path)) {
        auto manifest = nlohmann::json::parse(read_file(manifest_path.string()));
        for (const auto& p : manifest.at("products")) {
            html << "<h2>" << p.at("name").get<std::string>() << "</h2>\n";
            for (const auto& file : p.at("charts")) {
                fs::path svg = dir / file.get<std::string>();
                if (fs::exists(svg)) html << read_file(svg.string());
            }
            html << "<p>Data: ";
            bool first = true;
            for (const auto& file : p.at("data")) {
                if (!first) html << ", ";
                first = false;
                html << "<code>" << file.get<std::string>() << "</code>";
            }
            html << "</p>\n";
        }
    } else {
        html << "<p>No analysis manifest found in " << dir.string() << ".</p>\n";
    }
    html << "</body>\n</html>\n";
    ensure_parent_dir(out_path);
    write_file(out_path, html.str());
    out << "wrote " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Commit-survey pipeline: mine commits, survey them with an LLM-style agent, "
                 "validate, and reproduce the evolution analyses",
                 "codesurvey"};
    app.set_config("--config", "", "Config file; sections per subcommand, flags override");
    app.require_subcommand(1);

    IngestArgs ingest;
    auto* ing = app.add_subcommand("ingest", "Extract commits from a repository to JSONL");
    ing->add_option("--repo", ingest.repo, "Repository checkout to mine");
    ing->add_option("--grep", ingest.grep, "Case-insensitive substring filter on messages");
    ing->add_option("--since", ingest.since, "Earliest commit date, YYYY-MM-DD (UTC)");
    ing->add_option("--until", ingest.until, "Latest commit date, YYYY-MM-DD (UTC)");
    ing->add_option("--max", ingest.max_commits, "Stop after this many commits (0 = all)");
    ing->add_option("--out", ingest.out, "Output commits.jsonl path");

    SurveyArgs survey;
    auto* sur = app.add_subcommand("survey", "Administer the survey over a commit corpus");
    sur->add_option("--corpus", survey.corpus, "commits.jsonl produced by ingest");
    sur->add_option("--repo", survey.repo, "Mine this repository instead of reading a corpus");
    sur->add_option("--grep", survey.grep, "Message filter when using --repo");
    sur->add_option("--since", survey.since, "Earliest commit date when using --repo");
    sur->add_option("--until", survey.until, "Latest commit date when using --repo");
    sur->add_option("--schema", survey.schema_path, "Survey schema file");
    sur->add_option("--out", survey.out, "Output dataset CSV");
    sur->add_option("--log", survey.log_path, "Run log JSONL (default: run_log.jsonl next to --out)");
    sur->add_option("--backend", survey.backend, "scripted or http");
    sur->add_option("--rules", survey.rules, "Scripted backend rules file");
    sur->add_option("--base-url", survey.base_url, "http backend base URL, e.g. https://api.openai.com/v1");
    sur->add_option("--model", survey.model, "http backend model id");
    sur->add_option("--api-key-env", survey.api_key_env, "Env var holding the API key");
    sur->add_option("--temperature", survey.temperature, "Sampling temperature in [0,1]");
    sur->add_option("--timeout-ms", survey.timeout_ms, "Per-request timeout");
    sur->add_option("--max-retries", survey.max_retries, "Total attempts per commit");
    sur->add_option("--rpm", survey.rpm, "Requests per minute across all workers");
    sur->add_option("--workers", survey.workers, "Concurrent in-flight completions");
    sur->add_option("--body-budget", survey.body_budget, "Max body bytes in a prompt");
    sur->add_flag("--resume", survey.resume, "Skip hashes already in --out and merge results");

    ValidateArgs validate;
    auto* val = app.add_subcommand("validate", "Run consistency checks and export a review sample");
    val->add_option("--dataset", validate.dataset, "Dataset CSV from survey");
    val->add_option("--schema", validate.schema_path, "Survey schema file");
    val->add_option("--threshold", validate.threshold, "Discrepancy rate threshold");
    val->add_option("--sample", validate.sample, "Review sample size");
    val->add_option("--seed", validate.seed, "Review sample seed");
    val->add_option("--corpus", validate.corpus, "commits.jsonl for full messages in the sample");
    val->add_option("--out-dir", validate.out_dir, "Output directory (default: next to dataset)");

    AnalyzeArgs analyze;
    auto* ana = app.add_subcommand("analyze", "Compute analysis products and charts");
    ana->add_option("--dataset", analyze.dataset, "Dataset CSV from survey");
    ana->add_option("--schema", analyze.schema_path, "Survey schema file");
    ana->add_option("--features", analyze.features, "Feature table CSV for cumulative timelines");
    ana->add_option("--out-dir", analyze.out_dir, "Output directory");
    ana->add_option("--only", analyze.only, "Products to compute (repeatable), e.g. distribution:commit_classification");
    ana->add_option("--keywords", analyze.keywords, "Keywords for the feature-component matrix (repeatable)");
    ana->add_option("--component", analyze.component, "Implementation component for the lifecycle product");
    ana->add_option("--window", analyze.window, "Smoothing window in months");
    ana->add_option("--top", analyze.top_n, "Ranking size for top_buggy");
    ana->add_flag("--include-security", analyze.include_security, "Count security fixes as bugs");
    ana->add_option("--corpus", analyze.corpus, "commits.jsonl for body text in keyword matching");

    ReportArgs report;
    auto* rep = app.add_subcommand("report", "Assemble a static HTML report from analysis outputs");
    rep->add_option("--dir", report.dir, "Directory holding analysis outputs");
    rep->add_option("--out", report.out_file, "Report path (default: report.html in --dir)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(ing)) return cmd_ingest(ingest, out);
        if (app.got_subcommand(sur)) return cmd_survey(survey, out);
        if (app.got_subcommand(val)) return cmd_validate(validate, out);
        if (app.got_subcommand(ana)) return cmd_analyze(analyze, out);
        if (app.got_subcommand(rep)) return cmd_report(report, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    err << "error: no subcommand\n";
    return kExitUsage;
}

}  // namespace codesurvey
