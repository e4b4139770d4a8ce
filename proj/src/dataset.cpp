#include "codesurvey/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "codesurvey/csv.hpp"
#include "codesurvey/timeutil.hpp"

namespace codesurvey {

namespace {

const std::vector<std::string> kPrefixCols = {
    "hash",         "author_name", "author_email", "author_date", "commit_date", "subject",
    "parent_count", "file_count",  "insertions",   "deletions",   "files",
};

const std::vector<std::string> kSuffixCols = {
    "attempts", "model", "status", "failure_reason", "schema_id",
};

int parse_int(const std::string& s, const char* what, int line) {
    try {
        size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw csv::ParseError(std::string("bad ") + what + " '" + s + "'", line);
    }
}

int64_t parse_ts(const std::string& s, const char* what, int line) {
    auto t = timeutil::parse_rfc3339(s);
    if (!t) throw csv::ParseError(std::string("bad ") + what + " '" + s + "'", line);
    return *t;
}

}  // namespace

int Dataset::question_index(const std::string& question_id) const {
    for (size_t i = 0; i < question_ids.size(); ++i)
        if (question_ids[i] == question_id) return static_cast<int>(i);
    return -1;
}

const std::string& Dataset::cell(const DatasetRow& row, const std::string& question_id) const {
    static const std::string empty;
    int idx = question_index(question_id);
    if (idx < 0 || idx >= static_cast<int>(row.answer_cells.size())) return empty;
    return row.answer_cells[idx];
}

std::string join_list(const std::vector<std::string>& items) {
    std::string out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out.push_back(kListSep);
        out += items[i];
    }
    return out;
}

std::vector<std::string> split_list(const std::string& cell) {
    std::vector<std::string> out;
    if (cell.empty()) return out;
    size_t start = 0;
    for (;;) {
        size_t sep = cell.find(kListSep, start);
        if (sep == std::string::npos) {
            out.push_back(cell.substr(start));
            return out;
        }
        out.push_back(cell.substr(start, sep - start));
        start = sep + 1;
    }
}

std::string answer_cell(const Answer& answer) {
    if (answer.is_text()) return answer.text();
    return join_list(answer.items());
}

Dataset make_dataset(const SurveySchema& schema) {
    Dataset d;
    d.schema_id = schema.id;
    for (const auto& q : schema.questions) d.question_ids.push_back(q.id);
    return d;
}

std::vector<std::string> dataset_header(const Dataset& dataset) {
    std::vector<std::string> h = kPrefixCols;
    h.insert(h.end(), dataset.question_ids.begin(), dataset.question_ids.end());
    h.insert(h.end(), kSuffixCols.begin(), kSuffixCols.end());
    return h;
}

DatasetRow make_row(const CommitRecord& commit, const SurveySchema& schema,
                    const SurveyResponse& result) {
    DatasetRow row;
    row.hash = commit.hash;
    row.author_name = commit.author_name;
    row.author_email = commit.author_email;
    row.author_date = commit.author_date;
    row.commit_date = commit.commit_date;
    row.subject = commit.subject;
    row.parent_count = commit.parent_count();
    row.file_count = static_cast<int>(commit.files.size());
    row.insertions = commit.insertions_total();
    row.deletions = commit.deletions_total();
    std::vector<std::string> paths;
    for (const auto& f : commit.files) paths.push_back(f.path);
    row.files = join_list(paths);

    row.attempts = result.attempts;
    row.model = result.model;
    row.status = result.ok ? kStatusOk : kStatusFailed;
    row.failure_reason = result.ok ? "" : result.failure_reason;
    for (const auto& q : schema.questions) {
        if (!result.ok) {
            row.answer_cells.emplace_back();
            continue;
        }
        auto it = result.answers.find(q.id);
        if (it == result.answers.end())
            throw std::runtime_error("survey result for " + commit.hash + " missing answer to " +
                                     q.id);
        row.answer_cells.push_back(answer_cell(it->second));
    }
    return row;
}

void sort_rows(Dataset& dataset) {
    std::sort(dataset.rows.begin(), dataset.rows.end(),
              [](const DatasetRow& a, const DatasetRow& b) {
                  if (a.commit_date != b.commit_date) return a.commit_date < b.commit_date;
                  return a.hash < b.hash;
              });
}

std::string to_csv(const Dataset& dataset) {
    Dataset sorted = dataset;
    sort_rows(sorted);
    std::string out = csv::encode_row(dataset_header(sorted));
    for (const auto& r : sorted.rows) {
        std::vector<std::string> f;
        f.reserve(16 + sorted.question_ids.size());
        f.push_back(r.hash);
        f.push_back(r.author_name);
        f.push_back(r.author_email);
        f.push_back(timeutil::format_rfc3339(r.author_date));
        f.push_back(timeutil::format_rfc3339(r.commit_date));
        f.push_back(r.subject);
        f.push_back(std::to_string(r.parent_count));
        f.push_back(std::to_string(r.file_count));
        f.push_back(std::to_string(r.insertions));
        f.push_back(std::to_string(r.deletions));
        f.push_back(r.files);
        if (r.answer_cells.size() != sorted.question_ids.size())
            throw std::runtime_error("row " + r.hash + ": answer cell count mismatch");
        for (const auto& cell : r.answer_cells) f.push_back(cell);
        f.push_back(std::to_string(r.attempts));
        f.push_back(r.model);
        f.push_back(r.status);
        f.push_back(r.failure_reason);
        f.push_back(sorted.schema_id);
        out += csv::encode_row(f);
    }
    return out;
}

void write_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << to_csv(dataset);
    if (!out) throw std::runtime_error("write failed: " + path);
}

Dataset parse_dataset_csv(const std::string& text) {
    auto rows = csv::parse(text);
    // Drop a trailing empty record produced by the final newline.
    while (!rows.empty() && rows.back().fields.size() == 1 && rows.back().fields[0].empty())
        rows.pop_back();
    if (rows.empty()) throw std::runtime_error("dataset csv: missing header");

    const auto& header = rows[0].fields;
    const size_t np = kPrefixCols.size(), ns = kSuffixCols.size();
    if (header.size() < np + ns)
        throw std::runtime_error("dataset csv: header too short (" +
                                 std::to_string(header.size()) + " columns)");
    for (size_t i = 0; i < np; ++i)
        if (header[i] != kPrefixCols[i])
            throw std::runtime_error("dataset csv: column " + std::to_string(i + 1) +
                                     " is '" + header[i] + "', expected '" + kPrefixCols[i] + "'");
    for (size_t i = 0; i < ns; ++i)
        if (header[header.size() - ns + i] != kSuffixCols[i])
            throw std::runtime_error("dataset csv: column " +
                                     std::to_string(header.size() - ns + i + 1) + " is '" +
                                     header[header.size() - ns + i] + "', expected '" +
                                     kSuffixCols[i] + "'");

    Dataset d;
    d.question_ids.assign(header.begin() + np, header.end() - ns);
    const size_t nq = d.question_ids.size();

    std::set<std::string> seen;
    for (size_t i = 1; i < rows.size(); ++i) {
        const auto& rec = rows[i];
        if (rec.fields.size() != header.size())
            throw csv::ParseError("row has " + std::to_string(rec.fields.size()) +
                                      " fields, header has " + std::to_string(header.size()),
                                  rec.line);
        DatasetRow r;
        size_t k = 0;
        r.hash = rec.fields[k++];
        r.author_name = rec.fields[k++];
        r.author_email = rec.fields[k++];
        r.author_date = parse_ts(rec.fields[k++], "author_date", rec.line);
        r.commit_date = parse_ts(rec.fields[k++], "commit_date", rec.line);
        r.subject = rec.fields[k++];
        r.parent_count = parse_int(rec.fields[k++], "parent_count", rec.line);
        r.file_count = parse_int(rec.fields[k++], "file_count", rec.line);
        r.insertions = parse_int(rec.fields[k++], "insertions", rec.line);
        r.deletions = parse_int(rec.fields[k++], "deletions", rec.line);
        r.files = rec.fields[k++];
        for (size_t q = 0; q < nq; ++q) r.answer_cells.push_back(rec.fields[k++]);
        r.attempts = parse_int(rec.fields[k++], "attempts", rec.line);
        r.model = rec.fields[k++];
        r.status = rec.fields[k++];
        r.failure_reason = rec.fields[k++];
        const std::string& sid = rec.fields[k++];
        if (r.status != kStatusOk && r.status != kStatusFailed)
            throw csv::ParseError("bad status '" + r.status + "'", rec.line);
        if (r.hash.empty()) throw csv::ParseError("empty hash", rec.line);
        if (!seen.insert(r.hash).second)
            throw csv::ParseError("duplicate hash " + r.hash, rec.line);
        if (d.schema_id.empty()) d.schema_id = sid;
        else if (sid != d.schema_id)
            throw csv::ParseError("schema_id '" + sid + "' differs from '" + d.schema_id + "'",
                                  rec.line);
        d.rows.push_back(std::move(r));
    }
    return d;
}

Dataset read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return parse_dataset_csv(text);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

Dataset read_csv(const std::string& path, const SurveySchema& schema) {
    Dataset d = read_csv(path);
    std::vector<std::string> want;
    for (const auto& q : schema.questions) want.push_back(q.id);
    for (const auto& id : d.question_ids)
        if (std::find(want.begin(), want.end(), id) == want.end())
            throw std::runtime_error(path + ": unknown question column '" + id + "' for schema " +
                                     schema.id);
    for (const auto& id : want)
        if (d.question_index(id) < 0)
            throw std::runtime_error(path + ": missing question column '" + id + "' for schema " +
                                     schema.id);
    if (d.question_ids != want)
        throw std::runtime_error(path + ": question columns out of order for schema " + schema.id);
    if (!d.rows.empty() && !d.schema_id.empty() && d.schema_id != schema.id)
        throw std::runtime_error(path + ": dataset schema_id '" + d.schema_id +
                                 "' does not match '" + schema.id + "'");
    d.schema_id = schema.id;
    return d;
}

Dataset merge_datasets(const Dataset& base, const Dataset& delta) {
    auto wildcard = [](const Dataset& d) { return d.rows.empty() && d.schema_id.empty(); };
    if (!wildcard(base) && !wildcard(delta)) {
        if (base.schema_id != delta.schema_id)
            throw std::runtime_error("merge: schema_id mismatch: '" + base.schema_id + "' vs '" +
                                     delta.schema_id + "'");
        if (base.question_ids != delta.question_ids)
            throw std::runtime_error("merge: question columns differ");
    }
    Dataset out = wildcard(base) ? delta : base;
    out.rows.clear();

    std::map<std::string, const DatasetRow*> by_hash;
    for (const auto& r : base.rows) by_hash[r.hash] = &r;
    for (const auto& r : delta.rows) by_hash[r.hash] = &r;  // delta wins
    for (const auto& [hash, row] : by_hash) out.rows.push_back(*row);
    sort_rows(out);
    return out;
}

std::string codebook_csv(const SurveySchema& schema) {
    std::string out = csv::encode_row({"question_id", "code", "label"});
    for (const auto& q : schema.questions)
        for (const auto& c : q.choices) out += csv::encode_row({q.id, c.code, c.label});
    return out;
}

void write_codebook(const SurveySchema& schema, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << codebook_csv(schema);
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace codesurvey
