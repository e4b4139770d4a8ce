#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codesurvey/ingest.hpp"
#include "codesurvey/survey.hpp"

namespace codesurvey {

// One survey response joined with its commit metadata. Answer cells are the
// canonical on-disk strings: text answers verbatim, list answers joined with
// ';'. Cells are opaque to serialization, so read(write(d)) is exact even for
// free text containing the separator; only choice-code cells are ever split.
struct DatasetRow {
    std::string hash;
    std::string author_name;
    std::string author_email;
    int64_t author_date = 0;
    int64_t commit_date = 0;
    std::string subject;
    int parent_count = 0;
    int file_count = 0;
    int insertions = 0;
    int deletions = 0;
    std::string files;  // changed paths joined with ';'

    std::vector<std::string> answer_cells;  // aligned with Dataset::question_ids

    int attempts = 0;
    std::string model;
    std::string status;  // "ok" or "failed"; failed rows have empty answer cells
    std::string failure_reason;

    bool ok() const { return status == "ok"; }
};

struct Dataset {
    std::string schema_id;  // empty only for a dataset with no rows (wildcard)
    std::vector<std::string> question_ids;
    std::vector<DatasetRow> rows;

    // Index into question_ids, or -1.
    int question_index(const std::string& question_id) const;
    // Cell for a question, "" when the question is absent.
    const std::string& cell(const DatasetRow& row, const std::string& question_id) const;
};

inline constexpr const char* kStatusOk = "ok";
inline constexpr const char* kStatusFailed = "failed";
inline constexpr char kListSep = ';';

std::string join_list(const std::vector<std::string>& items);
std::vector<std::string> split_list(const std::string& cell);

// On-disk cell for an answer: text verbatim, items joined with ';'.
std::string answer_cell(const Answer& answer);

Dataset make_dataset(const SurveySchema& schema);
std::vector<std::string> dataset_header(const Dataset& dataset);

DatasetRow make_row(const CommitRecord& commit, const SurveySchema& schema,
                    const SurveyResponse& result);

// Stable order: (commit_date, hash) ascending. Every writer sorts first, so
// equal datasets always serialize to identical bytes.
void sort_rows(Dataset& dataset);

std::string to_csv(const Dataset& dataset);
void write_csv(const Dataset& dataset, const std::string& path);

// Column layout is recovered from the header: a fixed commit prefix, then one
// column per question, then the fixed trailer. With a schema the question
// columns must match it exactly; unknown or missing columns are named in the
// error.
Dataset parse_dataset_csv(const std::string& text);
Dataset read_csv(const std::string& path);
Dataset read_csv(const std::string& path, const SurveySchema& schema);

// Union by hash with delta winning on conflicts, then sorted. Schemas must
// agree; a rowless side (schema_id "") merges with anything.
Dataset merge_datasets(const Dataset& base, const Dataset& delta);

// codebook.csv sidecar: question_id,code,label for every choice option.
std::string codebook_csv(const SurveySchema& schema);
void write_codebook(const SurveySchema& schema, const std::string& path);

}  // namespace codesurvey
