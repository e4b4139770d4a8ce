#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace codesurvey {

struct FileChange {
    std::string path;
    int insertions = 0;
    int deletions = 0;
    bool binary = false;  // numstat printed "-" counts
};

struct CommitRecord {
    std::string hash;
    std::string author_name;
    std::string author_email;
    int64_t author_date = 0;  // unix seconds, UTC
    int64_t commit_date = 0;
    std::string subject;  // first line of the message
    std::string body;     // rest, without the separating blank line
    std::vector<std::string> parents;
    std::vector<FileChange> files;

    int parent_count() const { return static_cast<int>(parents.size()); }
    int insertions_total() const;
    int deletions_total() const;
};

struct ExtractOptions {
    std::string repo_path;
    // Case-insensitive substring filter on subject+body. Empty means every commit.
    std::string grep;
    // Inclusive date window "YYYY-MM-DD" on commit date, UTC. Either may be empty.
    std::string since;
    std::string until;
    size_t max_commits = 0;  // 0 = unlimited
};

// Runs argv[0] with the given args, no shell involved. Captures stdout.
// Throws std::runtime_error on spawn failure or non-zero exit (stderr included).
std::string run_command(const std::vector<std::string>& argv);

// Parses one 0x1f-delimited log record (without its leading 0x1e) as emitted
// by extract_commits' pretty format. Throws with the byte offset on malformed
// input.
CommitRecord parse_commit_record(const std::string& raw_record);

// Splits 0x1e-separated records and parses each. Exposed for tests.
std::vector<CommitRecord> parse_git_log(const std::string& text);

// Lists matching commits, newest first per git, then applies the exact date
// window and pattern filters in-process. Throws on git errors or duplicate
// hashes in the output.
std::vector<CommitRecord> extract_commits(const ExtractOptions& options);

// JSONL corpus: one commit per line, stable key order, RFC 3339 dates.
void write_corpus(const std::string& path, const std::vector<CommitRecord>& commits);
std::vector<CommitRecord> load_corpus(const std::string& path);
std::string corpus_line(const CommitRecord& commit);
CommitRecord parse_corpus_line(const std::string& line, int lineno);

// Feature table CSV: name,feature_type,introduced_date,introduced_commit.
// feature_type is one of kFeatureTypes; (name, feature_type) must be unique;
// introduced_commit may be empty. Records come back sorted by introduced_date.
inline constexpr const char* kFeatureTypes[] = {
    "helper", "kfunc", "map_type", "prog_type", "attach_type",
    "link_type", "event", "flag", "other",
};
struct FeatureRecord {
    std::string name;
    std::string feature_type;
    int64_t introduced_date = 0;  // unix seconds at 00:00 UTC
    std::string introduced_commit;
};
std::vector<FeatureRecord> load_feature_table(const std::string& path);

}  // namespace codesurvey
