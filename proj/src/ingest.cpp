#include "codesurvey/ingest.hpp"

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "codesurvey/csv.hpp"
#include "codesurvey/timeutil.hpp"

namespace codesurvey {

namespace {

constexpr char kRecordSep = '\x1e';
constexpr char kFieldSep = '\x1f';

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

[[noreturn]] void throw_errno(const std::string& what) {
    throw std::runtime_error(what + ": " + std::strerror(errno));
}

std::string read_all(int fd) {
    std::string out;
    char buf[65536];
    for (;;) {
        ssize_t n = ::read(fd, buf, sizeof(buf));
        if (n < 0) {
            if (errno == EINTR) continue;
            throw_errno("read from child pipe");
        }
        if (n == 0) break;
        out.append(buf, static_cast<size_t>(n));
    }
    return out;
}

}  // namespace

int CommitRecord::insertions_total() const {
    int n = 0;
    for (const auto& f : files) n += f.insertions;
    return n;
}

int CommitRecord::deletions_total() const {
    int n = 0;
    for (const auto& f : files) n += f.deletions;
    return n;
}

std::string run_command(const std::vector<std::string>& argv) {
    if (argv.empty()) throw std::runtime_error("run_command: empty argv");
    int out_pipe[2], err_pipe[2];
    if (pipe(out_pipe) != 0) throw_errno("pipe");
    if (pipe(err_pipe) != 0) {
        ::close(out_pipe[0]);
        ::close(out_pipe[1]);
        throw_errno("pipe");
    }
    pid_t pid = fork();
    if (pid < 0) throw_errno("fork");
    if (pid == 0) {
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        ::close(out_pipe[0]);
        ::close(out_pipe[1]);
        ::close(err_pipe[0]);
        ::close(err_pipe[1]);
        std::vector<char*> cargv;
        cargv.reserve(argv.size() + 1);
        for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        // Only reached on failure.
        std::string msg = "exec failed: " + argv[0] + ": " + std::strerror(errno) + "\n";
        ssize_t ignored = ::write(STDERR_FILENO, msg.data(), msg.size());
        (void)ignored;
        _exit(127);
    }
    ::close(out_pipe[1]);
    ::close(err_pipe[1]);
    std::string out = read_all(out_pipe[0]);
    std::string err = read_all(err_pipe[0]);
    ::close(out_pipe[0]);
    ::close(err_pipe[0]);
    int status = 0;
    while (waitpid(pid, &status, 0) < 0) {
        if (errno != EINTR) throw_errno("waitpid");
    }
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        std::ostringstream msg;
        msg << argv[0];
        for (size_t i = 1; i < argv.size(); ++i) msg << " " << argv[i];
        msg << " failed";
        if (WIFEXITED(status)) msg << " (exit " << WEXITSTATUS(status) << ")";
        else if (WIFSIGNALED(status)) msg << " (signal " << WTERMSIG(status) << ")";
        if (!err.empty()) msg << ": " << err;
        throw std::runtime_error(msg.str());
    }
    return out;
}

CommitRecord parse_commit_record(const std::string& record) {
    // hash US an US ae US at US ct US parents US body US <numstat...>
    std::vector<std::string> fields;
    size_t p = 0;
    for (int i = 0; i < 7; ++i) {
        size_t fs = record.find(kFieldSep, p);
        if (fs == std::string::npos)
            throw std::runtime_error("malformed log record: field separator missing at offset " +
                                     std::to_string(p));
        fields.push_back(record.substr(p, fs - p));
        p = fs + 1;
    }
    std::string after = record.substr(p);

    CommitRecord c;
    c.hash = fields[0];
    if (c.hash.empty()) throw std::runtime_error("malformed log record: empty hash at offset 0");
    c.author_name = fields[1];
    c.author_email = fields[2];
    try {
        c.author_date = std::stoll(fields[3]);
        c.commit_date = std::stoll(fields[4]);
    } catch (const std::exception&) {
        throw std::runtime_error("malformed log record: bad epoch timestamp for " + c.hash);
    }
    if (!fields[5].empty()) {
        std::istringstream ps(fields[5]);
        std::string parent;
        while (ps >> parent) c.parents.push_back(parent);
    }
    // Subject is the first message line; the conventional blank separator line
    // is consumed, everything after it is the body, byte-exact.
    const std::string& message = fields[6];
    size_t nl = message.find('\n');
    if (nl == std::string::npos) {
        c.subject = message;
    } else {
        c.subject = message.substr(0, nl);
        size_t body_start = nl + 1;
        if (body_start < message.size() && message[body_start] == '\n') ++body_start;
        c.body = message.substr(body_start);
    }
    while (!c.subject.empty() && c.subject.back() == '\r') c.subject.pop_back();
    while (!c.body.empty() && (c.body.back() == '\n' || c.body.back() == '\r')) c.body.pop_back();

    // numstat block: "ins\tdel\tpath" lines; "-" counts mark binary files.
    std::istringstream ns(after);
    std::string line;
    while (std::getline(ns, line)) {
        if (line.empty()) continue;
        size_t t1 = line.find('\t');
        size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) continue;
        FileChange f;
        std::string ins = line.substr(0, t1);
        std::string del = line.substr(t1 + 1, t2 - t1 - 1);
        f.path = line.substr(t2 + 1);
        if (f.path.empty())
            throw std::runtime_error("malformed numstat line for " + c.hash + ": empty path");
        if (ins == "-" || del == "-") {
            f.binary = true;
        } else {
            try {
                f.insertions = std::stoi(ins);
                f.deletions = std::stoi(del);
            } catch (const std::exception&) {
                throw std::runtime_error("malformed numstat counts for " + c.hash + ": " + line);
            }
        }
        c.files.push_back(std::move(f));
    }
    return c;
}

std::vector<CommitRecord> parse_git_log(const std::string& text) {
    std::vector<CommitRecord> commits;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t start = text.find(kRecordSep, pos);
        if (start == std::string::npos) break;
        size_t end = text.find(kRecordSep, start + 1);
        std::string record = text.substr(
            start + 1, end == std::string::npos ? std::string::npos : end - start - 1);
        pos = end == std::string::npos ? text.size() : end;
        commits.push_back(parse_commit_record(record));
    }
    return commits;
}

std::vector<CommitRecord> extract_commits(const ExtractOptions& options) {
    if (options.repo_path.empty()) throw std::runtime_error("extract_commits: repo_path required");
    std::vector<std::string> argv = {
        "git",      "-C",
        options.repo_path,
        "log",      "--numstat",
        "--date=raw",
        // 0x1e starts each record, 0x1f separates fields; bodies can hold
        // anything except those two bytes, which git never emits in messages.
        "--pretty=format:%x1e%H%x1f%an%x1f%ae%x1f%at%x1f%ct%x1f%P%x1f%B%x1f",
    };
    if (!options.grep.empty()) {
        argv.push_back("--grep=" + options.grep);
        argv.push_back("--regexp-ignore-case");
        argv.push_back("--fixed-strings");
    }
    // Date bounds are re-applied exactly below; give git a one-day margin so
    // its local-time interpretation cannot drop boundary commits.
    if (!options.since.empty()) {
        auto t = timeutil::parse_date(options.since);
        if (!t) throw std::runtime_error("bad since date: " + options.since);
        argv.push_back("--since=" + timeutil::format_rfc3339(*t - 86400));
    }
    if (!options.until.empty()) {
        auto t = timeutil::parse_date(options.until);
        if (!t) throw std::runtime_error("bad until date: " + options.until);
        argv.push_back("--until=" + timeutil::format_rfc3339(*t + 2 * 86400));
    }
    std::string out = run_command(argv);
    std::vector<CommitRecord> commits = parse_git_log(out);

    std::string pat = lower(options.grep);
    std::optional<int64_t> since_s, until_e;
    if (!options.since.empty()) since_s = timeutil::parse_date(options.since);
    if (!options.until.empty()) until_e = *timeutil::parse_date(options.until) + 86400;

    std::vector<CommitRecord> kept;
    std::set<std::string> seen;
    for (auto& c : commits) {
        if (!seen.insert(c.hash).second)
            throw std::runtime_error("duplicate commit hash in git output: " + c.hash);
        if (since_s && c.commit_date < *since_s) continue;
        if (until_e && c.commit_date >= *until_e) continue;
        if (!pat.empty() && lower(c.subject + "\n" + c.body).find(pat) == std::string::npos)
            continue;
        kept.push_back(std::move(c));
        if (options.max_commits && kept.size() >= options.max_commits) break;
    }
    return kept;
}

std::string corpus_line(const CommitRecord& c) {
    nlohmann::ordered_json j;
    j["hash"] = c.hash;
    j["author_name"] = c.author_name;
    j["author_email"] = c.author_email;
    j["author_date"] = timeutil::format_rfc3339(c.author_date);
    j["commit_date"] = timeutil::format_rfc3339(c.commit_date);
    j["subject"] = c.subject;
    j["body"] = c.body;
    j["parents"] = c.parents;
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    for (const auto& f : c.files) {
        nlohmann::ordered_json jf;
        jf["path"] = f.path;
        jf["insertions"] = f.insertions;
        jf["deletions"] = f.deletions;
        jf["binary"] = f.binary;
        files.push_back(std::move(jf));
    }
    j["files"] = std::move(files);
    return j.dump();
}

CommitRecord parse_corpus_line(const std::string& line, int lineno) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
    auto date = [&](const char* key) {
        auto t = timeutil::parse_rfc3339(j.at(key).get<std::string>());
        if (!t)
            throw std::runtime_error("corpus line " + std::to_string(lineno) + ": bad " + key);
        return *t;
    };
    CommitRecord c;
    try {
        c.hash = j.at("hash").get<std::string>();
        c.author_name = j.at("author_name").get<std::string>();
        c.author_email = j.at("author_email").get<std::string>();
        c.author_date = date("author_date");
        c.commit_date = date("commit_date");
        c.subject = j.at("subject").get<std::string>();
        c.body = j.at("body").get<std::string>();
        c.parents = j.at("parents").get<std::vector<std::string>>();
        for (const auto& jf : j.at("files")) {
            FileChange f;
            f.path = jf.at("path").get<std::string>();
            f.insertions = jf.at("insertions").get<int>();
            f.deletions = jf.at("deletions").get<int>();
            f.binary = jf.at("binary").get<bool>();
            c.files.push_back(std::move(f));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
    if (c.hash.empty())
        throw std::runtime_error("corpus line " + std::to_string(lineno) + ": empty hash");
    return c;
}

void write_corpus(const std::string& path, const std::vector<CommitRecord>& commits) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& c : commits) out << corpus_line(c) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<CommitRecord> load_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<CommitRecord> commits;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        CommitRecord c = parse_corpus_line(line, lineno);
        if (!seen.insert(c.hash).second)
            throw std::runtime_error("corpus line " + std::to_string(lineno) +
                                     ": duplicate hash " + c.hash);
        commits.push_back(std::move(c));
    }
    return commits;
}

std::vector<FeatureRecord> load_feature_table(const std::string& path) {
    auto rows = csv::parse_file(path);
    if (rows.empty()) throw std::runtime_error(path + ": empty feature table");
    const std::vector<std::string> want = {"name", "feature_type", "introduced_date",
                                           "introduced_commit"};
    if (rows[0].fields != want)
        throw std::runtime_error(path + ": bad header, expected name,feature_type," +
                                 "introduced_date,introduced_commit");
    std::vector<FeatureRecord> out;
    std::set<std::pair<std::string, std::string>> seen;
    for (size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.fields.size() == 1 && r.fields[0].empty()) continue;  // trailing newline
        if (r.fields.size() != 4)
            throw std::runtime_error(path + ": line " + std::to_string(r.line) +
                                     ": expected 4 fields");
        FeatureRecord f;
        f.name = r.fields[0];
        f.feature_type = r.fields[1];
        auto t = timeutil::parse_date(r.fields[2]);
        if (!t)
            throw std::runtime_error(path + ": line " + std::to_string(r.line) +
                                     ": bad introduced_date '" + r.fields[2] + "'");
        f.introduced_date = *t;
        f.introduced_commit = r.fields[3];
        if (f.name.empty())
            throw std::runtime_error(path + ": line " + std::to_string(r.line) + ": empty name");
        bool known = false;
        for (const char* ft : kFeatureTypes) known = known || f.feature_type == ft;
        if (!known)
            throw std::runtime_error(path + ": line " + std::to_string(r.line) +
                                     ": unknown feature_type '" + f.feature_type + "'");
        if (!seen.insert({f.name, f.feature_type}).second)
            throw std::runtime_error(path + ": line " + std::to_string(r.line) + ": duplicate (" +
                                     f.name + ", " + f.feature_type + ")");
        out.push_back(std::move(f));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const FeatureRecord& a, const FeatureRecord& b) {
                         return a.introduced_date < b.introduced_date;
                     });
    return out;
}

}  // namespace codesurvey
