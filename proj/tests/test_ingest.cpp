#include <doctest.h>

#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "codesurvey/ingest.hpp"
#include "codesurvey/timeutil.hpp"
#include "support.hpp"
#include "synthetic_corpus.hpp"

using namespace codesurvey;
using testsupport::TempDir;

namespace {

constexpr char RS = '\x1e';
constexpr char FS = '\x1f';

std::string record(const std::string& hash, const std::string& message,
                   const std::string& parents = "", const std::string& numstat = "") {
    std::string r;
    r += hash;
    r += FS;
    r += "Alex Author";
    r += FS;
    r += "alex@example.org";
    r += FS;
    r += "1580000000";
    r += FS;
    r += "1580000100";
    r += FS;
    r += parents;
    r += FS;
    r += message;
    r += FS;
    r += numstat;
    return r;
}

}  // namespace

TEST_CASE("parse_commit_record decodes fields, message split and numstat") {
    std::string raw = record(
        "abc123", "bpf: fix the widget\n\nLong body line one.\nLine two.\n",
        "p1 p2", "\n3\t1\tkernel/bpf/verifier.c\n-\t-\timage.png\n10\t0\tnet/core/filter.c\n");
    CommitRecord c = parse_commit_record(raw);
    CHECK(c.hash == "abc123");
    CHECK(c.author_name == "Alex Author");
    CHECK(c.author_email == "alex@example.org");
    CHECK(c.author_date == 1580000000);
    CHECK(c.commit_date == 1580000100);
    CHECK(c.parents == std::vector<std::string>{"p1", "p2"});
    CHECK(c.parent_count() == 2);
    CHECK(c.subject == "bpf: fix the widget");
    CHECK(c.body == "Long body line one.\nLine two.");
    REQUIRE(c.files.size() == 3);
    CHECK(c.files[0].path == "kernel/bpf/verifier.c");
    CHECK(c.files[0].insertions == 3);
    CHECK(c.files[0].deletions == 1);
    CHECK_FALSE(c.files[0].binary);
    CHECK(c.files[1].path == "image.png");
    CHECK(c.files[1].binary);
    CHECK(c.files[1].insertions == 0);
    CHECK(c.insertions_total() == 13);
    CHECK(c.deletions_total() == 1);
}

TEST_CASE("parse_commit_record message edge shapes") {
    CHECK(parse_commit_record(record("h", "subject only")).subject == "subject only");
    CHECK(parse_commit_record(record("h", "subject only")).body == "");
    // No blank separator line: everything after the first newline is body.
    CommitRecord c = parse_commit_record(record("h", "subj\nbody without blank"));
    CHECK(c.subject == "subj");
    CHECK(c.body == "body without blank");
    // Empty parents field means a root commit.
    CHECK(parse_commit_record(record("h", "s")).parents.empty());
    // Numstat lines without two tabs are ignored.
    CHECK(parse_commit_record(record("h", "s", "", "\nnot-numstat\n")).files.empty());
}

TEST_CASE("parse_commit_record rejects malformed records") {
    CHECK_THROWS_WITH_AS(parse_commit_record("no separators here"),
                         doctest::Contains("field separator missing"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_commit_record(record("", "s")),
                         doctest::Contains("empty hash"), std::runtime_error);
    std::string bad_epoch = record("h", "s");
    size_t at = bad_epoch.find("1580000000");
    bad_epoch.replace(at, 10, "not-epochs");
    CHECK_THROWS_WITH_AS(parse_commit_record(bad_epoch),
                         doctest::Contains("bad epoch timestamp"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_commit_record(record("h", "s", "", "\n1\t2\t\n")),
                         doctest::Contains("empty path"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_commit_record(record("h", "s", "", "\nx\ty\tpath\n")),
                         doctest::Contains("malformed numstat counts"), std::runtime_error);
}

TEST_CASE("parse_git_log splits records on 0x1e") {
    std::string text;
    text += RS;
    text += record("aaa", "first");
    text += RS;
    text += record("bbb", "second");
    auto commits = parse_git_log(text);
    REQUIRE(commits.size() == 2);
    CHECK(commits[0].hash == "aaa");
    CHECK(commits[1].hash == "bbb");
    CHECK(parse_git_log("").empty());
    CHECK(parse_git_log("no record separator").empty());
}

TEST_CASE("run_command captures stdout and reports failures") {
    CHECK(run_command({"echo", "hello"}) == "hello\n");
    CHECK_THROWS_WITH_AS(run_command({}), doctest::Contains("empty argv"), std::runtime_error);
    CHECK_THROWS_WITH_AS(run_command({"false"}), doctest::Contains("failed"), std::runtime_error);
    CHECK_THROWS_WITH_AS(run_command({"/nonexistent/binary-xyz"}),
                         doctest::Contains("exec failed"), std::runtime_error);
}

namespace {

struct FixtureRepo {
    TempDir dir;
    std::string path;
    std::vector<std::string> hashes;  // oldest first

    FixtureRepo() : path(dir.file("repo")) {
        run_command({"git", "init", "-q", path});
        run_command({"git", "-C", path, "config", "user.name", "Fixture"});
        run_command({"git", "-C", path, "config", "user.email", "fixture@example.org"});
    }

    std::string commit(const std::string& message, const std::string& date,
                       const std::string& file, const std::string& content) {
        testsupport::write_file(path + "/" + file, content);
        run_command({"git", "-C", path, "add", "."});
        setenv("GIT_AUTHOR_DATE", date.c_str(), 1);
        setenv("GIT_COMMITTER_DATE", date.c_str(), 1);
        run_command({"git", "-C", path, "commit", "-q", "-m", message});
        unsetenv("GIT_AUTHOR_DATE");
        unsetenv("GIT_COMMITTER_DATE");
        std::string hash = run_command({"git", "-C", path, "rev-parse", "HEAD"});
        while (!hash.empty() && hash.back() == '\n') hash.pop_back();
        hashes.push_back(hash);
        return hash;
    }
};

}  // namespace

TEST_CASE("extract_commits filters by pattern and exact date window") {
    FixtureRepo repo;
    repo.commit("bpf: add verifier bounds check\n\nTighten the tracker.", "2020-01-15T10:00:00Z",
                "verifier.c", "int check;\n");
    repo.commit("docs: tweak readme", "2020-02-01T12:30:00Z", "README", "hi\n");
    repo.commit("net: adjust filter\n\nThis path uses a BPF helper underneath.",
                "2020-03-01T08:00:00+02:00", "filter.c", "int f;\n");

    ExtractOptions opt;
    opt.repo_path = repo.path;
    auto all = extract_commits(opt);
    REQUIRE(all.size() == 3);
    // Newest first, as git log emits.
    CHECK(all[0].hash == repo.hashes[2]);
    CHECK(all[2].hash == repo.hashes[0]);
    CHECK(all[2].subject == "bpf: add verifier bounds check");
    CHECK(all[2].body == "Tighten the tracker.");
    REQUIRE(all[2].files.size() == 1);
    CHECK(all[2].files[0].path == "verifier.c");
    CHECK(all[2].files[0].insertions == 1);
    // The +02:00 commit date normalizes to 06:00 UTC.
    CHECK(all[0].commit_date == timeutil::parse_rfc3339("2020-03-01T06:00:00Z"));

    // Case-insensitive substring over subject and body.
    opt.grep = "bpf";
    auto bpf = extract_commits(opt);
    REQUIRE(bpf.size() == 2);
    CHECK(bpf[0].hash == repo.hashes[2]);
    CHECK(bpf[1].hash == repo.hashes[0]);

    // Inclusive [since, until] window on the UTC commit date.
    opt.grep = "";
    opt.since = "2020-02-01";
    opt.until = "2020-02-01";
    auto feb = extract_commits(opt);
    REQUIRE(feb.size() == 1);
    CHECK(feb[0].hash == repo.hashes[1]);

    opt.since = "2020-02-02";
    opt.until = "";
    CHECK(extract_commits(opt).size() == 1);
    opt.since = "";
    opt.until = "2020-02-29";
    CHECK(extract_commits(opt).size() == 2);

    // max_commits keeps the newest ones.
    opt.until = "";
    opt.max_commits = 2;
    auto top2 = extract_commits(opt);
    REQUIRE(top2.size() == 2);
    CHECK(top2[0].hash == repo.hashes[2]);
    CHECK(top2[1].hash == repo.hashes[1]);

    ExtractOptions bad;
    bad.repo_path = repo.path;
    bad.since = "not-a-date";
    CHECK_THROWS_WITH_AS(extract_commits(bad), doctest::Contains("bad since date"),
                         std::runtime_error);
    bad.since = "";
    bad.until = "2020-13-01";
    CHECK_THROWS_WITH_AS(extract_commits(bad), doctest::Contains("bad until date"),
                         std::runtime_error);
    CHECK_THROWS_AS(extract_commits(ExtractOptions{}), std::runtime_error);
}

TEST_CASE("extract_commits reports binary files from numstat") {
    FixtureRepo repo;
    repo.commit("add binary blob", "2021-05-05T00:00:00Z", "blob.bin",
                std::string("\x00\x01\x02\x03", 4));
    ExtractOptions opt;
    opt.repo_path = repo.path;
    auto all = extract_commits(opt);
    REQUIRE(all.size() == 1);
    REQUIRE(all[0].files.size() == 1);
    CHECK(all[0].files[0].binary);
    CHECK(all[0].files[0].path == "blob.bin");
}

TEST_CASE("corpus_line golden bytes") {
    CommitRecord c;
    c.hash = "deadbeef";
    c.author_name = "Alex";
    c.author_email = "a@example.org";
    c.author_date = 1580000000;
    c.commit_date = 1580000100;
    c.subject = "bpf: fix \"quote\"";
    c.body = "line one\nline two";
    c.parents = {"p1"};
    c.files = {{"kernel/bpf/core.c", 2, 1, false}};
    CHECK(corpus_line(c) ==
          R"({"hash":"deadbeef","author_name":"Alex","author_email":"a@example.org",)"
          R"("author_date":"2020-01-26T00:53:20Z","commit_date":"2020-01-26T00:55:00Z",)"
          R"("subject":"bpf: fix \"quote\"","body":"line one\nline two","parents":["p1"],)"
          R"("files":[{"path":"kernel/bpf/core.c","insertions":2,"deletions":1,"binary":false}]})");
}

TEST_CASE("corpus write and load round-trip") {
    TempDir dir;
    std::vector<CommitRecord> commits = synth::synthetic_commits(40, 7);
    std::string path = dir.file("corpus.jsonl");
    write_corpus(path, commits);
    auto loaded = load_corpus(path);
    REQUIRE(loaded.size() == commits.size());
    for (size_t i = 0; i < commits.size(); ++i) {
        CHECK(loaded[i].hash == commits[i].hash);
        CHECK(loaded[i].subject == commits[i].subject);
        CHECK(loaded[i].body == commits[i].body);
        CHECK(loaded[i].author_date == commits[i].author_date);
        CHECK(loaded[i].commit_date == commits[i].commit_date);
        CHECK(loaded[i].parents == commits[i].parents);
        REQUIRE(loaded[i].files.size() == commits[i].files.size());
        for (size_t f = 0; f < commits[i].files.size(); ++f) {
            CHECK(loaded[i].files[f].path == commits[i].files[f].path);
            CHECK(loaded[i].files[f].insertions == commits[i].files[f].insertions);
            CHECK(loaded[i].files[f].deletions == commits[i].files[f].deletions);
            CHECK(loaded[i].files[f].binary == commits[i].files[f].binary);
        }
    }
}

TEST_CASE("corpus loader rejects bad lines with line numbers") {
    TempDir dir;
    std::string path = dir.file("bad.jsonl");

    testsupport::write_file(path, "\n{not json}\n");
    CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains("corpus line 2"),
                         std::runtime_error);

    CommitRecord c = synth::synthetic_commits(1, 3)[0];
    testsupport::write_file(path, corpus_line(c) + "\n" + corpus_line(c) + "\n");
    CHECK_THROWS_WITH_AS(load_corpus(path),
                         doctest::Contains("corpus line 2: duplicate hash"), std::runtime_error);

    testsupport::write_file(path, R"({"hash":"x"})" "\n");
    CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains("corpus line 1"),
                         std::runtime_error);

    std::string bad_date = corpus_line(c);
    size_t at = bad_date.find("20", bad_date.find("author_date"));
    bad_date.replace(at, 4, "9x99");
    testsupport::write_file(path, bad_date + "\n");
    CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains("bad author_date"),
                         std::runtime_error);

    CHECK_THROWS_WITH_AS(load_corpus(dir.file("missing.jsonl")), doctest::Contains("cannot open"),
                         std::runtime_error);
}

TEST_CASE("bundled corpus is the generator's verbatim output") {
    auto commits = synth::synthetic_commits(500);
    std::string expected;
    for (const auto& c : commits) expected += corpus_line(c) + "\n";
    CHECK(expected == testsupport::read_file(testsupport::source_path(
                          "data/synthetic/commits_500.jsonl")));
}

TEST_CASE("bundled corpus shape invariants") {
    auto commits = load_corpus(testsupport::source_path("data/synthetic/commits_500.jsonl"));
    REQUIRE(commits.size() == 500);
    int merges = 0, dedup = 0;
    int64_t prev = 0;
    for (const auto& c : commits) {
        CHECK(c.hash.size() == 40);
        CHECK(c.commit_date >= prev);
        prev = c.commit_date;
        if (c.parent_count() >= 2) ++merges;
        if (c.subject.rfind("bpf: btf: dedup", 0) == 0) ++dedup;
    }
    CHECK(merges == 36);
    CHECK(dedup == 2);  // the contradiction hook relies on exactly two
    CHECK(commits.front().commit_date >= *timeutil::parse_date("2017-01-01"));
    CHECK(commits.back().commit_date < *timeutil::parse_date("2025-01-01"));
}

TEST_CASE("load_feature_table loads the bundled table sorted by date") {
    auto features =
        load_feature_table(testsupport::source_path("data/synthetic/features.csv"));
    REQUIRE(features.size() == 63);
    for (size_t i = 1; i < features.size(); ++i)
        CHECK(features[i - 1].introduced_date <= features[i].introduced_date);
    std::set<std::string> types;
    for (const auto& f : features) types.insert(f.feature_type);
    CHECK(types.size() == 9);  // every feature_type appears
    for (const auto& f : features) CHECK(f.introduced_commit.empty());
}

TEST_CASE("load_feature_table validates structure") {
    TempDir dir;
    std::string path = dir.file("features.csv");
    const std::string header = "name,feature_type,introduced_date,introduced_commit\n";

    testsupport::write_file(path, header + "bpf_map_lookup_elem,helper,2014-11-26,\n");
    auto rows = load_feature_table(path);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].name == "bpf_map_lookup_elem");
    CHECK(rows[0].introduced_date == *timeutil::parse_date("2014-11-26"));

    // Stable sort keeps input order for equal dates.
    testsupport::write_file(path, header +
                                      "zeta,helper,2020-01-01,\n"
                                      "alpha,helper,2020-01-01,\n"
                                      "early,kfunc,2019-01-01,\n");
    rows = load_feature_table(path);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].name == "early");
    CHECK(rows[1].name == "zeta");
    CHECK(rows[2].name == "alpha");

    testsupport::write_file(path, "");
    CHECK_THROWS_WITH_AS(load_feature_table(path), doctest::Contains("empty feature table"),
                         std::runtime_error);
    testsupport::write_file(path, "nope,feature_type,introduced_date,introduced_commit\n");
    CHECK_THROWS_WITH_AS(load_feature_table(path), doctest::Contains("bad header"),
                         std::runtime_error);
    testsupport::write_file(path, header + "a,helper,2020-01-01\n");
    CHECK_THROWS_WITH_AS(load_feature_table(path), doctest::Contains("expected 4 fields"),
                         std::runtime_error);
    testsupport::write_file(path, header + "a,helper,01/02/2020,\n");
    CHECK_THROWS_WITH_AS(load_feature_table(path), doctest::Contains("bad introduced_date"),
                         std::runtime_error);
    testsupport::write_file(path, header + "a,wizardry,2020-01-01,\n");
    CHECK_THROWS_WITH_AS(load_feature_table(path),
                         doctest::Contains("unknown feature_type 'wizardry'"), std::runtime_error);
    testsupport::write_file(path, header + ",helper,2020-01-01,\n");
    CHECK_THROWS_WITH_AS(load_feature_table(path), doctest::Contains("empty name"),
                         std::runtime_error);
    testsupport::write_file(path, header + "a,helper,2020-01-01,\na,helper,2021-01-01,\n");
    CHECK_THROWS_WITH_AS(load_feature_table(path), doctest::Contains("duplicate (a, helper)"),
                         std::runtime_error);
}
