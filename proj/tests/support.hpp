#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "codesurvey/dataset.hpp"
#include "codesurvey/rng.hpp"
#include "codesurvey/survey.hpp"

namespace testsupport {

inline std::string source_path(const std::string& rel) {
    return std::string(CODESURVEY_SOURCE_DIR) + "/" + rel;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

// Unique working directory per test, removed on destruction.
struct TempDir {
    std::filesystem::path path;
    TempDir() : TempDir("t") {}
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("codesurvey_" + tag + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }

  private:
    static int& counter() {
        static int n = 0;
        return n;
    }
};

inline codesurvey::SurveySchema bundled_schema() {
    return codesurvey::load_survey_schema(source_path("surveys/commit_survey_v1.survey"));
}

inline std::string random_hash(codesurvey::SplitMix64& rng) {
    static const char* hex = "0123456789abcdef";
    std::string h;
    for (int i = 0; i < 40; ++i) h.push_back(hex[rng.bounded(16)]);
    return h;
}

// Randomized dataset over the bundled schema: codes drawn from the schema
// vocabulary plus a few out-of-vocabulary strays, a slice of failed rows,
// and commit dates spread over a random month window.
inline codesurvey::Dataset random_dataset(const codesurvey::SurveySchema& schema, uint64_t seed,
                                          size_t max_rows = 1000) {
    using namespace codesurvey;
    SplitMix64 rng(seed);
    Dataset d = make_dataset(schema);
    size_t rows = rng.bounded(max_rows + 1);
    int64_t t0 = 1400000000 + static_cast<int64_t>(rng.bounded(400000000));
    int64_t window = 86400LL * (30 + static_cast<int64_t>(rng.bounded(3000)));

    auto pick_code = [&](const Question& q) -> std::string {
        if (rng.bounded(40) == 0) return "z";  // out of vocabulary
        return q.choices[rng.bounded(q.choices.size())].code;
    };

    for (size_t i = 0; i < rows; ++i) {
        DatasetRow r;
        r.hash = random_hash(rng);
        r.author_name = "Dev " + std::to_string(rng.bounded(20));
        r.author_email = "dev@example.test";
        r.commit_date = t0 + static_cast<int64_t>(rng.bounded(window));
        r.author_date = r.commit_date - static_cast<int64_t>(rng.bounded(86400));
        r.subject = "subject " + std::to_string(rng.next() % 100000);
        r.parent_count = rng.bounded(10) == 0 ? 2 : 1;
        std::vector<std::string> files;
        for (size_t f = rng.bounded(4); f-- > 0;)
            files.push_back("dir/file" + std::to_string(rng.bounded(30)) + ".c");
        r.files = join_list(files);
        r.file_count = static_cast<int>(files.size());
        r.insertions = static_cast<int>(rng.bounded(300));
        r.deletions = static_cast<int>(rng.bounded(120));
        bool failed = rng.bounded(8) == 0;
        r.status = failed ? kStatusFailed : kStatusOk;
        r.failure_reason = failed ? "synthetic failure" : "";
        r.attempts = failed ? 3 : 1 + static_cast<int>(rng.bounded(2));
        r.model = "random";
        for (const auto& q : schema.questions) {
            if (failed) {
                r.answer_cells.emplace_back();
                continue;
            }
            switch (q.kind) {
                case QuestionKind::SummaryText:
                    r.answer_cells.push_back("summary of " + r.hash.substr(0, 8));
                    break;
                case QuestionKind::KeywordList:
                    r.answer_cells.push_back("kw" + std::to_string(rng.bounded(9)));
                    break;
                case QuestionKind::SingleChoice:
                    r.answer_cells.push_back(pick_code(q));
                    break;
                case QuestionKind::MultiChoice: {
                    std::vector<std::string> codes;
                    size_t k = 1 + rng.bounded(3);
                    for (size_t c = 0; c < k; ++c) codes.push_back(pick_code(q));
                    std::sort(codes.begin(), codes.end());
                    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
                    r.answer_cells.push_back(join_list(codes));
                    break;
                }
            }
        }
        d.rows.push_back(std::move(r));
    }
    return d;
}

}  // namespace testsupport
