// Regenerates the bundled synthetic corpus. The output is deterministic;
// a test asserts data/synthetic/commits_500.jsonl matches it byte for byte.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "codesurvey/ingest.hpp"
#include "synthetic_corpus.hpp"

int main(int argc, char** argv) {
    std::string out = "data/synthetic/commits_500.jsonl";
    size_t count = 500;
    if (argc > 1) out = argv[1];
    if (argc > 2) count = static_cast<size_t>(std::strtoull(argv[2], nullptr, 10));
    auto commits = codesurvey::synth::synthetic_commits(count);
    codesurvey::write_corpus(out, commits);
    std::printf("wrote %zu commits to %s\n", commits.size(), out.c_str());
    return 0;
}
