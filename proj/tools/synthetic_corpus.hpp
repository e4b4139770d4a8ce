#pragma once

#include <cstdint>
#include <vector>

#include "codesurvey/ingest.hpp"

namespace codesurvey::synth {

// Deterministic synthetic commit stream styled after the eBPF subsystem.
// Same (count, seed) always yields byte-identical commits; the bundled
// data/synthetic/commits_500.jsonl is synthetic_commits(500) verbatim.
// Exactly two commits carry the subject prefix "bpf: btf: dedup" so a
// rules variant can seed a known number of inconsistent answers.
std::vector<CommitRecord> synthetic_commits(size_t count, uint64_t seed = 0x5eedc0de);

}  // namespace codesurvey::synth
