#include "synthetic_corpus.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <iterator>
#include <string>

#include "codesurvey/rng.hpp"

namespace codesurvey::synth {

namespace {

struct Author {
    const char* name;
    const char* email;
};

const Author kAuthors[] = {
    {"Petra Lindqvist", "petra.lindqvist@vektor.dev"},
    {"Mihail Ionescu", "mihail@ionescu.sh"},
    {"Ana Castellanos", "ana.castellanos@redes.example"},
    {"Torben Vad", "tvad@nulldev.dk"},
    {"Ruchika Menon", "ruchika.menon@hyfer.example"},
    {"Janek Kowal", "jkowal@packetlab.example"},
    {"Saoirse Byrne", "saoirse@bpfworks.example"},
    {"Viktor Maricic", "vmaricic@lowlevel.example"},
    {"Noor Al-Sayed", "noor.alsayed@tracecraft.example"},
    {"Henrik Dahlgren", "henrik@dahlgren.codes"},
};

struct FileSpec {
    const char* path;
    int max_lines;  // per-file insertion cap, scaled by category
};

struct Category {
    const char* name;
    int weight;
    const char* prefix;                     // subject prefix, "" for merges
    std::vector<const char*> tails;         // subject tail pool
    std::vector<const char*> body_lines;    // body sentence pool
    std::vector<FileSpec> files;            // candidate files, first is always used
    int min_files, max_files;
    int min_ins, max_ins;
    bool merge = false;
    bool bpf_only_in_body = false;          // subject avoids the bpf token
};

const std::vector<Category>& categories() {
    static const std::vector<Category> cats = {
        {"merge", 80, "", {}, {}, {}, 0, 0, 0, 0, true, false},
        {"verifier_fix", 70, "bpf: verifier: fix ",
         {"off-by-one in stack slot tracking", "bounds check for scalar spills",
          "reference state leak on path pruning", "range propagation for signed division",
          "liveness marks around indirect calls", "pointer arithmetic check on map values",
          "precision backtracking for conditional jumps"},
         {"The verifier accepted a program it should have rejected.",
          "Tighten the check and update the log message so failures are attributable.",
          "The BPF CI caught this on a fuzzed program."},
         {{"kernel/bpf/verifier.c", 18}, {"include/linux/bpf_verifier.h", 6}},
         1, 2, 2, 20},
        {"verifier_feat", 50, "bpf: verifier: add ",
         {"support for bounded loops in subprograms", "tracking for dynptr slices",
          "precise scalar widening on loop exits", "open-coded iterator state validation",
          "support for may_goto instructions", "callback depth accounting"},
         {"Extend the verifier state machine so the new construct is provable.",
          "Programs using the new form were previously rejected with a false positive.",
          "The BPF selftests gain coverage in a follow-up."},
         {{"kernel/bpf/verifier.c", 70}, {"include/linux/bpf_verifier.h", 20},
          {"kernel/bpf/core.c", 15}},
         2, 3, 40, 100},
        {"jit_fix", 40, "bpf, x86: jit: fix ",
         {"tail call count corruption on nested calls", "wrong branch offset for far jumps",
          "stack depth rounding for small frames", "clobbered scratch register in atomics"},
         {"The generated code corrupted a register the interpreter preserves.",
          "Seen as a crash when a BPF program used the construct under load."},
         {{"arch/x86/net/bpf_jit_comp.c", 16}},
         1, 1, 2, 18},
        {"jit_feat", 30, "bpf, arm64: jit: add ",
         {"support for atomic exchange instructions", "inline handling of bswap",
          "calls to kfuncs with six arguments", "support for signed load instructions"},
         {"Emit the instruction directly instead of falling back to the interpreter.",
          "Brings the arm64 BPF JIT to parity with x86 for this class of programs."},
         {{"arch/arm64/net/bpf_jit_comp.c", 55}, {"arch/arm64/net/bpf_jit.h", 15}},
         1, 2, 25, 80},
        {"libbpf_fix", 50, "libbpf: fix ",
         {"double free on failed object load", "CO-RE relocation for anonymous unions",
          "map reuse check for pinned maps", "section name parsing for freplace programs",
          "leak of kconfig data on error path"},
         {"A malformed BPF object could trip the error path and crash the loader.",
          "Report the failure instead of continuing with a stale pointer."},
         {{"tools/lib/bpf/libbpf.c", 14}, {"tools/lib/bpf/relo_core.c", 8}},
         1, 2, 2, 18},
        {"libbpf_feat", 50, "libbpf: add ",
         {"bpf_map__set_autocreate API", "support for custom section handlers",
          "ring buffer consumer polling helpers", "API to fetch map fd by name",
          "support for static linking of .BTF.ext"},
         {"User space needs a stable BPF API for this instead of poking at internals.",
          "The new call mirrors the existing getter naming scheme."},
         {{"tools/lib/bpf/libbpf.c", 45}, {"tools/lib/bpf/libbpf.h", 12},
          {"tools/lib/bpf/libbpf.map", 4}},
         2, 3, 30, 90},
        {"bpftool_fix", 25, "bpftool: fix ",
         {"JSON output for map dump of empty maps", "segfault when prog id is stale",
          "endianness of printed map keys", "error handling for batch files"},
         {"The BPF tooling printed garbage for this corner case."},
         {{"tools/bpf/bpftool/map.c", 12}, {"tools/bpf/bpftool/prog.c", 10}},
         1, 2, 2, 16},
        {"bpftool_feat", 35, "bpftool: add ",
         {"support for dumping BTF as C headers", "prog profile subcommand",
          "link show filtering by program", "struct_ops dump support"},
         {"Expose the BPF kernel state that was previously only visible via drgn.",
          "Documentation for the new subcommand is included."},
         {{"tools/bpf/bpftool/main.c", 20}, {"tools/bpf/bpftool/btf.c", 40},
          {"tools/bpf/bpftool/Documentation/bpftool.rst", 15}},
         2, 3, 30, 85},
        {"selftests", 90, "selftests/bpf: ",
         {"add tests for verifier spill tracking", "add coverage for map-in-map update",
          "cover tail call limits in the jit", "exercise ring buffer wakeup modes",
          "add btf dedup regression test", "cover libbpf object load failure paths",
          "stress concurrent map update and delete"},
         {"The new test fails before the corresponding BPF fix and passes after.",
          "Runs as part of test_progs, no new kernel config requirements."},
         {{"tools/testing/selftests/bpf/prog_tests/verifier.c", 30},
          {"tools/testing/selftests/bpf/progs/test_stub.c", 25},
          {"tools/testing/selftests/bpf/Makefile", 4}},
         1, 3, 15, 70},
        {"maps_fix", 40, "bpf: maps: fix ",
         {"rcu usage in htab bucket walk", "overflow in arraymap index check",
          "devmap flush ordering on teardown", "lru eviction under memory pressure",
          "per-cpu map copy size on 32-bit kernels"},
         {"Syzkaller triggered a warning in the BPF map teardown path.",
          "The race only shows up with preemption enabled."},
         {{"kernel/bpf/hashtab.c", 15}, {"kernel/bpf/arraymap.c", 10}},
         1, 2, 2, 18},
        {"maps_feat", 35, "bpf: maps: add ",
         {"bloom filter map type", "map_extra field plumbing",
          "batched lookup for queue maps", "support for mmapable array maps"},
         {"The new BPF map type trades accuracy for constant-time membership tests.",
          "Benchmarks against the hash map are in the cover letter."},
         {{"kernel/bpf/bloom_filter.c", 60}, {"kernel/bpf/syscall.c", 15},
          {"include/uapi/linux/bpf.h", 8}},
         2, 3, 40, 100},
        {"helper", 45, "bpf: add ",
         {"bpf_strncmp helper", "bpf_get_func_ip helper for tracing programs",
          "bpf_loop helper", "bpf_find_vma helper", "bpf_snprintf helper"},
         {"Programs keep open-coding this; provide a BPF helper with proper checks.",
          "The helper is gated to the program types that can use it safely."},
         {{"kernel/bpf/helpers.c", 35}, {"include/uapi/linux/bpf.h", 12},
          {"tools/include/uapi/linux/bpf.h", 12}},
         2, 3, 25, 70},
        {"kfunc", 30, "bpf: add ",
         {"bpf_task_acquire kfunc", "bpf_dynptr_slice kfunc",
          "bpf_cgroup_from_id kfunc", "crash-safe bpf_throw kfunc"},
         {"Expose the facility as a BPF kfunc rather than a UAPI-frozen helper.",
          "The kfunc set is registered for tracing and struct_ops programs."},
         {{"kernel/bpf/helpers.c", 30}, {"kernel/bpf/verifier.c", 12}},
         1, 2, 20, 60},
        {"syscall_fix", 15, "bpf: syscall: fix ",
         {"fd leak in BPF_PROG_LOAD error path", "uninitialized field copy in map info",
          "reference underflow on link detach"},
         {"A failed BPF syscall left a half-initialized object reachable."},
         {{"kernel/bpf/syscall.c", 14}},
         1, 1, 2, 16},
        {"syscall_feat", 20, "bpf: syscall: add ",
         {"BPF_PROG_BIND_MAP command", "log_true_size field for better log sizing",
          "fd_array support to prog load"},
         {"Extend the BPF syscall surface; the uapi header documents the semantics."},
         {{"kernel/bpf/syscall.c", 35}, {"include/uapi/linux/bpf.h", 10}},
         1, 2, 20, 60},
        {"btf", 40, "bpf: btf: add ",
         {"kind layout checks for decl tags", "support for enum64 kinds",
          "validation of var section offsets", "type tag propagation through modifiers"},
         {"BTF metadata from mismatched toolchains must not crash the BPF kernel side.",
          "Reject the malformed encoding early with a precise verifier log line."},
         {{"kernel/bpf/btf.c", 40}, {"include/linux/btf.h", 10}},
         1, 2, 20, 70},
        {"xdp_fix", 30, "xdp: fix ",
         {"frame size accounting for generic mode", "return code check in cpumap enqueue",
          "memory model registration on device unbind"},
         {"Generic XDP disagreed with native BPF drivers on frame layout."},
         {{"net/core/xdp.c", 14}, {"kernel/bpf/cpumap.c", 8}},
         1, 2, 2, 18},
        {"xdp_feat", 30, "xdp: add ",
         {"multi-buffer support for veth", "metadata kfuncs for rx timestamps",
          "frags support to xdp_build_skb"},
         {"Lets XDP BPF programs see jumbo frames without linearising.",
          "The feature flag is surfaced through the netlink API."},
         {{"net/core/xdp.c", 45}, {"include/net/xdp.h", 15}, {"drivers/net/veth.c", 25}},
         2, 3, 35, 95},
        {"sockmap", 30, "bpf: sockmap: fix ",
         {"memory accounting on redirect", "use-after-free on socket close",
          "verdict program detach during traffic", "skb queue handling under backlog"},
         {"The BPF sockmap fastpath raced with socket teardown.",
          "Seen in production with verdict programs doing heavy redirects."},
         {{"net/core/sock_map.c", 14}, {"net/core/skmsg.c", 12}},
         1, 2, 3, 20},
        {"kprobe", 30, "bpf: allow ",
         {"kprobe programs to read user buffers", "multi-attach for kprobe programs",
          "kprobe session cookies", "fprobe-backed kprobe_multi links"},
         {"Tracing BPF programs get a cheaper attach path for batch instrumentation.",
          "The tracepoint behaviour is unchanged."},
         {{"kernel/trace/bpf_trace.c", 35}, {"include/uapi/linux/bpf.h", 6}},
         1, 2, 20, 60},
        {"docs", 25, "docs, bpf: document ",
         {"map create command expectations", "the verifier log format",
          "kfunc lifecycle guarantees", "libbpf naming conventions"},
         {"Write down the BPF behaviour people keep asking about on the list."},
         {{"Documentation/bpf/maps.rst", 40}, {"Documentation/bpf/verifier.rst", 40}},
         1, 2, 15, 80},
        {"cleanup_refactor", 35, "bpf: refactor ",
         {"prog load path around capability checks", "map alloc into common helpers",
          "verifier state copying", "duplicated bounds logic in jit backends"},
         {"No functional change intended; this is prep work for the BPF series after it.",
          "Pure code motion plus naming so later diffs stay reviewable."},
         {{"kernel/bpf/core.c", 25}, {"kernel/bpf/syscall.c", 20}},
         1, 2, 20, 80},
        {"cleanup_remove", 20, "bpf: remove unused ",
         {"bpf_prog_kallsyms_del_subprogs declaration", "per-cpu temp buffer in core",
          "legacy map iteration macro", "stale verifier log defines"},
         {"Dead BPF code found while reading the surrounding logic."},
         {{"kernel/bpf/core.c", 4}, {"include/linux/bpf.h", 4}},
         1, 2, 1, 8},
        {"perf", 25, "bpf: speed up ",
         {"trampoline update by batching text_poke", "htab lookups with inlined hashing",
          "prog array copies on update", "local storage lookup fastpath"},
         {"Microbenchmark shows a double digit win on the BPF fast path.",
          "No semantic change; the slow path is kept for the debug build."},
         {{"kernel/bpf/trampoline.c", 20}, {"kernel/bpf/hashtab.c", 18}},
         1, 2, 10, 45},
        {"security", 15, "bpf: prevent out-of-bounds speculation ",
         {"on map array indexing", "in tail call index checks",
          "when dereferencing redirected pointers"},
         {"Hardens BPF against a Spectre v1 style gadget reported privately.",
          "The mitigation masks the index on the speculative path only."},
         {{"kernel/bpf/verifier.c", 14}, {"kernel/bpf/core.c", 8}},
         1, 2, 4, 22},
        {"unrelated", 20, "net: mlx5: fix ",
         {"rx queue teardown on channel restart", "counter readout on firmware reset",
          "pause frame stats for split ports"},
         {"The restart path also runs when an XDP/BPF program is attached, which is how "
          "this was noticed, but the bug is driver-internal.",
          "No BPF datapath behaviour changes."},
         {{"drivers/net/ethernet/mellanox/mlx5/core/en_main.c", 14}},
         1, 1, 2, 16, false, true},
        {"bpf_link", 20, "bpf: add bpf_link support for ",
         {"netfilter programs", "tcx attachments", "cgroup sockopt programs"},
         {"Links give BPF attachments ownership semantics and automatic detach on fd close."},
         {{"kernel/bpf/syscall.c", 30}, {"include/uapi/linux/bpf.h", 8}},
         1, 2, 20, 60},
        {"bpf_iter", 15, "bpf: bpf_iter: support ",
         {"sockmap iteration", "resched points in task iterators", "udp socket dumping"},
         {"BPF iterators replace the seq_file boilerplate for this kernel object."},
         {{"kernel/bpf/bpf_iter.c", 25}, {"net/core/sock_map.c", 10}},
         1, 2, 15, 50},
        {"token", 10, "bpf: token: add ",
         {"delegation of map creation", "security.bpf xattr based policy hook",
          "token_fd plumbing for prog load"},
         {"BPF tokens let a container manager delegate a subset of bpf() to workloads."},
         {{"kernel/bpf/token.c", 35}, {"kernel/bpf/syscall.c", 12}},
         1, 2, 25, 70},
    };
    return cats;
}

std::string hex_hash(SplitMix64& rng) {
    char buf[49];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64 "%016" PRIx64 "%016" PRIx64, rng.next(),
                  rng.next(), rng.next());
    return std::string(buf, 40);
}

const char* pick(SplitMix64& rng, const std::vector<const char*>& pool) {
    return pool[rng.bounded(pool.size())];
}

}  // namespace

std::vector<CommitRecord> synthetic_commits(size_t count, uint64_t seed) {
    SplitMix64 rng(seed);
    const auto& cats = categories();
    int total_weight = 0;
    for (const auto& c : cats) total_weight += c.weight;

    const char* merge_topics[] = {"bpf-next", "bpf", "xdp-fixes", "verifier-improvements",
                                  "sockmap-fixes", "btf-dedup", "libbpf-1.4"};

    std::vector<CommitRecord> commits;
    commits.reserve(count);
    std::string prev_hash;
    // Start 2017-01-10 00:00 UTC and step 100..180 hours per commit, so 500
    // commits span 2017 through late 2024.
    int64_t when = 1484006400;

    for (size_t i = 0; i < count; ++i) {
        // Two fixed slots get the "bpf: btf: dedup" marker used by the
        // seeded-contradiction rules variant; everything else is weighted.
        bool dedup_marker = count >= 400 && (i == 137 || i == 331);
        const Category* cat = nullptr;
        if (!dedup_marker) {
            int r = static_cast<int>(rng.bounded(static_cast<uint64_t>(total_weight)));
            for (const auto& c : cats) {
                r -= c.weight;
                if (r < 0) {
                    cat = &c;
                    break;
                }
            }
        }

        CommitRecord c;
        c.hash = hex_hash(rng);
        const Author& au = kAuthors[rng.bounded(std::size(kAuthors))];
        c.author_name = au.name;
        c.author_email = au.email;
        c.commit_date = when;
        c.author_date = when - static_cast<int64_t>(rng.bounded(172800));
        when += 354000 + static_cast<int64_t>(rng.bounded(288001));

        if (dedup_marker) {
            c.subject = i == 137 ? "bpf: btf: dedup string table before emitting split BTF"
                                 : "bpf: btf: dedup identical forward declarations";
            c.body = "Deduplicating up front keeps the BPF type graph small enough to "
                     "embed in modules.\n\nSigned-off-by: " + std::string(au.name) + " <" +
                     au.email + ">";
            c.parents = {prev_hash.empty() ? hex_hash(rng) : prev_hash};
            c.files = {{"kernel/bpf/btf.c", 30 + static_cast<int>(rng.bounded(20)), 10, false}};
        } else if (cat->merge) {
            const char* topic = merge_topics[rng.bounded(std::size(merge_topics))];
            if (rng.bounded(2) == 0)
                c.subject = std::string("Merge branch '") + topic + "' into bpf-next";
            else
                c.subject = std::string("Merge tag '") + topic +
                            "' of https://git.kernel.org/pub/scm/linux/kernel/git/bpf/bpf-next";
            c.body = std::string(topic) + " series:\n\n* improvements queued for the next "
                     "merge window\n* assorted BPF fixes\n\nSigned-off-by: " + au.name + " <" +
                     au.email + ">";
            c.parents = {prev_hash.empty() ? hex_hash(rng) : prev_hash, hex_hash(rng)};
            // git log --numstat leaves merge commits without per-file stats.
        } else {
            c.subject = std::string(cat->prefix) + pick(rng, cat->tails);
            std::string body = cat->body_lines[rng.bounded(cat->body_lines.size())];
            if (cat->body_lines.size() > 1 && rng.bounded(2) == 0) {
                const char* extra = pick(rng, cat->body_lines);
                if (extra != body) body += "\n" + std::string(extra);
            }
            if (!cat->bpf_only_in_body && rng.bounded(4) == 0 && !prev_hash.empty())
                body += "\n\nFixes: " + prev_hash.substr(0, 12) + " (\"earlier change in the "
                        "same area\")";
            c.body = body + "\n\nSigned-off-by: " + au.name + " <" + au.email + ">";
            c.parents = {prev_hash.empty() ? hex_hash(rng) : prev_hash};

            size_t nfiles = cat->min_files +
                            rng.bounded(static_cast<uint64_t>(cat->max_files - cat->min_files + 1));
            nfiles = std::min(nfiles, cat->files.size());
            int budget = cat->min_ins +
                         static_cast<int>(rng.bounded(
                             static_cast<uint64_t>(cat->max_ins - cat->min_ins + 1)));
            for (size_t f = 0; f < nfiles; ++f) {
                const FileSpec& spec = cat->files[f];
                int ins = 1 + static_cast<int>(rng.bounded(
                                  static_cast<uint64_t>(std::min(budget, spec.max_lines))));
                int del = static_cast<int>(rng.bounded(static_cast<uint64_t>(ins + 1)));
                c.files.push_back({spec.path, ins, del, false});
                budget = std::max(1, budget - ins);
            }
        }
        prev_hash = c.hash;
        commits.push_back(std::move(c));
    }
    return commits;
}

}  // namespace codesurvey::synth
