#pragma once

// End-to-end search for every x >= 1 with all f_i(x) prime and
// max_i f_i(x) <= n:
//
//   wheel residues r mod W  ->  AP sieve of r + jW by the sieve primes
//   ->  base-2 strong probable prime gate on f_1, f_2, ...
//   ->  full prime test of every f_i  ->  tuple
//
// Tuples with a member at or below the plan's cut (the wheel and sieve
// primes) cannot come out of the sieve path and are produced by a direct
// boundary scan instead.  Residues are striped over `workers` threads;
// each stripe owns its wheel cursor, counts, Kahan buckets and hits, and
// the whole state can be checkpointed and resumed.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "primepat/apsieve.hpp"
#include "primepat/arith.hpp"
#include "primepat/checkpoint.hpp"
#include "primepat/pattern.hpp"
#include "primepat/primality.hpp"

namespace primepat {

/// Which certificate the survivors of the sieve get.
enum class PrimeTest {
    Auto,           // pseudosquares when the table reaches N/s, else strong bases
    Pseudosquares,  // pseudosquares only; CapacityError if the table is short
    StrongBases,    // strong tests to the bases 2..41
};

std::string_view to_string(PrimeTest t);
PrimeTest parse_prime_test(std::string_view text);

struct SearchConfig {
    Pattern pattern;
    WideInt n = 0;
    SieveBoundRule bound_rule{};
    std::optional<WideInt> wheel_limit{};
    std::uint64_t workers = 1;
    std::vector<std::uint64_t> excluded_wheel_primes{};
    EarlyAbort early_abort{};
    PrimeTest prime_test = PrimeTest::Auto;
    const PseudosquareTable* table = nullptr;  // nullptr: embedded table
    bool collect_hits = true;
    std::uint64_t segment_bits = std::uint64_t{1} << 24;

    std::optional<std::filesystem::path> checkpoint_path{};
    std::chrono::seconds checkpoint_interval{900};

    /// Defaults for everything but the pattern and bound.
    static SearchConfig defaults(Pattern pattern, WideInt n);
};

/// Hooks for driving a run: stopping, forced checkpoint cadence, and
/// streaming.  All callbacks may be invoked from worker threads but never
/// concurrently with each other.
struct SearchControl {
    /// Polled between residues; when set the run stops.
    const std::atomic<bool>* stop_flag = nullptr;
    /// Stop after this many residues have been completed in this run
    /// (0 = never), without writing a final checkpoint.
    std::uint64_t stop_after_residues = 0;
    /// Write a checkpoint each time this many more residues complete (0 = off).
    std::uint64_t checkpoint_every_residues = 0;
    /// Write a checkpoint when stopping through stop_flag.
    bool checkpoint_on_stop = true;
    /// Called once per tuple as soon as its residue completes (unsorted).
    std::function<void(WideInt x)> on_hit;
    /// Called after each checkpoint write.
    std::function<void(const Checkpoint&)> on_checkpoint;
};

struct SearchStats {
    WideInt residues_total = 0;
    std::uint64_t residues_processed = 0;  // in this run
    std::uint64_t survivors = 0;
    std::uint64_t sprp_tests = 0;
    std::uint64_t full_tests = 0;
    std::uint64_t early_aborts = 0;
    std::uint64_t checkpoints_written = 0;
    bool resumed = false;
};

struct SearchResult {
    SievePlan plan;
    WideInt wheel_modulus = 0;
    std::vector<WideInt> hits;  // increasing; empty unless collect_hits
    std::uint64_t count = 0;
    KahanAccumulator reciprocal_sum;  // sum over tuples of sum_i 1/f_i(x)
    bool interrupted = false;
    SearchStats stats;
};

/// All x >= 1 with max_i f_i(x) <= n, min_i f_i(x) <= cut and every
/// f_i(x) prime, increasing.
std::vector<WideInt> boundary_tuples(const Pattern& pattern, WideInt cut, WideInt n);

/// Runs the search (resuming from cfg.checkpoint_path when the file
/// exists).  Throws std::invalid_argument for an inadmissible pattern or
/// bad configuration, CapacityError when a survivor cannot be certified,
/// CheckpointError when a checkpoint does not match the configuration.
SearchResult find_pattern_primes(const SearchConfig& cfg, const SearchControl& control = {});

/// Digest of everything a checkpoint depends on.
std::uint64_t config_digest(const SearchConfig& cfg, const SievePlan& plan);

/// "x f_1 ... f_k" for one tuple.
std::string format_tuple(const Pattern& pattern, WideInt x);

/// Least x <= cap starting a chain of the given kind and length, searching
/// windows of geometrically growing size.
std::optional<WideInt> smallest_chain(ChainKind kind, unsigned length, WideInt cap, std::uint64_t workers = 1);

}  // namespace primepat
