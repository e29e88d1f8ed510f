#pragma once

// Twin and quadruplet censuses with reciprocal sums, and Cunningham chain
// searches, on top of find_pattern_primes.
//
// Membership rules differ by command:
//   twins(X): pairs (p, p+2) with p < X
//   quads(X): quadruplets (p, p+2, p+6, p+8) with p+8 < X

#include <cstdint>
#include <optional>
#include <vector>

#include "primepat/search.hpp"

namespace primepat {

struct TupleCensus {
    WideInt X = 0;
    std::uint64_t count = 0;
    KahanAccumulator recip_sum;
    bool interrupted = false;
    SearchStats stats;
};

struct CensusOptions {
    std::uint64_t workers = 1;
    std::optional<SieveBoundRule> bound_rule;  // default: per pattern size
    std::optional<WideInt> wheel_limit;
    std::vector<std::uint64_t> excluded_wheel_primes;
    PrimeTest prime_test = PrimeTest::Auto;
    std::optional<std::filesystem::path> checkpoint_path;
    std::chrono::seconds checkpoint_interval{900};
    SearchControl control;
};

/// The bound n handed to the search for each census.
WideInt twins_bound(WideInt X);
WideInt quads_bound(WideInt X);

TupleCensus twins(WideInt X, const CensusOptions& opts = {});
TupleCensus quads(WideInt X, const CensusOptions& opts = {});

struct ChainStart {
    WideInt x = 0;
    unsigned length = 0;    // primes in the chain from x onward
    bool complete = false;  // x is not itself 2y+1 (2y-1) for a prime y
};

/// Every x <= cap such that the chain of the given kind starting at x has
/// at least `length` primes, increasing.
std::vector<ChainStart> chain_search(ChainKind kind, unsigned length, WideInt cap, const CensusOptions& opts = {});

}  // namespace primepat
