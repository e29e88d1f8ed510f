#pragma once

// Deterministic primality for sieve survivors: a base-2 strong probable
// prime gate followed by the Lukes-Patterson-Williams pseudosquares test,
// which exploits the trial division already done by the sieve.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "primepat/arith.hpp"

namespace primepat {

/// The pseudosquare table (or the strong-base range) cannot certify a
/// value; the caller needs a larger table or a deeper trial bound.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Strong probable prime test to one base.  N odd, N >= 3.
bool strong_probable_prime(WideInt N, WideInt base);

/// Base-2 strong probable prime test.  Throws std::domain_error for even
/// N or N < 3.
bool sprp_base2(WideInt N);

struct PseudosquareEntry {
    std::uint64_t p;  // odd prime
    WideInt L;        // L_p

    friend bool operator==(const PseudosquareEntry&, const PseudosquareEntry&) = default;
};

/// Pairs (p, L_p) for odd primes p, keeping only the first p of each run
/// of equal L_p so that L is strictly increasing.  L_p is the least
/// positive non-square, 1 mod 8, that is a quadratic residue modulo every
/// odd prime q <= p.
class PseudosquareTable {
public:
    PseudosquareTable() = default;
    explicit PseudosquareTable(std::vector<PseudosquareEntry> entries);

    /// Table shipped with the library.
    static const PseudosquareTable& embedded();

    std::span<const PseudosquareEntry> entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    WideInt largest() const { return entries_.empty() ? 0 : entries_.back().L; }

    /// Least entry with L_p > N / s, or nullptr.
    const PseudosquareEntry* select(WideInt N, WideInt s) const;

    /// Entries with L_p <= limit.
    PseudosquareTable truncated(WideInt limit) const;

    /// Text format: header line "PSQ v1", then "p L_p" per line.
    void write(std::ostream& out) const;
    static PseudosquareTable read(std::istream& in);

    friend bool operator==(const PseudosquareTable&, const PseudosquareTable&) = default;

private:
    std::vector<PseudosquareEntry> entries_;
};

/// Direct search over N = 1 (mod 8), N <= limit.
PseudosquareTable compute_pseudosquares(WideInt limit);

/// Same table, enumerating only candidates that are already quadratic
/// residues modulo 3..23 (through a wheel), for large limits.
PseudosquareTable compute_pseudosquares_fast(WideInt limit);

/// LPW criterion.  Requires N odd, N > 1, no prime divisor of N at or
/// below trial_bound.  Throws CapacityError when the table has no
/// L_p > N / trial_bound and std::logic_error when a divisor at or below
/// min(trial_bound, 1024) is found.
bool pseudosquares_test(WideInt N, WideInt trial_bound, const PseudosquareTable& table);

/// Exact primality.  known_trial_bound promises that N has no prime
/// divisor at or below it (1 = nothing known).  Throws CapacityError
/// instead of guessing.
bool is_prime(WideInt N, WideInt known_trial_bound = 1,
              const PseudosquareTable& table = PseudosquareTable::embedded());

/// Strong tests to the first 13 prime bases (2..41).  Deterministic for
/// N below strong_bases_limit(); throws CapacityError above it.
bool is_prime_strong_bases(WideInt N);

/// Smallest strong pseudoprime to the first 13 prime bases.
WideInt strong_bases_limit();

}  // namespace primepat
