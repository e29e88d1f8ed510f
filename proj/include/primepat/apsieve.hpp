#pragma once

// Sieve of Eratosthenes over the progressions x(j) = r + j*W.
//
// For each residue r produced by the wheel, a bit vector indexed by j
// marks which candidates x(j) survive: bit j is cleared as soon as some
// sieve prime p divides some f_i(x(j)).  The start index for (p, i) is
// j0 = W^{-1} * (-b_i * a_i^{-1} - r) mod p; after that every p-th bit.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "primepat/arith.hpp"
#include "primepat/pattern.hpp"

namespace primepat {

/// B = 2^floor(log2(n) / c).
struct SpaceExponent {
    double c = 3.0;
};
/// B = floor(sqrt(n)); sieving alone then certifies primality.
struct SqrtBound {};
/// B given directly.
struct ExplicitBound {
    std::uint64_t bound = 0;
};

using SieveBoundRule = std::variant<SpaceExponent, SqrtBound, ExplicitBound>;

/// sqrt for patterns of up to three forms, c = 3 otherwise.
SieveBoundRule default_bound_rule(std::size_t k);

struct SievePlan {
    WideInt n = 0;
    std::uint64_t bound = 0;                 // B
    std::optional<double> space_exponent;    // c, when B was derived from it
    WideInt wheel_limit = 0;                 // W <= wheel_limit
    std::vector<std::uint64_t> wheel_primes;
    std::vector<std::uint64_t> sieve_primes; // primes <= B outside the wheel, ascending

    /// Largest prime handled by either stage: tuples with a member at or
    /// below this value are left to the boundary scan.
    std::uint64_t cut() const;
};

/// Chooses B, the wheel primes (2, 3, 5, ... skipping `excluded`, greedy
/// while the product stays <= wheel_limit, default n/B) and the sieve
/// primes.  Throws std::invalid_argument for n < 4, B < 2 or B > 2^32.
SievePlan make_plan(WideInt n, const SieveBoundRule& rule, std::optional<WideInt> wheel_limit = std::nullopt,
                    std::span<const std::uint64_t> excluded = {});

/// Stop sieving once fewer than one candidate per `positions_per_live`
/// positions is left, checked after every `check_every` primes.
struct EarlyAbort {
    bool enabled = true;
    std::uint64_t positions_per_live = 4096;
    std::uint64_t check_every = 64;
};

class SieveSegment {
public:
    SieveSegment(WideInt r, WideInt W, std::uint64_t j_begin, std::uint64_t length);

    WideInt residue() const { return r_; }
    WideInt wheel_modulus() const { return W_; }
    std::uint64_t j_begin() const { return j_begin_; }
    std::uint64_t length() const { return length_; }

    WideInt x(std::uint64_t j) const { return r_ + static_cast<WideInt>(j) * W_; }

    bool alive(std::uint64_t j) const {
        const std::uint64_t k = j - j_begin_;
        return (words_[k >> 6] >> (k & 63)) & 1;
    }
    void clear(std::uint64_t j) {
        const std::uint64_t k = j - j_begin_;
        words_[k >> 6] &= ~(std::uint64_t{1} << (k & 63));
    }
    std::uint64_t live_count() const;

    /// Candidates still alive, in increasing order.
    std::vector<WideInt> survivors() const;

    /// Number of sieve primes applied (a prefix of the plan's list).
    std::size_t primes_applied() const { return primes_applied_; }
    bool aborted() const { return aborted_; }

private:
    friend class ProgressionSieve;

    WideInt r_;
    WideInt W_;
    std::uint64_t j_begin_;
    std::uint64_t length_;
    std::vector<std::uint64_t> words_;
    std::size_t primes_applied_ = 0;
    bool aborted_ = false;
};

/// Per-(pattern, W, S) precomputation: for every sieve prime, W^{-1} mod p
/// and the distinct roots -b_i * a_i^{-1} mod p of the forms it can divide.
class ProgressionSieve {
public:
    ProgressionSieve(const Pattern& pattern, WideInt W, std::span<const std::uint64_t> sieve_primes);

    /// Number of positions j >= 0 with max_i f_i(r + j*W) <= n.
    std::uint64_t segment_length(WideInt r, WideInt n) const;

    /// Sieves positions [j_begin, j_begin + length) for residue r.
    SieveSegment sieve(WideInt r, std::uint64_t j_begin, std::uint64_t length, const EarlyAbort& abort) const;

    std::span<const std::uint64_t> primes() const { return primes_; }

private:
    Pattern pattern_;
    WideInt W_;
    std::vector<std::uint64_t> primes_;
    std::vector<std::uint64_t> winv_;
    std::vector<std::uint32_t> root_begin_;  // CSR offsets into roots_
    std::vector<std::uint64_t> roots_;
};

/// Full-length segment for residue r, sieved by every prime in S.
SieveSegment sieve_segment(const Pattern& pattern, WideInt r, WideInt W, WideInt n,
                           std::span<const std::uint64_t> sieve_primes);

}  // namespace primepat
