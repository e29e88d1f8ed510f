#pragma once

// Independent reference implementations for the tests.  Nothing here calls
// into the library's arithmetic, sieving or primality code; big values go
// through GMP.

#include <gmpxx.h>

#include <algorithm>
#include <climits>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "primepat/arith.hpp"

namespace oracle {

using primepat::WideInt;
using primepat::WideSigned;

inline mpz_class to_mpz(WideInt v) {
    mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
    mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
    return (hi << 64) + lo;
}

inline mpz_class to_mpz(WideSigned v) {
    if (v >= 0) return to_mpz(static_cast<WideInt>(v));
    return -to_mpz(static_cast<WideInt>(-(v + 1)) + 1);
}

inline WideInt from_mpz(const mpz_class& v) {
    const mpz_class hi = v >> 64;
    const mpz_class lo = v - (hi << 64);
    return (static_cast<WideInt>(hi.get_ui()) << 64) | static_cast<WideInt>(lo.get_ui());
}

inline bool is_prime_td(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

/// GMP's test: deterministic below 2^64, overwhelmingly reliable above.
inline bool is_prime_gmp(WideInt n) { return mpz_probab_prime_p(to_mpz(n).get_mpz_t(), 40) != 0; }

/// Strong probable prime test to base 2 through GMP, for odd n > 2.
inline bool sprp2(std::uint64_t n) {
    const mpz_class N(static_cast<unsigned long>(n));
    mpz_class d = N - 1;
    unsigned s = 0;
    while (mpz_even_p(d.get_mpz_t())) {
        d >>= 1;
        ++s;
    }
    mpz_class x;
    mpz_powm(x.get_mpz_t(), mpz_class(2).get_mpz_t(), d.get_mpz_t(), N.get_mpz_t());
    if (x == 1 || x == N - 1) return true;
    for (unsigned i = 1; i < s; ++i) {
        x = (x * x) % N;
        if (x == N - 1) return true;
    }
    return false;
}

/// Plain Eratosthenes; flags[i] says whether i is prime.
inline std::vector<bool> prime_flags(std::uint64_t limit) {
    std::vector<bool> flags(limit + 1, true);
    flags[0] = false;
    if (limit >= 1) flags[1] = false;
    for (std::uint64_t i = 2; i * i <= limit; ++i)
        if (flags[i])
            for (std::uint64_t j = i * i; j <= limit; j += i) flags[j] = false;
    return flags;
}

struct Form {
    std::int64_t a;
    std::int64_t b;
    std::int64_t at(std::int64_t x) const { return a * x + b; }
};

/// Every x >= 1 with all forms prime and max form <= n, by scanning.
inline std::vector<std::uint64_t> tuples(const std::vector<Form>& forms, std::uint64_t n) {
    const std::vector<bool> flags = prime_flags(n);
    std::vector<std::uint64_t> out;
    for (std::int64_t x = 1;; ++x) {
        std::int64_t lo = INT64_MAX, hi = INT64_MIN;
        bool all = true;
        for (const Form& f : forms) {
            const std::int64_t v = f.at(x);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            if (v < 2 || v > static_cast<std::int64_t>(n) || !flags[v]) all = false;
        }
        // Every multiplier is positive, so once all forms pass n they stay there.
        if (lo > static_cast<std::int64_t>(n)) break;
        if (all && hi <= static_cast<std::int64_t>(n)) out.push_back(static_cast<std::uint64_t>(x));
    }
    return out;
}

/// sum over tuples of sum_i 1/f_i(x), in 256-bit floating point.
inline long double reciprocal_sum(const std::vector<Form>& forms, const std::vector<std::uint64_t>& xs) {
    mpf_class total(0, 256);
    for (std::uint64_t x : xs)
        for (const Form& f : forms) {
            mpf_class term(1, 256);
            term /= mpf_class(static_cast<double>(f.at(static_cast<std::int64_t>(x))), 256);
            total += term;
        }
    return static_cast<long double>(total.get_d());
}

/// Acceptable residues mod p by direct evaluation: r is acceptable iff no
/// form with p not dividing a vanishes at r.
inline std::vector<std::uint64_t> acceptable(const std::vector<Form>& forms, std::uint64_t p) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t r = 0; r < p; ++r) {
        bool ok = true;
        for (const Form& f : forms) {
            if (f.a % static_cast<std::int64_t>(p) == 0) continue;
            const std::int64_t v = ((f.a % static_cast<std::int64_t>(p)) * static_cast<std::int64_t>(r) + f.b) %
                                   static_cast<std::int64_t>(p);
            if (v == 0) ok = false;
        }
        if (ok) out.push_back(r);
    }
    return out;
}

inline std::vector<Form> twin() { return {{1, 0}, {1, 2}}; }
inline std::vector<Form> quadruplet() { return {{1, 0}, {1, 2}, {1, 6}, {1, 8}}; }
inline std::vector<Form> chain(bool first, int length) {
    std::vector<Form> f;
    for (int i = 0; i < length; ++i) {
        const std::int64_t a = std::int64_t{1} << i;
        f.push_back({a, first ? a - 1 : -(a - 1)});
    }
    return f;
}

/// Least x <= cap starting a first/second kind chain of the given length.
inline std::uint64_t smallest_chain(bool first, int length, std::uint64_t cap) {
    for (std::uint64_t x = 2; x <= cap; ++x) {
        std::uint64_t v = x;
        int len = 0;
        while (len < length && is_prime_td(v)) {
            ++len;
            v = first ? 2 * v + 1 : 2 * v - 1;
        }
        if (len == length) return x;
    }
    return 0;
}

}  // namespace oracle
