#include "primepat/apsieve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "primepat/small_primes.hpp"

namespace primepat {

SieveBoundRule default_bound_rule(std::size_t k) {
    if (k <= 3) return SqrtBound{};
    return SpaceExponent{3.0};
}

std::uint64_t SievePlan::cut() const {
    std::uint64_t c = bound;
    if (!wheel_primes.empty()) c = std::max(c, wheel_primes.back());
    return c;
}

SievePlan make_plan(WideInt n, const SieveBoundRule& rule, std::optional<WideInt> wheel_limit,
                    std::span<const std::uint64_t> excluded) {
    if (n < 4) throw std::invalid_argument("the search bound n must be at least 4");
    SievePlan plan;
    plan.n = n;
    WideInt bound = 0;
    if (const auto* se = std::get_if<SpaceExponent>(&rule)) {
        if (!(se->c > 2.0)) throw std::invalid_argument("the space exponent c must exceed 2");
        const long double lg = std::log2(static_cast<long double>(n));
        const long double e = std::floor(lg / se->c);
        bound = WideInt{1} << static_cast<unsigned>(e);
        plan.space_exponent = se->c;
    } else if (std::holds_alternative<SqrtBound>(rule)) {
        bound = isqrt(n);
    } else {
        bound = std::get<ExplicitBound>(rule).bound;
    }
    if (bound < 2) throw std::invalid_argument("the sieve bound B must be at least 2");
    if (bound > (WideInt{1} << 32)) throw std::invalid_argument("the sieve bound B must not exceed 2^32");
    plan.bound = static_cast<std::uint64_t>(bound);
    plan.wheel_limit = wheel_limit.value_or(std::max<WideInt>(n / plan.bound, 2));

    WideInt product = 1;
    for (std::uint64_t p : primes_up_to(1000)) {
        if (std::find(excluded.begin(), excluded.end(), p) != excluded.end()) continue;
        if (product > plan.wheel_limit / p) break;
        product *= p;
        plan.wheel_primes.push_back(p);
    }
    if (plan.wheel_primes.empty()) throw std::invalid_argument("no wheel prime fits below the wheel limit");
    for (std::uint64_t p : primes_up_to(plan.bound))
        if (std::find(plan.wheel_primes.begin(), plan.wheel_primes.end(), p) == plan.wheel_primes.end())
            plan.sieve_primes.push_back(p);
    return plan;
}

SieveSegment::SieveSegment(WideInt r, WideInt W, std::uint64_t j_begin, std::uint64_t length)
    : r_(r), W_(W), j_begin_(j_begin), length_(length), words_((length + 63) / 64, ~std::uint64_t{0}) {
    if (length % 64 != 0) words_.back() = (std::uint64_t{1} << (length % 64)) - 1;
}

std::uint64_t SieveSegment::live_count() const {
    std::uint64_t live = 0;
    for (std::uint64_t w : words_) live += static_cast<std::uint64_t>(__builtin_popcountll(w));
    return live;
}

std::vector<WideInt> SieveSegment::survivors() const {
    std::vector<WideInt> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t bits = words_[w];
        while (bits != 0) {
            const unsigned bit = static_cast<unsigned>(__builtin_ctzll(bits));
            bits &= bits - 1;
            out.push_back(x(j_begin_ + w * 64 + bit));
        }
    }
    return out;
}

ProgressionSieve::ProgressionSieve(const Pattern& pattern, WideInt W, std::span<const std::uint64_t> sieve_primes)
    : pattern_(pattern), W_(W), primes_(sieve_primes.begin(), sieve_primes.end()) {
    root_begin_.push_back(0);
    for (std::uint64_t p : primes_) {
        if (W % p == 0) throw std::invalid_argument("sieve prime " + std::to_string(p) + " divides the wheel modulus");
        winv_.push_back(static_cast<std::uint64_t>(modinv(W % p, p)));
        const std::size_t first = roots_.size();
        for (const LinearForm& f : pattern_.forms()) {
            const WideInt a_mod = f.a % p;
            // p | a_i: f_i(x) = b_i != 0 (mod p), never struck.
            if (a_mod == 0) continue;
            const WideInt b_mod = mod_floor(f.b, p);
            const auto root = static_cast<std::uint64_t>(mulmod((p - b_mod) % p, modinv(a_mod, p), p));
            if (std::find(roots_.begin() + static_cast<std::ptrdiff_t>(first), roots_.end(), root) == roots_.end())
                roots_.push_back(root);
        }
        root_begin_.push_back(static_cast<std::uint32_t>(roots_.size()));
    }
}

std::uint64_t ProgressionSieve::segment_length(WideInt r, WideInt n) const {
    const WideSigned x_max = pattern_.max_x_for_bound(n);
    if (x_max < 0 || static_cast<WideInt>(x_max) < r) return 0;
    const WideInt len = (static_cast<WideInt>(x_max) - r) / W_ + 1;
    if (len > (WideInt{1} << 62)) throw std::invalid_argument("sieve segment too long; enlarge the wheel");
    return static_cast<std::uint64_t>(len);
}

SieveSegment ProgressionSieve::sieve(WideInt r, std::uint64_t j_begin, std::uint64_t length,
                                     const EarlyAbort& abort) const {
    SieveSegment seg(r, W_, j_begin, length);
    if (length == 0) return seg;
    // The search domain is x >= 1.
    if (r == 0 && j_begin == 0) seg.clear(0);
    const std::uint64_t j_end = j_begin + length;

    for (std::size_t pi = 0; pi < primes_.size(); ++pi) {
        if (abort.enabled && pi != 0 && pi % abort.check_every == 0) {
            const std::uint64_t live = seg.live_count();
            if (live == 0 || live * abort.positions_per_live < length) {
                seg.aborted_ = true;
                break;
            }
        }
        const std::uint64_t p = primes_[pi];
        const std::uint64_t r_mod = static_cast<std::uint64_t>(r % p);
        const std::uint64_t base_mod = j_begin % p;
        for (std::uint32_t k = root_begin_[pi]; k < root_begin_[pi + 1]; ++k) {
            const std::uint64_t diff = (roots_[k] + p - r_mod) % p;
            const std::uint64_t j0 = diff * winv_[pi] % p;
            for (std::uint64_t j = j_begin + (j0 + p - base_mod) % p; j < j_end; j += p) seg.clear(j);
        }
        seg.primes_applied_ = pi + 1;
    }
    if (!seg.aborted_) seg.primes_applied_ = primes_.size();
    return seg;
}

SieveSegment sieve_segment(const Pattern& pattern, WideInt r, WideInt W, WideInt n,
                           std::span<const std::uint64_t> sieve_primes) {
    const ProgressionSieve sieve(pattern, W, sieve_primes);
    return sieve.sieve(r, 0, sieve.segment_length(r, n), EarlyAbort{.enabled = false});
}

}  // namespace primepat
