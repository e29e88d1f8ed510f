#include "primepat/arith.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace primepat {
namespace {

constexpr WideInt kLow64 = ~std::uint64_t{0};

// x + y mod m for x, y < m, without overflow for any m.
WideInt add_mod(WideInt x, WideInt y, WideInt m) {
    return x >= m - y ? x - (m - y) : x + y;
}

WideInt mulmod_shift_add(WideInt a, WideInt b, WideInt m) {
    WideInt result = 0;
    for (int bit = 127; bit >= 0; --bit) {
        result = add_mod(result, result, m);
        if ((b >> bit) & 1) result = add_mod(result, a, m);
    }
    return result;
}

struct U256 {
    WideInt hi;
    WideInt lo;
};

U256 mul_full(WideInt a, WideInt b) {
    const WideInt a0 = a & kLow64, a1 = a >> 64;
    const WideInt b0 = b & kLow64, b1 = b >> 64;
    const WideInt p00 = a0 * b0, p01 = a0 * b1, p10 = a1 * b0, p11 = a1 * b1;
    const WideInt mid = (p00 >> 64) + (p01 & kLow64) + (p10 & kLow64);
    return {p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64), (mid << 64) | (p00 & kLow64)};
}

// Montgomery arithmetic with R = 2^128 for odd moduli above 2^64.
class Montgomery128 {
public:
    explicit Montgomery128(WideInt m) : m_(m) {
        // Newton iteration for m^{-1} mod 2^128; each step doubles the
        // number of correct low bits, starting from 3 (m*m = 1 mod 8).
        WideInt inv = m;
        for (int i = 0; i < 6; ++i) inv *= 2 - m * inv;
        neg_inv_ = -inv;
        r_mod_ = (-m) % m;  // 2^128 mod m
        r2_mod_ = mulmod_shift_add(r_mod_, r_mod_, m);
    }

    WideInt to_mont(WideInt a) const { return mul(a % m_, r2_mod_); }
    WideInt from_mont(WideInt a) const { return reduce({0, a}); }
    WideInt one() const { return r_mod_; }

    WideInt mul(WideInt a, WideInt b) const { return reduce(mul_full(a, b)); }

private:
    WideInt reduce(U256 t) const {
        const WideInt u = t.lo * neg_inv_;
        const U256 um = mul_full(u, m_);
        // t + u*m is divisible by 2^128; t + u*m < 2^256 since m < 2^127.
        const WideInt lo = t.lo + um.lo;
        const WideInt carry = lo < t.lo ? 1 : 0;
        WideInt res = t.hi + um.hi + carry;
        if (res >= m_) res -= m_;
        return res;
    }

    WideInt m_;
    WideInt neg_inv_;
    WideInt r_mod_;
    WideInt r2_mod_;
};

}  // namespace

WideInt checked_add(WideInt a, WideInt b) {
    if (a > kWideMax || b > kWideMax - a) throw OverflowError("addition exceeds 2^127 - 1");
    return a + b;
}

WideInt checked_mul(WideInt a, WideInt b) {
    if (a > kWideMax || b > kWideMax) throw OverflowError("operand exceeds 2^127 - 1");
    if (a != 0 && b > kWideMax / a) throw OverflowError("product exceeds 2^127 - 1");
    return a * b;
}

WideSigned checked_add(WideSigned a, WideSigned b) {
    WideSigned r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("signed addition overflows");
    return r;
}

WideSigned checked_mul(WideSigned a, WideSigned b) {
    WideSigned r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("signed product overflows");
    return r;
}

WideInt mulmod(WideInt a, WideInt b, WideInt m) {
    if (m == 0) throw std::domain_error("mulmod: modulus is zero");
    if (m <= (WideInt{1} << 32)) {
        const std::uint64_t mm = static_cast<std::uint64_t>(m);
        return static_cast<std::uint64_t>(a % mm) * static_cast<std::uint64_t>(b % mm) % mm;
    }
    if (m <= (WideInt{1} << 64)) return (a % m) * (b % m) % m;
    return mulmod_shift_add(a % m, b % m, m);
}

WideInt powmod(WideInt a, WideInt e, WideInt m) {
    if (m == 0) throw std::domain_error("powmod: modulus is zero");
    if (m == 1) return 0;
    if (m > (WideInt{1} << 64) && m <= kWideMax && (m & 1)) {
        const Montgomery128 mont(m);
        WideInt base = mont.to_mont(a);
        WideInt acc = mont.one();
        for (; e != 0; e >>= 1) {
            if (e & 1) acc = mont.mul(acc, base);
            base = mont.mul(base, base);
        }
        return mont.from_mont(acc);
    }
    WideInt base = a % m;
    WideInt acc = 1;
    for (; e != 0; e >>= 1) {
        if (e & 1) acc = mulmod(acc, base, m);
        base = mulmod(base, base, m);
    }
    return acc;
}

WideInt modinv(WideInt a, WideInt m) {
    if (m < 2) throw std::domain_error("modinv: modulus must be at least 2");
    // Extended Euclid tracking only the coefficient of a, kept reduced mod m.
    WideInt r0 = m, r1 = a % m;
    WideInt t0 = 0, t1 = 1;
    while (r1 != 0) {
        const WideInt q = r0 / r1;
        const WideInt r2 = r0 - q * r1;
        const WideInt t2 = add_mod(t0, m - mulmod(q % m, t1, m), m);
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (r0 != 1) throw NotInvertibleError("modinv: " + to_string(a) + " is not invertible mod " + to_string(m));
    return t0;
}

WideInt mod_floor(WideSigned a, WideInt m) {
    if (m == 0) throw std::domain_error("mod_floor: modulus is zero");
    if (a >= 0) return static_cast<WideInt>(a) % m;
    const WideInt mag = static_cast<WideInt>(-(a + 1)) + 1;
    const WideInt r = mag % m;
    return r == 0 ? 0 : m - r;
}

WideInt gcd(WideInt a, WideInt b) {
    while (b != 0) {
        const WideInt t = a % b;
        a = b;
        b = t;
    }
    return a;
}

unsigned ilog2(WideInt n) {
    if (n == 0) throw std::domain_error("ilog2 of zero");
    const std::uint64_t hi = static_cast<std::uint64_t>(n >> 64);
    if (hi != 0) return 127 - static_cast<unsigned>(__builtin_clzll(hi));
    return 63 - static_cast<unsigned>(__builtin_clzll(static_cast<std::uint64_t>(n)));
}

namespace {

// base^k, saturating to a value above limit.
WideInt pow_saturating(WideInt base, unsigned k, WideInt limit) {
    WideInt acc = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (base != 0 && acc > limit / base) return limit + 1;
        acc *= base;
    }
    return acc;
}

}  // namespace

WideInt iroot(WideInt n, unsigned k) {
    if (k == 0) throw std::domain_error("iroot: k must be positive");
    if (k == 1 || n < 2) return n;
    const long double approx = std::pow(static_cast<long double>(n), 1.0L / k);
    WideInt r = approx < 1 ? 0 : static_cast<WideInt>(approx);
    while (r > 0 && pow_saturating(r, k, n) > n) --r;
    while (pow_saturating(r + 1, k, n) <= n) ++r;
    return r;
}

WideInt isqrt(WideInt n) { return iroot(n, 2); }

bool is_perfect_power(WideInt n) {
    if (n < 4) return false;
    const unsigned max_k = ilog2(n);
    for (unsigned k = 2; k <= max_k; ++k) {
        // Composite exponents are covered by their prime factors.
        bool prime_k = true;
        for (unsigned d = 2; d * d <= k; ++d)
            if (k % d == 0) prime_k = false;
        if (!prime_k) continue;
        const WideInt r = iroot(n, k);
        if (r >= 2 && pow_saturating(r, k, n) == n) return true;
    }
    return false;
}

std::string to_string(WideInt v) {
    if (v == 0) return "0";
    std::string out;
    while (v != 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::string to_string(WideSigned v) {
    if (v >= 0) return to_string(static_cast<WideInt>(v));
    return "-" + to_string(static_cast<WideInt>(-(v + 1)) + 1);
}

WideInt parse_wide(std::string_view text) {
    std::string digits;
    std::string exponent;
    bool in_exponent = false;
    for (char ch : text) {
        if (ch == '_' || std::isspace(static_cast<unsigned char>(ch))) continue;
        if ((ch == 'e' || ch == 'E') && !in_exponent && !digits.empty()) {
            in_exponent = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw std::invalid_argument("not a non-negative integer: '" + std::string(text) + "'");
        (in_exponent ? exponent : digits).push_back(ch);
    }
    if (digits.empty() || (in_exponent && exponent.empty()))
        throw std::invalid_argument("not a non-negative integer: '" + std::string(text) + "'");
    WideInt value = 0;
    for (char ch : digits) value = checked_add(checked_mul(value, 10), static_cast<WideInt>(ch - '0'));
    if (in_exponent) {
        if (exponent.size() > 3) throw OverflowError("exponent too large in '" + std::string(text) + "'");
        const int e = std::stoi(exponent);
        for (int i = 0; i < e; ++i) value = checked_mul(value, 10);
    }
    return value;
}

WideSigned parse_signed_wide(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    const WideInt mag = parse_wide(text);
    return negative ? -static_cast<WideSigned>(mag) : static_cast<WideSigned>(mag);
}

}  // namespace primepat
