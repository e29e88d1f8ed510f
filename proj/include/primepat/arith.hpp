#pragma once

// Overflow-checked integer arithmetic on values below 2^127.
//
// Every quantity the search touches (the bound n, candidates x, wheel
// moduli and the form values a*x+b) lives in WideInt.  Arithmetic that can
// leave the [0, 2^127) window throws rather than wrapping.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace primepat {

using WideInt = unsigned __int128;
using WideSigned = __int128;

inline constexpr WideInt kWideMax = (WideInt{1} << 127) - 1;

/// Raised when a result would not fit below 2^127.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Raised by modinv when gcd(a, m) != 1.
class NotInvertibleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

WideInt checked_add(WideInt a, WideInt b);
WideInt checked_mul(WideInt a, WideInt b);
WideSigned checked_add(WideSigned a, WideSigned b);
WideSigned checked_mul(WideSigned a, WideSigned b);

/// (a*b) mod m, exact for every m < 2^128.  m == 0 is a domain error.
WideInt mulmod(WideInt a, WideInt b, WideInt m);

/// a^e mod m by square-and-multiply.  m == 0 is a domain error.
WideInt powmod(WideInt a, WideInt e, WideInt m);

/// Inverse of a modulo m (m >= 2).  Throws NotInvertibleError when
/// gcd(a, m) != 1.
WideInt modinv(WideInt a, WideInt m);

/// Non-negative remainder of a signed value.
WideInt mod_floor(WideSigned a, WideInt m);

WideInt gcd(WideInt a, WideInt b);

/// floor(sqrt(n)).
WideInt isqrt(WideInt n);

/// floor(n^(1/k)) for k >= 1.
WideInt iroot(WideInt n, unsigned k);

/// true when n = r^k for some integers r >= 2, k >= 2.
bool is_perfect_power(WideInt n);

/// floor(log2(n)) for n >= 1.
unsigned ilog2(WideInt n);

std::string to_string(WideInt v);
std::string to_string(WideSigned v);

/// Parses a non-negative decimal integer below 2^127.  Accepts digit
/// groups separated by '_' or spaces, and scientific shorthand such as
/// "1e16" or "2e16" (mantissa integer, exponent decimal).
WideInt parse_wide(std::string_view text);

/// Signed counterpart of parse_wide (leading '-' or '+').
WideSigned parse_signed_wide(std::string_view text);

}  // namespace primepat
