#pragma once

// Patterns of linear forms f_i(x) = a_i*x + b_i and their residue masks.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "primepat/arith.hpp"

namespace primepat {

struct LinearForm {
    WideInt a = 1;
    WideSigned b = 0;

    /// a*x + b; throws OverflowError outside the signed 128-bit range.
    WideSigned eval(WideInt x) const;

    friend bool operator==(const LinearForm&, const LinearForm&) = default;
};

/// Rejection of a malformed pattern.  index() names the offending form,
/// or is npos for whole-pattern problems (empty list, parse errors).
class PatternError : public std::invalid_argument {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    PatternError(const std::string& what, std::size_t index = npos)
        : std::invalid_argument(what), index_(index) {}

    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

/// Acceptable residues modulo one prime: bit r is set iff no form with
/// p not dividing a_i vanishes at r mod p.
class ResidueMask {
public:
    ResidueMask(std::uint64_t modulus, std::vector<bool> ones)
        : modulus_(modulus), ones_(std::move(ones)) {}

    std::uint64_t modulus() const { return modulus_; }
    bool acceptable(std::uint64_t residue) const { return ones_[residue % modulus_]; }
    std::size_t popcount() const;
    /// Acceptable residues in increasing order.
    std::vector<std::uint64_t> residues() const;
    /// The mask as a '0'/'1' string, residue 0 first.
    std::string bits() const;

private:
    std::uint64_t modulus_;
    std::vector<bool> ones_;
};

class Pattern {
public:
    /// Validates and builds a pattern.  Throws PatternError for an empty
    /// list, a zero multiplier, a form with a fixed divisor
    /// (gcd(a_i, b_i) > 1) or a duplicated form.
    static Pattern make(std::vector<LinearForm> forms);

    std::span<const LinearForm> forms() const { return forms_; }
    std::size_t size() const { return forms_.size(); }
    const LinearForm& operator[](std::size_t i) const { return forms_[i]; }

    /// For every prime p <= k some residue leaves all forms nonzero mod p.
    bool admissible() const;

    ResidueMask acceptable_residues(std::uint64_t p) const;

    /// Canonical text form, e.g. "x,x+2,x+6,x+8" or "6x+1,12x+1,18x+1".
    std::string to_string() const;

    /// Largest x >= 0 with every f_i(x) <= n, or -1 if none.
    WideSigned max_x_for_bound(WideInt n) const;

    /// min_i f_i(x) and max_i f_i(x).
    WideSigned min_value(WideInt x) const;
    WideSigned max_value(WideInt x) const;

    friend bool operator==(const Pattern&, const Pattern&) = default;

private:
    explicit Pattern(std::vector<LinearForm> forms) : forms_(std::move(forms)) {}

    std::vector<LinearForm> forms_;
};

enum class ChainKind { First, Second };

/// (x, 2x+1, 4x+3, ...) for the first kind, (x, 2x-1, 4x-3, ...) for the
/// second; `length` forms in total.
Pattern chain_pattern(ChainKind kind, unsigned length);

/// Parses comma-separated forms such as "x,x+2,x+6,x+8" or "6x+1, 12*x+1".
Pattern parse_pattern(std::string_view text);

std::string_view to_string(ChainKind kind);
ChainKind parse_chain_kind(std::string_view text);

namespace patterns {
Pattern twin();
Pattern triplet_a();  // x, x+2, x+6
Pattern triplet_b();  // x, x+4, x+6
Pattern quadruplet();
Pattern chernick();
}  // namespace patterns

}  // namespace primepat
