#include "primepat/pattern.hpp"

#include <algorithm>
#include <cctype>

#include "primepat/small_primes.hpp"

namespace primepat {

WideSigned LinearForm::eval(WideInt x) const {
    if (x > kWideMax) throw OverflowError("form argument exceeds 2^127 - 1");
    return checked_add(checked_mul(static_cast<WideSigned>(a), static_cast<WideSigned>(x)), b);
}

std::size_t ResidueMask::popcount() const {
    return static_cast<std::size_t>(std::count(ones_.begin(), ones_.end(), true));
}

std::vector<std::uint64_t> ResidueMask::residues() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t r = 0; r < modulus_; ++r)
        if (ones_[r]) out.push_back(r);
    return out;
}

std::string ResidueMask::bits() const {
    std::string out;
    out.reserve(ones_.size());
    for (bool bit : ones_) out.push_back(bit ? '1' : '0');
    return out;
}

Pattern Pattern::make(std::vector<LinearForm> forms) {
    if (forms.empty()) throw PatternError("a pattern needs at least one form");
    for (std::size_t i = 0; i < forms.size(); ++i) {
        const LinearForm& f = forms[i];
        if (f.a == 0 || f.a > kWideMax)
            throw PatternError("form " + std::to_string(i + 1) + " needs a positive multiplier", i);
        const WideInt abs_b = f.b < 0 ? static_cast<WideInt>(-(f.b + 1)) + 1 : static_cast<WideInt>(f.b);
        const WideInt g = gcd(f.a, abs_b);
        if (g > 1)
            throw PatternError("form " + std::to_string(i + 1) + " has the fixed divisor " + primepat::to_string(g),
                               i);
        for (std::size_t j = 0; j < i; ++j)
            if (forms[j] == f) throw PatternError("form " + std::to_string(i + 1) + " duplicates an earlier form", i);
    }
    return Pattern(std::move(forms));
}

ResidueMask Pattern::acceptable_residues(std::uint64_t p) const {
    std::vector<bool> ones(p, true);
    for (const LinearForm& f : forms_) {
        const WideInt a_mod = f.a % p;
        if (a_mod == 0) continue;
        const WideInt b_mod = mod_floor(f.b, p);
        const WideInt root = mulmod((p - b_mod) % p, modinv(a_mod, p), p);
        ones[static_cast<std::size_t>(root)] = false;
    }
    return ResidueMask(p, std::move(ones));
}

bool Pattern::admissible() const {
    for (std::uint64_t p : primes_up_to(forms_.size()))
        if (acceptable_residues(p).popcount() == 0) return false;
    return true;
}

std::string Pattern::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < forms_.size(); ++i) {
        const LinearForm& f = forms_[i];
        if (i) out += ',';
        if (f.a != 1) out += primepat::to_string(f.a);
        out += 'x';
        if (f.b > 0) out += '+' + primepat::to_string(f.b);
        if (f.b < 0) out += primepat::to_string(f.b);
    }
    return out;
}

WideSigned Pattern::max_x_for_bound(WideInt n) const {
    WideSigned best = static_cast<WideSigned>(kWideMax);
    for (const LinearForm& f : forms_) {
        const WideSigned room = checked_add(static_cast<WideSigned>(n), -f.b);
        if (room < 0) return -1;
        best = std::min(best, room / static_cast<WideSigned>(f.a));
    }
    return best;
}

WideSigned Pattern::min_value(WideInt x) const {
    WideSigned v = forms_[0].eval(x);
    for (const LinearForm& f : forms_) v = std::min(v, f.eval(x));
    return v;
}

WideSigned Pattern::max_value(WideInt x) const {
    WideSigned v = forms_[0].eval(x);
    for (const LinearForm& f : forms_) v = std::max(v, f.eval(x));
    return v;
}

Pattern chain_pattern(ChainKind kind, unsigned length) {
    if (length == 0) throw PatternError("a chain needs at least one form");
    if (length > 120) throw PatternError("chain length exceeds the 2^127 width");
    std::vector<LinearForm> forms;
    for (unsigned i = 0; i < length; ++i) {
        const WideInt a = WideInt{1} << i;
        const WideSigned offset = static_cast<WideSigned>(a - 1);
        forms.push_back({a, kind == ChainKind::First ? offset : -offset});
    }
    return Pattern::make(std::move(forms));
}

namespace {

LinearForm parse_form(std::string_view text, std::size_t index) {
    auto fail = [&](const std::string& why) -> LinearForm {
        throw PatternError("form " + std::to_string(index + 1) + " '" + std::string(text) + "': " + why, index);
    };
    const std::size_t xpos = text.find('x');
    if (xpos == std::string_view::npos || text.find('x', xpos + 1) != std::string_view::npos)
        return fail("expected exactly one 'x'");
    std::string_view coeff = text.substr(0, xpos);
    if (!coeff.empty() && coeff.back() == '*') coeff.remove_suffix(1);
    LinearForm form;
    try {
        form.a = coeff.empty() ? WideInt{1} : parse_wide(coeff);
        const std::string_view rest = text.substr(xpos + 1);
        if (!rest.empty()) {
            if (rest.front() != '+' && rest.front() != '-') return fail("expected '+b' or '-b' after x");
            form.b = parse_signed_wide(rest);
        }
    } catch (const std::invalid_argument&) {
        return fail("malformed coefficient");
    }
    return form;
}

}  // namespace

Pattern parse_pattern(std::string_view text) {
    std::string compact;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) compact.push_back(static_cast<char>(std::tolower(ch)));
    std::vector<LinearForm> forms;
    std::size_t start = 0;
    while (start <= compact.size()) {
        std::size_t comma = compact.find(',', start);
        if (comma == std::string::npos) comma = compact.size();
        const std::string_view piece = std::string_view(compact).substr(start, comma - start);
        if (piece.empty()) throw PatternError("empty form in pattern '" + std::string(text) + "'");
        forms.push_back(parse_form(piece, forms.size()));
        start = comma + 1;
    }
    return Pattern::make(std::move(forms));
}

std::string_view to_string(ChainKind kind) { return kind == ChainKind::First ? "first" : "second"; }

ChainKind parse_chain_kind(std::string_view text) {
    if (text == "first" || text == "1") return ChainKind::First;
    if (text == "second" || text == "2") return ChainKind::Second;
    throw std::invalid_argument("chain kind must be 'first' or 'second'");
}

namespace patterns {
Pattern twin() { return Pattern::make({{1, 0}, {1, 2}}); }
Pattern triplet_a() { return Pattern::make({{1, 0}, {1, 2}, {1, 6}}); }
Pattern triplet_b() { return Pattern::make({{1, 0}, {1, 4}, {1, 6}}); }
Pattern quadruplet() { return Pattern::make({{1, 0}, {1, 2}, {1, 6}, {1, 8}}); }
Pattern chernick() { return Pattern::make({{6, 1}, {12, 1}, {18, 1}}); }
}  // namespace patterns

}  // namespace primepat
