#include "primepat/wheel.hpp"

#include <algorithm>
#include <stdexcept>

#include "primepat/small_primes.hpp"

namespace primepat {

Wheel Wheel::build(const Pattern& pattern, WideInt limit, std::span<const std::uint64_t> excluded) {
    if (limit < 2) throw std::invalid_argument("wheel limit must be at least 2");
    std::vector<ResidueMask> masks;
    WideInt product = 1;
    // The product of the primes below 1000 is far beyond 2^127.
    for (std::uint64_t p : primes_up_to(1000)) {
        if (std::find(excluded.begin(), excluded.end(), p) != excluded.end()) continue;
        if (product > limit / p) break;
        product *= p;
        masks.push_back(pattern.acceptable_residues(p));
    }
    if (masks.empty()) throw std::invalid_argument("no wheel prime fits below the wheel limit");
    return from_masks(std::move(masks));
}

Wheel Wheel::from_masks(std::vector<ResidueMask> masks) {
    auto layout = std::make_shared<Layout>();
    for (const ResidueMask& mask : masks) {
        for (const ResidueMask& other : layout->masks)
            if (other.modulus() == mask.modulus()) throw std::invalid_argument("wheel moduli must be distinct");
        if (mask.popcount() == 0)
            throw std::invalid_argument("no acceptable residue modulo " + std::to_string(mask.modulus()));
        layout->modulus = checked_mul(layout->modulus, mask.modulus());
        layout->residue_count = checked_mul(layout->residue_count, mask.popcount());
        layout->masks.push_back(mask);
    }
    if (layout->masks.empty()) throw std::invalid_argument("a wheel needs at least one modulus");

    const WideInt W = layout->modulus;
    for (const ResidueMask& mask : layout->masks) {
        Digit d;
        d.prime = mask.modulus();
        d.residues = mask.residues();
        const WideInt cofactor = W / d.prime;
        d.crt_coeff = W == d.prime ? WideInt{1} % W : mulmod(cofactor, modinv(cofactor % d.prime, d.prime), W);
        const std::size_t count = d.residues.size();
        for (std::size_t i = 0; i < count; ++i) {
            const std::uint64_t from = d.residues[i];
            const std::uint64_t to = d.residues[(i + 1) % count];
            const std::uint64_t delta = (to + d.prime - from) % d.prime;
            d.steps.push_back(mulmod(delta, d.crt_coeff, W));
        }
        layout->digits.push_back(std::move(d));
    }
    return Wheel(std::move(layout));
}

Wheel::Wheel(std::shared_ptr<const Layout> layout)
    : layout_(std::move(layout)), counters_(layout_->digits.size(), 0) {
    recompute_current();
}

std::vector<std::uint64_t> Wheel::primes() const {
    std::vector<std::uint64_t> out;
    for (const Digit& d : layout_->digits) out.push_back(d.prime);
    return out;
}

void Wheel::recompute_current() {
    const WideInt W = layout_->modulus;
    WideInt r = 0;
    for (std::size_t m = 0; m < layout_->digits.size(); ++m) {
        const Digit& d = layout_->digits[m];
        const WideInt term = mulmod(d.residues[counters_[m]], d.crt_coeff, W);
        r = r >= W - term ? r - (W - term) : r + term;
    }
    current_ = r;
}

bool Wheel::skip() {
    if (exhausted()) return false;
    ++position_;
    const WideInt W = layout_->modulus;
    for (std::size_t m = 0; m < layout_->digits.size(); ++m) {
        const Digit& d = layout_->digits[m];
        const WideInt step = d.steps[counters_[m]];
        current_ = current_ >= W - step ? current_ - (W - step) : current_ + step;
        ++operations_;
        if (++counters_[m] < d.residues.size()) return true;
        counters_[m] = 0;
    }
    return true;
}

std::optional<WideInt> Wheel::next_residue() {
    if (exhausted()) return std::nullopt;
    const WideInt r = current_;
    skip();
    return r;
}

void Wheel::restore(std::span<const std::uint64_t> counters) {
    if (counters.size() != layout_->digits.size()) throw std::invalid_argument("wheel cursor has the wrong length");
    WideInt pos = 0;
    for (std::size_t m = layout_->digits.size(); m-- > 0;) {
        const std::size_t radix = layout_->digits[m].residues.size();
        if (counters[m] >= radix) throw std::invalid_argument("wheel cursor digit out of range");
        pos = pos * radix + counters[m];
    }
    counters_.assign(counters.begin(), counters.end());
    position_ = pos;
    recompute_current();
}

void Wheel::seek(WideInt position) {
    if (position > layout_->residue_count) throw std::out_of_range("wheel position beyond the enumeration");
    position_ = position;
    WideInt rest = position;
    for (std::size_t m = 0; m < layout_->digits.size(); ++m) {
        const std::size_t radix = layout_->digits[m].residues.size();
        counters_[m] = static_cast<std::uint64_t>(rest % radix);
        rest /= radix;
    }
    recompute_current();
}

ResidueStripe::ResidueStripe(Wheel wheel, std::uint64_t nu, std::uint64_t idx)
    : wheel_(std::move(wheel)), nu_(nu), idx_(idx) {
    if (nu == 0 || idx >= nu) throw std::invalid_argument("stripe index must satisfy 0 <= idx < nu");
    wheel_.seek(0);
    for (std::uint64_t i = 0; i < idx && wheel_.skip(); ++i) {
    }
}

ResidueStripe::ResidueStripe(Resume, Wheel wheel, std::uint64_t nu, std::uint64_t idx)
    : wheel_(std::move(wheel)), nu_(nu), idx_(idx) {
    if (nu == 0 || idx >= nu) throw std::invalid_argument("stripe index must satisfy 0 <= idx < nu");
    if (!wheel_.exhausted() && wheel_.position() % nu != idx)
        throw std::invalid_argument("wheel cursor does not lie on this stripe");
}

ResidueStripe ResidueStripe::resume(Wheel positioned, std::uint64_t nu, std::uint64_t idx) {
    return ResidueStripe(Resume{}, std::move(positioned), nu, idx);
}

std::optional<WideInt> ResidueStripe::next() {
    const std::optional<WideInt> r = wheel_.next_residue();
    if (r)
        for (std::uint64_t i = 1; i < nu_ && wheel_.skip(); ++i) {
        }
    return r;
}

ResidueStripe stripe(const Wheel& wheel, std::uint64_t nu, std::uint64_t idx) { return ResidueStripe(wheel, nu, idx); }

}  // namespace primepat
