#pragma once

// Wheel over pairwise-coprime prime moduli: enumerates every residue
// r mod W (W = product of moduli) that is acceptable for each modulus.
//
// The enumeration is a mixed-radix odometer.  Digit m indexes the sorted
// acceptable residues of modulus m; the least significant digit belongs
// to the first (smallest) modulus.  The current residue is maintained by
// CRT basis deltas, so advancing costs amortized O(1) additions mod W.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "primepat/arith.hpp"
#include "primepat/pattern.hpp"

namespace primepat {

class Wheel {
public:
    /// Wheel primes 2, 3, 5, ... (skipping `excluded`) are taken in order
    /// while the running product stays <= limit.  Throws
    /// std::invalid_argument when no prime fits or a modulus has no
    /// acceptable residue (inadmissible pattern).
    static Wheel build(const Pattern& pattern, WideInt limit, std::span<const std::uint64_t> excluded = {});

    /// Wheel over explicitly chosen masks (distinct primes).
    static Wheel from_masks(std::vector<ResidueMask> masks);

    WideInt modulus() const { return layout_->modulus; }
    std::vector<std::uint64_t> primes() const;
    std::span<const ResidueMask> masks() const { return layout_->masks; }
    WideInt residue_count() const { return layout_->residue_count; }

    /// Yields the residue at the cursor and advances, or nullopt once all
    /// residue_count() residues have been produced.
    std::optional<WideInt> next_residue();

    /// Advances without yielding.  Returns false if already exhausted.
    bool skip();

    bool exhausted() const { return position_ >= layout_->residue_count; }

    /// Enumeration index of the residue the next call yields.
    WideInt position() const { return position_; }

    /// Per-modulus digit vector; the serialized cursor.
    std::span<const std::uint64_t> cursor() const { return counters_; }

    /// Moves the cursor to a digit vector previously read from cursor().
    /// A vector of all zeros together with exhausted == true is not
    /// representable, so restore() of the final position uses seek().
    void restore(std::span<const std::uint64_t> counters);

    /// Moves the cursor to an enumeration index in [0, residue_count].
    void seek(WideInt position);

    /// Digit updates performed so far (for cost accounting).
    std::uint64_t operation_count() const { return operations_; }

private:
    struct Digit {
        std::uint64_t prime;
        std::vector<std::uint64_t> residues;
        WideInt crt_coeff;
        // steps[i] moves residue i to residue (i+1) mod count, scaled by crt_coeff.
        std::vector<WideInt> steps;
    };

    struct Layout {
        std::vector<ResidueMask> masks;
        std::vector<Digit> digits;
        WideInt modulus = 1;
        WideInt residue_count = 1;
    };

    explicit Wheel(std::shared_ptr<const Layout> layout);
    void recompute_current();

    std::shared_ptr<const Layout> layout_;
    std::vector<std::uint64_t> counters_;
    WideInt current_ = 0;
    WideInt position_ = 0;
    std::uint64_t operations_ = 0;
};

/// The residue substream of one worker: positions idx, idx+nu, idx+2nu, ...
/// of the wheel enumeration.  Every worker steps through the whole
/// enumeration but only yields its own share.
class ResidueStripe {
public:
    ResidueStripe(Wheel wheel, std::uint64_t nu, std::uint64_t idx);

    /// Continues a stripe from a wheel whose cursor already sits on one of
    /// this stripe's positions (or is exhausted), e.g. after a restart.
    static ResidueStripe resume(Wheel positioned, std::uint64_t nu, std::uint64_t idx);

    std::optional<WideInt> next();

    const Wheel& wheel() const { return wheel_; }
    Wheel& wheel() { return wheel_; }
    std::uint64_t workers() const { return nu_; }
    std::uint64_t index() const { return idx_; }

private:
    struct Resume {};
    ResidueStripe(Resume, Wheel wheel, std::uint64_t nu, std::uint64_t idx);

    Wheel wheel_;
    std::uint64_t nu_;
    std::uint64_t idx_;
};

ResidueStripe stripe(const Wheel& wheel, std::uint64_t nu, std::uint64_t idx);

}  // namespace primepat
