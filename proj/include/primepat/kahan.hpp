#pragma once

#include <cstddef>
#include <vector>

namespace primepat {

/// Compensated (Kahan) summation in long double.
class KahanAccumulator {
public:
    KahanAccumulator() = default;
    KahanAccumulator(long double sum, long double compensation) : sum_(sum), comp_(compensation) {}

    void add(long double v) {
        const long double y = v - comp_;
        const long double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }

    /// Folds another accumulator in, carrying its pending correction.
    void merge(const KahanAccumulator& other) {
        add(other.sum_);
        add(-other.comp_);
    }

    long double value() const { return sum_ - comp_; }
    long double sum() const { return sum_; }
    long double compensation() const { return comp_; }

    friend bool operator==(const KahanAccumulator&, const KahanAccumulator&) = default;

private:
    long double sum_ = 0;
    long double comp_ = 0;
};

/// A fixed array of accumulators; partial sums are spread over buckets
/// and combined in index order, so the total depends only on which values
/// landed in which bucket.
class KahanBuckets {
public:
    static constexpr std::size_t kDefaultCount = 10000;

    explicit KahanBuckets(std::size_t count = kDefaultCount) : buckets_(count) {}

    std::size_t size() const { return buckets_.size(); }
    void add(std::size_t bucket, long double v) { buckets_[bucket % buckets_.size()].add(v); }
    const KahanAccumulator& operator[](std::size_t i) const { return buckets_[i]; }
    KahanAccumulator& operator[](std::size_t i) { return buckets_[i]; }

    /// Pairwise merge: bucket i of other into bucket i of this.
    void merge(const KahanBuckets& other);

    /// Kahan sum of the buckets in index order.
    KahanAccumulator total() const;

    friend bool operator==(const KahanBuckets&, const KahanBuckets&) = default;

private:
    std::vector<KahanAccumulator> buckets_;
};

inline void KahanBuckets::merge(const KahanBuckets& other) {
    for (std::size_t i = 0; i < buckets_.size() && i < other.buckets_.size(); ++i) buckets_[i].merge(other.buckets_[i]);
}

inline KahanAccumulator KahanBuckets::total() const {
    KahanAccumulator acc;
    for (const KahanAccumulator& b : buckets_) acc.merge(b);
    return acc;
}

}  // namespace primepat
