#include "primepat/primality.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "primepat/small_primes.hpp"
#include "primepat/wheel.hpp"

namespace primepat {
namespace {

// Primes <= 2^16: small-N trial division and trial-bound extension.
const std::vector<std::uint64_t>& trial_primes() {
    static const std::vector<std::uint64_t> primes = primes_up_to(1u << 16);
    return primes;
}

constexpr WideInt kSmallLimit = WideInt{1} << 20;

bool trial_divide_small(WideInt N) {
    for (std::uint64_t p : trial_primes()) {
        if (static_cast<WideInt>(p) * p > N) return true;
        if (N % p == 0) return false;
    }
    return true;
}

// Quadratic-residue tables for odd primes, qr[q][a] true iff a is a
// nonzero square mod q.
class ResidueTables {
public:
    explicit ResidueTables(std::uint64_t max_prime) {
        for (std::uint64_t q : primes_up_to(max_prime)) {
            if (q == 2) continue;
            std::vector<bool> table(q, false);
            for (std::uint64_t a = 1; a < q; ++a) table[a * a % q] = true;
            primes_.push_back(q);
            tables_.push_back(std::move(table));
        }
    }

    std::size_t size() const { return primes_.size(); }
    std::uint64_t prime(std::size_t i) const { return primes_[i]; }

    bool residue(std::size_t i, WideInt N) const {
        const std::uint64_t q = primes_[i];
        const std::uint64_t rem = N >> 64 ? static_cast<std::uint64_t>(N % q) : static_cast<std::uint64_t>(N) % q;
        return tables_[i][rem];
    }

    // Index of the first odd prime at which N is not a nonzero square,
    // starting the scan at `from`; size() if all pass.
    std::size_t first_failure(WideInt N, std::size_t from) const {
        std::size_t i = from;
        while (i < primes_.size() && residue(i, N)) ++i;
        return i;
    }

private:
    std::vector<std::uint64_t> primes_;
    std::vector<std::vector<bool>> tables_;
};

// L_p for all odd primes up to 2003 exceeds 2^127.
const ResidueTables& residue_tables() {
    static const ResidueTables tables(2003);
    return tables;
}

// Builds the table incrementally from candidates fed in increasing order.
class PseudosquareCollector {
public:
    explicit PseudosquareCollector(const ResidueTables& tables) : tables_(tables) {}

    // Index (into the odd-prime list) of the next p whose L_p is unknown.
    std::size_t next_index() const { return next_; }

    void offer(WideInt N, std::size_t checked_from = 0) {
        if (next_ >= tables_.size()) return;
        // Only candidates reaching the next unknown p matter.
        if (tables_.first_failure(N, checked_from) <= next_) return;
        const WideInt root = isqrt(N);
        if (root * root == N) return;
        const std::size_t depth = tables_.first_failure(N, next_);
        entries_.push_back({tables_.prime(next_), N});
        next_ = depth;
    }

    std::vector<PseudosquareEntry> take() { return std::move(entries_); }

private:
    const ResidueTables& tables_;
    std::size_t next_ = 0;
    std::vector<PseudosquareEntry> entries_;
};

}  // namespace

bool strong_probable_prime(WideInt N, WideInt base) {
    if (N < 3 || N % 2 == 0) throw std::domain_error("strong probable prime test needs an odd N >= 3");
    WideInt d = N - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    const WideInt a = base % N;
    if (a == 0) return true;
    WideInt x = powmod(a, d, N);
    if (x == 1 || x == N - 1) return true;
    for (unsigned t = 1; t < s; ++t) {
        x = mulmod(x, x, N);
        if (x == N - 1) return true;
        if (x == 1) return false;
    }
    return false;
}

bool sprp_base2(WideInt N) { return strong_probable_prime(N, 2); }

PseudosquareTable::PseudosquareTable(std::vector<PseudosquareEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 1; i < entries_.size(); ++i)
        if (entries_[i].L <= entries_[i - 1].L || entries_[i].p <= entries_[i - 1].p)
            throw std::invalid_argument("pseudosquare table must be strictly increasing");
}

const PseudosquareEntry* PseudosquareTable::select(WideInt N, WideInt s) const {
    if (s == 0) throw std::domain_error("trial bound must be positive");
    const WideInt ratio = N / s;
    const auto it = std::upper_bound(entries_.begin(), entries_.end(), ratio,
                                     [](WideInt v, const PseudosquareEntry& e) { return v < e.L; });
    return it == entries_.end() ? nullptr : &*it;
}

PseudosquareTable PseudosquareTable::truncated(WideInt limit) const {
    std::vector<PseudosquareEntry> kept;
    for (const PseudosquareEntry& e : entries_)
        if (e.L <= limit) kept.push_back(e);
    return PseudosquareTable(std::move(kept));
}

void PseudosquareTable::write(std::ostream& out) const {
    out << "PSQ v1\n";
    for (const PseudosquareEntry& e : entries_) out << e.p << ' ' << to_string(e.L) << '\n';
}

PseudosquareTable PseudosquareTable::read(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "PSQ v1")
        throw std::invalid_argument("pseudosquare file must start with 'PSQ v1'");
    std::vector<PseudosquareEntry> entries;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string p_text, l_text, extra;
        if (!(fields >> p_text >> l_text) || (fields >> extra))
            throw std::invalid_argument("pseudosquare file line " + std::to_string(line_no) + ": expected 'p L_p'");
        try {
            entries.push_back({static_cast<std::uint64_t>(parse_wide(p_text)), parse_wide(l_text)});
        } catch (const std::exception& e) {
            throw std::invalid_argument("pseudosquare file line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return PseudosquareTable(std::move(entries));
}

PseudosquareTable compute_pseudosquares(WideInt limit) {
    PseudosquareCollector collector(residue_tables());
    for (WideInt N = 9; N <= limit && collector.next_index() < residue_tables().size(); N += 8) collector.offer(N);
    return PseudosquareTable(collector.take());
}

PseudosquareTable compute_pseudosquares_fast(WideInt limit) {
    const ResidueTables& tables = residue_tables();
    // Wheel moduli 8, 3, 5, ..., 23: the residue 1 mod 8 and the nonzero squares.
    constexpr std::size_t kWheelOddPrimes = 8;
    std::vector<ResidueMask> masks;
    std::vector<bool> mod8(8, false);
    mod8[1] = true;
    masks.emplace_back(8, mod8);
    for (std::size_t i = 0; i < kWheelOddPrimes; ++i) {
        const std::uint64_t q = tables.prime(i);
        std::vector<bool> ones(q, false);
        for (std::uint64_t a = 1; a < q; ++a) ones[a * a % q] = true;
        masks.emplace_back(q, std::move(ones));
    }
    Wheel wheel = Wheel::from_masks(std::move(masks));
    const WideInt M = wheel.modulus();

    // Direct scan until every p <= 23 is known; beyond that only
    // candidates passing 3..23 can contribute.
    PseudosquareCollector collector(tables);
    WideInt N = 9;
    for (; N <= limit && collector.next_index() < kWheelOddPrimes; N += 8) collector.offer(N);
    const WideInt scanned = N - 8;
    if (N > limit) return PseudosquareTable(collector.take());

    std::vector<WideInt> residues;
    while (auto r = wheel.next_residue()) residues.push_back(*r);
    std::sort(residues.begin(), residues.end());

    for (WideInt block = scanned / M * M; block <= limit; block += M) {
        for (WideInt r : residues) {
            const WideInt cand = block + r;
            if (cand <= scanned) continue;
            if (cand > limit || collector.next_index() >= tables.size()) return PseudosquareTable(collector.take());
            collector.offer(cand, kWheelOddPrimes);
        }
        if (block > kWideMax - M) break;
    }
    return PseudosquareTable(collector.take());
}

bool pseudosquares_test(WideInt N, WideInt trial_bound, const PseudosquareTable& table) {
    if (N < 3 || N % 2 == 0) throw std::domain_error("pseudosquares test needs an odd N > 1");
    if (trial_bound == 0) throw std::domain_error("trial bound must be positive");
    for (std::uint64_t p : trial_primes()) {
        if (p > trial_bound || p > 1024) break;
        if (N % p == 0) throw std::logic_error("pseudosquares test: " + to_string(N) + " has the divisor " +
                                               std::to_string(p) + " below the promised trial bound");
    }
    const PseudosquareEntry* entry = table.select(N, trial_bound);
    if (entry == nullptr)
        throw CapacityError("pseudosquare table ends at " + to_string(table.largest()) + ", need L_p > " +
                            to_string(N / trial_bound));
    if (is_perfect_power(N)) return false;

    const WideInt e = (N - 1) / 2;
    bool saw_minus_one = false;
    bool two_is_minus_one = false;
    for (std::uint64_t q : trial_primes()) {
        if (q > entry->p) break;
        if (q == N) return true;
        const WideInt v = powmod(q, e, N);
        if (v == N - 1) {
            saw_minus_one = true;
            if (q == 2) two_is_minus_one = true;
        } else if (v != 1) {
            return false;
        }
    }
    const unsigned residue8 = static_cast<unsigned>(N % 8);
    if (residue8 == 5 && !two_is_minus_one) return false;
    if (residue8 == 1 && !saw_minus_one) {
        // Every base so far was a residue.  The criterion still holds for
        // any larger p' (L_p' >= L_p), so keep going until some q gives -1.
        for (std::uint64_t q : trial_primes()) {
            if (q <= entry->p) continue;
            if (q == N) return true;
            const WideInt v = powmod(q, e, N);
            if (v == N - 1) return true;
            if (v != 1) return false;
        }
        throw CapacityError("no quadratic non-residue below 2^16 for " + to_string(N));
    }
    return true;
}

bool is_prime(WideInt N, WideInt known_trial_bound, const PseudosquareTable& table) {
    if (N < 2) return false;
    if (N < 4) return true;
    if (N % 2 == 0) return false;
    if (N < kSmallLimit) return trial_divide_small(N);

    WideInt s = std::max<WideInt>(known_trial_bound, 1);
    // No prime factor <= s and N < (s+1)^2 leaves only N itself.
    if (s >= isqrt(N)) return true;
    if (!sprp_base2(N)) return false;
    if (table.select(N, s) == nullptr) {
        const WideInt extended = trial_primes().back();
        if (s < extended) {
            for (std::uint64_t p : trial_primes()) {
                if (p <= s) continue;
                if (N % p == 0) return false;
            }
            s = extended;
            if (s >= isqrt(N)) return true;
        }
        if (table.select(N, s) == nullptr)
            throw CapacityError("cannot certify " + to_string(N) + ": pseudosquare table ends at " +
                                to_string(table.largest()));
    }
    return pseudosquares_test(N, s, table);
}

WideInt strong_bases_limit() {
    static const WideInt limit = parse_wide("3317044064679887385961981");
    return limit;
}

bool is_prime_strong_bases(WideInt N) {
    static constexpr std::uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    if (N < 2) return false;
    for (std::uint64_t b : kBases) {
        if (N == b) return true;
        if (N % b == 0) return false;
    }
    if (N >= strong_bases_limit())
        throw CapacityError("strong-base test is only certified below " + to_string(strong_bases_limit()));
    for (std::uint64_t b : kBases)
        if (!strong_probable_prime(N, b)) return false;
    return true;
}

}  // namespace primepat
