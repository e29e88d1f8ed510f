#include "primepat/census.hpp"

namespace primepat {
namespace {

SearchConfig census_config(Pattern pattern, WideInt n, const CensusOptions& opts) {
    SearchConfig cfg = SearchConfig::defaults(std::move(pattern), n);
    if (opts.bound_rule) cfg.bound_rule = *opts.bound_rule;
    cfg.wheel_limit = opts.wheel_limit;
    cfg.workers = opts.workers;
    cfg.excluded_wheel_primes = opts.excluded_wheel_primes;
    cfg.prime_test = opts.prime_test;
    cfg.checkpoint_path = opts.checkpoint_path;
    cfg.checkpoint_interval = opts.checkpoint_interval;
    cfg.collect_hits = false;
    return cfg;
}

TupleCensus run_census(Pattern pattern, WideInt X, WideInt n, const CensusOptions& opts) {
    // Bounds below every tuple's largest member: nothing to search.
    if (n < 4 || static_cast<WideSigned>(n) < pattern.max_value(1)) {
        TupleCensus empty;
        empty.X = X;
        return empty;
    }
    const SearchResult res = find_pattern_primes(census_config(std::move(pattern), n, opts), opts.control);
    return TupleCensus{.X = X, .count = res.count, .recip_sum = res.reciprocal_sum, .interrupted = res.interrupted, .stats = res.stats};
}

// Members beyond the pseudosquare table fall back to strong bases.
bool prime_any(WideInt v) {
    try {
        return is_prime(v);
    } catch (const CapacityError&) {
        return is_prime_strong_bases(v);
    }
}

}  // namespace

WideInt twins_bound(WideInt X) { return checked_add(X, 1); }
WideInt quads_bound(WideInt X) { return X - 1; }

TupleCensus twins(WideInt X, const CensusOptions& opts) {
    return run_census(patterns::twin(), X, twins_bound(X), opts);
}

TupleCensus quads(WideInt X, const CensusOptions& opts) {
    return run_census(patterns::quadruplet(), X, X == 0 ? 0 : quads_bound(X), opts);
}

std::vector<ChainStart> chain_search(ChainKind kind, unsigned length, WideInt cap, const CensusOptions& opts) {
    const Pattern pattern = chain_pattern(kind, length);
    if (cap < 1) return {};
    const WideSigned top = std::max<WideSigned>(pattern[pattern.size() - 1].eval(cap), 4);
    SearchConfig cfg = census_config(pattern, static_cast<WideInt>(top), opts);
    cfg.collect_hits = true;
    const SearchResult res = find_pattern_primes(cfg, opts.control);

    const bool first = kind == ChainKind::First;
    std::vector<ChainStart> out;
    for (WideInt x : res.hits) {
        if (x > cap) break;
        ChainStart c{.x = x, .length = length};
        try {
            WideInt v = static_cast<WideInt>(pattern[pattern.size() - 1].eval(x));
            while (true) {
                v = first ? checked_add(checked_mul(v, 2), 1) : checked_mul(v, 2) - 1;
                if (!prime_any(v)) break;
                ++c.length;
            }
        } catch (const OverflowError&) {
        } catch (const CapacityError&) {
        }
        c.complete = x % 2 == 0 || !prime_any(first ? (x - 1) / 2 : (x + 1) / 2);
        out.push_back(c);
    }
    return out;
}

}  // namespace primepat
