#include "primepat/search.hpp"

#include <algorithm>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "primepat/small_primes.hpp"
#include "primepat/wheel.hpp"

namespace primepat {

std::string_view to_string(PrimeTest t) {
    switch (t) {
        case PrimeTest::Auto: return "auto";
        case PrimeTest::Pseudosquares: return "psq";
        case PrimeTest::StrongBases: return "bases";
    }
    return "auto";
}

PrimeTest parse_prime_test(std::string_view text) {
    if (text == "auto") return PrimeTest::Auto;
    if (text == "psq" || text == "pseudosquares") return PrimeTest::Pseudosquares;
    if (text == "bases" || text == "strong-bases") return PrimeTest::StrongBases;
    throw std::invalid_argument("prime test must be auto, psq or bases");
}

SearchConfig SearchConfig::defaults(Pattern pattern, WideInt n) {
    const std::size_t k = pattern.size();
    return SearchConfig{.pattern = std::move(pattern), .n = n, .bound_rule = default_bound_rule(k)};
}

std::string format_tuple(const Pattern& pattern, WideInt x) {
    std::string line = to_string(x);
    for (const LinearForm& f : pattern.forms()) {
        line += ' ';
        line += to_string(f.eval(x));
    }
    return line;
}

std::vector<WideInt> boundary_tuples(const Pattern& pattern, WideInt cut, WideInt n) {
    std::vector<WideInt> out;
    const WideSigned x_max = pattern.max_x_for_bound(n);
    if (x_max < 1 || cut < 2) return out;
    // Primality of values up to the cut comes from a bitmap; larger
    // members go through is_prime.
    const std::uint64_t small_limit = static_cast<std::uint64_t>(std::min<WideInt>(cut, WideInt{1} << 32));
    std::vector<bool> small_prime(small_limit + 1, false);
    for (std::uint64_t p : primes_up_to(small_limit)) small_prime[p] = true;
    auto prime = [&](WideSigned v) {
        if (v < 2) return false;
        if (static_cast<WideInt>(v) <= small_limit) return static_cast<bool>(small_prime[static_cast<std::size_t>(v)]);
        return is_prime(static_cast<WideInt>(v));
    };
    for (WideInt x = 1; x <= static_cast<WideInt>(x_max); ++x) {
        const WideSigned lo = pattern.min_value(x);
        if (lo > static_cast<WideSigned>(cut)) break;
        bool all = true;
        for (const LinearForm& f : pattern.forms())
            if (!prime(f.eval(x))) {
                all = false;
                break;
            }
        if (all) out.push_back(x);
    }
    return out;
}

std::uint64_t config_digest(const SearchConfig& cfg, const SievePlan& plan) {
    std::ostringstream key;
    key << cfg.pattern.to_string() << '|' << to_string(cfg.n) << '|' << plan.bound << '|';
    for (std::uint64_t p : plan.wheel_primes) key << p << ',';
    key << '|' << plan.sieve_primes.size() << '|' << cfg.workers << '|' << cfg.early_abort.enabled << ','
        << cfg.early_abort.positions_per_live << ',' << cfg.early_abort.check_every << '|'
        << to_string(cfg.prime_test) << '|' << cfg.collect_hits << '|' << cfg.segment_bits;
    return fnv1a64(key.str());
}

namespace {

long double reciprocal_sum_of(const Pattern& pattern, WideInt x) {
    long double s = 0;
    for (const LinearForm& f : pattern.forms()) s += 1.0L / static_cast<long double>(f.eval(x));
    return s;
}

class Engine {
public:
    Engine(const SearchConfig& cfg, SievePlan plan)
        : cfg_(cfg),
          plan_(std::move(plan)),
          wheel_(Wheel::build(cfg.pattern, plan_.wheel_limit, cfg.excluded_wheel_primes)),
          sieve_(cfg.pattern, wheel_.modulus(), plan_.sieve_primes),
          table_(cfg.table ? *cfg.table : PseudosquareTable::embedded()) {
        // Smallest prime not removed by a full run: an excluded prime
        // between B and the cut, or the first prime beyond the cut.
        WideInt uncovered = plan_.cut() + 1;
        while (!is_prime(uncovered)) ++uncovered;
        for (std::uint64_t p : cfg.excluded_wheel_primes)
            if (p > plan_.bound && p <= plan_.cut() && is_prime(p)) uncovered = std::min<WideInt>(uncovered, p);
        full_trial_bound_ = uncovered - 1;
    }

    const Wheel& wheel() const { return wheel_; }
    const SievePlan& plan() const { return plan_; }
    const ProgressionSieve& sieve() const { return sieve_; }

    // No prime <= the returned bound divides any f_i(x) of a survivor once
    // `applied` sieve primes have been used.
    WideInt trial_bound(std::size_t applied) const {
        if (applied < plan_.sieve_primes.size())
            return std::min<WideInt>(plan_.sieve_primes[applied], full_trial_bound_ + 1) - 1;
        return full_trial_bound_;
    }

    bool certify(WideInt x, WideInt tb, SearchStats& stats) const {
        if (cfg_.pattern.min_value(x) <= static_cast<WideSigned>(plan_.cut())) return false;
        // Values below (tb+1)^2 without a prime factor <= tb are prime.
        const WideInt proven = (tb + 1) * (tb + 1);
        for (const LinearForm& f : cfg_.pattern.forms()) {
            const WideInt v = static_cast<WideInt>(f.eval(x));
            if (v < proven) continue;
            if (v % 2 == 0) return false;
            ++stats.sprp_tests;
            if (!sprp_base2(v)) return false;
        }
        for (const LinearForm& f : cfg_.pattern.forms()) {
            const WideInt v = static_cast<WideInt>(f.eval(x));
            if (v < proven) continue;
            ++stats.full_tests;
            if (!verify(v, tb)) return false;
        }
        return true;
    }

private:
    bool verify(WideInt v, WideInt tb) const {
        switch (cfg_.prime_test) {
            case PrimeTest::Pseudosquares: return pseudosquares_test(v, tb, table_);
            case PrimeTest::StrongBases: return is_prime_strong_bases(v);
            case PrimeTest::Auto: break;
        }
        if (table_.select(v, tb) != nullptr) return pseudosquares_test(v, tb, table_);
        if (v < strong_bases_limit()) return is_prime_strong_bases(v);
        throw CapacityError("cannot certify " + to_string(v) + " with trial bound " + to_string(tb) +
                            ": pseudosquare table too short and value beyond the strong-base range");
    }

    const SearchConfig& cfg_;
    SievePlan plan_;
    Wheel wheel_;
    ProgressionSieve sieve_;
    const PseudosquareTable& table_;
    WideInt full_trial_bound_ = 1;
};

struct StripeRuntime {
    std::mutex mutex;
    StripeState state;
    SearchStats stats;
};

class Run {
public:
    Run(const SearchConfig& cfg, const SearchControl& control, Engine& engine, std::uint64_t digest)
        : cfg_(cfg), control_(control), engine_(engine), digest_(digest), stripes_(cfg.workers) {}

    void init_fresh() {
        for (std::uint64_t i = 0; i < cfg_.workers; ++i) {
            StripeState& s = stripes_[i].state;
            s.index = i;
            Wheel w = engine_.wheel();
            ResidueStripe st(w, cfg_.workers, i);
            s.position = st.wheel().position();
            s.cursor.assign(st.wheel().cursor().begin(), st.wheel().cursor().end());
            s.done = st.wheel().exhausted();
        }
    }

    void init_from(Checkpoint cp) {
        if (cp.digest != digest_ || cp.workers != cfg_.workers || cp.n != cfg_.n ||
            cp.pattern != cfg_.pattern.to_string() || cp.residues != engine_.wheel().residue_count())
            throw CheckpointError("checkpoint belongs to a different configuration; refusing to restore");
        for (std::uint64_t i = 0; i < cfg_.workers; ++i) stripes_[i].state = std::move(cp.stripes[i]);
        resumed_ = true;
    }

    Checkpoint snapshot() {
        Checkpoint cp;
        cp.digest = digest_;
        cp.pattern = cfg_.pattern.to_string();
        cp.n = cfg_.n;
        cp.workers = cfg_.workers;
        cp.residues = engine_.wheel().residue_count();
        for (StripeRuntime& rt : stripes_) {
            std::lock_guard lock(rt.mutex);
            cp.stripes.push_back(rt.state);
        }
        return cp;
    }

    void write_checkpoint() {
        if (!cfg_.checkpoint_path) return;
        const Checkpoint cp = snapshot();
        save_checkpoint(cp, *cfg_.checkpoint_path);
        ++checkpoints_written_;
        if (control_.on_checkpoint) {
            std::lock_guard lock(callback_mutex_);
            control_.on_checkpoint(cp);
        }
    }

    bool stopping() const {
        return killed_.load() || failed_.load() || (control_.stop_flag && control_.stop_flag->load());
    }

    void work(std::uint64_t idx) {
        try {
            work_stripe(idx);
        } catch (...) {
            std::lock_guard lock(coord_mutex_);
            if (!error_) error_ = std::current_exception();
            failed_ = true;
        }
        {
            std::lock_guard lock(coord_mutex_);
            ++finished_;
        }
        coord_cv_.notify_all();
    }

    void coordinate() {
        using clock = std::chrono::steady_clock;
        auto next_save = clock::now() + cfg_.checkpoint_interval;
        std::uint64_t next_forced = control_.checkpoint_every_residues;
        std::unique_lock lock(coord_mutex_);
        while (finished_ < cfg_.workers) {
            coord_cv_.wait_until(lock, next_save, [&] {
                return finished_ >= cfg_.workers ||
                       (next_forced != 0 && processed_.load() >= next_forced && !killed_.load());
            });
            if (finished_ >= cfg_.workers) break;
            const bool forced = next_forced != 0 && processed_.load() >= next_forced;
            if ((forced || clock::now() >= next_save) && !killed_.load() && !failed_.load()) {
                lock.unlock();
                write_checkpoint();
                lock.lock();
                next_save = clock::now() + cfg_.checkpoint_interval;
                while (next_forced != 0 && processed_.load() >= next_forced)
                    next_forced += control_.checkpoint_every_residues;
            }
        }
    }

    SearchResult finish(std::vector<WideInt> boundary) {
        if (error_) std::rethrow_exception(error_);
        SearchResult res;
        res.plan = engine_.plan();
        res.wheel_modulus = engine_.wheel().modulus();
        res.interrupted = std::any_of(stripes_.begin(), stripes_.end(), [](const StripeRuntime& rt) { return !rt.state.done; });

        if (res.interrupted) {
            const bool external = control_.stop_flag && control_.stop_flag->load();
            if (external && control_.checkpoint_on_stop && !killed_.load()) write_checkpoint();
        } else {
            write_checkpoint();
        }

        KahanAccumulator total;
        for (WideInt x : boundary) total.add(reciprocal_sum_of(cfg_.pattern, x));
        res.count = boundary.size();
        if (cfg_.collect_hits) res.hits = std::move(boundary);
        for (StripeRuntime& rt : stripes_) {
            total.merge(rt.state.sums.total());
            res.count += rt.state.found;
            if (cfg_.collect_hits) res.hits.insert(res.hits.end(), rt.state.hits.begin(), rt.state.hits.end());
            res.stats.survivors += rt.stats.survivors;
            res.stats.sprp_tests += rt.stats.sprp_tests;
            res.stats.full_tests += rt.stats.full_tests;
            res.stats.early_aborts += rt.stats.early_aborts;
        }
        std::sort(res.hits.begin(), res.hits.end());
        res.reciprocal_sum = total;
        res.stats.residues_total = engine_.wheel().residue_count();
        res.stats.residues_processed = processed_.load();
        res.stats.checkpoints_written = checkpoints_written_;
        res.stats.resumed = resumed_;
        return res;
    }

    void emit_restored_hits() {
        if (!control_.on_hit) return;
        for (StripeRuntime& rt : stripes_)
            for (WideInt x : rt.state.hits) control_.on_hit(x);
    }

    void emit(WideInt x) {
        if (!control_.on_hit) return;
        std::lock_guard lock(callback_mutex_);
        control_.on_hit(x);
    }

private:
    void work_stripe(std::uint64_t idx) {
        StripeRuntime& rt = stripes_[idx];
        std::optional<ResidueStripe> st;
        {
            std::lock_guard lock(rt.mutex);
            if (rt.state.done) return;
            Wheel w = engine_.wheel();
            w.restore(rt.state.cursor);
            if (w.position() != rt.state.position) throw CheckpointError("stripe cursor and position disagree");
            st.emplace(ResidueStripe::resume(std::move(w), cfg_.workers, idx));
        }
        const ProgressionSieve& sieve = engine_.sieve();
        std::vector<WideInt> local_hits;
        while (!stopping()) {
            const std::optional<WideInt> r = st->next();
            if (!r) break;
            local_hits.clear();
            const std::uint64_t len = sieve.segment_length(*r, cfg_.n);
            for (std::uint64_t j0 = 0; j0 < len; j0 += cfg_.segment_bits) {
                const SieveSegment seg = sieve.sieve(*r, j0, std::min(cfg_.segment_bits, len - j0), cfg_.early_abort);
                if (seg.aborted()) ++rt.stats.early_aborts;
                const WideInt tb = engine_.trial_bound(seg.primes_applied());
                for (WideInt x : seg.survivors()) {
                    ++rt.stats.survivors;
                    if (engine_.certify(x, tb, rt.stats)) local_hits.push_back(x);
                }
            }
            {
                std::lock_guard lock(rt.mutex);
                StripeState& s = rt.state;
                const std::size_t bucket = static_cast<std::size_t>(s.residues_done % s.sums.size());
                for (WideInt x : local_hits)
                    for (const LinearForm& f : cfg_.pattern.forms())
                        s.sums.add(bucket, 1.0L / static_cast<long double>(f.eval(x)));
                s.found += local_hits.size();
                if (cfg_.collect_hits) s.hits.insert(s.hits.end(), local_hits.begin(), local_hits.end());
                ++s.residues_done;
                s.position = st->wheel().position();
                s.cursor.assign(st->wheel().cursor().begin(), st->wheel().cursor().end());
                s.done = st->wheel().exhausted();
            }
            for (WideInt x : local_hits) emit(x);
            const std::uint64_t done = ++processed_;
            if (control_.stop_after_residues != 0 && done >= control_.stop_after_residues) killed_ = true;
            if (control_.checkpoint_every_residues != 0 && done % control_.checkpoint_every_residues == 0)
                coord_cv_.notify_all();
        }
        if (!stopping()) {
            std::lock_guard lock(rt.mutex);
            rt.state.done = true;
        }
    }

    const SearchConfig& cfg_;
    const SearchControl& control_;
    Engine& engine_;
    std::uint64_t digest_;
    std::vector<StripeRuntime> stripes_;

    std::mutex coord_mutex_;
    std::condition_variable coord_cv_;
    std::uint64_t finished_ = 0;
    std::exception_ptr error_;
    std::atomic<bool> failed_{false};
    std::atomic<bool> killed_{false};
    std::atomic<std::uint64_t> processed_{0};
    std::mutex callback_mutex_;
    std::uint64_t checkpoints_written_ = 0;
    bool resumed_ = false;
};

}  // namespace

SearchResult find_pattern_primes(const SearchConfig& cfg, const SearchControl& control) {
    if (!cfg.pattern.admissible()) throw std::invalid_argument("pattern " + cfg.pattern.to_string() + " is not admissible");
    if (cfg.workers == 0) throw std::invalid_argument("at least one worker is required");
    if (cfg.segment_bits == 0) throw std::invalid_argument("segment size must be positive");
    if (cfg.n < 4 || static_cast<WideSigned>(cfg.n) < cfg.pattern.max_value(1))
        throw std::invalid_argument("bound n must be at least max(4, max_i f_i(1))");

    SievePlan plan = make_plan(cfg.n, cfg.bound_rule, cfg.wheel_limit, cfg.excluded_wheel_primes);
    const std::uint64_t digest = config_digest(cfg, plan);
    Engine engine(cfg, std::move(plan));
    Run run(cfg, control, engine, digest);

    if (cfg.checkpoint_path && std::filesystem::exists(*cfg.checkpoint_path))
        run.init_from(load_checkpoint(*cfg.checkpoint_path));
    else
        run.init_fresh();

    std::vector<WideInt> boundary = boundary_tuples(cfg.pattern, engine.plan().cut(), cfg.n);
    for (WideInt x : boundary) run.emit(x);
    run.emit_restored_hits();

    {
        std::vector<std::jthread> workers;
        workers.reserve(cfg.workers);
        for (std::uint64_t i = 0; i < cfg.workers; ++i) workers.emplace_back([&run, i] { run.work(i); });
        run.coordinate();
    }
    return run.finish(std::move(boundary));
}

std::optional<WideInt> smallest_chain(ChainKind kind, unsigned length, WideInt cap, std::uint64_t workers) {
    const Pattern pattern = chain_pattern(kind, length);
    const LinearForm& last = pattern[pattern.size() - 1];
    WideInt window = 1024;
    while (true) {
        const WideInt x_top = std::min(window, cap);
        const WideSigned top = std::max<WideSigned>(last.eval(x_top), 4);
        SearchConfig cfg = SearchConfig::defaults(pattern, static_cast<WideInt>(top));
        cfg.workers = workers;
        const SearchResult res = find_pattern_primes(cfg);
        for (WideInt x : res.hits)
            if (x <= cap) return x;
        if (x_top >= cap) return std::nullopt;
        window = window > kWideMax / 16 ? kWideMax : window * 16;
    }
}

}  // namespace primepat
