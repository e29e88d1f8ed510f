// primepat: prime pattern search from the command line.
//
//   primepat search --pattern "x,x+2,x+6,x+8" --n 1e8
//   primepat twins --x 1e9 --workers 4 --checkpoint twins.ckpt
//   primepat quads --x 1e9
//   primepat chains --kind first --length 7 --cap 1e7
//   primepat pseudosquares --limit 1e12 --out psq.txt
//
// Tuples go to --out (or stdout); the count=/sum= summary goes to stdout
// when tuples are written to a file and to stderr otherwise.
//
// Exit codes: 0 ok, 2 bad arguments or configuration, 3 capacity exceeded,
// 4 checkpoint problem, 130 interrupted (checkpoint written if configured).

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "primepat/census.hpp"

using namespace primepat;

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

struct SearchFlags {
    std::string sieve_bound;
    double space_exp = 0;
    bool sqrt_bound = false;
    std::string wheel_limit;
    std::uint64_t workers = 1;
    std::vector<std::uint64_t> excluded;
    std::string checkpoint;
    std::uint64_t checkpoint_interval = 900;
    std::string prime_test = "auto";
    std::string psq_table;
};

void add_search_flags(CLI::App* cmd, SearchFlags& f) {
    auto* sb = cmd->add_option("--sieve-bound", f.sieve_bound, "sieve bound B");
    auto* se = cmd->add_option("--space-exp", f.space_exp, "B = 2^floor(log2(n)/c)");
    auto* sq = cmd->add_flag("--sqrt-bound", f.sqrt_bound, "B = floor(sqrt(n))");
    sb->excludes(se)->excludes(sq);
    se->excludes(sq);
    cmd->add_option("--wheel-limit", f.wheel_limit, "largest wheel modulus (default n/B)");
    cmd->add_option("--workers", f.workers, "residue stripes run in parallel")->check(CLI::PositiveNumber);
    cmd->add_option("--exclude-wheel-prime", f.excluded, "keep this prime out of the wheel");
    cmd->add_option("--checkpoint", f.checkpoint, "checkpoint file (resumed when it exists)");
    cmd->add_option("--checkpoint-interval", f.checkpoint_interval, "seconds between checkpoints");
    cmd->add_option("--prime-test", f.prime_test, "auto, psq or bases");
    cmd->add_option("--psq-table", f.psq_table, "pseudosquare table file (PSQ v1)");
}

std::optional<SieveBoundRule> bound_rule(const SearchFlags& f) {
    if (!f.sieve_bound.empty()) {
        const WideInt b = parse_wide(f.sieve_bound);
        if (b > ~std::uint64_t{0}) throw std::invalid_argument("sieve bound too large");
        return ExplicitBound{static_cast<std::uint64_t>(b)};
    }
    if (f.space_exp != 0) return SpaceExponent{f.space_exp};
    if (f.sqrt_bound) return SqrtBound{};
    return std::nullopt;
}

std::unique_ptr<PseudosquareTable> load_table(const std::string& path) {
    if (path.empty()) return nullptr;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open pseudosquare table " + path);
    return std::make_unique<PseudosquareTable>(PseudosquareTable::read(in));
}

CensusOptions census_options(const SearchFlags& f) {
    CensusOptions opts;
    opts.workers = f.workers;
    opts.bound_rule = bound_rule(f);
    if (!f.wheel_limit.empty()) opts.wheel_limit = parse_wide(f.wheel_limit);
    opts.excluded_wheel_primes = f.excluded;
    opts.prime_test = parse_prime_test(f.prime_test);
    if (!f.checkpoint.empty()) opts.checkpoint_path = f.checkpoint;
    opts.checkpoint_interval = std::chrono::seconds(f.checkpoint_interval);
    opts.control.stop_flag = &g_stop;
    return opts;
}

std::string format_sum(const KahanAccumulator& acc) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17Lg", acc.value());
    return buf;
}

int report_interrupt(bool interrupted) {
    if (!interrupted) return 0;
    std::cerr << "interrupted; rerun with the same arguments to resume\n";
    return 130;
}

int print_census(const TupleCensus& c) {
    std::cout << "count=" << c.count << "\n";
    std::cout << "sum=" << format_sum(c.recip_sum) << "\n";
    return report_interrupt(c.interrupted);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prime pattern search"};
    app.require_subcommand(1);

    SearchFlags flags;

    std::string pattern_text, n_text, out_path;
    bool unsorted = false, no_early_abort = false;
    auto* search = app.add_subcommand("search", "all x with every f_i(x) prime and max f_i(x) <= n");
    search->add_option("--pattern", pattern_text, "comma separated forms, e.g. \"x,x+2\"")->required();
    search->add_option("--n", n_text, "bound on the largest member")->required();
    search->add_flag("--unsorted", unsorted, "stream tuples as residues finish");
    search->add_option("--out", out_path, "write tuples here instead of stdout");
    search->add_flag("--no-early-abort", no_early_abort, "always apply every sieve prime");
    add_search_flags(search, flags);

    std::string x_text;
    auto* twins_cmd = app.add_subcommand("twins", "twin pairs (p, p+2) with p < X and their reciprocal sum");
    twins_cmd->add_option("--x", x_text, "X")->required();
    add_search_flags(twins_cmd, flags);
    auto* quads_cmd = app.add_subcommand("quads", "quadruplets with largest member < X and their reciprocal sum");
    quads_cmd->add_option("--x", x_text, "X")->required();
    add_search_flags(quads_cmd, flags);

    std::string kind_text = "first", cap_text;
    unsigned length = 0;
    auto* chains_cmd = app.add_subcommand("chains", "Cunningham chain starts up to a cap");
    chains_cmd->add_option("--kind", kind_text, "first or second");
    chains_cmd->add_option("--length", length, "primes in the chain")->required()->check(CLI::Range(1u, 120u));
    chains_cmd->add_option("--cap", cap_text, "largest start")->required();
    add_search_flags(chains_cmd, flags);

    std::string limit_text;
    std::string psq_out = "-";
    auto* psq_cmd = app.add_subcommand("pseudosquares", "generate the pseudosquare table up to a limit");
    psq_cmd->add_option("--limit", limit_text, "largest L_p")->required();
    psq_cmd->add_option("--out", psq_out, "output file, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    try {
        if (*search) {
            const Pattern pattern = parse_pattern(pattern_text);
            SearchConfig cfg = SearchConfig::defaults(pattern, parse_wide(n_text));
            const CensusOptions opts = census_options(flags);
            if (opts.bound_rule) cfg.bound_rule = *opts.bound_rule;
            cfg.wheel_limit = opts.wheel_limit;
            cfg.workers = opts.workers;
            cfg.excluded_wheel_primes = opts.excluded_wheel_primes;
            cfg.prime_test = opts.prime_test;
            cfg.checkpoint_path = opts.checkpoint_path;
            cfg.checkpoint_interval = opts.checkpoint_interval;
            cfg.early_abort.enabled = !no_early_abort;
            const auto table = load_table(flags.psq_table);
            cfg.table = table.get();

            std::ofstream file;
            if (!out_path.empty()) {
                file.open(out_path);
                if (!file) throw std::invalid_argument("cannot write " + out_path);
            }
            std::ostream& out = out_path.empty() ? std::cout : file;
            std::ostream& summary = out_path.empty() ? std::cerr : std::cout;

            SearchControl control = opts.control;
            if (unsorted) {
                cfg.collect_hits = false;
                control.on_hit = [&](WideInt x) { out << format_tuple(pattern, x) << '\n'; };
            }
            const SearchResult res = find_pattern_primes(cfg, control);
            for (WideInt x : res.hits) out << format_tuple(pattern, x) << '\n';
            out.flush();
            summary << "count=" << res.count << "\n";
            summary << "sum=" << format_sum(res.reciprocal_sum) << "\n";
            return report_interrupt(res.interrupted);
        }
        if (*twins_cmd) return print_census(twins(parse_wide(x_text), census_options(flags)));
        if (*quads_cmd) return print_census(quads(parse_wide(x_text), census_options(flags)));
        if (*chains_cmd) {
            const ChainKind kind = parse_chain_kind(kind_text);
            const auto starts = chain_search(kind, length, parse_wide(cap_text), census_options(flags));
            for (const ChainStart& c : starts)
                std::cout << to_string(c.x) << " length=" << c.length << (c.complete ? "" : " (continues a longer chain)")
                          << "\n";
            std::cout << "count=" << starts.size() << "\n";
            return 0;
        }
        if (*psq_cmd) {
            const PseudosquareTable table = compute_pseudosquares_fast(parse_wide(limit_text));
            if (psq_out == "-") {
                table.write(std::cout);
            } else {
                std::ofstream out(psq_out);
                if (!out) throw std::invalid_argument("cannot write " + psq_out);
                table.write(out);
            }
            std::cerr << "count=" << table.entries().size() << "\n";
            return 0;
        }
    } catch (const CheckpointError& e) {
        std::cerr << "checkpoint error: " << e.what() << "\n";
        return 4;
    } catch (const CapacityError& e) {
        std::cerr << "capacity exceeded: " << e.what() << "\n";
        return 3;
    } catch (const OverflowError& e) {
        std::cerr << "capacity exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
