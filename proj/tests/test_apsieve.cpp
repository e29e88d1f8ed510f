#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracle.hpp"
#include "primepat/apsieve.hpp"
#include "primepat/small_primes.hpp"
#include "primepat/wheel.hpp"

using namespace primepat;

namespace {

// x = r + jW for j in [j0, j0+len) with x >= 1 and no form divisible by a
// prime of S.
std::vector<WideInt> brute_survivors(const Pattern& p, WideInt r, WideInt W, std::uint64_t j0, std::uint64_t len,
                                     std::span<const std::uint64_t> S) {
    std::vector<WideInt> out;
    for (std::uint64_t j = j0; j < j0 + len; ++j) {
        const WideInt x = r + static_cast<WideInt>(j) * W;
        if (x == 0) continue;
        bool ok = true;
        for (std::uint64_t q : S)
            for (const LinearForm& f : p.forms())
                if (mod_floor(f.eval(x), q) == 0) ok = false;
        if (ok) out.push_back(x);
    }
    return out;
}

}  // namespace

TEST_CASE("sieve bound rules") {
    CHECK(make_plan(WideInt{1} << 30, SpaceExponent{3}).bound == 1024);
    CHECK(make_plan(WideInt{1} << 30, SqrtBound{}).bound == 32768);
    CHECK(make_plan(1000000, SqrtBound{}).bound == 1000);
    CHECK(make_plan(5050, ExplicitBound{20}, WideInt{210}).sieve_primes == std::vector<std::uint64_t>{11, 13, 17, 19});
    CHECK(make_plan(5050, ExplicitBound{20}, WideInt{210}).wheel_primes == std::vector<std::uint64_t>{2, 3, 5, 7});
    CHECK(make_plan(5050, ExplicitBound{20}, WideInt{210}).cut() == 20);
    CHECK_THROWS_AS(make_plan(1000, ExplicitBound{1}), std::invalid_argument);
    CHECK_THROWS_AS(make_plan(3, SqrtBound{}), std::invalid_argument);
    CHECK_THROWS_AS(make_plan(WideInt{1} << 100, SqrtBound{}), std::invalid_argument);

    // Default wheel limit n/B, excluded primes move to S.
    const std::uint64_t skip[] = {5};
    const SievePlan p = make_plan(1000000, SqrtBound{}, std::nullopt, skip);
    CHECK(p.wheel_primes == std::vector<std::uint64_t>{2, 3, 7, 11});
    CHECK(p.sieve_primes.front() == 5);
    CHECK(p.sieve_primes.back() == 997);
    // Wheel primes above B push the cut past B.
    CHECK(make_plan(10000, ExplicitBound{5}, WideInt{30030}).cut() == 13);
}

TEST_CASE("worked segment r = 11 mod 210") {
    const Pattern q = patterns::quadruplet();
    const std::vector<std::uint64_t> S = {11, 13, 17, 19};
    const SieveSegment seg = sieve_segment(q, 11, 210, 5050, S);
    CHECK(seg.survivors() == std::vector<WideInt>{851, 1481, 3161});

    const std::vector<std::uint64_t> only11 = {11};
    const SieveSegment first = sieve_segment(q, 11, 210, 5050, only11);
    std::vector<WideInt> cleared;
    for (std::uint64_t j = 0; j < first.length(); ++j)
        if (!first.alive(j)) cleared.push_back(first.x(j));
    CHECK(cleared == std::vector<WideInt>{11, 641, 1061, 1901, 2321, 2951, 3371, 4211, 4631});

    const SieveSegment none = sieve_segment(q, 11, 210, 5050, {});
    CHECK(none.live_count() == none.length());
}

TEST_CASE("survivor listing") {
    const Pattern q = patterns::quadruplet();
    ProgressionSieve empty(q, 210, {});
    CHECK(empty.sieve(11, 0, 3, EarlyAbort{.enabled = false}).survivors() == std::vector<WideInt>{11, 221, 431});
    SieveSegment seg = empty.sieve(11, 0, 130, EarlyAbort{.enabled = false});
    for (std::uint64_t j = 0; j < 130; ++j) seg.clear(j);
    CHECK(seg.survivors().empty());
    CHECK(seg.live_count() == 0);
}

TEST_CASE("segments agree with brute force") {
    std::mt19937_64 rng(11);
    const std::vector<Pattern> corpus = {patterns::twin(), patterns::triplet_a(), patterns::triplet_b(),
                                         patterns::quadruplet(), patterns::chernick(),
                                         chain_pattern(ChainKind::First, 3), chain_pattern(ChainKind::Second, 3)};
    const std::vector<std::uint64_t> small = primes_up_to(200);
    for (const Pattern& p : corpus)
        for (WideInt limit : {WideInt{6}, WideInt{30}, WideInt{210}, WideInt{2310}}) {
            Wheel w = Wheel::build(p, limit);
            std::vector<std::uint64_t> S;
            for (std::uint64_t s : small)
                if (w.modulus() % s != 0) S.push_back(s);
            const ProgressionSieve sieve(p, w.modulus(), S);
            int checked = 0;
            while (auto r = w.next_residue()) {
                if (checked++ > 40) break;
                const std::uint64_t j0 = rng() % 50;
                const std::uint64_t len = 1 + rng() % 700;
                const SieveSegment seg = sieve.sieve(*r, j0, len, EarlyAbort{.enabled = false});
                REQUIRE(seg.survivors() == brute_survivors(p, *r, w.modulus(), j0, len, S));
                REQUIRE(seg.primes_applied() == S.size());
                REQUIRE_FALSE(seg.aborted());
            }
        }
}

TEST_CASE("residue 0 excludes x = 0") {
    // Chernick forms never vanish mod 2 or 3, so r = 0 is an acceptable residue.
    const Pattern c = patterns::chernick();
    const ProgressionSieve sieve(c, 6, std::vector<std::uint64_t>{5, 7});
    const SieveSegment seg = sieve.sieve(0, 0, 10, EarlyAbort{.enabled = false});
    CHECK_FALSE(seg.alive(0));
    CHECK(seg.survivors() == brute_survivors(c, 0, 6, 0, 10, std::vector<std::uint64_t>{5, 7}));
}

TEST_CASE("segment length honours max f_i <= n") {
    const Pattern q = patterns::quadruplet();
    const ProgressionSieve sieve(q, 210, {});
    CHECK(sieve.segment_length(11, 5050) == 24);   // 11 + 23*210 + 8 = 4849
    CHECK(sieve.segment_length(191, 198) == 0);
    CHECK(sieve.segment_length(191, 199) == 1);
}

TEST_CASE("early abort stops on a prefix of S") {
    const Pattern t = patterns::twin();
    const SievePlan plan = make_plan(WideInt{1} << 40, SpaceExponent{3}, WideInt{30});
    const ProgressionSieve sieve(t, 30, plan.sieve_primes);
    const EarlyAbort eager{.enabled = true, .positions_per_live = 2, .check_every = 4};
    const SieveSegment seg = sieve.sieve(11, 0, 4000, eager);
    CHECK(seg.aborted());
    CHECK(seg.primes_applied() < plan.sieve_primes.size());
    CHECK(seg.primes_applied() % 4 == 0);
    const std::span<const std::uint64_t> prefix(plan.sieve_primes.data(), seg.primes_applied());
    CHECK(seg.survivors() == brute_survivors(t, 11, 30, 0, 4000, prefix));
    CHECK_THROWS(ProgressionSieve(t, 30, std::vector<std::uint64_t>{3, 7}));
}
