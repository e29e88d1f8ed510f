#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracle.hpp"
#include "primepat/census.hpp"

using namespace primepat;

namespace {

// Twin pairs with p < X; quadruplets with largest member < X.
std::vector<std::uint64_t> twin_starts(std::uint64_t X) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t x : oracle::tuples(oracle::twin(), X + 1))
        if (x < X) out.push_back(x);
    return out;
}

std::vector<std::uint64_t> quad_starts(std::uint64_t X) { return oracle::tuples(oracle::quadruplet(), X - 1); }

}  // namespace

TEST_CASE("membership conventions") {
    // (5, 7): counted for X = 6 since 5 < 6, even though 7 > 6.
    CHECK(twins(6).count == 2);
    CHECK(twins(5).count == 1);
    CHECK(quads(10).count == 0);
    CHECK(quads(13).count == 0);
    CHECK(quads(14).count == 1);
    CHECK(quads(5050).count == 10);
    CHECK(twins(4).count == 1);
    CHECK(twins(3).count == 0);
    CHECK(twins(0).count == 0);
    CHECK(quads(0).count == 0);
    CHECK(quads(12).count == 0);
}

TEST_CASE("twins and quads match the oracle") {
    for (std::uint64_t X : {5ULL, 6ULL, 100ULL, 1000ULL, 65537ULL, 1000000ULL}) {
        const auto xs = twin_starts(X);
        const TupleCensus c = twins(X);
        REQUIRE(c.count == xs.size());
        const long double expect = oracle::reciprocal_sum(oracle::twin(), xs);
        CHECK(std::fabs(c.recip_sum.value() - expect) <= 1e-13L * std::max(expect, 1.0L));
    }
    for (std::uint64_t X : {13ULL, 14ULL, 5050ULL, 100000ULL, 1000000ULL}) {
        const auto xs = quad_starts(X);
        const TupleCensus c = quads(X);
        REQUIRE(c.count == xs.size());
        const long double expect = oracle::reciprocal_sum(oracle::quadruplet(), xs);
        CHECK(std::fabs(c.recip_sum.value() - expect) <= 1e-13L * std::max(expect, 1.0L));
    }
}

TEST_CASE("census options change nothing but speed") {
    CensusOptions opts;
    opts.workers = 3;
    opts.bound_rule = SpaceExponent{3};
    const TupleCensus a = twins(2000000), b = twins(2000000, opts);
    CHECK(a.count == b.count);
    CHECK(std::fabs(a.recip_sum.value() - b.recip_sum.value()) <= 1e-15L);
    // Same configuration twice: bit-identical sums.
    CHECK(twins(2000000, opts).recip_sum == b.recip_sum);
}

TEST_CASE("chain search") {
    const auto first6 = chain_search(ChainKind::First, 6, 100000);
    REQUIRE_FALSE(first6.empty());
    CHECK(first6.front().x == 89);
    CHECK(first6.front().length == 6);
    CHECK(first6.front().complete);

    std::vector<WideInt> second2;
    for (const ChainStart& c : chain_search(ChainKind::Second, 2, 100)) second2.push_back(c.x);
    CHECK(second2 == std::vector<WideInt>{2, 3, 7, 19, 31, 37, 79, 97});

    // Every start with its true forward length and completeness.
    const auto first2 = chain_search(ChainKind::First, 2, 50000);
    std::vector<WideInt> expect;
    for (std::uint64_t x : oracle::tuples(oracle::chain(true, 2), 2 * 50000 + 1)) expect.push_back(x);
    REQUIRE(first2.size() == expect.size());
    for (std::size_t i = 0; i < first2.size(); ++i) {
        const std::uint64_t x = static_cast<std::uint64_t>(first2[i].x);
        REQUIRE(first2[i].x == expect[i]);
        unsigned len = 0;
        for (std::uint64_t v = x; oracle::is_prime_td(v); v = 2 * v + 1) ++len;
        REQUIRE(first2[i].length == len);
        REQUIRE(first2[i].complete == (x % 2 == 0 || !oracle::is_prime_td((x - 1) / 2)));
    }
}
