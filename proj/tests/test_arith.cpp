#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracle.hpp"
#include "primepat/arith.hpp"

using namespace primepat;
using oracle::from_mpz;
using oracle::to_mpz;

namespace {

WideInt random_wide(std::mt19937_64& rng, unsigned bits) {
    WideInt v = (static_cast<WideInt>(rng()) << 64) | rng();
    if (bits < 128) v &= (WideInt{1} << bits) - 1;
    return v;
}

}  // namespace

TEST_CASE("mulmod small cases") {
    CHECK(mulmod(0, 5, 7) == 0);
    CHECK(mulmod(1, 5, 7) == 5);
    CHECK_THROWS_AS(mulmod(1, 1, 0), std::domain_error);
    const WideInt m = (WideInt{1} << 89) + 1;
    const WideInt a = 1000000000000000000ULL;
    const mpz_class expect = (to_mpz(a) * to_mpz(a)) % to_mpz(m);
    CHECK(mulmod(a, a, m) == from_mpz(expect));
}

TEST_CASE("mulmod and powmod agree with GMP on random operands") {
    std::mt19937_64 rng(20240611);
    for (int i = 0; i < 100000; ++i) {
        const unsigned bits = 2 + static_cast<unsigned>(rng() % 126);
        WideInt m = random_wide(rng, bits);
        if (m < 2) m = 2;
        if (m > kWideMax) m = kWideMax;
        const WideInt a = random_wide(rng, 128) % m;
        const WideInt b = random_wide(rng, 128) % m;
        const mpz_class M = to_mpz(m);
        REQUIRE(mulmod(a, b, m) == from_mpz((to_mpz(a) * to_mpz(b)) % M));
        if (i % 10 == 0) {
            const WideInt e = random_wide(rng, static_cast<unsigned>(1 + rng() % 127));
            mpz_class r;
            mpz_powm(r.get_mpz_t(), to_mpz(a).get_mpz_t(), to_mpz(e).get_mpz_t(), M.get_mpz_t());
            REQUIRE(powmod(a, e, m) == from_mpz(r));
        }
    }
}

TEST_CASE("powmod edge cases") {
    CHECK(powmod(7, 0, 13) == 1);
    CHECK(powmod(7, 1, 13) == 7);
    CHECK(powmod(2, 1023, 2047) == 1);
    CHECK(powmod(5, 3, 1) == 0);
    CHECK_THROWS_AS(powmod(2, 3, 0), std::domain_error);
    // Odd moduli just under the width cap take the Montgomery path.
    const WideInt m = kWideMax;
    mpz_class r;
    mpz_powm(r.get_mpz_t(), mpz_class(3).get_mpz_t(), to_mpz(m - 1).get_mpz_t(), to_mpz(m).get_mpz_t());
    CHECK(powmod(3, m - 1, m) == from_mpz(r));
}

TEST_CASE("modinv") {
    CHECK(modinv(1, 9) == 1);
    CHECK(modinv(3, 7) == 5);
    CHECK_THROWS_AS(modinv(2, 4), NotInvertibleError);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20000; ++i) {
        WideInt m = random_wide(rng, 2 + static_cast<unsigned>(rng() % 125));
        if (m < 2) m = 2;
        const WideInt a = random_wide(rng, 128) % m;
        if (gcd(a, m) != 1) {
            CHECK_THROWS_AS(modinv(a, m), NotInvertibleError);
            continue;
        }
        mpz_class inv;
        mpz_invert(inv.get_mpz_t(), to_mpz(a).get_mpz_t(), to_mpz(m).get_mpz_t());
        REQUIRE(modinv(a, m) == from_mpz(inv));
    }
}

TEST_CASE("checked arithmetic overflows loudly") {
    CHECK(checked_add(WideInt{1}, WideInt{2}) == 3);
    CHECK_THROWS_AS(checked_add(kWideMax, WideInt{1}), OverflowError);
    CHECK_THROWS_AS(checked_mul(WideInt{1} << 64, WideInt{1} << 63), OverflowError);
    CHECK(checked_mul(WideInt{1} << 63, WideInt{1} << 63) == WideInt{1} << 126);
    CHECK(checked_mul(WideSigned{-3}, WideSigned{5}) == -15);
    CHECK_THROWS_AS(checked_mul(WideSigned{1} << 100, WideSigned{-(WideSigned{1} << 30)}), OverflowError);
}

TEST_CASE("mod_floor normalizes negatives") {
    CHECK(mod_floor(-1, 7) == 6);
    CHECK(mod_floor(-14, 7) == 0);
    CHECK(mod_floor(15, 7) == 1);
}

TEST_CASE("isqrt, iroot and perfect powers against GMP") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 20000; ++i) {
        const WideInt n = random_wide(rng, 1 + static_cast<unsigned>(rng() % 127));
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), to_mpz(n).get_mpz_t());
        REQUIRE(isqrt(n) == from_mpz(r));
        const unsigned k = 2 + static_cast<unsigned>(rng() % 9);
        mpz_root(r.get_mpz_t(), to_mpz(n).get_mpz_t(), k);
        REQUIRE(iroot(n, k) == from_mpz(r));
        REQUIRE(is_perfect_power(n) == (n > 1 && mpz_perfect_power_p(to_mpz(n).get_mpz_t()) != 0));
    }
    CHECK(is_perfect_power(WideInt{3} * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3));
    CHECK(is_perfect_power(WideInt{1} << 126));
    CHECK_FALSE(is_perfect_power((WideInt{1} << 126) + 1));
    CHECK(isqrt(kWideMax) == from_mpz(sqrt(to_mpz(kWideMax))));
}

TEST_CASE("decimal conversion") {
    CHECK(to_string(WideInt{0}) == "0");
    CHECK(to_string(kWideMax) == "170141183460469231731687303715884105727");
    CHECK(parse_wide("170141183460469231731687303715884105727") == kWideMax);
    CHECK(parse_wide("1e16") == WideInt{10000000000000000ULL});
    CHECK(parse_wide("2_759_832_934_171_386_593_519") == from_mpz(mpz_class("2759832934171386593519")));
    CHECK(to_string(WideSigned{-42}) == "-42");
    CHECK(parse_signed_wide("-42") == -42);
    CHECK_THROWS_AS(parse_wide("12a"), std::invalid_argument);
    CHECK_THROWS(parse_wide("170141183460469231731687303715884105728"));
    CHECK(ilog2(1) == 0);
    CHECK(ilog2(WideInt{1} << 100) == 100);
}
