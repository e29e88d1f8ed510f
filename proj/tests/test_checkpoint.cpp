#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "primepat/checkpoint.hpp"
#include "primepat/kahan.hpp"

using namespace primepat;

TEST_CASE("Kahan accumulation") {
    KahanAccumulator a;
    a.add(0);
    CHECK(a.value() == 0);
    KahanAccumulator b;
    for (int i = 0; i < 10000000; ++i) b.add(1e-7L);
    CHECK(std::fabs(b.value() - 1.0L) <= 1e-13L);
    KahanAccumulator c = b;
    c.merge(KahanAccumulator{});
    CHECK(c == b);

    // Uncompensated long double summation drifts far more on the same data.
    long double naive = 0;
    for (int i = 0; i < 10000000; ++i) naive += 1e-7L;
    CHECK(std::fabs(b.value() - 1.0L) < std::fabs(naive - 1.0L));
}

TEST_CASE("bucket totals are order deterministic") {
    KahanBuckets x, y;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(0, 1);
    std::vector<std::pair<std::size_t, long double>> adds;
    for (int i = 0; i < 50000; ++i) adds.emplace_back(rng() % 10000, 1.0L / (1 + d(rng) * 1e9));
    for (auto [b, v] : adds) x.add(b, v);
    for (auto [b, v] : adds) y.add(b, v);
    CHECK(x == y);
    CHECK(x.total() == y.total());

    KahanBuckets half1, half2, merged;
    for (std::size_t i = 0; i < adds.size(); ++i) (i % 2 ? half1 : half2).add(adds[i].first, adds[i].second);
    merged.merge(half1);
    merged.merge(half2);
    CHECK(std::fabs(merged.total().value() - x.total().value()) <= 1e-15L * x.total().value());
}

namespace {

Checkpoint sample(std::mt19937_64& rng) {
    Checkpoint cp;
    cp.digest = rng();
    cp.pattern = "x,x+2,x+6,x+8";
    cp.n = (static_cast<WideInt>(rng()) << 40) | rng();
    cp.workers = 1 + rng() % 5;
    cp.residues = rng() % 1000000000;
    for (std::uint64_t i = 0; i < cp.workers; ++i) {
        StripeState s;
        s.index = i;
        s.position = rng() % 1000;
        s.done = rng() % 2;
        s.cursor = {rng() % 2, rng() % 7, rng() % 11};
        s.residues_done = rng() % 100000;
        s.found = rng() % 5000;
        for (int k = 0; k < 40; ++k) {
            const std::size_t b = rng() % s.sums.size();
            s.sums.add(b, 1.0L / static_cast<long double>(1 + rng() % 1000000007));
            s.sums.add(b, std::ldexp(1.0L, -static_cast<int>(rng() % 200)));
        }
        for (int k = 0; k < static_cast<int>(rng() % 40); ++k) s.hits.push_back(((static_cast<WideInt>(rng()) << 64) | rng()) & kWideMax);
        cp.stripes.push_back(std::move(s));
    }
    return cp;
}

}  // namespace

TEST_CASE("checkpoint text round trip is exact") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 200; ++i) {
        const Checkpoint cp = sample(rng);
        const std::string text = serialize_checkpoint(cp);
        REQUIRE(parse_checkpoint(text) == cp);
        REQUIRE(serialize_checkpoint(parse_checkpoint(text)) == text);
    }
}

TEST_CASE("corrupt checkpoints are refused") {
    std::mt19937_64 rng(43);
    const std::string text = serialize_checkpoint(sample(rng));
    CHECK_THROWS_AS(parse_checkpoint(text.substr(0, text.size() / 2)), CheckpointError);
    std::string flipped = text;
    flipped[text.find("pattern") + 9] ^= 1;
    CHECK_THROWS_AS(parse_checkpoint(flipped), CheckpointError);
    CHECK_THROWS_AS(parse_checkpoint(""), CheckpointError);
    CHECK_THROWS_AS(parse_checkpoint("garbage\nend 0\n"), CheckpointError);
}

TEST_CASE("files are replaced atomically") {
    const auto dir = std::filesystem::temp_directory_path() / "primepat_ckpt_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "state.ckpt";
    std::mt19937_64 rng(44);
    const Checkpoint a = sample(rng), b = sample(rng);
    save_checkpoint(a, path);
    CHECK(load_checkpoint(path) == a);
    save_checkpoint(b, path);
    CHECK(load_checkpoint(path) == b);
    CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    CHECK_THROWS_AS(load_checkpoint(dir / "missing.ckpt"), CheckpointError);
    std::filesystem::remove_all(dir);
}
