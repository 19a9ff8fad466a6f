#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "rwk/mc.hpp"
#include "rwk/rng.hpp"
#include "rwk/summation.hpp"

using namespace rwk;

TEST_CASE("philox streams are deterministic and path-separated") {
    const SeedPath p{0x9E3779B97F4A7C15ull, 42, -3, 17};
    CHECK(Philox::generate(p) == Philox::generate(p));
    CHECK(standard_normal(p) == standard_normal(p));

    std::set<std::uint32_t> first_words;
    for (std::int64_t r = 0; r < 64; ++r)
        for (std::int64_t j = -4; j < 4; ++j)
            for (std::int64_t k = 0; k < 4; ++k)
                first_words.insert(Philox::generate(SeedPath{1, r, j, k})[0]);
    CHECK(first_words.size() == 64 * 8 * 4); // no collisions across distinct paths

    CHECK(Philox::generate(SeedPath{1, 0, 0, 0}) != Philox::generate(SeedPath{2, 0, 0, 0}));
}

TEST_CASE("normal draws have the right moments") {
    const std::int64_t n = 1000000;
    CompensatedSum s, s2, s4;
    for (std::int64_t i = 0; i < n; ++i) {
        const double z = standard_normal(SeedPath{7, i, 0, 0});
        s.add(z);
        s2.add(z * z);
        s4.add(z * z * z * z);
    }
    const double mean = s.value() / n;
    const double var = s2.value() / n - mean * mean;
    CHECK(std::abs(mean) < 4e-3);                 // ~4 sigma of the LLN oracle
    CHECK(std::abs(var - 1.0) < 0.01);
    CHECK(std::abs(s4.value() / n - 3.0) < 0.05); // Gaussian kurtosis
}

TEST_CASE("uniform draws stay in (0,1) with mean 1/2") {
    const std::int64_t n = 200000;
    CompensatedSum s;
    double lo = 1.0, hi = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double u = uniform(SeedPath{11, i, 5, 9});
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        s.add(u);
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(std::abs(s.value() / n - 0.5) < 3e-3);
}

TEST_CASE("wilson interval brackets the proportion") {
    // k=0 still yields a positive upper bound; k=n yields 1.
    CHECK(wilson_upper(0, 1000) > 0.0);
    CHECK(wilson_upper(0, 1000) < 0.01);
    CHECK(wilson_upper(1000, 1000) == 1.0);
    const double up = wilson_upper(50, 1000);
    const double lo = wilson_lower(50, 1000);
    CHECK(lo < 0.05);
    CHECK(up > 0.05);
    CHECK(up < 0.08);
}

TEST_CASE("replicate reduction is bit-identical across thread counts") {
    auto fn = [](std::int64_t i) { return std::sin(static_cast<double>(i)) * 1e-3 + 1.0; };
    const auto [s1, q1] = ReplicateReducer(1, 512).reduce(100001, fn);
    const auto [s2, q2] = ReplicateReducer(2, 512).reduce(100001, fn);
    const auto [s3, q3] = ReplicateReducer(7, 512).reduce(100001, fn);
    CHECK(s1 == s2);
    CHECK(s1 == s3);
    CHECK(q1 == q2);
    CHECK(q1 == q3);

    const auto v1 = ReplicateReducer(1, 64).reduce_vector(
        5000, 3, [](std::int64_t i, std::vector<double>& a) { a[i % 3] += 1.0 / (1.0 + i); });
    const auto v2 = ReplicateReducer(5, 64).reduce_vector(
        5000, 3, [](std::int64_t i, std::vector<double>& a) { a[i % 3] += 1.0 / (1.0 + i); });
    CHECK(v1 == v2);
}

TEST_CASE("compensated summation survives cancellation") {
    CompensatedSum s;
    s.add(1e30);
    s.add(1e-30);
    s.add(-1e30);
    CHECK(s.value() == 1e-30);
}

TEST_CASE("mc_from_moments basic shape") {
    const auto e = mc_from_moments(500.0, 300.0, 1000);
    CHECK(e.mean == doctest::Approx(0.5));
    CHECK(e.ci_low <= e.mean);
    CHECK(e.ci_high >= e.mean);
    CHECK(e.std_error > 0.0);
}
