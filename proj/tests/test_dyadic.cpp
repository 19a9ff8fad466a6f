#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "rwk/dyadic.hpp"

using namespace rwk;

namespace {

// Independent oracle: walk candidate scales from fine to coarse and return
// the first interval (the one containing x) that also contains y.
DyadicIndex smallest_common_oracle(const DyadicPoint& x, const DyadicPoint& y) {
    const std::int64_t D = std::max(x.depth, y.depth);
    for (std::int64_t j = D; j >= -60; --j) {
        // interval at scale j containing x
        std::int64_t k;
        if (x.depth >= j) {
            k = x.num >> (x.depth - j);
        } else {
            k = x.num << (j - x.depth);
        }
        const DyadicIndex I{j, k};
        if (contains(I, x) && contains(I, y)) return I;
    }
    FAIL("oracle found no common interval");
    return {};
}

DyadicPoint pt(std::int64_t num, std::int64_t depth) { return DyadicPoint::make(num, depth); }

} // namespace

TEST_CASE("contains decides interval membership exactly") {
    CHECK(contains(DyadicIndex{0, 0}, pt(0, 0)));        // left endpoint included
    CHECK_FALSE(contains(DyadicIndex{0, 0}, pt(1, 0)));  // right endpoint excluded
    CHECK(contains(DyadicIndex{1, 1}, pt(3, 2)));        // 0.75 in [0.5, 1)
    CHECK_FALSE(contains(DyadicIndex{1, 1}, pt(1, 2)));
    CHECK(contains(DyadicIndex{-1, 0}, pt(3, 1)));       // 1.5 in [0, 2)
}

TEST_CASE("smallest_common matches the binary-prefix examples") {
    // x = 3/32, y = 5/16 -> [0, 1/2)
    CHECK(smallest_common(pt(3, 5), pt(5, 4)) == DyadicIndex{1, 0});
    // x = 7/16, y = 9/16 straddle 1/2 -> [0, 1)
    CHECK(smallest_common(pt(7, 4), pt(9, 4)) == DyadicIndex{0, 0});
    // x = 1/4, y = 3/4 -> [0, 1)
    CHECK(smallest_common(pt(1, 2), pt(3, 2)) == DyadicIndex{0, 0});

    CHECK_THROWS_AS(smallest_common(pt(1, 2), pt(2, 3)), std::invalid_argument); // equal points
}

TEST_CASE("smallest_common agrees with the containment-search oracle") {
    for (std::int64_t a = 0; a < 64; ++a) {
        for (std::int64_t b = 0; b < 64; ++b) {
            if (a == b) continue;
            const auto x = pt(a, 5), y = pt(b, 5);
            const DyadicIndex got = smallest_common(x, y);
            const DyadicIndex want = smallest_common_oracle(x, y);
            CHECK(got == want);
            CHECK(contains(got, x));
            CHECK(contains(got, y));
            // minimality: the two children cannot both contain the pair
            const DyadicIndex left{got.j + 1, 2 * got.k}, right{got.j + 1, 2 * got.k + 1};
            const bool both_left = contains(left, x) && contains(left, y);
            const bool both_right = contains(right, x) && contains(right, y);
            CHECK_FALSE(both_left);
            CHECK_FALSE(both_right);
        }
    }
}

TEST_CASE("dyadic_distance values and domination of |x-y|") {
    CHECK(dyadic_distance(pt(1, 1), pt(1, 1)) == 0.0);
    CHECK(dyadic_distance(pt(3, 5), pt(5, 4)) == 0.5);
    // 7/16 vs 9/16: delta = 1 while |x-y| = 1/8
    CHECK(dyadic_distance(pt(7, 4), pt(9, 4)) == 1.0);

    for (std::int64_t a = 0; a < 64; ++a) {
        for (std::int64_t b = a + 1; b < 64; ++b) {
            const auto x = pt(a, 5), y = pt(b, 5);
            const double d = dyadic_distance(x, y);
            CHECK(d >= std::abs(x.value() - y.value()));
            CHECK(d == std::ldexp(1.0, -static_cast<int>(smallest_common(x, y).j)));
        }
    }
}

TEST_CASE("dyadic_distance is an ultrametric on a small grid") {
    std::vector<DyadicPoint> pts;
    for (std::int64_t a = 0; a < 32; ++a) pts.push_back(pt(a, 4)); // [0,2) at depth 4
    for (const auto& x : pts)
        for (const auto& y : pts)
            for (const auto& z : pts) {
                const double dxz = dyadic_distance(x, z);
                const double m = std::max(dyadic_distance(x, y), dyadic_distance(y, z));
                CHECK(dxz <= m);
            }
}

TEST_CASE("ancestors chain doubles in length") {
    const auto chain = ancestors(DyadicIndex{2, 1}, 2);
    REQUIRE(chain.size() == 3);
    CHECK(chain[0] == DyadicIndex{2, 1});
    CHECK(chain[1] == DyadicIndex{1, 0});
    CHECK(chain[2] == DyadicIndex{0, 0});

    const auto above = ancestors(DyadicIndex{0, 0}, 1);
    CHECK(above[1] == DyadicIndex{-1, 0}); // D+ continues above unit scale

    CHECK(ancestors(DyadicIndex{5, 17}, 0).size() == 1);

    const auto deep = ancestors(DyadicIndex{10, 1023}, 15);
    for (std::size_t l = 0; l + 1 < deep.size(); ++l) {
        CHECK(deep[l + 1] == deep[l].parent());
        CHECK(deep[l + 1].length() == 2.0 * deep[l].length());
        CHECK(contains(deep[l + 1], pt(1023, 10)) == contains(deep[l], pt(1023, 10)) ||
              contains(deep[l + 1], pt(1023, 10)));
    }
}

TEST_CASE("DyadicPoint canonicalization") {
    CHECK(pt(4, 4) == pt(1, 2));   // 4/16 == 1/4
    CHECK(pt(0, 7) == pt(0, 0));
    CHECK(pt(6, 1) == pt(3, 0));   // integer 3
    CHECK(pt(2, 0).value() == 2.0);
    CHECK(pt(2, 0).num == 1);      // 2 = 1 * 2^1, depth -1
    CHECK(pt(2, 0).depth == -1);
    CHECK_THROWS_AS(pt(-1, 0), std::invalid_argument);
}
