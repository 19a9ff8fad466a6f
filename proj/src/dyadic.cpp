#include "rwk/dyadic.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace rwk {

namespace {

std::int64_t floor_div2(std::int64_t k) {
    // floor(k/2) also for negative k
    return (k >= 0) ? (k >> 1) : -((-k + 1) >> 1);
}

int bit_width_u64(std::uint64_t v) { return static_cast<int>(std::bit_width(v)); }

} // namespace

double DyadicIndex::length() const { return std::ldexp(1.0, static_cast<int>(-j)); }

double DyadicIndex::left() const { return std::ldexp(static_cast<double>(k), static_cast<int>(-j)); }

DyadicIndex DyadicIndex::parent() const { return DyadicIndex{j - 1, floor_div2(k)}; }

std::string DyadicIndex::to_string() const {
    return "(j=" + std::to_string(j) + ",k=" + std::to_string(k) + ")";
}

DyadicPoint DyadicPoint::make(std::int64_t num, std::int64_t depth) {
    if (num < 0) throw std::invalid_argument("DyadicPoint: numerator must be nonnegative");
    if (num == 0) return DyadicPoint{0, 0};
    while ((num & 1) == 0) {
        num >>= 1;
        --depth;
    }
    return DyadicPoint{num, depth};
}

double DyadicPoint::value() const { return std::ldexp(static_cast<double>(num), static_cast<int>(-depth)); }

std::string DyadicPoint::to_string() const {
    return std::to_string(num) + "*2^-" + std::to_string(depth);
}

bool contains(const DyadicIndex& I, const DyadicPoint& x) {
    // Compare at the common denominator 2^-E with E = max(depth, j).
    const std::int64_t E = std::max(x.depth, I.j);
    const int sx = static_cast<int>(E - x.depth);
    const int si = static_cast<int>(E - I.j);
    if (sx > 62 || si > 62) throw std::invalid_argument("contains: scale gap too large for exact arithmetic");
    const __int128 xv = static_cast<__int128>(x.num) << sx;
    const __int128 lo = static_cast<__int128>(I.k) << si;
    const __int128 hi = static_cast<__int128>(I.k + 1) << si;
    return lo <= xv && xv < hi;
}

DyadicIndex smallest_common(const DyadicPoint& x, const DyadicPoint& y) {
    if (x == y) throw std::invalid_argument("smallest_common: degenerate pair");
    const std::int64_t D = std::max(x.depth, y.depth);
    const int sx = static_cast<int>(D - x.depth);
    const int sy = static_cast<int>(D - y.depth);
    if (sx > 62 || sy > 62) throw std::invalid_argument("smallest_common: depth gap too large");
    const std::uint64_t a = static_cast<std::uint64_t>(x.num) << sx;
    const std::uint64_t b = static_cast<std::uint64_t>(y.num) << sy;
    // The points first separate at the bit where their expansions differ;
    // shifting past it yields the common prefix, i.e. the translation index.
    const int s = bit_width_u64(a ^ b);
    return DyadicIndex{D - s, static_cast<std::int64_t>(a >> s)};
}

double dyadic_distance(const DyadicPoint& x, const DyadicPoint& y) {
    if (x == y) return 0.0;
    const DyadicIndex I = smallest_common(x, y);
    return I.length();
}

std::vector<DyadicIndex> ancestors(const DyadicIndex& I, int count) {
    if (count < 0) throw std::invalid_argument("ancestors: count must be nonnegative");
    std::vector<DyadicIndex> chain;
    chain.reserve(static_cast<std::size_t>(count) + 1);
    chain.push_back(I);
    for (int l = 0; l < count; ++l) chain.push_back(chain.back().parent());
    return chain;
}

} // namespace rwk
