#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace rwk {

/// Index set D over the full line (k in Z) or D+ over the half line (k >= 0).
enum class IndexDomain { HalfLine, FullLine };

/// Dyadic interval [k*2^-j, (k+1)*2^-j). Larger j means finer scale.
struct DyadicIndex {
    std::int64_t j = 0;
    std::int64_t k = 0;

    friend bool operator==(const DyadicIndex&, const DyadicIndex&) = default;
    friend auto operator<=>(const DyadicIndex&, const DyadicIndex&) = default;

    double length() const;
    double left() const;

    /// Parent interval (j-1, floor(k/2)).
    DyadicIndex parent() const;

    std::string to_string() const;
};

/// Nonnegative dyadic rational num*2^-depth, canonicalized so that the
/// numerator is odd or zero (zero is stored with depth 0).
struct DyadicPoint {
    std::int64_t num = 0;
    std::int64_t depth = 0;

    static DyadicPoint make(std::int64_t num, std::int64_t depth);

    double value() const;

    friend bool operator==(const DyadicPoint&, const DyadicPoint&) = default;

    std::string to_string() const;
};

/// Exact integer-arithmetic membership test for x in I.
bool contains(const DyadicIndex& I, const DyadicPoint& x);

/// Smallest dyadic interval containing both points, via the longest common
/// prefix of their binary expansions. Throws std::invalid_argument for a
/// degenerate pair (x == y).
DyadicIndex smallest_common(const DyadicPoint& x, const DyadicPoint& y);

/// delta(x,y) = inf{|I| : x,y in I}. Zero when x == y (infimum convention,
/// no single interval realizes it).
double dyadic_distance(const DyadicPoint& x, const DyadicPoint& y);

/// [I, parent(I), ...] with count+1 entries.
std::vector<DyadicIndex> ancestors(const DyadicIndex& I, int count);

} // namespace rwk
