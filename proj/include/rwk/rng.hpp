#pragma once

#include <array>
#include <cstdint>

#include "rwk/dyadic.hpp"

namespace rwk {

/// Address of one random draw: the stream is a pure function of all four
/// fields, so realizations are reproducible under any parallel schedule.
struct SeedPath {
    std::uint64_t master_seed = 0;
    std::int64_t replicate = 0;
    std::int64_t j = 0;
    std::int64_t k = 0;

    SeedPath with_index(const DyadicIndex& I) const {
        return SeedPath{master_seed, replicate, I.j, I.k};
    }

    friend bool operator==(const SeedPath&, const SeedPath&) = default;
};

/// Philox4x32-10 block cipher (Salmon et al., SC 2011).
/// Counter = (replicate, j, k-low, k-high ^ subcounter), key = master seed.
class Philox {
public:
    using Block = std::array<std::uint32_t, 4>;

    static Block generate(const SeedPath& path, std::uint32_t subcounter = 0);

    /// Uniform double in (0,1), 53 random bits, never exactly 0 or 1.
    static double uniform01(std::uint32_t lo, std::uint32_t hi);
};

/// One standard normal draw (Box-Muller on one Philox block).
double standard_normal(const SeedPath& path, std::uint32_t subcounter = 0);

/// One uniform draw in (0,1).
double uniform(const SeedPath& path, std::uint32_t subcounter = 0);

} // namespace rwk
