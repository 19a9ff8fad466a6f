#include "rwk/rng.hpp"

#include <cmath>
#include <numbers>

namespace rwk {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0, std::uint32_t k1) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

} // namespace

Philox::Block Philox::generate(const SeedPath& path, std::uint32_t subcounter) {
    // Injective packing for |j| < 2^15, -2^31 < k < 2^45, subcounter < 4;
    // every configuration the library ships stays far inside that box.
    const std::uint64_t rep = static_cast<std::uint64_t>(path.replicate);
    const std::uint32_t j16 = static_cast<std::uint32_t>(path.j) & 0xFFFFu;
    const std::uint32_t kmid = static_cast<std::uint32_t>(static_cast<std::uint64_t>(path.k) >> 32) & 0x3FFFu;
    Block c = {
        static_cast<std::uint32_t>(rep),
        static_cast<std::uint32_t>(rep >> 32),
        static_cast<std::uint32_t>(static_cast<std::uint64_t>(path.k)),
        (j16 << 16) | (kmid << 2) | (subcounter & 3u),
    };
    std::uint32_t k0 = static_cast<std::uint32_t>(path.master_seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(path.master_seed >> 32);
    for (int r = 0; r < 10; ++r) {
        philox_round(c, k0, k1);
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    return c;
}

double Philox::uniform01(std::uint32_t lo, std::uint32_t hi) {
    const std::uint64_t bits53 = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits53) + 0.5) * 0x1.0p-53;
}

double standard_normal(const SeedPath& path, std::uint32_t subcounter) {
    const auto b = Philox::generate(path, subcounter);
    const double u1 = Philox::uniform01(b[0], b[1]);
    const double u2 = Philox::uniform01(b[2], b[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double uniform(const SeedPath& path, std::uint32_t subcounter) {
    const auto b = Philox::generate(path, subcounter);
    return Philox::uniform01(b[0], b[1]);
}

} // namespace rwk
