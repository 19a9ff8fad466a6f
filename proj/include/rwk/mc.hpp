#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rwk/summation.hpp"

namespace rwk {

/// Two-sided normal quantile for the default 99% confidence level.
inline constexpr double kZ99 = 2.5758293035489004;

/// Monte Carlo estimate with a two-sided confidence interval
/// (99% by default throughout the library).
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;

    double ci_half_width() const { return 0.5 * (ci_high - ci_low); }
};

McEstimate mc_from_moments(double sum, double sum_sq, std::int64_t n, double z = kZ99);

/// Wilson score interval for a binomial proportion; the upper bound is what
/// every tail-vs-bound verdict compares against.
double wilson_upper(std::int64_t successes, std::int64_t n, double z = kZ99);
double wilson_lower(std::int64_t successes, std::int64_t n, double z = kZ99);

/// Deterministic parallel map-reduce over replicate indices.
///
/// The replicate range is split into fixed blocks; each block is reduced
/// sequentially and block results are combined in index order, so the result
/// is bit-identical for any thread count.
class ReplicateReducer {
public:
    explicit ReplicateReducer(int threads = 0, std::int64_t block_size = 8192);

    /// fn(i) is evaluated once for every replicate i in [0, n).
    /// Returns (sum of values, sum of squares).
    std::pair<double, double> reduce(std::int64_t n, const std::function<double(std::int64_t)>& fn) const;

    /// Accumulates a vector-valued statistic: fn(i, acc) must add replicate
    /// i's contribution into acc (one accumulator per block, combined in
    /// block order).
    std::vector<double> reduce_vector(std::int64_t n, std::size_t dim,
                                      const std::function<void(std::int64_t, std::vector<double>&)>& fn) const;

    McEstimate estimate(std::int64_t n, const std::function<double(std::int64_t)>& fn, double z = kZ99) const;

    int threads() const { return threads_; }

private:
    int threads_;
    std::int64_t block_size_;
};

} // namespace rwk
