#include "rwk/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace rwk {

McEstimate mc_from_moments(double sum, double sum_sq, std::int64_t n, double z) {
    if (n <= 0) throw std::invalid_argument("mc_from_moments: n must be positive");
    McEstimate e;
    e.n = n;
    e.mean = sum / static_cast<double>(n);
    const double var = std::max(0.0, sum_sq / static_cast<double>(n) - e.mean * e.mean);
    e.std_error = (n > 1) ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
    e.ci_low = e.mean - z * e.std_error;
    e.ci_high = e.mean + z * e.std_error;
    return e;
}

double wilson_upper(std::int64_t successes, std::int64_t n, double z) {
    if (n <= 0) throw std::invalid_argument("wilson_upper: n must be positive");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = p + z2 / (2.0 * nn);
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    return std::min(1.0, (center + half) / denom);
}

double wilson_lower(std::int64_t successes, std::int64_t n, double z) {
    if (n <= 0) throw std::invalid_argument("wilson_lower: n must be positive");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = p + z2 / (2.0 * nn);
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    return std::max(0.0, (center - half) / denom);
}

ReplicateReducer::ReplicateReducer(int threads, std::int64_t block_size)
    : threads_(threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))),
      block_size_(std::max<std::int64_t>(1, block_size)) {}

std::pair<double, double> ReplicateReducer::reduce(std::int64_t n,
                                                   const std::function<double(std::int64_t)>& fn) const {
    if (n <= 0) return {0.0, 0.0};
    const std::int64_t blocks = (n + block_size_ - 1) / block_size_;
    std::vector<double> block_sum(static_cast<std::size_t>(blocks), 0.0);
    std::vector<double> block_sq(static_cast<std::size_t>(blocks), 0.0);

    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= blocks) return;
            const std::int64_t lo = b * block_size_;
            const std::int64_t hi = std::min(n, lo + block_size_);
            CompensatedSum s, q;
            for (std::int64_t i = lo; i < hi; ++i) {
                const double v = fn(i);
                s.add(v);
                q.add(v * v);
            }
            block_sum[static_cast<std::size_t>(b)] = s.value();
            block_sq[static_cast<std::size_t>(b)] = q.value();
        }
    };

    const int nt = static_cast<int>(std::min<std::int64_t>(threads_, blocks));
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nt));
        for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    CompensatedSum s, q;
    for (std::int64_t b = 0; b < blocks; ++b) {
        s.add(block_sum[static_cast<std::size_t>(b)]);
        q.add(block_sq[static_cast<std::size_t>(b)]);
    }
    return {s.value(), q.value()};
}

std::vector<double> ReplicateReducer::reduce_vector(
    std::int64_t n, std::size_t dim,
    const std::function<void(std::int64_t, std::vector<double>&)>& fn) const {
    std::vector<double> total(dim, 0.0);
    if (n <= 0) return total;
    const std::int64_t blocks = (n + block_size_ - 1) / block_size_;
    std::vector<std::vector<double>> block_acc(static_cast<std::size_t>(blocks));

    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= blocks) return;
            const std::int64_t lo = b * block_size_;
            const std::int64_t hi = std::min(n, lo + block_size_);
            std::vector<double> acc(dim, 0.0);
            for (std::int64_t i = lo; i < hi; ++i) fn(i, acc);
            block_acc[static_cast<std::size_t>(b)] = std::move(acc);
        }
    };

    const int nt = static_cast<int>(std::min<std::int64_t>(threads_, blocks));
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nt));
        for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (std::int64_t b = 0; b < blocks; ++b) {
        const auto& acc = block_acc[static_cast<std::size_t>(b)];
        for (std::size_t d = 0; d < dim; ++d) total[d] += acc[d];
    }
    return total;
}

McEstimate ReplicateReducer::estimate(std::int64_t n, const std::function<double(std::int64_t)>& fn,
                                      double z) const {
    const auto [sum, sq] = reduce(n, fn);
    return mc_from_moments(sum, sq, n, z);
}

} // namespace rwk
