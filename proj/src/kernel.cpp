#include "rwk/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "rwk/summation.hpp"

namespace rwk {

namespace {

KernelValue square_from_terms(const PairTerms& pt) {
    CompensatedSum acc;
    for (auto it = pt.terms.rbegin(); it != pt.terms.rend(); ++it) {
        const double p = it->fx * it->fy;
        acc.add(p * p);
    }
    if (pt.exact) {
        acc.add(pt.omitted_square); // analytic completion, result exact
        return KernelValue{acc.value(), 0.0};
    }
    return KernelValue{acc.value(), pt.omitted_square};
}

KernelValue mean_from_terms(const PairTerms& pt, const CoefficientModel& model) {
    CompensatedSum acc;
    for (const auto& t : pt.terms) acc.add(model.mean(DyadicIndex{t.j, t.k}) * t.fx * t.fy);
    const double mean_cap = std::abs(model.intrinsic_mean()) + std::abs(model.mu0());
    return KernelValue{acc.value(), mean_cap * pt.omitted_abs};
}

KernelValue sample_from_terms(const PairTerms& pt, const CoefficientModel& model,
                              const SeedPath& path, bool centered) {
    CompensatedSum acc;
    for (const auto& t : pt.terms) {
        const SeedPath p{path.master_seed, path.replicate, t.j, t.k};
        const double a = centered ? model.sample_centered(p) : model.sample(p);
        acc.add(a * t.fx * t.fy);
    }
    // Omitted variance mass carries the certified series factor 8 nu.
    double tail = 8.0 * model.nu() * pt.omitted_square;
    if (!centered) {
        const double mean_cap = std::abs(model.intrinsic_mean()) + std::abs(model.mu0());
        tail += mean_cap * pt.omitted_abs;
    }
    return KernelValue{acc.value(), tail};
}

} // namespace

KernelValue square_summability(const WaveletFamily& w, const DyadicPoint& x, const DyadicPoint& y,
                               const KernelJob& job) {
    return square_from_terms(pair_terms(w, x, y, job));
}

KernelValue square_summability(const WaveletFamily& w, double x, double y, const KernelJob& job) {
    return square_from_terms(pair_terms(w, x, y, job));
}

KernelValue mean_kernel(const WaveletFamily& w, const CoefficientModel& model, const DyadicPoint& x,
                        const DyadicPoint& y, const KernelJob& job) {
    return mean_from_terms(pair_terms(w, x, y, job), model);
}

KernelValue mean_kernel(const WaveletFamily& w, const CoefficientModel& model, double x, double y,
                        const KernelJob& job) {
    return mean_from_terms(pair_terms(w, x, y, job), model);
}

KernelValue sample_kernel(const WaveletFamily& w, const CoefficientModel& model,
                          const DyadicPoint& x, const DyadicPoint& y, const KernelJob& job,
                          const SeedPath& path) {
    return sample_from_terms(pair_terms(w, x, y, job), model, path, /*centered=*/false);
}

KernelValue sample_kernel(const WaveletFamily& w, const CoefficientModel& model, double x, double y,
                          const KernelJob& job, const SeedPath& path) {
    return sample_from_terms(pair_terms(w, x, y, job), model, path, /*centered=*/false);
}

KernelValue sample_centered_kernel(const WaveletFamily& w, const CoefficientModel& model,
                                   const DyadicPoint& x, const DyadicPoint& y, const KernelJob& job,
                                   const SeedPath& path) {
    return sample_from_terms(pair_terms(w, x, y, job), model, path, /*centered=*/true);
}

KernelValue sample_centered_kernel(const WaveletFamily& w, const CoefficientModel& model, double x,
                                   double y, const KernelJob& job, const SeedPath& path) {
    return sample_from_terms(pair_terms(w, x, y, job), model, path, /*centered=*/true);
}

KernelValue sample_kernel_dx(const WaveletFamily& w, const CoefficientModel& model, double x,
                             double y, const KernelJob& job, const SeedPath& path) {
    const PairTerms pt = grad_pair_terms(w, x, y, job);
    CompensatedSum acc;
    for (const auto& t : pt.terms) {
        const SeedPath p{path.master_seed, path.replicate, t.j, t.k};
        acc.add(model.sample_centered(p) * t.fx * t.fy);
    }
    return KernelValue{acc.value(), 8.0 * model.nu() * pt.omitted_square};
}

bool haar_regularity_check(const WaveletFamily& w, const CoefficientModel& model,
                           const DyadicPoint& x, const DyadicPoint& x_prime, const DyadicPoint& y,
                           const KernelJob& job, const SeedPath& path) {
    if (!w.is_haar()) throw std::invalid_argument("haar_regularity_check: Haar only");
    const double dxy = dyadic_distance(x, y);
    const double dxx = dyadic_distance(x, x_prime);
    if (!(2.0 * dxx <= dxy)) throw std::invalid_argument("haar_regularity_check: hypothesis unmet");
    if (x == x_prime) return true;
    const KernelValue a = sample_kernel(w, model, x, y, job, path);
    const KernelValue b = sample_kernel(w, model, x_prime, y, job, path);
    return a.value == b.value; // bitwise: identical term sequences
}

} // namespace rwk
