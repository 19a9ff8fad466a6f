#pragma once

#include "rwk/dyadic.hpp"
#include "rwk/job.hpp"
#include "rwk/subgauss.hpp"
#include "rwk/wavelet.hpp"

namespace rwk {

/// Sum over the dyadic family of psi_I(x)^2 psi_I(y)^2, the series that
/// controls every variance factor. Exact for Haar: only the ancestors of
/// the smallest common interval contribute and the coarse geometric tail is
/// completed analytically, giving (4/3) / delta(x,y)^2.
KernelValue square_summability(const WaveletFamily& w, const DyadicPoint& x, const DyadicPoint& y,
                               const KernelJob& job);
KernelValue square_summability(const WaveletFamily& w, double x, double y, const KernelJob& job);

/// Deterministic mean kernel sum E a_I psi_I(x) psi_I(y).
KernelValue mean_kernel(const WaveletFamily& w, const CoefficientModel& model, const DyadicPoint& x,
                        const DyadicPoint& y, const KernelJob& job);
KernelValue mean_kernel(const WaveletFamily& w, const CoefficientModel& model, double x, double y,
                        const KernelJob& job);

/// One realization of the truncated kernel series; the tail bound certifies
/// the omitted variance mass (8 nu times the omitted square mass) plus the
/// omitted mean mass.
KernelValue sample_kernel(const WaveletFamily& w, const CoefficientModel& model,
                          const DyadicPoint& x, const DyadicPoint& y, const KernelJob& job,
                          const SeedPath& path);
KernelValue sample_kernel(const WaveletFamily& w, const CoefficientModel& model, double x, double y,
                          const KernelJob& job, const SeedPath& path);

/// Centered realization Sigma(x,y) = sum (a_I - E a_I) psi_I(x) psi_I(y).
KernelValue sample_centered_kernel(const WaveletFamily& w, const CoefficientModel& model,
                                   const DyadicPoint& x, const DyadicPoint& y, const KernelJob& job,
                                   const SeedPath& path);
KernelValue sample_centered_kernel(const WaveletFamily& w, const CoefficientModel& model, double x,
                                   double y, const KernelJob& job, const SeedPath& path);

/// Realization of the x-derivative of the centered series,
/// sum (a_I - E a_I) 2^{3j/2} psi'(2^j x - k) psi_I(y). Smooth family only.
KernelValue sample_kernel_dx(const WaveletFamily& w, const CoefficientModel& model, double x,
                             double y, const KernelJob& job, const SeedPath& path);

/// Exact Lipschitz degeneracy of the Haar kernel: when 2 delta(x',x) <=
/// delta(x,y), both points see identical terms and K(x',y) == K(x,y)
/// bitwise. Throws when the hypothesis is violated.
bool haar_regularity_check(const WaveletFamily& w, const CoefficientModel& model,
                           const DyadicPoint& x, const DyadicPoint& x_prime, const DyadicPoint& y,
                           const KernelJob& job, const SeedPath& path);

} // namespace rwk
