#pragma once

#include "rwk/wavelet.hpp"

namespace rwk {

/// Synthesizes the Meyer mother wavelet (and its derivative, by spectral
/// differentiation) on a uniform grid of half-width `radius` with
/// `samples_per_unit` points per unit length, by inverse Fourier integration
/// of the closed-form Meyer spectrum. The wavelet is centered at x = 1/2.
WaveletTable synthesize_meyer_table(double radius = 32.0, int samples_per_unit = 1024,
                                    int threads = 0);

/// Pointwise synthesis (quadrature per call; used by the table generator
/// and as an independent cross-check in tests).
double meyer_psi(double x);
double meyer_dpsi(double x);

} // namespace rwk
