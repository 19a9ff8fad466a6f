#pragma once

namespace rwk {

/// Truncation policy for the (infinite) dyadic sums. The translation window
/// is derived from it per wavelet kind: exact ancestor chain for Haar,
/// support-exact k-window for the tabulated family.
struct KernelJob {
    int scale_min = -20;
    int scale_max = 20;
    double tail_tol = 1e-10;

    bool valid() const { return scale_min <= scale_max && tail_tol > 0.0; }
};

/// A truncated evaluation together with a certified bound on what was
/// omitted (variance mass for random quantities, absolute mass otherwise).
struct KernelValue {
    double value = 0.0;
    double tail_bound = 0.0;
};

} // namespace rwk
