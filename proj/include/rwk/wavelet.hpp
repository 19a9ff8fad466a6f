#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rwk/dyadic.hpp"
#include "rwk/job.hpp"

namespace rwk {

enum class WaveletKind { Haar, SmoothTabulated };

/// Sampled mother wavelet: psi and psi' on a uniform grid, zero outside.
struct WaveletTable {
    std::uint32_t version = 1;
    double grid_start = 0.0;
    double step = 0.0;
    std::vector<double> psi;
    std::vector<double> dpsi;

    double grid_end() const { return grid_start + step * static_cast<double>(psi.size() - 1); }
};

void save_wavelet_table(const WaveletTable& table, const std::string& path);
WaveletTable load_wavelet_table(const std::string& path);

/// Evaluable wavelet family with certified decay constants.
///
/// Haar is exact. The smooth family is a tabulated mother wavelet with
/// piecewise-cubic Hermite interpolation from the (psi, psi') samples;
/// values beyond the table are exactly zero and every tail bound accounts
/// for the truncated range through the fitted decay certificate.
class WaveletFamily {
public:
    static WaveletFamily haar();
    static WaveletFamily smooth_tabulated(WaveletTable table, double ortho_tol = 1e-6);

    WaveletKind kind() const { return kind_; }
    bool is_haar() const { return kind_ == WaveletKind::Haar; }
    bool has_derivative() const { return kind_ == WaveletKind::SmoothTabulated; }

    /// Haar lives on D+ over R+; the smooth family on D over R.
    IndexDomain domain() const {
        return is_haar() ? IndexDomain::HalfLine : IndexDomain::FullLine;
    }

    /// Smallest C with |psi(x)| <= C(1+|x|)^{-1-eps} and, when a derivative
    /// exists, |psi'(x)| <= C(1+|x|)^{-1-eps} at every sample; eps is fixed
    /// to 1 and C is fitted, never assumed.
    double decay_C() const { return decay_C_; }
    double decay_eps() const { return decay_eps_; }

    double sup_psi() const { return sup_psi_; }
    double sup_dpsi() const { return sup_dpsi_; }

    /// Support of the mother wavelet: psi == 0 outside [support_lo, support_hi].
    double support_lo() const { return support_lo_; }
    double support_hi() const { return support_hi_; }
    double ortho_tol() const { return ortho_tol_; }

    double eval_psi(double x) const;
    double eval_dpsi(double x) const;

    /// psi_I(x) = 2^{j/2} psi(2^j x - k).
    double eval_psi_I(const DyadicIndex& I, double x) const;

    /// d/dx psi_I(x) = 2^{3j/2} psi'(2^j x - k). Throws for Haar.
    double eval_dpsi_I(const DyadicIndex& I, double x) const;

    /// <psi_a, psi_b>; structurally exact for Haar, Simpson quadrature on
    /// the interpolated product for the tabulated family.
    double inner_product(const DyadicIndex& a, const DyadicIndex& b) const;

    /// Re-assertable construction checks: orthonormality on the fixed test
    /// set within ortho_tol and the decay certificate at every sample.
    void verify_certificates() const;

    const WaveletTable* table() const { return table_ ? table_.get() : nullptr; }

private:
    WaveletFamily() = default;

    WaveletKind kind_ = WaveletKind::Haar;
    double decay_C_ = 0.0;
    double decay_eps_ = 1.0;
    double sup_psi_ = 1.0;
    double sup_dpsi_ = 0.0;
    double support_lo_ = 0.0;
    double support_hi_ = 1.0;
    double ortho_tol_ = 0.0;
    std::shared_ptr<const WaveletTable> table_;
};

/// One term of a pair sum: I = (j,k) with the two factor evaluations.
struct PairTerm {
    std::int64_t j = 0;
    std::int64_t k = 0;
    double fx = 0.0; // psi_I(x), or d/dx psi_I(x) for gradient sums
    double fy = 0.0; // psi_I(y)
};

/// Deterministically ordered certified term window for a point pair,
/// with bounds on everything outside it.
///
/// For Haar the window is exactly the ancestor chain of I(x,y) inside the
/// scale range and the omitted masses are exact geometric values
/// (exact == true); for the tabulated family they are certified upper
/// bounds from the decay constants.
struct PairTerms {
    std::vector<PairTerm> terms;
    double omitted_abs = 0.0;    // sum over omitted I of |fx fy|
    double omitted_square = 0.0; // sum over omitted I of (fx fy)^2
    bool exact = false;
};

/// Size terms psi_I(x) psi_I(y). Haar pairs must use the exact overload.
PairTerms pair_terms(const WaveletFamily& w, const DyadicPoint& x, const DyadicPoint& y,
                     const KernelJob& job);
PairTerms pair_terms(const WaveletFamily& w, double x, double y, const KernelJob& job);

/// Gradient terms (d/dx psi_I)(x) psi_I(y); smooth family only.
PairTerms grad_pair_terms(const WaveletFamily& w, double x, double y, const KernelJob& job);

/// Truncated sum of |psi_I(x)||psi_I(y)| with certified tail; exact for Haar
/// (analytic completion of the coarse geometric tail).
KernelValue summability_size(const WaveletFamily& w, const DyadicPoint& x, const DyadicPoint& y,
                             const KernelJob& job);
KernelValue summability_size(const WaveletFamily& w, double x, double y, const KernelJob& job);

/// Truncated sum of |d/dx psi_I(x)||psi_I(y)| with certified tail.
KernelValue summability_grad(const WaveletFamily& w, double x, double y, const KernelJob& job);

} // namespace rwk
