#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rwk/job.hpp"
#include "rwk/mc.hpp"
#include "rwk/subgauss.hpp"
#include "rwk/wavelet.hpp"

namespace rwk {

/// Uniform grid over [0, 2^log2_len) with 2^{log2_len + depth} cells of
/// width 2^-depth; functions are piecewise constant on cells.
struct GridSpec {
    int log2_len = 0;
    int depth = 14;

    std::int64_t size() const { return std::int64_t{1} << (log2_len + depth); }
    double step() const { return std::ldexp(1.0, -depth); }
    double length() const { return std::ldexp(1.0, log2_len); }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

class GridFunction {
public:
    explicit GridFunction(GridSpec spec) : spec_(spec), v_(static_cast<std::size_t>(spec.size()), 0.0) {}
    GridFunction(GridSpec spec, std::vector<double> samples);

    const GridSpec& spec() const { return spec_; }
    std::span<const double> samples() const { return v_; }
    double& operator[](std::int64_t i) { return v_[static_cast<std::size_t>(i)]; }
    double operator[](std::int64_t i) const { return v_[static_cast<std::size_t>(i)]; }
    std::int64_t size() const { return static_cast<std::int64_t>(v_.size()); }

    double cell_center(std::int64_t i) const {
        return (static_cast<double>(i) + 0.5) * spec_.step();
    }

    double l2_norm() const;   // sqrt(step * sum f_i^2); exact Haar Parseval on this grid
    double l1_norm() const;
    double integral() const;

private:
    GridSpec spec_;
    std::vector<double> v_;
};

/// Plain columnar text (x value per row, '#' header) and a compact binary
/// twin of the same content.
void save_grid_text(const GridFunction& f, const std::string& path);
GridFunction load_grid_text(const std::string& path);
void save_grid_binary(const GridFunction& f, const std::string& path);
GridFunction load_grid_binary(const std::string& path);

/// Wavelet coefficients <f, psi_I> over the job's scale range.
///
/// Haar coefficients come from the exact O(N) pyramid; scales coarser than
/// the domain are the analytic single-interval values 2^{j/2} integral(f).
/// Smooth coefficients use midpoint quadrature per cell and are enumerated
/// up to depth-2 at the fine end.
class CoefficientSet {
public:
    struct Scale {
        std::int64_t j = 0;
        std::int64_t k_offset = 0;
        std::vector<double> c;
    };

    const std::vector<Scale>& scales() const { return scales_; }
    double scaling_coarse() const { return scaling_coarse_; }

    double at(const DyadicIndex& I) const; // zero outside the stored window
    double sum_squares() const;
    std::int64_t count() const;

    void for_each(const std::function<void(const DyadicIndex&, double)>& fn) const;

private:
    friend CoefficientSet analyze(const WaveletFamily&, const GridFunction&, const KernelJob&);
    std::vector<Scale> scales_;   // ascending j; deterministic order
    double scaling_coarse_ = 0.0; // <f, phi_{-m,0}>, the coarse approximation term
};

CoefficientSet analyze(const WaveletFamily& w, const GridFunction& f, const KernelJob& job);

/// Synthesis sum_I c_I psi_I on the grid (exact for Haar).
GridFunction synthesize(const WaveletFamily& w, const CoefficientSet& coeffs, const GridSpec& spec);

/// One realization of T f = sum a_I <f, psi_I> psi_I.
GridFunction apply_T(const WaveletFamily& w, const CoefficientModel& model, const GridFunction& f,
                     const KernelJob& job, const SeedPath& path);

/// sum_I c_I^2 psi_I(x)^2 — the exact denominator of the pointwise
/// concentration bound, and (times Var a_I) the exact pointwise variance.
double pointwise_energy(const WaveletFamily& w, const CoefficientSet& coeffs, double x);

struct OperatorNormReport {
    McEstimate norm;             // estimate of (E integral |Tf|^2)^{1/2}
    McEstimate norm_squared;     // underlying mean of ||Tf||^2
    double certified_bound = 0;  // (sqrt(8 nu) + sum |E a_I|) ||f||_2
    double f_norm = 0;
};

OperatorNormReport vector_norm_T(const WaveletFamily& w, const CoefficientModel& model,
                                 const GridFunction& f, const KernelJob& job, std::int64_t n,
                                 std::uint64_t master_seed, int threads = 0);

struct Weak11Row {
    double lambda = 0;
    double measure = 0; // |{x : ||Tf(x)||_{L^2(Omega)} > lambda}|
    double product = 0; // lambda * measure
};

struct Weak11Profile {
    std::vector<Weak11Row> rows;
    double fitted_C = 0; // max over rows of product / ||f||_1
    double f_l1 = 0;
};

Weak11Profile weak11_profile(const WaveletFamily& w, const CoefficientModel& model,
                             const GridFunction& f, const KernelJob& job, std::int64_t n,
                             std::span<const double> thresholds, std::uint64_t master_seed,
                             int threads = 0);

} // namespace rwk
