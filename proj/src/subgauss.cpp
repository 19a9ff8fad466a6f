#include "rwk/subgauss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rwk/summation.hpp"

namespace rwk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// E[W^2; |W| <= a] for standard normal W.
double gauss_truncated_second_moment(double a) {
    if (a <= 0.0) return 0.0;
    return std::erf(a / std::numbers::sqrt2) -
           a * std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * a * a);
}

// P{|W| > a} for standard normal W.
double gauss_two_sided_tail(double a) { return std::erfc(a / std::numbers::sqrt2); }

double abs_2pow(std::int64_t e) { return std::ldexp(1.0, -static_cast<int>(std::llabs(e))); }

} // namespace

CoefficientModel CoefficientModel::gaussian(double nu, double mu0) {
    if (!(nu > 0.0)) throw std::invalid_argument("gaussian model: nu must be positive");
    CoefficientModel m;
    m.dist_ = DistKind::Gaussian;
    m.nu_ = nu;
    m.mu0_ = mu0;
    return m;
}

CoefficientModel CoefficientModel::rademacher() {
    CoefficientModel m;
    m.dist_ = DistKind::Rademacher;
    m.nu_ = 1.0;
    m.mu0_ = 0.0;
    return m;
}

CoefficientModel CoefficientModel::bounded_uniform(double a, double b, double mu0) {
    if (!(a <= b)) throw std::invalid_argument("bounded_uniform model: need a <= b");
    CoefficientModel m;
    m.dist_ = DistKind::BoundedUniform;
    m.a_ = a;
    m.b_ = b;
    m.nu_ = 0.25 * (b - a) * (b - a);
    m.mu0_ = mu0;
    return m;
}

CoefficientModel CoefficientModel::truncated_gaussian(double A, double mu0) {
    if (!(A > 0.0)) throw std::invalid_argument("truncated_gaussian model: A must be positive");
    CoefficientModel m;
    m.dist_ = DistKind::TruncatedGaussian;
    m.truncA_ = A;
    m.nu_ = A * A;
    m.mu0_ = mu0;
    return m;
}

double CoefficientModel::variance() const {
    switch (dist_) {
        case DistKind::Gaussian: return nu_;
        case DistKind::Rademacher: return 1.0;
        case DistKind::BoundedUniform: return (b_ - a_) * (b_ - a_) / 12.0;
        case DistKind::TruncatedGaussian: return gauss_truncated_second_moment(truncA_);
    }
    return 0.0;
}

double CoefficientModel::intrinsic_mean() const {
    return dist_ == DistKind::BoundedUniform ? 0.5 * (a_ + b_) : 0.0;
}

double CoefficientModel::mean(const DyadicIndex& I) const {
    return intrinsic_mean() + mu0_ * abs_2pow(I.j) * abs_2pow(I.k);
}

double CoefficientModel::mean_profile_l1(IndexDomain domain) const {
    if (intrinsic_mean() != 0.0) return kInf;
    // sum_j 2^{-|j|} = 3; sum over k is 3 on Z and 2 on k >= 0.
    return std::abs(mu0_) * 3.0 * (domain == IndexDomain::FullLine ? 3.0 : 2.0);
}

bool CoefficientModel::paper_mean_abs_condition() const {
    return variance() == 0.0 && intrinsic_mean() == 0.0 && mu0_ == 0.0;
}

double CoefficientModel::centered_tail_prob(double t) const {
    if (t < 0.0) return 1.0;
    switch (dist_) {
        case DistKind::Gaussian: return gauss_two_sided_tail(t / std::sqrt(nu_));
        case DistKind::Rademacher: return t < 1.0 ? 1.0 : 0.0;
        case DistKind::BoundedUniform: {
            const double w = 0.5 * (b_ - a_);
            if (w == 0.0) return 0.0;
            return t >= w ? 0.0 : 1.0 - t / w;
        }
        case DistKind::TruncatedGaussian:
            if (t >= truncA_) return 0.0;
            return gauss_two_sided_tail(t) - gauss_two_sided_tail(truncA_);
    }
    return 0.0;
}

double CoefficientModel::sample_centered(const SeedPath& path) const {
    switch (dist_) {
        case DistKind::Gaussian: return std::sqrt(nu_) * standard_normal(path);
        case DistKind::Rademacher: {
            const auto b = Philox::generate(path);
            return (b[0] & 1u) ? 1.0 : -1.0;
        }
        case DistKind::BoundedUniform: return (uniform(path) - 0.5) * (b_ - a_);
        case DistKind::TruncatedGaussian: {
            const double w = standard_normal(path);
            return std::abs(w) <= truncA_ ? w : 0.0;
        }
    }
    return 0.0;
}

double CoefficientModel::sample(const SeedPath& path) const {
    return mean(DyadicIndex{path.j, path.k}) + sample_centered(path);
}

std::string CoefficientModel::dist_name() const {
    switch (dist_) {
        case DistKind::Gaussian: return "gaussian";
        case DistKind::Rademacher: return "rademacher";
        case DistKind::BoundedUniform: return "bounded_uniform";
        case DistKind::TruncatedGaussian: return "truncated_gaussian";
    }
    return "?";
}

double sample_coefficient(const CoefficientModel& model, const SeedPath& path) {
    return model.sample(path);
}

double chernoff_tail(double nu, double t) {
    if (!(nu > 0.0) || !(t > 0.0)) throw std::invalid_argument("chernoff_tail: need nu > 0, t > 0");
    return std::exp(-t * t / (2.0 * nu));
}

double chernoff_tail_two_sided(double nu, double t) {
    return std::min(1.0, 2.0 * chernoff_tail(nu, t));
}

double combine_variance_factors(std::span<const double> nus) {
    if (nus.empty()) throw std::invalid_argument("combine_variance_factors: empty input");
    CompensatedSum acc;
    for (double v : nus) {
        if (!(v > 0.0)) throw std::invalid_argument("combine_variance_factors: factors must be positive");
        acc.add(v);
    }
    return acc.value();
}

double series_variance_factor(double nu_total) {
    if (!(nu_total > 0.0)) throw std::invalid_argument("series_variance_factor: nu must be positive");
    return 8.0 * nu_total;
}

double moment_bound(double nu_total, int k) {
    if (k < 1) throw std::invalid_argument("moment_bound: k must be >= 1");
    double out = 1.0;
    for (int i = 1; i <= k; ++i) out *= static_cast<double>(i) * 2.0 * nu_total;
    return out;
}

McEstimate empirical_log_mgf(const CoefficientModel& model, double lambda, std::int64_t n,
                             std::uint64_t master_seed, int threads) {
    if (n < 1000) throw std::invalid_argument("empirical_log_mgf: need n >= 1000");
    // exp(lambda Z) must stay far from overflow across any plausible draw.
    const double scale = std::sqrt(std::max(model.nu(), model.variance()));
    if (std::abs(lambda) * scale > 30.0)
        throw std::invalid_argument("empirical_log_mgf: |lambda| outside configured range");

    ReplicateReducer reducer(threads);
    const McEstimate raw = reducer.estimate(n, [&](std::int64_t i) {
        const SeedPath path{master_seed, i, 0, 0};
        return std::exp(lambda * model.sample_centered(path));
    });

    McEstimate eta;
    eta.n = raw.n;
    eta.mean = std::log(raw.mean);
    eta.std_error = raw.std_error / raw.mean;
    eta.ci_low = std::log(std::max(raw.ci_low, std::numeric_limits<double>::min()));
    eta.ci_high = std::log(raw.ci_high);
    return eta;
}

std::pair<double, double> truncated_moments(const CoefficientModel& model, double A) {
    if (!(A > 0.0)) throw std::invalid_argument("truncated_moments: A must be positive");
    const double mean = 0.0; // centered laws are symmetric; odd integrand
    double second = 0.0;
    switch (model.dist()) {
        case DistKind::Gaussian: {
            const double sigma = std::sqrt(model.nu());
            second = model.nu() * gauss_truncated_second_moment(A / sigma);
            break;
        }
        case DistKind::Rademacher: second = A >= 1.0 ? 1.0 : 0.0; break;
        case DistKind::BoundedUniform: {
            const double w = 0.5 * (model.uniform_hi() - model.uniform_lo());
            if (w == 0.0) {
                second = 0.0;
            } else if (A >= w) {
                second = w * w / 3.0;
            } else {
                second = A * A * A / (3.0 * w);
            }
            break;
        }
        case DistKind::TruncatedGaussian:
            second = gauss_truncated_second_moment(std::min(A, model.truncation_level()));
            break;
    }
    return {mean, second - mean * mean};
}

namespace {

// Remainder of series (i): sum over omitted scales of certified bounds on
// P{|X_I| > A}, each term exp(-A^2 / (2 nu c^2)) with c the per-scale bound
// on |psi_I(x) psi_I(y)|. Terms fall doubly exponentially toward coarse
// scales; the loop stops at underflow and closes with one extra term.
double series1_remainder(const CoefficientModel& model, const WaveletFamily& w, double d,
                         double A, const KernelJob& job, std::int64_t haar_base_scale) {
    const double q = A * A / (2.0 * model.nu());
    CompensatedSum acc;
    const double width = w.support_hi() - w.support_lo();
    const double per_scale_count = w.is_haar() ? 1.0 : width + 2.0;

    auto product_bound_coarse = [&](std::int64_t j) {
        return w.is_haar() ? std::ldexp(1.0, static_cast<int>(j))
                           : std::ldexp(1.01 * w.sup_psi() * w.sup_psi(), static_cast<int>(j));
    };

    double last = 0.0;
    for (std::int64_t j = job.scale_min - 1; j > job.scale_min - 2048; --j) {
        const double c = product_bound_coarse(j);
        const double term = per_scale_count * std::exp(-q / (c * c));
        acc.add(term);
        last = term;
        if (term == 0.0) break;
    }
    acc.add(last); // closes the coarse geometric tail

    if (w.is_haar()) {
        // Fine side: ancestors above scale_max (only when the job clips the
        // chain); beyond the base scale every term is exactly zero.
        for (std::int64_t j = job.scale_max + 1; j <= haar_base_scale; ++j) {
            const double c = std::ldexp(1.0, static_cast<int>(j));
            acc.add(std::exp(-q / (c * c)));
        }
    } else {
        const double C = 1.01 * w.decay_C();
        const double P = 1.01 * w.sup_psi();
        for (int j = job.scale_max + 1;; ++j) {
            const double dj = std::ldexp(d, j);
            if (dj > width) break;
            if (j > job.scale_max + 256) break;
            const double far = 1.0 + 0.5 * dj;
            const double c = std::ldexp(P * C / (far * far), j);
            acc.add(per_scale_count * std::exp(-q / (c * c)));
        }
    }
    return acc.value();
}

ThreeSeriesReport three_series_impl(const CoefficientModel& model, const WaveletFamily& w,
                                    const PairTerms& pt, double d, double A, const KernelJob& job,
                                    double tol, std::int64_t haar_base_scale) {
    if (!(A > 0.0)) throw std::invalid_argument("three_series_certificate: A must be positive");
    ThreeSeriesReport rep;
    rep.truncation_A = A;

    CompensatedSum s1, s2, s3;
    for (const auto& t : pt.terms) {
        const double c = std::abs(t.fx * t.fy);
        if (c == 0.0) continue;
        const double level = A / c;
        s1.add(model.centered_tail_prob(level));
        const auto [tm, tv] = truncated_moments(model, level);
        s2.add(c * tm);
        s3.add(c * c * tv);
    }
    rep.series1_partial = s1.value();
    rep.series2_partial = s2.value();
    rep.series3_partial = s3.value();

    rep.tail_bounds[0] = series1_remainder(model, w, d, A, job, haar_base_scale);
    // (ii): every E Y_I vanishes for a symmetric centered law; otherwise fall
    // back to E|X_I| <= sqrt(2 nu) |psi psi|.
    rep.tail_bounds[1] =
        model.centered_symmetric() ? 0.0 : std::sqrt(2.0 * model.nu()) * pt.omitted_abs;
    // (iii): Var Y_I <= E X_I^2 = Var(a_I) (psi psi)^2.
    rep.tail_bounds[2] = model.variance() * pt.omitted_square;

    const bool ok = rep.tail_bounds[0] < tol && rep.tail_bounds[1] < tol && rep.tail_bounds[2] < tol;
    rep.verdict = ok ? ThreeSeriesVerdict::CertifiedConvergent : ThreeSeriesVerdict::Inconclusive;
    return rep;
}

} // namespace

ThreeSeriesReport three_series_certificate(const CoefficientModel& model, const WaveletFamily& w,
                                           const DyadicPoint& x, const DyadicPoint& y, double A,
                                           const KernelJob& job, double certificate_tol) {
    const PairTerms pt = pair_terms(w, x, y, job);
    const std::int64_t base_scale = smallest_common(x, y).j;
    const double d = std::abs(x.value() - y.value());
    return three_series_impl(model, w, pt, d, A, job, certificate_tol, base_scale);
}

ThreeSeriesReport three_series_certificate(const CoefficientModel& model, const WaveletFamily& w,
                                           double x, double y, double A, const KernelJob& job,
                                           double certificate_tol) {
    const PairTerms pt = pair_terms(w, x, y, job);
    return three_series_impl(model, w, pt, std::abs(x - y), A, job, certificate_tol, 0);
}

} // namespace rwk
