#include "rwk/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "rwk/summation.hpp"

namespace rwk {

namespace {

// Sound lattice constants for the decay shape (1+|t|)^-2:
//   sum_k (1+|t-k|)^-2 <= 2 sum_{m>=0} (1+m)^-2 = pi^2/3
//   sum_k (1+|t-k|)^-4 <= 2 sum_{m>=0} (1+m)^-4 = pi^4/45
constexpr double kLatticeK1 = 3.2898681336964524;
constexpr double kLatticeK2 = 2.1646464674222577;

// Inflation applied to fitted sup/decay constants when they enter certified
// tail bounds, covering interpolant overshoot between samples.
constexpr double kFitSlack = 1.01;

double pow2_half(std::int64_t j) {
    const std::int64_t q = (j >= 0) ? j / 2 : -((-j + 1) / 2);
    const int r = static_cast<int>(j - 2 * q);
    return std::ldexp(r ? std::numbers::sqrt2 : 1.0, static_cast<int>(q));
}

double pow2i(std::int64_t j) { return std::ldexp(1.0, static_cast<int>(j)); }

// 0 if x lies in the left half of I, 1 if in the right half. Exact.
int half_of(const DyadicPoint& x, const DyadicIndex& I) {
    const std::int64_t level = I.j + 1;
    std::int64_t floor_val;
    if (x.depth >= level) {
        const int shift = static_cast<int>(x.depth - level);
        if (shift > 62) throw std::invalid_argument("half_of: depth gap too large");
        floor_val = x.num >> shift;
    } else {
        const int shift = static_cast<int>(level - x.depth);
        if (shift > 62) throw std::invalid_argument("half_of: scale gap too large");
        floor_val = x.num << shift;
    }
    return static_cast<int>(floor_val & 1);
}

struct SmoothTails {
    double abs_mass = 0.0;
    double square_mass = 0.0;
};

// Certified bounds on the mass outside [scale_min, scale_max] for the
// tabulated family. `power` is the per-term scale weight: 1 for size sums
// (2^j per scale), 2 for gradient sums (4^j per scale).
SmoothTails smooth_tail_bounds(const WaveletFamily& w, double x, double y, const KernelJob& job,
                               int power) {
    const double C = w.decay_C() * kFitSlack;
    const double peak = (power == 1 ? w.sup_psi() : w.sup_dpsi()) * kFitSlack;
    const double width = w.support_hi() - w.support_lo();
    const double d = std::abs(x - y);

    SmoothTails t;

    // Coarse side: per scale, sum_k of the product is bounded via one factor
    // at its peak and the other summed over the lattice.
    const double per_scale_abs = peak * C * kLatticeK1;
    const double per_scale_sq = peak * peak * C * C * kLatticeK2;
    if (power == 1) {
        t.abs_mass += per_scale_abs * pow2i(job.scale_min);              // sum 2^j, j<min
        t.square_mass += per_scale_sq * pow2i(2 * job.scale_min) / 3.0;  // sum 4^j, j<min
    } else {
        t.abs_mass += per_scale_abs * pow2i(2 * job.scale_min) / 3.0;    // sum 4^j
        t.square_mass += per_scale_sq * pow2i(4 * job.scale_min) / 15.0; // sum 16^j
    }

    // Fine side: zero once the two supports separate; until then use the
    // separation max(|u-k|,|v-k|) >= 2^{j-1} d in one factor.
    for (int j = job.scale_max + 1;; ++j) {
        const double dj = std::ldexp(d, j);
        if (dj > width) break;
        if (j > job.scale_max + 256) break; // d == 0 is rejected upstream
        const double far = 1.0 + 0.5 * dj;
        const double far2 = far * far;
        const double scale_abs = pow2i(power * j);
        const double scale_sq = pow2i(2 * power * j);
        t.abs_mass += scale_abs * 2.0 * C * C * kLatticeK1 / far2;
        t.square_mass += scale_sq * 2.0 * C * C * C * C * kLatticeK2 / (far2 * far2);
    }
    return t;
}

PairTerms smooth_pair_terms(const WaveletFamily& w, double x, double y, const KernelJob& job,
                            bool gradient) {
    if (!job.valid()) throw std::invalid_argument("pair_terms: invalid job");
    if (x == y) throw std::invalid_argument("pair_terms: degenerate pair");
    if (!w.has_derivative() && gradient)
        throw std::invalid_argument("grad_pair_terms: derivative unavailable");

    PairTerms out;
    const double slo = w.support_lo();
    const double shi = w.support_hi();
    for (int j = job.scale_min; j <= job.scale_max; ++j) {
        const double u = std::ldexp(x, j);
        const double v = std::ldexp(y, j);
        const double klo = std::ceil(std::max(u, v) - shi);
        const double khi = std::floor(std::min(u, v) - slo);
        if (khi < klo) {
            if (std::abs(u - v) > shi - slo) break; // supports disjoint at all finer scales
            continue;
        }
        const double half = pow2_half(j);
        const double factor_x = gradient ? pow2_half(3 * j) : half;
        for (std::int64_t k = static_cast<std::int64_t>(klo); k <= static_cast<std::int64_t>(khi); ++k) {
            const double tx = u - static_cast<double>(k);
            const double ty = v - static_cast<double>(k);
            const double fx = factor_x * (gradient ? w.eval_dpsi(tx) : w.eval_psi(tx));
            const double fy = half * w.eval_psi(ty);
            out.terms.push_back(PairTerm{j, k, fx, fy});
        }
    }
    const SmoothTails tails = smooth_tail_bounds(w, x, y, job, gradient ? 2 : 1);
    out.omitted_abs = tails.abs_mass;
    out.omitted_square = tails.square_mass;
    out.exact = false;
    return out;
}

} // namespace

WaveletFamily WaveletFamily::haar() {
    WaveletFamily w;
    w.kind_ = WaveletKind::Haar;
    // |psi| = X_[0,1) <= C (1+|x|)^-2 on [0,1) needs C = sup (1+x)^2 = 4.
    w.decay_C_ = 4.0;
    w.decay_eps_ = 1.0;
    w.sup_psi_ = 1.0;
    w.sup_dpsi_ = 0.0;
    w.support_lo_ = 0.0;
    w.support_hi_ = 1.0;
    w.ortho_tol_ = 0.0;
    return w;
}

WaveletFamily WaveletFamily::smooth_tabulated(WaveletTable table, double ortho_tol) {
    if (table.psi.size() != table.dpsi.size() || table.psi.size() < 8)
        throw std::invalid_argument("smooth_tabulated: malformed table");
    if (!(table.step > 0.0)) throw std::invalid_argument("smooth_tabulated: nonpositive step");

    WaveletFamily w;
    w.kind_ = WaveletKind::SmoothTabulated;
    w.decay_eps_ = 1.0;
    w.support_lo_ = table.grid_start;
    w.support_hi_ = table.grid_end();
    w.ortho_tol_ = ortho_tol;

    double c_fit = 0.0, sup_p = 0.0, sup_d = 0.0;
    for (std::size_t i = 0; i < table.psi.size(); ++i) {
        const double xi = table.grid_start + table.step * static_cast<double>(i);
        const double p = std::abs(table.psi[i]);
        const double dp = std::abs(table.dpsi[i]);
        if (!std::isfinite(p) || !std::isfinite(dp))
            throw std::invalid_argument("smooth_tabulated: non-finite sample");
        const double shape = (1.0 + std::abs(xi)) * (1.0 + std::abs(xi));
        c_fit = std::max(c_fit, std::max(p, dp) * shape);
        sup_p = std::max(sup_p, p);
        sup_d = std::max(sup_d, dp);
    }
    w.decay_C_ = c_fit;
    w.sup_psi_ = sup_p;
    w.sup_dpsi_ = sup_d;
    w.table_ = std::make_shared<const WaveletTable>(std::move(table));
    w.verify_certificates();
    return w;
}

double WaveletFamily::eval_psi(double x) const {
    if (is_haar()) {
        if (x >= 0.0 && x < 0.5) return 1.0;
        if (x >= 0.5 && x < 1.0) return -1.0;
        return 0.0;
    }
    const WaveletTable& T = *table_;
    if (x < T.grid_start || x > support_hi_) return 0.0;
    double s = (x - T.grid_start) / T.step;
    auto i = static_cast<std::size_t>(s);
    if (i >= T.psi.size() - 1) i = T.psi.size() - 2;
    const double t = s - static_cast<double>(i);
    const double p0 = T.psi[i], p1 = T.psi[i + 1];
    const double m0 = T.dpsi[i] * T.step, m1 = T.dpsi[i + 1] * T.step;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * p1 +
           (t3 - t2) * m1;
}

double WaveletFamily::eval_dpsi(double x) const {
    if (!has_derivative()) throw std::invalid_argument("eval_dpsi: derivative unavailable");
    const WaveletTable& T = *table_;
    if (x < T.grid_start || x > support_hi_) return 0.0;
    double s = (x - T.grid_start) / T.step;
    auto i = static_cast<std::size_t>(s);
    if (i >= T.psi.size() - 1) i = T.psi.size() - 2;
    const double t = s - static_cast<double>(i);
    const double p0 = T.psi[i], p1 = T.psi[i + 1];
    const double m0 = T.dpsi[i] * T.step, m1 = T.dpsi[i + 1] * T.step;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * p0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * p1 +
            (3 * t2 - 2 * t) * m1) /
           T.step;
}

double WaveletFamily::eval_psi_I(const DyadicIndex& I, double x) const {
    const double t = std::ldexp(x, static_cast<int>(I.j)) - static_cast<double>(I.k);
    return pow2_half(I.j) * eval_psi(t);
}

double WaveletFamily::eval_dpsi_I(const DyadicIndex& I, double x) const {
    if (!has_derivative()) throw std::invalid_argument("eval_dpsi_I: derivative unavailable");
    const double t = std::ldexp(x, static_cast<int>(I.j)) - static_cast<double>(I.k);
    return pow2_half(3 * I.j) * eval_dpsi(t);
}

double WaveletFamily::inner_product(const DyadicIndex& a, const DyadicIndex& b) const {
    if (is_haar()) {
        // Nested or disjoint supports integrate to zero exactly: a Haar
        // wavelet is constant on every proper dyadic subinterval.
        if (a == b) return 1.0;
        return 0.0;
    }
    const auto support = [&](const DyadicIndex& I) {
        const double lo = std::ldexp(support_lo_ + static_cast<double>(I.k), -static_cast<int>(I.j));
        const double hi = std::ldexp(support_hi_ + static_cast<double>(I.k), -static_cast<int>(I.j));
        return std::pair<double, double>{lo, hi};
    };
    const auto [alo, ahi] = support(a);
    const auto [blo, bhi] = support(b);
    const double lo = std::max(alo, blo);
    const double hi = std::min(ahi, bhi);
    if (hi <= lo) return 0.0;

    constexpr std::size_t kPanels = 32768; // Simpson, even count
    const double h = (hi - lo) / static_cast<double>(kPanels);
    CompensatedSum acc;
    for (std::size_t i = 0; i <= kPanels; ++i) {
        const double t = lo + h * static_cast<double>(i);
        const double g = eval_psi_I(a, t) * eval_psi_I(b, t);
        const double wgt = (i == 0 || i == kPanels) ? 1.0 : ((i & 1) ? 4.0 : 2.0);
        acc.add(wgt * g);
    }
    return acc.value() * h / 3.0;
}

void WaveletFamily::verify_certificates() const {
    static const DyadicIndex kTestSet[] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 1}, {-1, 0}};
    for (const auto& a : kTestSet) {
        for (const auto& b : kTestSet) {
            const double expect = (a == b) ? 1.0 : 0.0;
            const double got = inner_product(a, b);
            if (std::abs(got - expect) > (is_haar() ? 0.0 : ortho_tol_))
                throw std::runtime_error("wavelet family fails orthonormality check at " +
                                         a.to_string() + "," + b.to_string());
        }
    }
    if (!table_) return;
    const WaveletTable& T = *table_;
    for (std::size_t i = 0; i < T.psi.size(); ++i) {
        const double xi = T.grid_start + T.step * static_cast<double>(i);
        const double bound = (1.0 + 4e-16) * decay_C_ / ((1.0 + std::abs(xi)) * (1.0 + std::abs(xi)));
        if (std::abs(T.psi[i]) > bound || std::abs(T.dpsi[i]) > bound)
            throw std::runtime_error("wavelet table violates its decay certificate");
    }
}

PairTerms pair_terms(const WaveletFamily& w, const DyadicPoint& x, const DyadicPoint& y,
                     const KernelJob& job) {
    if (!w.is_haar())
        throw std::invalid_argument("pair_terms: dyadic-point overload is Haar-only");
    if (!job.valid()) throw std::invalid_argument("pair_terms: invalid job");
    const DyadicIndex base = smallest_common(x, y); // throws on degenerate pair

    PairTerms out;
    out.exact = true;
    const std::int64_t j_hi = std::min<std::int64_t>(base.j, job.scale_max);

    DyadicIndex I = base;
    while (I.j > j_hi) I = I.parent();
    for (; I.j >= job.scale_min; I = I.parent()) {
        const double s = pow2_half(I.j);
        const double fx = (half_of(x, I) == 0) ? s : -s;
        const double fy = (half_of(y, I) == 0) ? s : -s;
        out.terms.push_back(PairTerm{I.j, I.k, fx, fy});
    }

    // Exact geometric mass of everything outside the window: one ancestor
    // per scale with |psi psi| = 2^j.
    double abs_mass = pow2i(job.scale_min);                 // scales below scale_min
    double sq_mass = pow2i(2 * job.scale_min) / 3.0;
    if (job.scale_max < base.j) {                           // chain segment above scale_max
        abs_mass += pow2i(base.j + 1) - pow2i(job.scale_max + 1);
        sq_mass += (pow2i(2 * (base.j + 1)) - pow2i(2 * (job.scale_max + 1))) / 3.0;
    }
    out.omitted_abs = abs_mass;
    out.omitted_square = sq_mass;
    return out;
}

PairTerms pair_terms(const WaveletFamily& w, double x, double y, const KernelJob& job) {
    if (w.is_haar())
        throw std::invalid_argument("pair_terms: Haar pairs must use exact dyadic points");
    return smooth_pair_terms(w, x, y, job, /*gradient=*/false);
}

PairTerms grad_pair_terms(const WaveletFamily& w, double x, double y, const KernelJob& job) {
    return smooth_pair_terms(w, x, y, job, /*gradient=*/true);
}

KernelValue summability_size(const WaveletFamily& w, const DyadicPoint& x, const DyadicPoint& y,
                             const KernelJob& job) {
    const PairTerms pt = pair_terms(w, x, y, job);
    CompensatedSum acc;
    for (auto it = pt.terms.rbegin(); it != pt.terms.rend(); ++it) acc.add(std::abs(it->fx * it->fy));
    // Analytic completion: the omitted geometric mass is exact for Haar.
    acc.add(pt.omitted_abs);
    return KernelValue{acc.value(), 0.0};
}

KernelValue summability_size(const WaveletFamily& w, double x, double y, const KernelJob& job) {
    const PairTerms pt = pair_terms(w, x, y, job);
    CompensatedSum acc;
    for (const auto& t : pt.terms) acc.add(std::abs(t.fx * t.fy));
    return KernelValue{acc.value(), pt.omitted_abs};
}

KernelValue summability_grad(const WaveletFamily& w, double x, double y, const KernelJob& job) {
    const PairTerms pt = grad_pair_terms(w, x, y, job);
    CompensatedSum acc;
    for (const auto& t : pt.terms) acc.add(std::abs(t.fx * t.fy));
    return KernelValue{acc.value(), pt.omitted_abs};
}

void save_wavelet_table(const WaveletTable& table, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_wavelet_table: cannot open " + path);
    const char magic[8] = {'R', 'W', 'K', 'W', 'T', 'B', 'L', '\0'};
    os.write(magic, 8);
    const std::uint32_t version = table.version;
    const std::uint64_t n = table.psi.size();
    os.write(reinterpret_cast<const char*>(&version), sizeof version);
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    os.write(reinterpret_cast<const char*>(&table.grid_start), sizeof table.grid_start);
    os.write(reinterpret_cast<const char*>(&table.step), sizeof table.step);
    os.write(reinterpret_cast<const char*>(table.psi.data()), static_cast<std::streamsize>(n * 8));
    os.write(reinterpret_cast<const char*>(table.dpsi.data()), static_cast<std::streamsize>(n * 8));
    if (!os) throw std::runtime_error("save_wavelet_table: write failed for " + path);
}

WaveletTable load_wavelet_table(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_wavelet_table: cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, "RWKWTBL\0", 8) != 0)
        throw std::runtime_error("load_wavelet_table: bad magic in " + path);
    WaveletTable t;
    std::uint64_t n = 0;
    is.read(reinterpret_cast<char*>(&t.version), sizeof t.version);
    is.read(reinterpret_cast<char*>(&n), sizeof n);
    is.read(reinterpret_cast<char*>(&t.grid_start), sizeof t.grid_start);
    is.read(reinterpret_cast<char*>(&t.step), sizeof t.step);
    if (!is || t.version != 1 || n == 0 || n > (1u << 28))
        throw std::runtime_error("load_wavelet_table: bad header in " + path);
    t.psi.resize(n);
    t.dpsi.resize(n);
    is.read(reinterpret_cast<char*>(t.psi.data()), static_cast<std::streamsize>(n * 8));
    is.read(reinterpret_cast<char*>(t.dpsi.data()), static_cast<std::streamsize>(n * 8));
    if (!is) throw std::runtime_error("load_wavelet_table: truncated file " + path);
    return t;
}

} // namespace rwk
