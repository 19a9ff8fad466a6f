#include "rwk/grid_op.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rwk/summation.hpp"

namespace rwk {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

double pow2_half(std::int64_t j) {
    const std::int64_t q = (j >= 0) ? j / 2 : -((-j + 1) / 2);
    const int r = static_cast<int>(j - 2 * q);
    return std::ldexp(r ? std::numbers::sqrt2 : 1.0, static_cast<int>(q));
}

// Flattened coefficient view for hot Monte Carlo loops.
struct FlatCoeff {
    std::int64_t j, k;
    double c;
};

std::vector<FlatCoeff> flatten(const CoefficientSet& cs) {
    std::vector<FlatCoeff> out;
    out.reserve(static_cast<std::size_t>(cs.count()));
    for (const auto& sc : cs.scales()) {
        for (std::size_t i = 0; i < sc.c.size(); ++i)
            out.push_back(FlatCoeff{sc.j, sc.k_offset + static_cast<std::int64_t>(i), sc.c[i]});
    }
    return out;
}

GridFunction synthesize_with(const WaveletFamily& w, const CoefficientSet& coeffs,
                             const GridSpec& spec,
                             const std::function<double(std::int64_t, std::int64_t, double)>& term) {
    GridFunction out(spec);
    const int m = spec.log2_len;
    const int J = spec.depth;

    if (w.is_haar()) {
        // Constant contribution of wavelets coarser than the domain, then the
        // inverse pyramid for the in-domain scales.
        double constant = 0.0;
        std::vector<double> s{0.0};
        std::int64_t level = -m;
        for (const auto& sc : coeffs.scales()) {
            if (sc.j < -m) {
                constant += term(sc.j, 0, sc.c.empty() ? 0.0 : sc.c[0]) * pow2_half(sc.j);
                continue;
            }
            while (level < sc.j) {
                std::vector<double> up(s.size() * 2);
                for (std::size_t k = 0; k < s.size(); ++k) {
                    up[2 * k] = s[k] * kInvSqrt2;
                    up[2 * k + 1] = s[k] * kInvSqrt2;
                }
                s = std::move(up);
                ++level;
            }
            std::vector<double> up(s.size() * 2);
            for (std::size_t k = 0; k < s.size(); ++k) {
                const double d = term(sc.j, static_cast<std::int64_t>(k), sc.c[k]);
                up[2 * k] = (s[k] + d) * kInvSqrt2;
                up[2 * k + 1] = (s[k] - d) * kInvSqrt2;
            }
            s = std::move(up);
            ++level;
        }
        while (level < J) {
            std::vector<double> up(s.size() * 2);
            for (std::size_t k = 0; k < s.size(); ++k) {
                up[2 * k] = s[k] * kInvSqrt2;
                up[2 * k + 1] = s[k] * kInvSqrt2;
            }
            s = std::move(up);
            ++level;
        }
        const double scale_back = pow2_half(J);
        for (std::int64_t i = 0; i < out.size(); ++i)
            out[i] = s[static_cast<std::size_t>(i)] * scale_back + constant;
        return out;
    }

    // Tabulated family: accumulate c * psi_I over each support window.
    const double step = spec.step();
    const double slo = w.support_lo();
    const double shi = w.support_hi();
    for (const auto& sc : coeffs.scales()) {
        const double half = pow2_half(sc.j);
        for (std::size_t idx = 0; idx < sc.c.size(); ++idx) {
            const std::int64_t k = sc.k_offset + static_cast<std::int64_t>(idx);
            const double v = term(sc.j, k, sc.c[idx]);
            if (v == 0.0) continue;
            const double lo = std::ldexp(slo + static_cast<double>(k), -static_cast<int>(sc.j));
            const double hi = std::ldexp(shi + static_cast<double>(k), -static_cast<int>(sc.j));
            const std::int64_t ilo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(lo / step)));
            const std::int64_t ihi = std::min<std::int64_t>(out.size() - 1,
                                                            static_cast<std::int64_t>(std::ceil(hi / step)));
            const double uscale = std::ldexp(1.0, static_cast<int>(sc.j));
            for (std::int64_t i = ilo; i <= ihi; ++i) {
                const double t = uscale * out.cell_center(i) - static_cast<double>(k);
                out[i] += v * half * w.eval_psi(t);
            }
        }
    }
    return out;
}

} // namespace

GridFunction::GridFunction(GridSpec spec, std::vector<double> samples)
    : spec_(spec), v_(std::move(samples)) {
    if (static_cast<std::int64_t>(v_.size()) != spec_.size())
        throw std::invalid_argument("GridFunction: sample count does not match the grid");
}

double GridFunction::l2_norm() const {
    CompensatedSum acc;
    for (double x : v_) acc.add(x * x);
    return std::sqrt(spec_.step() * acc.value());
}

double GridFunction::l1_norm() const {
    CompensatedSum acc;
    for (double x : v_) acc.add(std::abs(x));
    return spec_.step() * acc.value();
}

double GridFunction::integral() const {
    CompensatedSum acc;
    for (double x : v_) acc.add(x);
    return spec_.step() * acc.value();
}

double CoefficientSet::at(const DyadicIndex& I) const {
    for (const auto& sc : scales_) {
        if (sc.j != I.j) continue;
        const std::int64_t idx = I.k - sc.k_offset;
        if (idx < 0 || idx >= static_cast<std::int64_t>(sc.c.size())) return 0.0;
        return sc.c[static_cast<std::size_t>(idx)];
    }
    return 0.0;
}

double CoefficientSet::sum_squares() const {
    CompensatedSum acc;
    for (const auto& sc : scales_)
        for (double c : sc.c) acc.add(c * c);
    return acc.value();
}

std::int64_t CoefficientSet::count() const {
    std::int64_t n = 0;
    for (const auto& sc : scales_) n += static_cast<std::int64_t>(sc.c.size());
    return n;
}

void CoefficientSet::for_each(const std::function<void(const DyadicIndex&, double)>& fn) const {
    for (const auto& sc : scales_)
        for (std::size_t i = 0; i < sc.c.size(); ++i)
            fn(DyadicIndex{sc.j, sc.k_offset + static_cast<std::int64_t>(i)}, sc.c[i]);
}

CoefficientSet analyze(const WaveletFamily& w, const GridFunction& f, const KernelJob& job) {
    if (!job.valid()) throw std::invalid_argument("analyze: invalid job");
    const GridSpec spec = f.spec();
    const int m = spec.log2_len;
    const int J = spec.depth;

    CoefficientSet out;

    if (w.is_haar()) {
        const std::int64_t j_fine = std::min<std::int64_t>(job.scale_max, J - 1);
        const std::int64_t j_dense_lo = std::max<std::int64_t>(job.scale_min, -m);

        // Wavelets coarser than the domain are constant +2^{j/2} on it.
        const double total = f.integral();
        for (std::int64_t j = job.scale_min; j < -m && j <= job.scale_max; ++j) {
            CoefficientSet::Scale sc;
            sc.j = j;
            sc.k_offset = 0;
            sc.c.assign(1, pow2_half(j) * total);
            out.scales_.push_back(std::move(sc));
        }

        // Exact pyramid from the finest cells down to the domain scale.
        std::vector<double> s(static_cast<std::size_t>(f.size()));
        const double fine_scale = pow2_half(-J);
        for (std::int64_t i = 0; i < f.size(); ++i) s[static_cast<std::size_t>(i)] = f[i] * fine_scale;

        std::vector<CoefficientSet::Scale> dense;
        for (std::int64_t j = J - 1; j >= -m; --j) {
            std::vector<double> coarse(s.size() / 2);
            std::vector<double> detail(s.size() / 2);
            for (std::size_t k = 0; k < coarse.size(); ++k) {
                coarse[k] = (s[2 * k] + s[2 * k + 1]) * kInvSqrt2;
                detail[k] = (s[2 * k] - s[2 * k + 1]) * kInvSqrt2;
            }
            if (j <= j_fine && j >= j_dense_lo) {
                CoefficientSet::Scale sc;
                sc.j = j;
                sc.k_offset = 0;
                sc.c = std::move(detail);
                dense.push_back(std::move(sc));
            }
            s = std::move(coarse);
        }
        out.scaling_coarse_ = s.empty() ? 0.0 : s[0];
        for (auto it = dense.rbegin(); it != dense.rend(); ++it) out.scales_.push_back(std::move(*it));
        return out;
    }

    // Tabulated family: midpoint quadrature per cell over the support
    // window; the fine end is capped two scales below the grid so psi is
    // resolved by the cells.
    const double step = spec.step();
    const double len = spec.length();
    const double slo = w.support_lo();
    const double shi = w.support_hi();
    const std::int64_t j_fine = std::min<std::int64_t>(job.scale_max, J - 2);
    for (std::int64_t j = job.scale_min; j <= j_fine; ++j) {
        const double half = pow2_half(j);
        const double uscale = std::ldexp(1.0, static_cast<int>(j));
        const std::int64_t klo = static_cast<std::int64_t>(std::ceil(-shi));
        const std::int64_t khi = static_cast<std::int64_t>(std::floor(uscale * len - slo));
        if (khi < klo) continue;
        CoefficientSet::Scale sc;
        sc.j = j;
        sc.k_offset = klo;
        sc.c.assign(static_cast<std::size_t>(khi - klo + 1), 0.0);
        for (std::int64_t k = klo; k <= khi; ++k) {
            const double lo = std::ldexp(slo + static_cast<double>(k), -static_cast<int>(j));
            const double hi = std::ldexp(shi + static_cast<double>(k), -static_cast<int>(j));
            const std::int64_t ilo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(lo / step)));
            const std::int64_t ihi = std::min<std::int64_t>(f.size() - 1,
                                                            static_cast<std::int64_t>(std::ceil(hi / step)));
            CompensatedSum acc;
            for (std::int64_t i = ilo; i <= ihi; ++i) {
                const double t = uscale * f.cell_center(i) - static_cast<double>(k);
                acc.add(f[i] * w.eval_psi(t));
            }
            sc.c[static_cast<std::size_t>(k - klo)] = step * half * acc.value();
        }
        out.scales_.push_back(std::move(sc));
    }
    return out;
}

GridFunction synthesize(const WaveletFamily& w, const CoefficientSet& coeffs, const GridSpec& spec) {
    return synthesize_with(w, coeffs, spec,
                           [](std::int64_t, std::int64_t, double c) { return c; });
}

GridFunction apply_T(const WaveletFamily& w, const CoefficientModel& model, const GridFunction& f,
                     const KernelJob& job, const SeedPath& path) {
    const CoefficientSet coeffs = analyze(w, f, job);
    return synthesize_with(w, coeffs, f.spec(), [&](std::int64_t j, std::int64_t k, double c) {
        return c == 0.0 ? 0.0 : c * model.sample(SeedPath{path.master_seed, path.replicate, j, k});
    });
}

double pointwise_energy(const WaveletFamily& w, const CoefficientSet& coeffs, double x) {
    CompensatedSum acc;
    for (const auto& sc : coeffs.scales()) {
        for (std::size_t i = 0; i < sc.c.size(); ++i) {
            const double c = sc.c[i];
            if (c == 0.0) continue;
            const double p =
                w.eval_psi_I(DyadicIndex{sc.j, sc.k_offset + static_cast<std::int64_t>(i)}, x);
            acc.add(c * c * p * p);
        }
    }
    return acc.value();
}

OperatorNormReport vector_norm_T(const WaveletFamily& w, const CoefficientModel& model,
                                 const GridFunction& f, const KernelJob& job, std::int64_t n,
                                 std::uint64_t master_seed, int threads) {
    if (n < 1) throw std::invalid_argument("vector_norm_T: need n >= 1");
    const CoefficientSet coeffs = analyze(w, f, job);
    const auto flat = flatten(coeffs);

    // Parseval in coefficient space: ||sum a c psi_I||^2 over the whole line
    // equals sum (a c)^2 (exactly for Haar, to ortho_tol for the tabulated
    // family), so no synthesis is needed in the replicate loop.
    ReplicateReducer reducer(threads);
    const McEstimate sq = reducer.estimate(n, [&](std::int64_t i) {
        CompensatedSum acc;
        for (const auto& fc : flat) {
            const double a = model.sample(SeedPath{master_seed, i, fc.j, fc.k});
            acc.add(a * fc.c * a * fc.c);
        }
        return acc.value();
    });

    OperatorNormReport rep;
    rep.norm_squared = sq;
    rep.norm.n = sq.n;
    rep.norm.mean = std::sqrt(std::max(0.0, sq.mean));
    rep.norm.ci_low = std::sqrt(std::max(0.0, sq.ci_low));
    rep.norm.ci_high = std::sqrt(std::max(0.0, sq.ci_high));
    rep.norm.std_error = (rep.norm.mean > 0.0) ? sq.std_error / (2.0 * rep.norm.mean) : 0.0;
    rep.f_norm = f.l2_norm();
    rep.certified_bound =
        (std::sqrt(8.0 * model.nu()) + model.mean_profile_l1(w.domain())) * rep.f_norm;
    return rep;
}

Weak11Profile weak11_profile(const WaveletFamily& w, const CoefficientModel& model,
                             const GridFunction& f, const KernelJob& job, std::int64_t n,
                             std::span<const double> thresholds, std::uint64_t master_seed,
                             int threads) {
    if (n < 1) throw std::invalid_argument("weak11_profile: need n >= 1");
    const CoefficientSet coeffs = analyze(w, f, job);
    const GridSpec spec = f.spec();
    const auto dim = static_cast<std::size_t>(spec.size());

    ReplicateReducer reducer(threads);
    const std::vector<double> sq_acc =
        reducer.reduce_vector(n, dim, [&](std::int64_t i, std::vector<double>& acc) {
            const GridFunction tf = synthesize_with(
                w, coeffs, spec, [&](std::int64_t j, std::int64_t k, double c) {
                    return c == 0.0 ? 0.0
                                    : c * model.sample(SeedPath{master_seed, i, j, k});
                });
            for (std::size_t d = 0; d < dim; ++d) acc[d] += tf[static_cast<std::int64_t>(d)] *
                                                            tf[static_cast<std::int64_t>(d)];
        });

    std::vector<double> pointwise_norm(dim);
    for (std::size_t d = 0; d < dim; ++d)
        pointwise_norm[d] = std::sqrt(sq_acc[d] / static_cast<double>(n));

    Weak11Profile out;
    out.f_l1 = f.l1_norm();
    for (double lambda : thresholds) {
        std::int64_t cells = 0;
        for (double v : pointwise_norm)
            if (v > lambda) ++cells;
        Weak11Row row;
        row.lambda = lambda;
        row.measure = spec.step() * static_cast<double>(cells);
        row.product = lambda * row.measure;
        out.rows.push_back(row);
        if (out.f_l1 > 0.0) out.fitted_C = std::max(out.fitted_C, row.product / out.f_l1);
    }
    return out;
}

void save_grid_text(const GridFunction& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_grid_text: cannot open " + path);
    os.precision(17);
    os << "# rwk-grid v1 log2_len=" << f.spec().log2_len << " depth=" << f.spec().depth << "\n";
    for (std::int64_t i = 0; i < f.size(); ++i) os << f.cell_center(i) << " " << f[i] << "\n";
    if (!os) throw std::runtime_error("save_grid_text: write failed for " + path);
}

GridFunction load_grid_text(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_grid_text: cannot open " + path);
    std::string header;
    std::getline(is, header);
    GridSpec spec;
    if (std::sscanf(header.c_str(), "# rwk-grid v1 log2_len=%d depth=%d", &spec.log2_len,
                    &spec.depth) != 2)
        throw std::runtime_error("load_grid_text: bad header in " + path);
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(spec.size()));
    double x, val;
    while (is >> x >> val) v.push_back(val);
    return GridFunction(spec, std::move(v));
}

void save_grid_binary(const GridFunction& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_grid_binary: cannot open " + path);
    const char magic[8] = {'R', 'W', 'K', 'G', 'R', 'I', 'D', '1'};
    os.write(magic, 8);
    const std::int32_t m = f.spec().log2_len, J = f.spec().depth;
    os.write(reinterpret_cast<const char*>(&m), sizeof m);
    os.write(reinterpret_cast<const char*>(&J), sizeof J);
    os.write(reinterpret_cast<const char*>(f.samples().data()),
             static_cast<std::streamsize>(f.samples().size() * 8));
    if (!os) throw std::runtime_error("save_grid_binary: write failed for " + path);
}

GridFunction load_grid_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_grid_binary: cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, "RWKGRID1", 8) != 0)
        throw std::runtime_error("load_grid_binary: bad magic in " + path);
    std::int32_t m = 0, J = 0;
    is.read(reinterpret_cast<char*>(&m), sizeof m);
    is.read(reinterpret_cast<char*>(&J), sizeof J);
    GridSpec spec{m, J};
    if (!is || J < 0 || J > 30 || m < -10 || m > 30)
        throw std::runtime_error("load_grid_binary: bad header in " + path);
    std::vector<double> v(static_cast<std::size_t>(spec.size()));
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * 8));
    if (!is) throw std::runtime_error("load_grid_binary: truncated file " + path);
    return GridFunction(spec, std::move(v));
}

} // namespace rwk
