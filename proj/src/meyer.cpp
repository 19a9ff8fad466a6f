#include "rwk/meyer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rwk {

namespace {

using std::numbers::pi;

// C^3 transition polynomial: nu(0)=0, nu(1)=1, three vanishing derivatives
// at both ends.
double transition(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * t * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t * t * t);
}

// Meyer spectrum magnitude on xi >= 0; supported on [2pi/3, 8pi/3].
double spectrum(double xi) {
    if (xi >= 2.0 * pi / 3.0 && xi <= 4.0 * pi / 3.0)
        return std::sin(0.5 * pi * transition(1.5 * xi / pi - 1.0));
    if (xi > 4.0 * pi / 3.0 && xi <= 8.0 * pi / 3.0)
        return std::cos(0.5 * pi * transition(0.75 * xi / pi - 1.0));
    return 0.0;
}

// Composite 10-point Gauss-Legendre nodes over the spectrum support,
// with spectrum values folded into the weights.
struct Quadrature {
    std::vector<double> xi;
    std::vector<double> wm; // weight * spectrum(xi)

    Quadrature() {
        static const double gx[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                     0.8650633666889845, 0.9739065285171717};
        static const double gw[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                     0.1494513491505806, 0.0666713443086881};
        constexpr int panels = 128;
        const double lo = 2.0 * pi / 3.0, hi = 8.0 * pi / 3.0;
        const double dx = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) {
            const double c = lo + dx * (p + 0.5);
            for (int g = 0; g < 5; ++g) {
                for (double s : {-1.0, 1.0}) {
                    const double node = c + s * 0.5 * dx * gx[g];
                    xi.push_back(node);
                    wm.push_back(0.5 * dx * gw[g] * spectrum(node));
                }
            }
        }
    }
};

const Quadrature& quad() {
    static const Quadrature q;
    return q;
}

} // namespace

double meyer_psi(double x) {
    const auto& q = quad();
    const double u = x - 0.5;
    double acc = 0.0;
    for (std::size_t i = 0; i < q.xi.size(); ++i) acc += q.wm[i] * std::cos(q.xi[i] * u);
    return acc / pi;
}

double meyer_dpsi(double x) {
    const auto& q = quad();
    const double u = x - 0.5;
    double acc = 0.0;
    for (std::size_t i = 0; i < q.xi.size(); ++i) acc += q.wm[i] * q.xi[i] * std::sin(q.xi[i] * u);
    return -acc / pi;
}

WaveletTable synthesize_meyer_table(double radius, int samples_per_unit, int threads) {
    if (radius < 4.0 || samples_per_unit < 16)
        throw std::invalid_argument("synthesize_meyer_table: grid too coarse");
    WaveletTable t;
    t.version = 1;
    t.step = 1.0 / static_cast<double>(samples_per_unit);
    t.grid_start = 0.5 - radius;
    const std::size_t n = static_cast<std::size_t>(2 * radius * samples_per_unit) + 1;
    t.psi.resize(n);
    t.dpsi.resize(n);

    const int nt = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    auto fill = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double x = t.grid_start + t.step * static_cast<double>(i);
            t.psi[i] = meyer_psi(x);
            t.dpsi[i] = meyer_dpsi(x);
        }
    };
    if (nt <= 1) {
        fill(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + static_cast<std::size_t>(nt) - 1) / static_cast<std::size_t>(nt);
        for (int w = 0; w < nt; ++w) {
            const std::size_t lo = static_cast<std::size_t>(w) * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            if (lo < hi) pool.emplace_back(fill, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return t;
}

} // namespace rwk
