// Copyright 2026 The qmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmeas/cv/kernel_state.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qmeas/errors.hpp"

namespace qmeas::cv {

namespace {

constexpr double kAliasFraction = 1e-9;

void require_edges(const Grid &g, double centre, double width, const char *what) {
    if (centre - 8.0 * width < g.x_min() || centre + 8.0 * width > g.x_max()) {
        throw GridError(std::string(what) + ": grid too narrow, truncation error exceeds tolerance "
                        "(need 8 widths between the centre and each edge)");
    }
}

void require_momentum_range(const Grid &g, double p_mean, double p_width, const char *what) {
    if (std::abs(p_mean) + 8.0 * p_width > 0.8 * g.k_nyquist()) {
        throw GridError(std::string(what) + ": momentum content reaches the grid Nyquist limit");
    }
}

// Lagrange cubic through nodes (o[0..3]) evaluated at xi; nodes in units of dx.
double lagrange4(const int o[4], const double v[4], double xi) {
    double s = 0.0;
    for (int a = 0; a < 4; ++a) {
        double l = 1.0;
        for (int b = 0; b < 4; ++b) {
            if (b != a) {
                l *= (xi - o[b]) / static_cast<double>(o[a] - o[b]);
            }
        }
        s += l * v[a];
    }
    return s;
}

}  // namespace

KernelState::KernelState(Grid grid, ComplexMatrix k, double tol) : grid_(grid), k_(std::move(k)) {
    const int n = grid_.n();
    if (k_.rows() != n || k_.cols() != n) {
        throw DimensionError("KernelState: kernel is " + std::to_string(k_.rows()) + "x" +
                             std::to_string(k_.cols()) + ", grid has " + std::to_string(n) + " points");
    }
    if (!k_.allFinite()) {
        throw InvariantError("KernelState: non-finite kernel entries");
    }
    const double scale = std::max(1e-300, max_abs(k_));
    if (hermiticity_defect(k_) > 1e-10 * scale) {
        throw InvariantError("KernelState: kernel is not hermitian");
    }
    const double tr = trace();
    if (std::abs(tr - 1.0) > tol) {
        throw InvariantError("KernelState: trace " + std::to_string(tr) + " differs from 1");
    }
    const Eigen::VectorXd sw = grid_.weights().cwiseSqrt();
    ComplexMatrix m = sw.asDiagonal() * k_ * sw.asDiagonal();
    m = 0.5 * (m + m.adjoint()).eval();
    m.diagonal().array() += tol;
    Eigen::LLT<ComplexMatrix> llt(m);
    if (llt.info() != Eigen::Success) {
        throw InvariantError("KernelState: kernel is not positive semidefinite within tolerance");
    }
}

double KernelState::trace() const {
    double s = 0.0;
    for (int i = 0; i < grid_.n(); ++i) {
        s += grid_.weight(i) * k_(i, i).real();
    }
    return s;
}

double KernelState::purity() const {
    const Eigen::VectorXd w = grid_.weights();
    return (w.transpose() * k_.cwiseAbs2() * w)(0, 0);
}

Eigen::VectorXd KernelState::diagonal() const {
    return k_.diagonal().real();
}

Moments position_moments(const KernelState &rho) {
    const Grid &g = rho.grid();
    double m0 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    for (int i = 0; i < g.n(); ++i) {
        const double p = g.weight(i) * rho.kernel()(i, i).real();
        const double x = g.x(i);
        m0 += p;
        m1 += p * x;
        m2 += p * x * x;
    }
    Moments r{};
    r.mass = m0;
    r.mean = m1 / m0;
    r.second = m2 / m0;
    r.var = r.second - r.mean * r.mean;
    return r;
}

std::vector<cplx> autocorrelation_diagonals(const KernelState &rho) {
    const int n = rho.grid().n();
    const double dx = rho.grid().dx();
    const ComplexMatrix &k = rho.kernel();
    std::vector<cplx> c(2 * n - 1, cplx(0.0, 0.0));
    for (int m = -(n - 1); m <= n - 1; ++m) {
        cplx s(0.0, 0.0);
        const int i0 = std::max(0, -m);
        const int i1 = std::min(n, n - m);
        for (int i = i0; i < i1; ++i) {
            s += k(i + m, i);
        }
        c[m + n - 1] = dx * s;
    }
    return c;
}

MomentumDensity momentum_density(const Grid &grid, const std::vector<cplx> &c,
                                 const std::vector<double> &window) {
    const int n = grid.n();
    const int big_m = 2 * n - 1;
    if (static_cast<int>(c.size()) != big_m) {
        throw DimensionError("momentum_density: expected " + std::to_string(big_m) + " diagonals");
    }
    if (!window.empty() && window.size() != c.size()) {
        throw DimensionError("momentum_density: window length mismatch");
    }
    const double dx = grid.dx();
    const double dk = 2.0 * std::numbers::pi / (big_m * dx);

    std::vector<cplx> roots(big_m);
    for (int q = 0; q < big_m; ++q) {
        const double ph = -2.0 * std::numbers::pi * q / big_m;
        roots[q] = cplx(std::cos(ph), std::sin(ph));
    }
    std::vector<cplx> cw(c);
    if (!window.empty()) {
        for (int q = 0; q < big_m; ++q) {
            cw[q] *= window[q];
        }
    }

    MomentumDensity d;
    d.dk = dk;
    d.k.resize(big_m);
    d.density.resize(big_m);
    for (int j = -(n - 1); j <= n - 1; ++j) {
        cplx s(0.0, 0.0);
        const long jj = (j % big_m + big_m) % big_m;
        for (int m = -(n - 1); m <= n - 1; ++m) {
            const long mm = (m % big_m + big_m) % big_m;
            s += roots[(jj * mm) % big_m] * cw[m + n - 1];
        }
        d.k[j + n - 1] = j * dk;
        d.density[j + n - 1] = s.real() * dx / (2.0 * std::numbers::pi);
    }

    double total = 0.0;
    double high = 0.0;
    const double cut = 0.8 * grid.k_nyquist();
    for (int q = 0; q < big_m; ++q) {
        const double a = std::abs(d.density[q]) * dk;
        total += a;
        if (std::abs(d.k[q]) > cut) {
            high += a;
        }
    }
    if (high > kAliasFraction * total) {
        throw GridError("momentum_density: aliasing, " + std::to_string(high / total) +
                        " of the weight lies near the Nyquist limit");
    }
    return d;
}

Moments moments_of(const MomentumDensity &d) {
    double m0 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t q = 0; q < d.k.size(); ++q) {
        const double p = d.density[q] * d.dk;
        m0 += p;
        m1 += p * d.k[q];
        m2 += p * d.k[q] * d.k[q];
    }
    Moments r{};
    r.mass = m0;
    r.mean = m1 / m0;
    r.second = m2 / m0;
    r.var = r.second - r.mean * r.mean;
    return r;
}

Moments momentum_moments(const KernelState &rho) {
    return moments_of(momentum_density(rho.grid(), autocorrelation_diagonals(rho)));
}

KernelState gaussian_state(const Grid &grid, double x_mean, double p_mean, double var_x) {
    if (!(var_x > 0.0) || !std::isfinite(var_x)) {
        throw DomainError("gaussian_state: var_x must be positive");
    }
    const double w = std::sqrt(var_x);
    require_edges(grid, x_mean, w, "gaussian_state");
    if (grid.dx() > w / 4.0) {
        throw GridError("gaussian_state: grid spacing does not resolve the packet (dx > sqrt(var_x)/4)");
    }
    require_momentum_range(grid, p_mean, 0.5 / w, "gaussian_state");

    const int n = grid.n();
    ComplexVector psi(n);
    for (int i = 0; i < n; ++i) {
        const double x = grid.x(i);
        const double amp = std::pow(2.0 * std::numbers::pi * var_x, -0.25) *
                           std::exp(-(x - x_mean) * (x - x_mean) / (4.0 * var_x));
        psi(i) = amp * std::exp(kI * (p_mean * x));
    }
    const double norm = std::sqrt((grid.weights().array() * psi.cwiseAbs2().array()).sum());
    psi /= norm;
    return KernelState(grid, psi * psi.adjoint());
}

KernelState mixed_gaussian_state(const Grid &grid, double x_mean, double p_mean, double var_x,
                                 double var_p) {
    if (!(var_x > 0.0) || !(var_p > 0.0)) {
        throw DomainError("mixed_gaussian_state: variances must be positive");
    }
    if (var_x * var_p < 0.25 * (1.0 - 1e-12)) {
        throw DomainError("mixed_gaussian_state: var_x * var_p below 1/4 is not a state");
    }
    const double w = std::sqrt(var_x);
    require_edges(grid, x_mean, w, "mixed_gaussian_state");
    if (grid.dx() > w / 4.0) {
        throw GridError("mixed_gaussian_state: grid spacing does not resolve the packet");
    }
    require_momentum_range(grid, p_mean, std::sqrt(var_p), "mixed_gaussian_state");

    const int n = grid.n();
    ComplexMatrix k(n, n);
    const double pref = 1.0 / std::sqrt(2.0 * std::numbers::pi * var_x);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double r = grid.x(i) - grid.x(j);
            const double c = 0.5 * (grid.x(i) + grid.x(j)) - x_mean;
            const double mag = pref * std::exp(-c * c / (2.0 * var_x) - 0.5 * var_p * r * r);
            k(i, j) = mag * std::exp(kI * (p_mean * r));
        }
    }
    double tr = 0.0;
    for (int i = 0; i < n; ++i) {
        tr += grid.weight(i) * k(i, i).real();
    }
    k /= tr;
    return KernelState(grid, std::move(k));
}

double pvm_probability_x(const KernelState &rho, double lo, double hi) {
    const Grid &g = rho.grid();
    if (std::isnan(lo) || std::isnan(hi)) {
        throw DomainError("pvm_probability_x: NaN interval end");
    }
    const double slack = 1e-12 * (g.x_max() - g.x_min());
    if ((std::isfinite(lo) && (lo < g.x_min() - slack || lo > g.x_max() + slack)) ||
        (std::isfinite(hi) && (hi < g.x_min() - slack || hi > g.x_max() + slack))) {
        throw DomainError("pvm_probability_x: interval outside the grid");
    }
    lo = std::clamp(lo, g.x_min(), g.x_max());
    hi = std::clamp(hi, g.x_min(), g.x_max());
    if (hi <= lo) {
        return 0.0;
    }

    const Eigen::VectorXd d = rho.diagonal();
    const int n = g.n();
    const double dx = g.dx();
    // Three-point Gauss-Legendre on [0, 1].
    const double gx[3] = {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
    const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

    const int c0 = std::clamp(static_cast<int>(std::floor((lo - g.x_min()) / dx)), 0, n - 2);
    const int c1 = std::clamp(static_cast<int>(std::floor((hi - g.x_min()) / dx)), 0, n - 2);
    double total = 0.0;
    for (int c = c0; c <= c1; ++c) {
        const int start = std::clamp(c - 1, 0, n - 4);
        int o[4];
        double v[4];
        for (int a = 0; a < 4; ++a) {
            o[a] = start + a - c;
            v[a] = d(start + a);
        }
        const double a0 = std::max(0.0, (lo - g.x(c)) / dx);
        const double a1 = std::min(1.0, (hi - g.x(c)) / dx);
        if (a1 <= a0) {
            continue;
        }
        double s = 0.0;
        for (int q = 0; q < 3; ++q) {
            s += gw[q] * lagrange4(o, v, a0 + (a1 - a0) * gx[q]);
        }
        total += s * (a1 - a0) * dx;
    }
    return total;
}

nlohmann::json to_json(const KernelState &rho) {
    const Grid &g = rho.grid();
    const int n = g.n();
    std::vector<double> re;
    std::vector<double> im;
    re.reserve(static_cast<std::size_t>(n) * n);
    im.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            re.push_back(rho.kernel()(i, j).real());
            im.push_back(rho.kernel()(i, j).imag());
        }
    }
    return {{"x_min", g.x_min()}, {"x_max", g.x_max()}, {"n", n}, {"re", re}, {"im", im}};
}

KernelState kernel_from_json(const nlohmann::json &j) {
    const Grid g(j.at("x_min").get<double>(), j.at("x_max").get<double>(), j.at("n").get<int>());
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    const std::size_t nn = static_cast<std::size_t>(g.n()) * g.n();
    if (re.size() != nn || im.size() != nn) {
        throw DimensionError("kernel_from_json: expected n*n entries");
    }
    ComplexMatrix k(g.n(), g.n());
    for (int i = 0; i < g.n(); ++i) {
        for (int c = 0; c < g.n(); ++c) {
            const std::size_t q = static_cast<std::size_t>(i) * g.n() + c;
            k(i, c) = cplx(re[q], im[q]);
        }
    }
    return KernelState(g, std::move(k));
}

}  // namespace qmeas::cv
