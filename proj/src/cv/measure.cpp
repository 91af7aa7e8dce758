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

#include "qmeas/cv/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qmeas/errors.hpp"

namespace qmeas::cv {

namespace {

// Raw moments of the outcome distribution P(x0) = ∫|f(x − x0)|² K(x,x) dx on an x0 grid that
// extends the state grid by the support of f, plus the noise integral ∫dx0 ∫|f|²(x − x0)² K dx.
struct OutcomeX {
    double m0;
    double m1;
    double m2;
    double noise2;
};

OutcomeX outcome_x(const KernelState &rho, const AcceptanceProfile &f) {
    const Grid &g = rho.grid();
    const int n = g.n();
    const double dx = g.dx();
    const int off = static_cast<int>(std::ceil(f.support_radius() / dx));
    const int n0 = n + 2 * off;

    std::vector<double> f2(static_cast<std::size_t>(off) + 1);
    for (int d = 0; d <= off; ++d) {
        const double v = f.value(d * dx);
        f2[d] = v * v;
    }
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) {
        p[i] = g.weight(i) * rho.kernel()(i, i).real();
    }

    OutcomeX r{0.0, 0.0, 0.0, 0.0};
    for (int j = 0; j < n0; ++j) {
        const double x0 = g.x_min() + (j - off) * dx;
        double pj = 0.0;
        double nj = 0.0;
        const int i0 = std::max(0, j - 2 * off);
        const int i1 = std::min(n - 1, j);
        for (int i = i0; i <= i1; ++i) {
            const int d = i - j + off;
            const double u = d * dx;
            const double c = p[i] * f2[std::abs(d)];
            pj += c;
            nj += c * u * u;
        }
        r.m0 += dx * pj;
        r.m1 += dx * pj * x0;
        r.m2 += dx * pj * x0 * x0;
        r.noise2 += dx * nj;
    }
    return r;
}

std::vector<double> window_from(const Grid &g, const std::function<double(double)> &w) {
    const int n = g.n();
    std::vector<double> out(2 * n - 1);
    for (int m = -(n - 1); m <= n - 1; ++m) {
        out[m + n - 1] = w(m * g.dx());
    }
    return out;
}

void require_positive(double v, const char *what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be positive and finite");
    }
}

}  // namespace

XMeasurement measure_x(const KernelState &rho, const AcceptanceProfile &f) {
    const Grid &g = rho.grid();
    const double sx = sigma_x_of_profile(f);
    if (g.dx() > sx / 4.0) {
        throw GridError("measure_x: under-resolved grid (dx = " + std::to_string(g.dx()) +
                        " > sigma_x/4 = " + std::to_string(sx / 4.0) + ")");
    }
    const int n = g.n();
    std::vector<double> ftab(n);
    for (int d = 0; d < n; ++d) {
        ftab[d] = f.autocorrelation(d * g.dx());
    }
    ComplexMatrix post(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            post(i, j) = rho.kernel()(i, j) * ftab[std::abs(i - j)];
        }
    }
    const OutcomeX o = outcome_x(rho, f);
    const double mean = o.m1 / o.m0;
    return {KernelState(g, std::move(post)), mean, o.m2 / o.m0 - mean * mean};
}

KernelState smear_diagonal(const KernelState &rho, double variance) {
    require_positive(variance, "smear_diagonal: variance");
    const Grid &g = rho.grid();
    const int n = g.n();
    const double dx = g.dx();
    const double sd = std::sqrt(variance);
    const int reach = std::min(n - 1, static_cast<int>(std::ceil(sd * std::sqrt(2.0 * 41.5) / dx)));

    std::vector<double> c(2 * reach + 1);
    double total = 0.0;
    for (int m = -reach; m <= reach; ++m) {
        const double u = m * dx;
        c[m + reach] = dx * std::exp(-u * u / (2.0 * variance)) / std::sqrt(2.0 * std::numbers::pi * variance);
        total += c[m + reach];
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw GridError("smear_diagonal: smearing kernel not resolved by the grid (weights sum to " +
                        std::to_string(total) + ")");
    }

    const ComplexMatrix &k = rho.kernel();
    ComplexMatrix post = ComplexMatrix::Zero(n, n);
    for (int m = -reach; m <= reach; ++m) {
        const int len = n - std::abs(m);
        if (m >= 0) {
            post.topLeftCorner(len, len) += c[m + reach] * k.bottomRightCorner(len, len);
        } else {
            post.bottomRightCorner(len, len) += c[m + reach] * k.topLeftCorner(len, len);
        }
    }
    double tr = 0.0;
    for (int i = 0; i < n; ++i) {
        tr += g.weight(i) * post(i, i).real();
    }
    if (std::abs(tr - 1.0) > kTolGrid) {
        throw GridError("smear_diagonal: domain too small, trace " + std::to_string(tr) +
                        " leaked through the grid edges");
    }
    return KernelState(g, std::move(post));
}

PMeasurement measure_p(const KernelState &rho, double sigma_p) {
    require_positive(sigma_p, "measure_p: sigma_p");
    const Grid &g = rho.grid();
    const Moments mom = momentum_moments(rho);
    if (std::abs(mom.mean) + 8.0 * (std::sqrt(std::max(0.0, mom.var)) + sigma_p) > g.k_nyquist()) {
        throw GridError("measure_p: momentum range of the grid is below 8 (state spread + sigma_p)");
    }
    const auto window = window_from(g, [sigma_p](double r) { return std::exp(-0.5 * sigma_p * sigma_p * r * r); });
    const Moments meas = moments_of(momentum_density(g, autocorrelation_diagonals(rho), window));
    return {smear_diagonal(rho, 1.0 / (4.0 * sigma_p * sigma_p)), meas.mean, meas.var};
}

double epsilon_x(const KernelState &rho, const AcceptanceProfile &f) {
    const double sx = sigma_x_of_profile(f);
    if (rho.grid().dx() > sx / 4.0) {
        throw GridError("epsilon_x: under-resolved grid");
    }
    const double eps2 = outcome_x(rho, f).noise2;
    if (std::abs(eps2 - sx * sx) > 1e-6 * sx * sx) {
        throw ConsistencyError("epsilon_x: epsilon(x)^2 = " + std::to_string(eps2) +
                               " differs from sigma_x^2 = " + std::to_string(sx * sx));
    }
    return std::sqrt(eps2);
}

double successive_bound(double sigma_x, double sigma_p) {
    const double r = 1.0 + std::sqrt(1.0 + 4.0 * sigma_x * sigma_x * sigma_p * sigma_p);
    return 0.25 * r * r;
}

SuccessiveResult successive_xp(const KernelState &rho, const AcceptanceProfile &f, double sigma_p) {
    require_positive(sigma_p, "successive_xp: sigma_p");
    XMeasurement mx = measure_x(rho, f);
    PMeasurement mp = measure_p(mx.post, sigma_p);

    const Moments x0 = position_moments(rho);
    const Moments p0 = momentum_moments(rho);
    const Moments p1 = momentum_moments(mx.post);
    const Moments x2 = position_moments(mp.post);
    const Moments p2 = momentum_moments(mp.post);
    const double sx = sigma_x_of_profile(f);

    SuccessiveResult r{x0.var, p0.var, sx * sx, eta_p(f), p1.second - p0.second,
                       mx.measured_var, mp.measured_var, 0.0, 0.0, 0.0,
                       p2.second - p0.second, x2.second - x0.second, std::move(mx.post), std::move(mp.post)};
    r.product = r.measured_var_x * r.measured_var_p;
    const double s2 = r.sigma_x2;
    const double sp2 = sigma_p * sigma_p;
    r.line2 = 0.5 + (1.0 / (4.0 * s2) + sp2) * r.var_x_rho + s2 * r.var_p_rho + s2 * sp2;
    r.bound = successive_bound(sx, sigma_p);
    if (r.product < r.bound * (1.0 - 1e-8)) {
        throw ConsistencyError("successive_xp: product " + std::to_string(r.product) +
                               " below the bound " + std::to_string(r.bound));
    }
    return r;
}

JointResult joint_ak(const KernelState &rho, double b, double a) {
    require_positive(a, "joint_ak: a");
    require_positive(b, "joint_ak: b");
    const Grid &g = rho.grid();
    const double a2 = a * a;
    const double b2 = b * b;
    const double decay_sd = std::sqrt(2.0 * a2 * b2 / (a2 + b2));
    if (g.dx() > b / (4.0 * std::sqrt(2.0)) || g.dx() > decay_sd / 4.0) {
        throw GridError("joint_ak: grid does not resolve the detector widths");
    }
    const AcceptanceProfile f = AcceptanceProfile::gaussian(b / std::sqrt(2.0));

    // ∫|g|² with g(u) = (a√π)^{−½} e^{−u²/2a²}, on its own grid wide enough for the tails.
    const double h = std::min(g.dx(), a / 16.0);
    const int ng = 2 * static_cast<int>(std::ceil(12.0 * a / h)) + 1;
    double g_norm = 0.0;
    for (int q = 0; q < ng; ++q) {
        const double u = (q - (ng - 1) / 2) * h;
        const double w = (q == 0 || q == ng - 1) ? 0.5 * h : h;
        g_norm += w * std::exp(-u * u / a2) / (a * std::sqrt(std::numbers::pi));
    }

    const OutcomeX ox = outcome_x(rho, f);
    const auto window = window_from(g, [&f](double r) { return f.autocorrelation(r); });
    const Moments mp = moments_of(momentum_density(g, autocorrelation_diagonals(rho), window));

    JointResult r{a, b, g_norm, 0, 0, 0, 0, 0, 0, 0, 0, 0, rho};
    r.measured_mean_x = g_norm * ox.m1;
    r.measured_var_x = g_norm * ox.m2 - r.measured_mean_x * r.measured_mean_x;
    const double p1 = g_norm * mp.mass * mp.mean;
    r.measured_mean_p = p1;
    r.measured_var_p = g_norm * mp.mass * mp.second - p1 * p1;
    r.product = r.measured_var_x * r.measured_var_p;
    r.eta_p2_closed = (a2 + b2) / (2.0 * a2 * b2);
    r.eta_x2_closed = 0.5 * (a2 + b2);

    const KernelState smeared = smear_diagonal(rho, 0.5 * (a2 + b2));
    const int n = g.n();
    std::vector<double> decay(n);
    for (int d = 0; d < n; ++d) {
        const double u = d * g.dx();
        decay[d] = std::exp(-(a2 + b2) * u * u / (4.0 * a2 * b2));
    }
    ComplexMatrix post(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            post(i, j) = smeared.kernel()(i, j) * decay[std::abs(i - j)];
        }
    }
    r.post = KernelState(g, std::move(post));

    r.eta_p2 = momentum_moments(r.post).second - momentum_moments(rho).second;
    r.eta_x2 = position_moments(r.post).second - position_moments(rho).second;
    return r;
}

Matching joint_matching(double sigma_x, double sigma_p) {
    require_positive(sigma_x, "joint_matching: sigma_x");
    require_positive(sigma_p, "joint_matching: sigma_p");
    const double s = sigma_x * sigma_p;
    if (s > 0.25 * (1.0 + 1e-12)) {
        throw DomainError("no disturbance-matched joint measurement exists (sigma_x*sigma_p = " +
                          std::to_string(s) + " > 1/4)");
    }
    const double root = std::sqrt(std::max(0.0, 1.0 - 16.0 * s * s));
    const double den = 4.0 * sigma_p * sigma_p;
    return {(1.0 + root) / den, (1.0 - root) / den};
}

JointVsSuccessive joint_vs_successive(double sigma_x, double sigma_p, const JointVsSuccessiveOptions &opt) {
    const Matching mt = joint_matching(sigma_x, sigma_p);
    const double s2 = sigma_x * sigma_x * sigma_p * sigma_p;
    const double root = std::sqrt(std::max(0.0, 1.0 - 16.0 * s2));

    JointVsSuccessive r{};
    r.sigma_x = sigma_x;
    r.sigma_p = sigma_p;
    r.a2 = mt.a2;
    r.b2 = mt.b2;
    r.diff_x_closed = (1.0 - root) * (1.0 - root) / (16.0 * sigma_p * sigma_p);
    r.diff_p_closed = -(1.0 - 4.0 * s2 * (1.0 + root)) / (4.0 * sigma_x * sigma_x * (1.0 - root));
    r.diff_p_derived = (4.0 * s2 - 1.0 + root * (1.0 + 4.0 * s2)) / (4.0 * sigma_x * sigma_x * (1.0 - root));

    const double var_x = opt.var_x > 0.0 ? opt.var_x : sigma_x / (2.0 * sigma_p);
    const double span =
        opt.half_span > 0.0 ? opt.half_span : default_half_span({std::sqrt(var_x), sigma_x, 0.5 / sigma_p});
    const Grid grid = Grid::symmetric(span, opt.n);
    const KernelState rho = gaussian_state(grid, 0.0, 0.0, var_x);

    const SuccessiveResult succ = successive_xp(rho, AcceptanceProfile::gaussian(sigma_x), sigma_p);
    const JointResult joint = joint_ak(rho, std::sqrt(mt.b2), std::sqrt(mt.a2));
    r.var_x_joint = joint.measured_var_x;
    r.var_x_successive = succ.measured_var_x;
    r.var_p_joint = joint.measured_var_p;
    r.var_p_successive = succ.measured_var_p;
    r.diff_x_grid = r.var_x_joint - r.var_x_successive;
    r.diff_p_grid = r.var_p_joint - r.var_p_successive;
    r.post_state_mismatch =
        max_abs(joint.post.kernel() - succ.final_state.kernel()) / max_abs(succ.final_state.kernel());
    return r;
}

Saturation find_saturating_width(const AcceptanceProfile &f, double sigma_p) {
    require_positive(sigma_p, "find_saturating_width: sigma_p");
    const double sx = sigma_x_of_profile(f);
    const double s2 = sx * sx;
    const double c = eta_p(f) + sigma_p * sigma_p;
    const auto product = [s2, c](double lv) {
        const double v = std::exp(lv);
        return (v + s2) * (0.25 / v + c);
    };

    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = std::log(1e-3 * s2);
    double hi = std::log(1e3 * s2);
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = product(x1);
    double f2 = product(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = product(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = product(x2);
        }
    }
    Saturation r{};
    const double lv = 0.5 * (lo + hi);
    r.var_x = std::exp(lv);
    r.product = product(lv);
    r.closed_var_x = sx / (2.0 * std::sqrt(c));
    r.closed_product = 0.25 + s2 * c + sx * std::sqrt(c);
    return r;
}

}  // namespace qmeas::cv
