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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <optional>
#include <thread>

#include "qmeas/cv/acceptance.hpp"
#include "qmeas/cv/grid.hpp"
#include "qmeas/cv/kernel_state.hpp"
#include "qmeas/cv/measure.hpp"
#include "qmeas/matrix.hpp"
#include "qmeas/povm.hpp"
#include "qmeas/projective.hpp"
#include "qmeas/report.hpp"
#include "qmeas/spin.hpp"

namespace qmeas::report {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative slack on inequalities whose two sides come from different grid pipelines.
constexpr double kBoundSlack = 1e-8;
constexpr double kGridRel = 1e-6;
constexpr double kDisturbanceRel = 1e-4;

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), std::numeric_limits<double>::min());
}

// Runs fn(i) for i in [0, count) on up to `threads` workers. Output order is by index; the
// exception of the lowest failing index is rethrown.
template <class Fn>
std::vector<Row> parallel_rows(std::size_t count, int threads, Fn fn) {
    std::vector<Row> rows(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                rows[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int nt = static_cast<int>(std::min<std::size_t>(std::max(threads, 1), std::max<std::size_t>(count, 1)));
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return rows;
}

double cell(const Row &r, std::size_t i) { return std::get<double>(r[i]); }

// Column extremes over all rows, NaNs skipped.
double col_max(const std::vector<Row> &rows, std::size_t i) {
    double m = -kInf;
    for (const auto &r : rows) {
        const double v = cell(r, i);
        if (!std::isnan(v)) {
            m = std::max(m, v);
        }
    }
    return m;
}
double col_min(const std::vector<Row> &rows, std::size_t i) {
    double m = kInf;
    for (const auto &r : rows) {
        const double v = cell(r, i);
        if (!std::isnan(v)) {
            m = std::min(m, v);
        }
    }
    return m;
}

std::size_t col(const RunReport &r, const std::string &name) {
    const auto it = std::find(r.columns.begin(), r.columns.end(), name);
    return static_cast<std::size_t>(it - r.columns.begin());
}

spin::Vec3 vec3(const json &j) { return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()}; }

json resolve(const ScenarioConfig &c) {
    json p = c.parameters;
    for (const auto &s : scenario_parameters(c.scenario)) {
        if (!p.contains(s.key) || p[s.key].is_null()) {
            p[s.key] = s.fallback;
        }
    }
    return p;
}

void add_grid_diagnostics(RunReport &r, const cv::Grid &g) {
    r.diagnostics["grid_n"] = g.n();
    r.diagnostics["grid_half_span"] = 0.5 * (g.x_max() - g.x_min());
    r.diagnostics["grid_dx"] = g.dx();
}

void two_state(const ScenarioConfig &c, RunReport &r) {
    const json &p = r.parameters;
    const spin::Vec3 a = vec3(p["a"]);
    const spin::Vec3 b = vec3(p["b"]);
    const double theta = p["theta"].get<double>();
    const spin::BlochState s(a);
    const spin::SpinObservable ob{b};

    const spin::SpinSuite an = spin::analytic_suite(s, ob);
    const spin::SpinSuite en = spin::engine_suite(s, ob);
    double err = 0.0;
    for (auto m : {&spin::SpinSuite::var_b_rho, &spin::SpinSuite::var_b_hat, &spin::SpinSuite::delta_var,
                   &spin::SpinSuite::eta2, &spin::SpinSuite::cov_rho, &spin::SpinSuite::cov_hat,
                   &spin::SpinSuite::commutator_rhs, &spin::SpinSuite::var_a, &spin::SpinSuite::jx_jy_product}) {
        err = std::max(err, std::abs(an.*m - en.*m));
    }
    const spin::SharpBound sb = spin::sharp_two_state_bound(s, ob, kInf);
    const OlwTerms o = olw_inequality(theta, s, ob, c.tol);

    r.rows.push_back({a[0], a[1], a[2], b[0], b[1], b[2], theta, an.var_b_rho, an.var_b_hat, an.delta_var, an.eta2,
                      an.cov_rho, an.cov_hat, an.jx_jy_product, an.commutator_rhs, err, sb.lhs, sb.sharp_rhs, o.lhs,
                      o.rhs, o.gap, o.lhs_weak});
    r.checks.push_back(check_le("matrix engine vs closed forms, max abs error", err, c.tol));
    r.checks.push_back(check_ge("ideal measurement lhs >= sharp two-state bound", sb.lhs, sb.sharp_rhs - c.tol));
    r.checks.push_back(check_ge("OLW gap lhs - rhs", o.gap, -c.tol));
    r.tolerances["exact"] = c.tol;
}

void weak_sweep(const ScenarioConfig &c, RunReport &r, int threads) {
    const json &p = r.parameters;
    const int dim = p["dim"].get<int>();
    const int outcomes = p["outcomes"].get<int>();
    const int steps = p["steps"].get<int>();

    Rng rng(derive_seed(c.seed, 0));
    const DensityMatrix rho = random_density(rng, dim);
    const PVM pvm = random_pvm(rng, dim, outcomes);
    const Observable bm = random_observable(rng, dim);
    const WeakFamily w = WeakFamily::standard(pvm);
    const double eta = disturbance_eta(bm, pvm, rho);
    const double eta2 = eta * eta;
    const ComplexMatrix rho_hat = collapse_pvm(rho, pvm).post_state.matrix();
    const ComplexMatrix a = pvm.observable().matrix();
    const double tmax = w.theta_max();
    const auto n = static_cast<double>(outcomes);

    r.rows = parallel_rows(static_cast<std::size_t>(steps), threads, [&](std::size_t k) -> Row {
        const double theta = k + 1 == static_cast<std::size_t>(steps) ? tmax : tmax * k / (steps - 1.0);
        const double f = w.f(theta);
        const DiscretePOVM m = weak_povm(w, theta, 1e-8);
        const ComplexMatrix tilde = collapse_povm(rho, m).post_state.matrix();
        const double interp = max_abs(tilde - ((1.0 - f) * rho.matrix() + f * rho_hat));
        const double eta_t = eta_weak(bm, w, theta, rho, 1.0);

        double recon = kNaN;
        if (w.g(theta) > 1e-12) {
            const auto lam = contextual_values(w, theta);
            ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
            for (std::size_t i = 0; i < m.size(); ++i) {
                sum += lam[i] * m.elements()[i].effect;
            }
            recon = max_abs(sum - a);
        }
        double unif = kNaN;
        if (theta == tmax) {
            unif = 0.0;
            for (const auto &e : m.elements()) {
                unif = std::max(unif, max_abs(e.effect - ComplexMatrix::Identity(dim, dim) / n));
            }
        }
        return {theta, f, w.g(theta), epsilon_noise_reduced(w, theta, rho), eta2, eta_t * eta_t, f * eta2,
                interp, recon, unif};
    });

    const DiscretePOVM m0 = weak_povm(w, 0.0, 1e-8);
    double reduction = 0.0;
    for (std::size_t i = 0; i < m0.size(); ++i) {
        reduction = std::max(reduction, max_abs(m0.elements()[i].effect - pvm.projectors()[i]));
    }

    double eta_dev = 0.0;
    for (const auto &row : r.rows) {
        eta_dev = std::max(eta_dev, std::abs(cell(row, col(r, "eta_theta2")) - cell(row, col(r, "f_eta2"))));
    }
    r.checks.push_back(check_le("max |eta_theta^2 - f eta^2|", eta_dev, c.tol));
    r.checks.push_back(check_le("max interpolation error", col_max(r.rows, col(r, "interpolation_error")), c.tol));
    r.checks.push_back(
        check_le("max contextual-value reconstruction error", col_max(r.rows, col(r, "reconstruction_error")), c.tol));
    r.checks.push_back(check_le("uniformity at theta_max", col_max(r.rows, col(r, "uniformity_error")), c.tol));
    r.checks.push_back(check_le("theta = 0 effects equal the projectors", reduction, c.tol));
    r.tolerances["exact"] = c.tol;
    r.diagnostics["theta_max"] = tmax;
}

cv::AcceptanceProfile profile_from(const json &p) {
    if (p["profile"].get<std::string>() == "smoothed-square") {
        return cv::AcceptanceProfile::smoothed_square(p["alpha"].get<double>(), p["b"].get<double>());
    }
    return cv::AcceptanceProfile::gaussian(p["sigma_x"].get<double>());
}

void successive(const ScenarioConfig &c, RunReport &r, int threads) {
    json &p = r.parameters;
    const cv::AcceptanceProfile f = profile_from(p);
    const double sp = p["sigma_p"].get<double>();
    const double sx = cv::sigma_x_of_profile(f);
    const cv::Saturation sat = cv::find_saturating_width(f, sp);
    const bool saturating = p["var_x"].is_null();
    const double vx0 = saturating ? sat.closed_var_x : p["var_x"].get<double>();
    p["var_x"] = vx0;
    const double pm = p["p_mean"].get<double>();
    const int extra = p["random_states"].get<int>();

    struct StateSpec {
        double var_x, var_p, p_mean;
    };
    std::vector<StateSpec> states{{vx0, 0.25 / vx0, pm}};
    for (int i = 1; i <= extra; ++i) {
        Rng rng(derive_seed(c.seed, static_cast<std::uint64_t>(i)));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double vx = vx0 * std::exp(std::log(4.0) * (2.0 * u(rng) - 1.0));
        const double vp = (1.0 + 2.0 * u(rng)) / (4.0 * vx);
        states.push_back({vx, vp, pm + (u(rng) - 0.5) * std::sqrt(vp)});
    }
    double vmax = 0.0;
    for (const auto &s : states) {
        vmax = std::max(vmax, s.var_x);
    }
    const double span = c.grid_span.value_or(
        cv::default_half_span({std::sqrt(vmax + 0.25 / (sp * sp)), sx, 0.5 / sp}));
    const cv::Grid grid = cv::Grid::symmetric(span, c.grid_n.value_or(cv::kDefaultGridPoints));

    r.rows = parallel_rows(states.size(), threads, [&](std::size_t i) -> Row {
        const StateSpec &s = states[i];
        const cv::KernelState rho = i == 0 ? cv::gaussian_state(grid, 0.0, s.p_mean, s.var_x)
                                           : cv::mixed_gaussian_state(grid, 0.0, s.p_mean, s.var_x, s.var_p);
        const cv::SuccessiveResult res = cv::successive_xp(rho, f, sp);
        return {static_cast<std::int64_t>(i), res.var_x_rho, res.var_p_rho, res.sigma_x2, res.eta_p2,
                res.eta_p2_grid, sp * sp, res.measured_var_x, res.measured_var_p, res.product, res.line2,
                res.bound, res.product - res.bound};
    });

    double min_pb = kInf, min_pl = kInf, min_lb = kInf, eta_err = 0.0, vx_err = 0.0;
    for (const auto &row : r.rows) {
        const double prod = cell(row, col(r, "product"));
        const double line2 = cell(row, col(r, "line2"));
        const double bound = cell(row, col(r, "bound"));
        min_pb = std::min(min_pb, prod / bound);
        min_pl = std::min(min_pl, prod / line2);
        min_lb = std::min(min_lb, line2 / bound);
        eta_err = std::max(eta_err, rel_err(cell(row, col(r, "eta_p2_grid")), cell(row, col(r, "eta_p2"))));
        vx_err = std::max(vx_err, rel_err(cell(row, col(r, "measured_var_x")),
                                          cell(row, col(r, "var_x_rho")) + cell(row, col(r, "sigma_x2"))));
    }
    r.checks.push_back(check_ge("min product / bound", min_pb, 1.0 - kBoundSlack));
    r.checks.push_back(check_ge("min product / middle line", min_pl, 1.0 - kBoundSlack));
    r.checks.push_back(check_ge("min middle line / bound", min_lb, 1.0 - kBoundSlack));
    r.checks.push_back(check_le("max rel error, measured var_x vs var_x + sigma_x^2", vx_err, kGridRel));
    r.checks.push_back(check_le("max rel error, grid eta_p^2 vs profile eta_p^2", eta_err, kGridRel));
    if (saturating && pm == 0.0) {
        r.checks.push_back(check_le("saturating product vs closed form (relative)",
                                    rel_err(cell(r.rows[0], col(r, "product")), sat.closed_product), kGridRel));
        if (f.kind() == cv::AcceptanceProfile::Kind::gaussian) {
            r.checks.push_back(check_le("Gaussian saturation equals the bound (relative)",
                                        rel_err(sat.closed_product, cv::successive_bound(sx, sp)), 1e-12));
        }
    }
    r.tolerances["bound_slack"] = kBoundSlack;
    r.tolerances["grid_relative"] = kGridRel;
    r.diagnostics["saturating_var_x"] = sat.closed_var_x;
    r.diagnostics["saturating_product"] = sat.closed_product;
    r.diagnostics["bound"] = cv::successive_bound(sx, sp);
    add_grid_diagnostics(r, grid);
}

void joint(const ScenarioConfig &c, RunReport &r, int threads) {
    json &p = r.parameters;
    const double b = p["b"].get<double>();
    std::vector<double> as = p["a"].is_null() ? std::vector<double>{0.5 * b, b, 2.0 * b}
                                              : p["a"].get<std::vector<double>>();
    std::sort(as.begin(), as.end());
    p["a"] = as;
    const bool saturating = p["var_x"].is_null();
    const double vx = saturating ? 0.5 * b * b : p["var_x"].get<double>();
    p["var_x"] = vx;
    const double amax = as.back();
    const double span =
        c.grid_span.value_or(cv::default_half_span({std::sqrt(vx + 0.5 * (amax * amax + b * b)), b, amax}));
    const cv::Grid grid = cv::Grid::symmetric(span, c.grid_n.value_or(cv::kDefaultGridPoints));
    const cv::KernelState rho = cv::gaussian_state(grid, 0.0, p["p_mean"].get<double>(), vx);

    r.rows = parallel_rows(as.size(), threads, [&](std::size_t i) -> Row {
        const cv::JointResult j = cv::joint_ak(rho, b, as[i]);
        return {j.a, j.b, j.g_norm, j.measured_mean_x, j.measured_var_x, j.measured_mean_p, j.measured_var_p,
                j.product, j.eta_p2, j.eta_p2_closed, j.eta_x2, j.eta_x2_closed};
    });

    double spread = 0.0, ep = 0.0, ex = 0.0;
    for (const char *k : {"measured_mean_x", "measured_var_x", "measured_mean_p", "measured_var_p"}) {
        spread = std::max(spread, col_max(r.rows, col(r, k)) - col_min(r.rows, col(r, k)));
    }
    for (const auto &row : r.rows) {
        ep = std::max(ep, rel_err(cell(row, col(r, "eta_p2")), cell(row, col(r, "eta_p2_closed"))));
        ex = std::max(ex, rel_err(cell(row, col(r, "eta_x2")), cell(row, col(r, "eta_x2_closed"))));
    }
    r.checks.push_back(check_ge("min measured product", col_min(r.rows, col(r, "product")), 1.0 - kBoundSlack));
    if (as.size() > 1) {
        r.checks.push_back(check_le("spread of outcome statistics over a", spread, 1e-10));
    }
    r.checks.push_back(check_le("max rel error, eta_p^2 vs (a^2+b^2)/(2a^2b^2)", ep, kDisturbanceRel));
    r.checks.push_back(check_le("max rel error, eta_x^2 vs (a^2+b^2)/2", ex, kDisturbanceRel));
    if (saturating) {
        r.checks.push_back(
            check_le("|product - 1| at var_x = b^2/2", std::abs(cell(r.rows[0], col(r, "product")) - 1.0), kGridRel));
    }
    r.tolerances["bound_slack"] = kBoundSlack;
    r.tolerances["grid_relative"] = kGridRel;
    r.tolerances["disturbance_relative"] = kDisturbanceRel;
    r.tolerances["a_spread"] = 1e-10;
    add_grid_diagnostics(r, grid);
}

void compare(const ScenarioConfig &c, RunReport &r) {
    const json &p = r.parameters;
    const double sx = p["sigma_x"].get<double>();
    const double sp = p["sigma_p"].get<double>();
    cv::JointVsSuccessiveOptions opt;
    opt.n = c.grid_n.value_or(cv::kDefaultGridPoints);
    opt.half_span = c.grid_span.value_or(0.0);
    opt.var_x = p["var_x"].is_null() ? 0.0 : p["var_x"].get<double>();
    const cv::JointVsSuccessive j = cv::joint_vs_successive(sx, sp, opt);

    r.rows.push_back({sx, sp, j.a2, j.b2, j.var_x_joint, j.var_x_successive, j.var_p_joint, j.var_p_successive,
                      j.diff_x_grid, j.diff_x_closed, j.diff_p_grid, j.diff_p_derived, j.diff_p_closed,
                      j.post_state_mismatch});
    r.checks.push_back(check_le("rel error, grid diff_x vs closed form", rel_err(j.diff_x_grid, j.diff_x_closed),
                                kDisturbanceRel));
    r.checks.push_back(check_le("rel error, grid diff_p vs 1/(2b^2) - 1/(4 sigma_x^2) - sigma_p^2",
                                rel_err(j.diff_p_grid, j.diff_p_derived), kDisturbanceRel));
    r.checks.push_back(check_le("joint vs successive post-state mismatch", j.post_state_mismatch, kGridRel));
    r.diagnostics["diff_p_printed_rel_error"] = rel_err(j.diff_p_grid, j.diff_p_closed);
    r.tolerances["disturbance_relative"] = kDisturbanceRel;
    r.tolerances["grid_relative"] = kGridRel;
    const double var_x = opt.var_x > 0.0 ? opt.var_x : sx / (2.0 * sp);
    const double span =
        opt.half_span > 0.0 ? opt.half_span : cv::default_half_span({std::sqrt(var_x), sx, 0.5 / sp});
    add_grid_diagnostics(r, cv::Grid::symmetric(span, opt.n));
}

void ozawa(const ScenarioConfig &c, RunReport &r, int threads) {
    const json &p = r.parameters;
    const int samples = p["samples"].get<int>();
    const double tmax = p["theta_max"].get<double>();
    r.rows = parallel_rows(static_cast<std::size_t>(samples), threads, [&](std::size_t i) -> Row {
        Rng rng(derive_seed(c.seed, i));
        const spin::Vec3 a = random_in_ball(rng);
        const spin::Vec3 b = random_unit_vector(rng);
        const double theta = std::uniform_real_distribution<double>(0.0, tmax)(rng);
        const spin::BlochState s(a);
        const spin::SpinObservable ob{b};
        const OlwTerms o = olw_inequality(theta, s, ob, c.tol);
        const spin::SharpBound sb = spin::sharp_two_state_bound(s, ob, kInf);
        return {static_cast<std::int64_t>(i), a[0], a[1], a[2], b[0], b[1], b[2], theta, o.lhs, o.rhs, o.gap,
                o.lhs_weak, o.gap_weak, sb.lhs, sb.sharp_rhs};
    });
    double sharp = kInf;
    for (const auto &row : r.rows) {
        sharp = std::min(sharp, cell(row, col(r, "ideal_lhs")) - cell(row, col(r, "sharp_rhs")));
    }
    const double min_gap = col_min(r.rows, col(r, "gap"));
    r.checks.push_back(check_gt("min OLW gap", min_gap, 0.0));
    r.checks.push_back(check_ge("min (theta=0 lhs - sharp bound)", sharp, -1e-12));
    r.diagnostics["min_gap"] = min_gap;
    r.diagnostics["min_gap_weak"] = col_min(r.rows, col(r, "gap_weak"));
    r.tolerances["exact"] = c.tol;
    r.tolerances["sharp"] = 1e-12;
}

void dilation(const ScenarioConfig &c, RunReport &r, int threads) {
    json &p = r.parameters;
    const int samples = p["samples"].get<int>();
    auto outs = p["outcomes"].get<std::vector<int>>();
    std::sort(outs.begin(), outs.end());
    const int dim = p["dim"].is_null() ? outs.back() : p["dim"].get<int>();
    p["dim"] = dim;
    const std::size_t total = outs.size() * static_cast<std::size_t>(samples);
    r.rows = parallel_rows(total, threads, [&](std::size_t k) -> Row {
        const int n = outs[k / samples];
        Rng rng(derive_seed(c.seed, k));
        const DensityMatrix rho = random_density(rng, dim);
        const PVM pvm = random_pvm(rng, dim, n);
        const Observable b = random_observable(rng, dim);
        const DilationCheck d = dilation_crosscheck(pvm, rho, b, 1e-6);
        return {static_cast<std::int64_t>(k), static_cast<std::int64_t>(n), static_cast<std::int64_t>(dim), d.beta,
                d.rho_hat_error, d.eta_dilation, d.eta_intrinsic, d.eta_error};
    });
    r.checks.push_back(check_le("max ||Tr'(U rho x chi U^+) - rho_hat||_max", col_max(r.rows, col(r, "rho_hat_error")),
                                c.tol));
    r.checks.push_back(check_le("max |eta_dilation - eta|", col_max(r.rows, col(r, "eta_error")), c.tol));
    r.tolerances["exact"] = c.tol;
}

void profiles(const ScenarioConfig &, RunReport &r, int threads) {
    json &p = r.parameters;
    std::vector<double> ab;
    if (p["alpha_b"].is_null()) {
        for (int i = 0; i <= 20; ++i) {
            ab.push_back(0.5 * std::pow(40.0, i / 20.0));
        }
    } else {
        ab = p["alpha_b"].get<std::vector<double>>();
    }
    std::sort(ab.begin(), ab.end());
    p["alpha_b"] = ab;
    auto gs = p["gaussian_sigma"].get<std::vector<double>>();
    std::sort(gs.begin(), gs.end());
    const double b = p["b"].get<double>();
    const double sp = p["sigma_p"].get<double>();

    auto cs = p["perturbation"].get<std::vector<double>>();
    std::sort(cs.begin(), cs.end());
    const std::size_t ng = gs.size(), ns = ab.size();

    r.rows = parallel_rows(ng + ns + cs.size(), threads, [&](std::size_t i) -> Row {
        double shape = 0.0;
        std::optional<cv::AcceptanceProfile> f;
        if (i < ng) {
            shape = gs[i];
            f = cv::AcceptanceProfile::gaussian(shape);
        } else if (i < ng + ns) {
            shape = ab[i - ng];
            f = cv::AcceptanceProfile::smoothed_square(shape / b, b);
        } else {
            const double c = shape = cs[i - ng - ns];
            f = cv::AcceptanceProfile::from_function(
                [c](double u) { return (1.0 + c * u * u) * std::exp(-0.25 * u * u); }, 16.0, 8001);
        }
        const bool ss = f->kind() == cv::AcceptanceProfile::Kind::smoothed_square;
        const cv::ProfileQuadrature q = f->quadrature();
        const double s2 = f->sigma_x2_closed().value_or(q.sigma_x2);
        const double e2 = f->eta_p2_closed().value_or(q.eta_p2);
        const cv::Saturation sat = cv::find_saturating_width(*f, sp);
        return {f->name(), shape, ss ? f->alpha() : kNaN, ss ? f->b() : kNaN, s2, q.sigma_x2, e2, q.eta_p2,
                4.0 * s2 * e2, sat.closed_var_x, sat.closed_product};
    });

    double min_ratio = kInf, min_strict = kInf, gauss_dev = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const Row &row = r.rows[i];
        const double ratio = cell(row, col(r, "ratio"));
        min_ratio = std::min(min_ratio, ratio);
        if (i < ng) {
            gauss_dev = std::max(gauss_dev, std::abs(ratio - 1.0));
        } else if (i >= ng + ns && cs[i - ng - ns] == 0.0) {
            gauss_dev = std::max(gauss_dev, std::abs(ratio - 1.0));
        } else {
            min_strict = std::min(min_strict, ratio - 1.0);
        }
        quad = std::max(quad, rel_err(cell(row, col(r, "sigma_x2_quadrature")), cell(row, col(r, "sigma_x2"))));
        quad = std::max(quad, rel_err(cell(row, col(r, "eta_p2_quadrature")), cell(row, col(r, "eta_p2"))));
    }
    r.checks.push_back(check_ge("min 4 sigma_x^2 eta_p^2", min_ratio, 1.0 - kBoundSlack));
    if (!gs.empty()) {
        r.checks.push_back(check_le("max |4 sigma_x^2 eta_p^2 - 1| over Gaussians", gauss_dev, kBoundSlack));
    }
    if (std::isfinite(min_strict)) {
        r.checks.push_back(check_gt("min (4 sigma_x^2 eta_p^2 - 1) over non-Gaussian profiles", min_strict, 0.0));
    }
    r.checks.push_back(check_le("max rel error, closed forms vs quadrature", quad, kBoundSlack));
    r.tolerances["bound_slack"] = kBoundSlack;
}

}  // namespace

Check check_le(std::string name, double value, double bound) {
    const double m = bound - value;
    return {std::move(name), "<=", value, bound, m, m >= 0.0};
}

Check check_ge(std::string name, double value, double bound) {
    const double m = value - bound;
    return {std::move(name), ">=", value, bound, m, m >= 0.0};
}

Check check_gt(std::string name, double value, double bound) {
    const double m = value - bound;
    return {std::move(name), ">", value, bound, m, m > 0.0};
}

bool RunReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.passed; });
}

int worker_threads() {
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char *env = std::getenv("QMEAS_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) {
            n = std::min(n, cap);
        }
    }
    return n;
}

RunReport run(const ScenarioConfig &c) {
    auto diags = validate(c);
    if (!diags.empty()) {
        throw ConfigError(std::move(diags));
    }
    const auto t0 = std::chrono::steady_clock::now();
    RunReport r{c.scenario, resolve(c), c.seed, scenario_columns(c.scenario), {}, {}, {}, {}, worker_threads(), 0.0};
    switch (c.scenario) {
        case Scenario::two_state:
            two_state(c, r);
            break;
        case Scenario::weak_sweep:
            weak_sweep(c, r, r.threads);
            break;
        case Scenario::successive_xp:
            successive(c, r, r.threads);
            break;
        case Scenario::joint_ak:
            joint(c, r, r.threads);
            break;
        case Scenario::compare_joint_successive:
            compare(c, r);
            break;
        case Scenario::ozawa_gap:
            ozawa(c, r, r.threads);
            break;
        case Scenario::dilation_check:
            dilation(c, r, r.threads);
            break;
        case Scenario::profile_sweep:
            profiles(c, r, r.threads);
            break;
    }
    r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace qmeas::report
