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

#include "qmeas/povm.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qmeas/errors.hpp"

namespace qmeas {

namespace {

constexpr int kProfileSamples = 257;

ComplexMatrix herm(const ComplexMatrix &m) {
    return 0.5 * (m + m.adjoint());
}

ComplexMatrix coupling_generator(const PVM &p) {
    const Eigen::Index d = p.dim();
    ComplexMatrix h = ComplexMatrix::Zero(d * d, d * d);
    for (const auto &pi : p.projectors()) {
        h += kron(pi, pi);
    }
    return h;
}

ComplexMatrix aux_state(const PVM &p) {
    const auto ranks = p.ranks();
    const double n = static_cast<double>(p.size());
    ComplexMatrix chi = ComplexMatrix::Zero(p.dim(), p.dim());
    for (std::size_t i = 0; i < p.size(); ++i) {
        chi += p.projectors()[i] / (ranks[i] * n);
    }
    return chi;
}

ComplexMatrix partial_collapse(const PVM &p, double beta, const DensityMatrix &rho) {
    require_square(rho.matrix(), p.dim(), "dilated_post_state");
    const ComplexMatrix u = exp_i_hermitian(coupling_generator(p), beta);
    const ComplexMatrix joint = u * kron(rho.matrix(), aux_state(p)) * u.adjoint();
    return herm(partial_trace_second(joint, p.dim(), p.dim()));
}

void require_outcomes(int n, const char *what) {
    if (n < 2) {
        throw DomainError(std::string(what) + ": need at least two outcomes");
    }
    if (n > 4) {
        throw DomainError(std::string(what) + ": dilation prescription unavailable for N = " +
                          std::to_string(n) + " (requires N <= 4)");
    }
}

}  // namespace

DiscretePOVM::DiscretePOVM(std::vector<PovmElement> elements, std::vector<double> labels, double tol)
    : elements_(std::move(elements)), labels_(std::move(labels)) {
    if (elements_.empty()) {
        throw InvariantError("DiscretePOVM: no elements");
    }
    if (elements_.size() != labels_.size()) {
        throw InvariantError("DiscretePOVM: " + std::to_string(elements_.size()) + " elements but " +
                             std::to_string(labels_.size()) + " labels");
    }
    const Eigen::Index d = elements_.front().effect.rows();
    ComplexMatrix total = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        const auto &e = elements_[i];
        const std::string tag = "DiscretePOVM element " + std::to_string(i);
        require_square(e.effect, d, tag);
        require_square(e.kraus, d, tag);
        if (!std::isfinite(labels_[i])) {
            throw InvariantError(tag + ": non-finite label");
        }
        if (hermiticity_defect(e.effect) > tol) {
            throw InvariantError(tag + ": effect not hermitian");
        }
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm(e.effect), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tol || es.eigenvalues().maxCoeff() > 1.0 + tol) {
            throw InvariantError(tag + ": spectrum outside [0, 1]");
        }
        if (max_abs(e.kraus.adjoint() * e.kraus - e.effect) > tol) {
            throw InvariantError(tag + ": effect differs from L^dagger L");
        }
        total += e.effect;
    }
    if (max_abs(total - ComplexMatrix::Identity(d, d)) > tol) {
        throw InvariantError("DiscretePOVM: effects do not sum to the identity");
    }
}

DiscretePOVM DiscretePOVM::from_pvm(const PVM &pvm) {
    std::vector<PovmElement> el;
    el.reserve(pvm.size());
    for (const auto &p : pvm.projectors()) {
        el.push_back({p, p});
    }
    return DiscretePOVM(std::move(el), pvm.eigenvalues());
}

MeasurementOutcome collapse_povm(const DensityMatrix &rho, const DiscretePOVM &povm) {
    require_square(rho.matrix(), povm.dim(), "collapse_povm");
    ComplexMatrix post = ComplexMatrix::Zero(rho.dim(), rho.dim());
    std::vector<OutcomeProbability> probs;
    probs.reserve(povm.size());
    for (std::size_t i = 0; i < povm.size(); ++i) {
        const auto &e = povm.elements()[i];
        post += e.kraus * rho.matrix() * e.kraus.adjoint();
        probs.push_back({povm.labels()[i], expectation(e.effect, rho).real()});
    }
    return {DensityMatrix(herm(post)), std::move(probs)};
}

WeakFamily::WeakFamily(PVM base, Profile f, double theta_max)
    : base_(std::move(base)), f_(std::move(f)), theta_max_(theta_max) {
    if (base_.size() < 2) {
        throw InvariantError("WeakFamily: base PVM needs at least two outcomes");
    }
    if (!f_) {
        throw InvariantError("WeakFamily: empty profile");
    }
    if (!(theta_max_ > 0.0) || !std::isfinite(theta_max_)) {
        throw InvariantError("WeakFamily: theta_max must be positive and finite");
    }
    constexpr double kEndTol = 1e-12;
    if (std::abs(f_(0.0) - 1.0) > kEndTol) {
        throw InvariantError("WeakFamily: f(0) != 1");
    }
    if (std::abs(f_(theta_max_)) > kEndTol) {
        throw InvariantError("WeakFamily: f(theta_max) != 0");
    }
    double prev = f_(0.0);
    for (int k = 1; k < kProfileSamples; ++k) {
        const double t = theta_max_ * k / (kProfileSamples - 1);
        const double v = f_(t);
        if (!std::isfinite(v) || v < -kEndTol || v > 1.0 + kEndTol) {
            throw InvariantError("WeakFamily: f leaves [0, 1] at theta = " + std::to_string(t));
        }
        if (v > prev + kEndTol) {
            throw InvariantError("WeakFamily: f not monotone decreasing near theta = " +
                                 std::to_string(t));
        }
        prev = v;
    }
}

double standard_theta_max(int outcomes) {
    require_outcomes(outcomes, "standard_theta_max");
    return std::ldexp(std::numbers::pi, outcomes - 3) / outcomes;
}

WeakFamily WeakFamily::standard(PVM base) {
    const int n = static_cast<int>(base.size());
    const double tmax = standard_theta_max(n);
    auto f = [n, tmax](double theta) {
        return (2.0 / n) * (1.0 - std::cos(2.0 * (tmax - theta)));
    };
    return WeakFamily(std::move(base), f, tmax);
}

double WeakFamily::f(double theta) const {
    const double slack = 1e-12 * theta_max_;
    if (!(theta >= -slack && theta <= theta_max_ + slack)) {
        throw DomainError("WeakFamily: theta = " + std::to_string(theta) + " outside [0, " +
                          std::to_string(theta_max_) + "]");
    }
    if (theta <= 0.0) {
        return 1.0;
    }
    if (theta >= theta_max_) {
        return 0.0;
    }
    return std::clamp(f_(theta), 0.0, 1.0);
}

double WeakFamily::g(double theta) const {
    const double fv = f(theta);
    const double n = outcomes();
    return (1.0 - 2.0 / n) * fv + (2.0 / n) * std::sqrt(std::max(0.0, n - (n - 1.0) * fv)) * std::sqrt(fv);
}

std::vector<ComplexMatrix> WeakFamily::kraus(double theta) const {
    const double fv = f(theta);
    const double n = outcomes();
    const double sf = std::sqrt(fv);
    const double c = (std::sqrt(std::max(0.0, n - (n - 1.0) * fv)) - sf) / n;
    const ComplexMatrix id = ComplexMatrix::Identity(base_.dim(), base_.dim());
    std::vector<ComplexMatrix> out;
    out.reserve(base_.size());
    for (const auto &p : base_.projectors()) {
        out.emplace_back(c * id + sf * p);
    }
    return out;
}

DiscretePOVM weak_povm(const WeakFamily &w, double theta, double tol) {
    const auto ls = w.kraus(theta);
    const double g = w.g(theta);
    const double n = w.outcomes();
    const Eigen::Index d = w.base().dim();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    std::vector<PovmElement> el;
    el.reserve(ls.size());
    for (std::size_t i = 0; i < ls.size(); ++i) {
        ComplexMatrix f = herm(ls[i].adjoint() * ls[i]);
        const ComplexMatrix closed = ((1.0 - g) / n) * id + g * w.base().projectors()[i];
        if (max_abs(f - closed) > tol) {
            throw ConsistencyError("weak_povm: L^dagger L differs from (1-g)/N + g P at theta = " +
                                   std::to_string(theta));
        }
        el.push_back({std::move(f), ls[i]});
    }
    return DiscretePOVM(std::move(el), w.base().eigenvalues(), tol);
}

std::vector<double> contextual_values(const WeakFamily &w, double theta, double g_floor) {
    const double g = w.g(theta);
    if (g <= g_floor) {
        throw DomainError("contextual values undefined at uniform limit (g = " + std::to_string(g) + ")");
    }
    const auto &lam = w.base().eigenvalues();
    double mean = 0.0;
    for (double l : lam) {
        mean += l;
    }
    mean /= static_cast<double>(lam.size());
    std::vector<double> out;
    out.reserve(lam.size());
    for (double l : lam) {
        out.push_back((l - (1.0 - g) * mean) / g);
    }
    return out;
}

ComplexMatrix tilde_operator(const ComplexMatrix &o, const WeakFamily &w, double theta) {
    require_square(o, w.base().dim(), "tilde_operator");
    ComplexMatrix out = ComplexMatrix::Zero(o.rows(), o.cols());
    for (const auto &l : w.kraus(theta)) {
        out += l * o * l.adjoint();
    }
    return out;
}

double epsilon_noise(const DiscretePOVM &m, const PVM &p, const DensityMatrix &rho) {
    require_square(rho.matrix(), p.dim(), "epsilon_noise");
    require_square(m.elements().front().effect, p.dim(), "epsilon_noise");
    if (m.size() != p.size()) {
        throw InvariantError("epsilon_noise: POVM has " + std::to_string(m.size()) +
                             " outcomes, PVM has " + std::to_string(p.size()));
    }
    const auto &lam = p.eigenvalues();
    for (std::size_t i = 0; i < lam.size(); ++i) {
        if (std::abs(m.labels()[i] - lam[i]) > 1e-12 * std::max(1.0, std::abs(lam[i]))) {
            throw InvariantError("epsilon_noise: POVM label " + std::to_string(i) +
                                 " does not match the PVM eigenvalue");
        }
    }
    double eps2 = 0.0;
    for (std::size_t i = 0; i < lam.size(); ++i) {
        for (std::size_t j = 0; j < lam.size(); ++j) {
            if (i == j) {
                continue;
            }
            const double dl = lam[i] - lam[j];
            eps2 += dl * dl * expectation(m.elements()[i].effect * p.projectors()[j], rho).real();
        }
    }
    return std::sqrt(std::max(0.0, eps2));
}

double epsilon_noise_reduced(const WeakFamily &w, double theta, const DensityMatrix &rho) {
    const PVM &p = w.base();
    require_square(rho.matrix(), p.dim(), "epsilon_noise_reduced");
    const auto &lam = p.eigenvalues();
    double s = 0.0;
    for (std::size_t j = 0; j < lam.size(); ++j) {
        const double pj = expectation(p.projectors()[j], rho).real();
        for (double li : lam) {
            s += (li - lam[j]) * (li - lam[j]) * pj;
        }
    }
    const double eps2 = (1.0 - w.g(theta)) * s / w.outcomes();
    return std::sqrt(std::max(0.0, eps2));
}

double eta_weak(const Observable &b, const WeakFamily &w, double theta, const DensityMatrix &rho,
                double tol) {
    require_square(b.matrix(), w.base().dim(), "eta_weak");
    require_square(rho.matrix(), w.base().dim(), "eta_weak");
    const ComplexMatrix &bm = b.matrix();
    const ComplexMatrix bt = tilde_operator(bm, w, theta);
    const ComplexMatrix b2t = tilde_operator(bm * bm, w, theta);
    const ComplexMatrix diff = bm - bt;
    const double direct = expectation(diff * diff + b2t - bt * bt, rho).real();

    const double eta = disturbance_eta(b, w.base(), rho, tol);
    const double closed = w.f(theta) * eta * eta;
    const double scale = std::max(1.0, max_abs(bm * bm));
    if (std::abs(direct - closed) > tol * scale) {
        throw ConsistencyError("eta_weak: direct value " + std::to_string(direct) +
                               " differs from f(theta) eta^2 = " + std::to_string(closed));
    }
    return std::sqrt(std::max(0.0, direct));
}

DilationTriple dilation_triple(const PVM &p, double tol) {
    const int n = static_cast<int>(p.size());
    require_outcomes(n, "dilation_triple");
    const double beta = std::acos(1.0 - 0.5 * n);
    if (std::abs(2.0 * (1.0 - std::cos(beta)) - n) > tol) {
        throw ConsistencyError("dilation_triple: 2(1 - cos beta) != N");
    }
    ComplexMatrix u = exp_i_hermitian(coupling_generator(p), beta);
    const Eigen::Index dd = u.rows();
    if (max_abs(u.adjoint() * u - ComplexMatrix::Identity(dd, dd)) > tol) {
        throw ConsistencyError("dilation_triple: coupling is not unitary");
    }
    return {DensityMatrix(aux_state(p)), std::move(u), beta};
}

ComplexMatrix dilated_post_state(const DilationTriple &t, const DensityMatrix &rho) {
    const Eigen::Index d = t.chi.dim();
    require_square(rho.matrix(), d, "dilated_post_state");
    const ComplexMatrix joint = t.u * kron(rho.matrix(), t.chi.matrix()) * t.u.adjoint();
    return herm(partial_trace_second(joint, d, d));
}

ComplexMatrix dilated_post_state(const PVM &p, double beta, const DensityMatrix &rho) {
    return partial_collapse(p, beta, rho);
}

double eta_from_dilation(const DilationTriple &t, const Observable &b, const DensityMatrix &rho) {
    const Eigen::Index d = t.chi.dim();
    require_square(b.matrix(), d, "eta_from_dilation");
    require_square(rho.matrix(), d, "eta_from_dilation");
    const ComplexMatrix bb = kron(b.matrix(), ComplexMatrix::Identity(d, d));
    const ComplexMatrix diff = t.u.adjoint() * bb * t.u - bb;
    const ComplexMatrix joint = kron(rho.matrix(), t.chi.matrix());
    const double eta2 = (diff * diff * joint).trace().real();
    return std::sqrt(std::max(0.0, eta2));
}

DilationCheck dilation_crosscheck(const PVM &p, const DensityMatrix &rho, const Observable &b,
                                  double tol) {
    require_square(rho.matrix(), p.dim(), "dilation_crosscheck");
    require_square(b.matrix(), p.dim(), "dilation_crosscheck");
    const DilationTriple t = dilation_triple(p, tol);

    DilationCheck r{};
    r.outcomes = static_cast<int>(p.size());
    r.beta = t.beta;
    const ComplexMatrix rho_hat = collapse_pvm(rho, p).post_state.matrix();
    r.rho_hat_error = max_abs(dilated_post_state(t, rho) - rho_hat);
    r.eta_dilation = eta_from_dilation(t, b, rho);
    r.eta_intrinsic = disturbance_eta(b, p, rho, tol);
    r.eta_error = std::abs(r.eta_dilation - r.eta_intrinsic);

    if (r.rho_hat_error > tol) {
        throw ConsistencyError("dilation_crosscheck: partial trace differs from the collapsed state by " +
                               std::to_string(r.rho_hat_error));
    }
    // Compare squares: η itself loses half its digits near zero.
    const double e2 = std::abs(r.eta_dilation * r.eta_dilation - r.eta_intrinsic * r.eta_intrinsic);
    const double scale = std::max(1.0, max_abs(b.matrix() * b.matrix()));
    if (e2 > tol * scale) {
        throw ConsistencyError("dilation_crosscheck: eta from the dilation differs from the intrinsic eta");
    }
    return r;
}

OzawaTerms ozawa_inequality(const Observable &a, const Observable &b, const DensityMatrix &rho,
                            double epsilon, double eta) {
    if (!(epsilon >= 0.0) || !(eta >= 0.0)) {
        throw InvariantError("ozawa_inequality: epsilon and eta must be nonnegative");
    }
    require_same_dim(a.matrix(), b.matrix(), "ozawa_inequality");
    require_square(a.matrix(), rho.dim(), "ozawa_inequality");
    const double da = std::sqrt(variance(a, rho));
    const double db = std::sqrt(variance(b, rho));
    OzawaTerms r{};
    r.lhs = epsilon * (eta + db) + da * eta;
    r.rhs = 0.5 * std::abs(expectation(commutator(a.matrix(), b.matrix()), rho));
    r.gap = r.lhs - r.rhs;
    return r;
}

OlwTerms olw_inequality(double theta, const spin::BlochState &s, const spin::SpinObservable &obs,
                        double tol) {
    constexpr double kQuarterPi = std::numbers::pi / 4.0;
    if (!(theta >= 0.0 && theta <= kQuarterPi)) {
        throw DomainError("olw_inequality: theta = " + std::to_string(theta) + " outside [0, pi/4]");
    }
    const auto &a = s.a();
    const auto &b = obs.b;
    const double byz = std::sqrt(b[1] * b[1] + b[2] * b[2]);
    const double ab = spin::dot(a, b);
    const double sn = std::sin(theta);
    const double cs = std::cos(theta);

    OlwTerms r{};
    r.noise_disturbance = 2.0 * sn * (cs - sn) * byz;
    r.noise_spread = std::sqrt(2.0) * sn * std::sqrt(std::max(0.0, spin::dot(b, b) - ab * ab));
    r.ideal = std::sqrt(std::max(0.0, 1.0 - a[0] * a[0])) * byz;
    r.lhs = r.noise_disturbance + r.noise_spread + r.ideal;
    r.rhs = std::abs(b[1] * a[2] - b[2] * a[1]) / std::sqrt(2.0);
    r.gap = r.lhs - r.rhs;

    const DensityMatrix rho = spin::to_density(s);
    const Observable am(spin::jx());
    const Observable bm = spin::to_observable(obs);
    const PVM pvm = pvm_from_observable(am);
    const WeakFamily w = WeakFamily::standard(pvm);
    r.epsilon = epsilon_noise(weak_povm(w, theta), pvm, rho);
    r.eta_theta = eta_weak(bm, w, theta, rho, tol);
    r.eta = disturbance_eta(bm, pvm, rho, tol);
    const double da = std::sqrt(variance(am, rho));
    const double db = std::sqrt(variance(bm, rho));

    // Each printed term is 2√2 times a product of engine quantities; compare squares.
    const auto check = [tol](double printed, double engine, const char *name) {
        if (std::abs(printed * printed - 8.0 * engine * engine) > tol * std::max(1.0, printed * printed)) {
            throw ConsistencyError(std::string("olw_inequality: term ") + name +
                                   " disagrees with the matrix engine");
        }
    };
    check(r.noise_disturbance, r.epsilon * r.eta_theta, "noise_disturbance");
    check(r.noise_spread, r.epsilon * db, "noise_spread");
    check(r.ideal, da * r.eta, "ideal");

    const double k = 2.0 * std::sqrt(2.0);
    r.lhs_weak = k * (r.epsilon * (r.eta_theta + db) + da * r.eta_theta);
    r.gap_weak = r.lhs_weak - r.rhs;

    if (r.gap < -tol) {
        throw ConsistencyError("olw_inequality: negative gap " + std::to_string(r.gap));
    }
    return r;
}

}  // namespace qmeas
