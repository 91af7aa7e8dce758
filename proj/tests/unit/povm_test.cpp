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

#include <gtest/gtest.h>

#include <numbers>

#include "qmeas/errors.hpp"
#include "qmeas/povm.hpp"
#include "qmeas/projective.hpp"
#include "qmeas/random.hpp"
#include "support.hpp"

using namespace qmeas;

namespace {

constexpr double kPi = std::numbers::pi;

PVM jx_pvm() { return pvm_from_observable(Observable(qt::spin_op({1, 0, 0}))); }

// g from f without going through WeakFamily::g.
double g_of(double f, int n) {
    return (1.0 - 2.0 / n) * f + (2.0 / n) * std::sqrt(n - (n - 1) * f) * std::sqrt(f);
}

// Σ_ij (λ_i − λ_j)² Tr(F_i P_j ρ), summed by hand.
double eps2_double_sum(const DiscretePOVM &m, const PVM &p, const ComplexMatrix &rho) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double d = p.eigenvalues()[i] - p.eigenvalues()[j];
            s += d * d * qt::re_trace(m.elements()[i].effect * p.projectors()[j] * rho);
        }
    }
    return s;
}

}  // namespace

TEST(DiscretePovm, RejectsInvalidElements) {
    const PVM p = jx_pvm();
    const ComplexMatrix p0 = p.projectors()[0], p1 = p.projectors()[1];
    EXPECT_NO_THROW(DiscretePOVM({{p0, p0}, {p1, p1}}, {-0.5, 0.5}));
    EXPECT_THROW(DiscretePOVM({{p0, p0}}, {-0.5}), InvariantError);
    EXPECT_THROW(DiscretePOVM({{p0, p0}, {p1, p1}}, {-0.5}), InvariantError);
    const ComplexMatrix neg = 1.5 * p0 - 0.5 * p1;
    EXPECT_THROW(DiscretePOVM({{neg, neg}, {ComplexMatrix(ComplexMatrix::Identity(2, 2) - neg), p1}}, {0, 1}),
                 InvariantError);
    EXPECT_THROW(DiscretePOVM({{p0, p1}, {p1, p0}}, {0, 1}), InvariantError);
}

TEST(CollapsePovm, PvmCaseMatchesCollapsePvm) {
    Rng rng(qt::kSeed);
    for (int trial = 0; trial < 50; ++trial) {
        const PVM p = random_pvm(rng, 4, 3);
        const DensityMatrix rho = random_density(rng, 4);
        const MeasurementOutcome a = collapse_povm(rho, DiscretePOVM::from_pvm(p));
        const MeasurementOutcome b = collapse_pvm(rho, p);
        EXPECT_LT(max_abs(a.post_state.matrix() - b.post_state.matrix()), 1e-14);
        for (std::size_t i = 0; i < p.size(); ++i) {
            EXPECT_NEAR(a.outcome_probs[i].prob, b.outcome_probs[i].prob, 1e-14);
        }
    }
}

TEST(WeakFamily, StandardThetaMax) {
    EXPECT_NEAR(standard_theta_max(2), kPi / 4, 1e-15);
    EXPECT_NEAR(standard_theta_max(3), kPi / 3, 1e-15);
    EXPECT_NEAR(standard_theta_max(4), kPi / 2, 1e-15);
    EXPECT_THROW(standard_theta_max(5), DomainError);
    EXPECT_THROW(standard_theta_max(1), DomainError);
}

TEST(WeakFamily, TwoOutcomeProfile) {
    const WeakFamily w = WeakFamily::standard(jx_pvm());
    for (double t : {0.0, 0.1, kPi / 8, 0.7, kPi / 4}) {
        EXPECT_NEAR(w.f(t), 1 - std::sin(2 * t), 1e-15);
    }
    EXPECT_THROW(w.f(-1e-9), DomainError);
    EXPECT_THROW(w.f(kPi / 4 + 1e-9), DomainError);
}

TEST(WeakFamily, RejectsBadProfiles) {
    EXPECT_THROW(WeakFamily(jx_pvm(), [](double t) { return 1 - t; }, 2.0), InvariantError);
    EXPECT_THROW(WeakFamily(jx_pvm(), [](double t) { return std::cos(t) * std::cos(t) * (1 + 0.5 * std::sin(8 * t)); },
                            kPi / 2),
                 InvariantError);
    EXPECT_NO_THROW(WeakFamily(jx_pvm(), [](double t) { return 1 - t; }, 1.0));
}

TEST(WeakPovm, Endpoints) {
    Rng rng(qt::kSeed + 1);
    for (int n = 2; n <= 4; ++n) {
        const PVM p = random_pvm(rng, 4, n);
        const WeakFamily w = WeakFamily::standard(p);
        const DiscretePOVM m0 = weak_povm(w, 0.0);
        EXPECT_NEAR(w.g(0.0), 1.0, 1e-15);
        for (int i = 0; i < n; ++i) {
            EXPECT_LT(max_abs(m0.elements()[i].effect - p.projectors()[i]), 1e-14);
        }
        const DiscretePOVM m1 = weak_povm(w, w.theta_max());
        EXPECT_NEAR(w.g(w.theta_max()), 0.0, 1e-15);
        const DensityMatrix rho = random_density(rng, 4);
        const MeasurementOutcome out = collapse_povm(rho, m1);
        EXPECT_LT(max_abs(out.post_state.matrix() - rho.matrix()), 1e-14);
        for (int i = 0; i < n; ++i) {
            EXPECT_LT(max_abs(m1.elements()[i].effect - ComplexMatrix::Identity(4, 4) / n), 1e-14);
            EXPECT_NEAR(out.outcome_probs[i].prob, 1.0 / n, 1e-14);
        }
    }
}

TEST(WeakPovm, GAtEighthPi) {
    const WeakFamily w = WeakFamily::standard(jx_pvm());
    const double f = 1 - std::sin(kPi / 4);
    EXPECT_NEAR(w.g(kPi / 8), g_of(f, 2), 1e-15);
    EXPECT_NEAR(w.g(kPi / 8), std::sin(kPi / 4), 1e-15);
    const DiscretePOVM m = weak_povm(w, kPi / 8);
    ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
    for (const auto &e : m.elements()) {
        sum += e.effect;
        EXPECT_LT(max_abs(e.kraus.adjoint() * e.kraus - e.effect), 1e-15);
    }
    EXPECT_LT(max_abs(sum - ComplexMatrix::Identity(2, 2)), 1e-15);
}

TEST(WeakPovm, InterpolatesBetweenStateAndCollapse) {
    Rng rng(qt::kSeed + 2);
    int checked = 0;
    for (int n = 2; n <= 4; ++n) {
        for (int trial = 0; trial < 12; ++trial) {
            const Eigen::Index dim = n + trial % 2;
            const PVM p = random_pvm(rng, dim, n);
            const DensityMatrix rho = random_density(rng, dim);
            const WeakFamily w = WeakFamily::standard(p);
            const ComplexMatrix hat = collapse_pvm(rho, p).post_state.matrix();
            for (int k = 0; k < 3; ++k) {
                const double theta = std::uniform_real_distribution<double>(0, w.theta_max())(rng);
                const double f = w.f(theta);
                EXPECT_NEAR(w.g(theta), g_of(f, n), 1e-14);
                const DiscretePOVM m = weak_povm(w, theta);
                const ComplexMatrix tilde = collapse_povm(rho, m).post_state.matrix();
                EXPECT_LE(max_abs(tilde - ((1 - f) * rho.matrix() + f * hat)), 1e-10);
                ++checked;
            }
        }
    }
    EXPECT_GE(checked, 100);
}

TEST(ContextualValues, Examples) {
    const PVM p = jx_pvm();
    const WeakFamily w = WeakFamily::standard(p);
    const auto l0 = contextual_values(w, 0.0);
    EXPECT_NEAR(l0[0], -0.5, 1e-15);
    EXPECT_NEAR(l0[1], 0.5, 1e-15);
    for (double t : {0.1, 0.3, 0.6, kPi / 4 - 1e-3}) {
        const auto l = contextual_values(w, t);
        EXPECT_NEAR(l[1], 0.5 / w.g(t), 1e-12 / w.g(t));
        EXPECT_NEAR(l[0], -0.5 / w.g(t), 1e-12 / w.g(t));
    }
    EXPECT_THROW(contextual_values(w, kPi / 4), DomainError);
}

TEST(ContextualValues, Reconstruction) {
    Rng rng(qt::kSeed + 3);
    for (int n = 2; n <= 4; ++n) {
        const PVM p = random_pvm(rng, 5, n);
        const WeakFamily w = WeakFamily::standard(p);
        for (int k = 0; k < 40; ++k) {
            const double theta = std::uniform_real_distribution<double>(0, w.theta_max() - 1e-3)(rng);
            const auto lam = contextual_values(w, theta);
            const DiscretePOVM m = weak_povm(w, theta);
            ComplexMatrix sum = ComplexMatrix::Zero(5, 5);
            for (int i = 0; i < n; ++i) {
                sum += lam[i] * m.elements()[i].effect;
            }
            EXPECT_LE(max_abs(sum - p.observable().matrix()), 1e-12);
        }
    }
}

TEST(EpsilonNoise, IdealMeasurementHasNone) {
    Rng rng(qt::kSeed + 4);
    const PVM p = random_pvm(rng, 3, 3);
    const WeakFamily w = WeakFamily::standard(p);
    EXPECT_NEAR(epsilon_noise(weak_povm(w, 0.0), p, random_density(rng, 3)), 0.0, 1e-7);
}

TEST(EpsilonNoise, ReducedFormMatchesDoubleSum) {
    Rng rng(qt::kSeed + 5);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 3;
        const PVM p = random_pvm(rng, 4, n);
        const DensityMatrix rho = random_density(rng, 4);
        const WeakFamily w = WeakFamily::standard(p);
        const double theta = std::uniform_real_distribution<double>(0, w.theta_max())(rng);
        const DiscretePOVM m = weak_povm(w, theta);
        const double full = epsilon_noise(m, p, rho);
        EXPECT_NEAR(full * full, eps2_double_sum(m, p, rho.matrix()), 1e-12);
        const double reduced = epsilon_noise_reduced(w, theta, rho);
        EXPECT_NEAR(reduced * reduced, full * full, 1e-12);
    }
}

TEST(EpsilonNoise, UniformLimit) {
    Rng rng(qt::kSeed + 6);
    const PVM p = random_pvm(rng, 3, 3);
    const DensityMatrix rho = random_density(rng, 3);
    const WeakFamily w = WeakFamily::standard(p);
    double want = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            const double d = p.eigenvalues()[i] - p.eigenvalues()[j];
            want += d * d * qt::re_trace(p.projectors()[j] * rho.matrix()) / 3;
        }
    }
    const double e = epsilon_noise_reduced(w, w.theta_max(), rho);
    EXPECT_NEAR(e * e, want, 1e-13);
}

TEST(EpsilonNoise, RejectsMismatchedLabels) {
    const PVM p = jx_pvm();
    const DiscretePOVM m({{p.projectors()[0], p.projectors()[0]}, {p.projectors()[1], p.projectors()[1]}}, {0, 1});
    EXPECT_THROW(epsilon_noise(m, p, DensityMatrix(qt::bloch({0, 0, 0}))), InvariantError);
}

TEST(EtaWeak, Examples) {
    const PVM p = jx_pvm();
    const WeakFamily w = WeakFamily::standard(p);
    const Observable jy(qt::spin_op({0, 1, 0}));
    const DensityMatrix rho(qt::bloch({0.2, -0.3, 0.5}));
    EXPECT_NEAR(eta_weak(jy, w, 0.0, rho), disturbance_eta(jy, p, rho), 1e-12);
    EXPECT_NEAR(eta_weak(jy, w, kPi / 4, rho), 0.0, 1e-7);
    const double e = eta_weak(jy, w, kPi / 8, rho);
    EXPECT_NEAR(e * e, (1 - std::sin(kPi / 4)) * 0.5, 1e-12);
}

TEST(EtaWeak, ScalesWithProfile) {
    Rng rng(qt::kSeed + 7);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 3;
        const PVM p = random_pvm(rng, 4, n);
        const Observable b = random_observable(rng, 4);
        const DensityMatrix rho = random_density(rng, 4);
        const WeakFamily w = WeakFamily::standard(p);
        const double theta = std::uniform_real_distribution<double>(0, w.theta_max())(rng);
        const double eta = disturbance_eta(b, p, rho);
        const double et = eta_weak(b, w, theta, rho);
        EXPECT_NEAR(et * et, w.f(theta) * eta * eta, 1e-10);
    }
}

TEST(Dilation, BetaPerOutcomeCount) {
    Rng rng(qt::kSeed + 8);
    const double want[] = {kPi / 2, 2 * kPi / 3, kPi};
    for (int n = 2; n <= 4; ++n) {
        const DilationTriple t = dilation_triple(random_pvm(rng, 4, n));
        EXPECT_NEAR(t.beta, want[n - 2], 1e-14);
        EXPECT_NEAR(2 * (1 - std::cos(t.beta)), n, 1e-14);
    }
    EXPECT_THROW(dilation_triple(random_pvm(rng, 5, 5)), DomainError);
}

TEST(Dilation, CrossCheckOnRandomInstances) {
    Rng rng(qt::kSeed + 9);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 3;
        const Eigen::Index dim = n + trial % 2;
        const PVM p = random_pvm(rng, dim, n);
        const DensityMatrix rho = random_density(rng, dim);
        const Observable b = random_observable(rng, dim);
        const DilationCheck d = dilation_crosscheck(p, rho, b);
        EXPECT_LE(d.rho_hat_error, 1e-10);
        EXPECT_LE(d.eta_error, 1e-10);
        // Direct tensor computation, independent of the library's partial trace.
        const DilationTriple t = dilation_triple(p);
        const ComplexMatrix big = t.u * kron(rho.matrix(), t.chi.matrix()) * t.u.adjoint();
        ComplexMatrix reduced = ComplexMatrix::Zero(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = 0; j < dim; ++j) {
                for (Eigen::Index k = 0; k < dim; ++k) {
                    reduced(i, j) += big(i * dim + k, j * dim + k);
                }
            }
        }
        EXPECT_LE(max_abs(reduced - collapse_pvm(rho, p).post_state.matrix()), 1e-10);
    }
}

TEST(Dilation, WeakCouplingReproducesWeakPostState) {
    Rng rng(qt::kSeed + 10);
    for (int n = 2; n <= 4; ++n) {
        const PVM p = random_pvm(rng, 4, n);
        const DensityMatrix rho = random_density(rng, 4);
        const WeakFamily w = WeakFamily::standard(p);
        for (double frac : {0.0, 0.3, 0.8, 1.0}) {
            const double theta = frac * w.theta_max();
            const ComplexMatrix via = dilated_post_state(p, 2 * (w.theta_max() - theta), rho);
            EXPECT_LE(max_abs(via - collapse_povm(rho, weak_povm(w, theta)).post_state.matrix()), 1e-12);
        }
    }
}

TEST(Ozawa, IdealTwoStateMeasurement) {
    Rng rng(qt::kSeed + 11);
    const Observable a(qt::spin_op({1, 0, 0}));
    const PVM p = pvm_from_observable(a);
    for (int trial = 0; trial < 100; ++trial) {
        const auto av = random_in_ball(rng);
        const auto bv = random_unit_vector(rng);
        const DensityMatrix rho(qt::bloch(av));
        const Observable b(qt::spin_op(bv));
        const OzawaTerms o = ozawa_inequality(a, b, rho, 0.0, disturbance_eta(b, p, rho));
        const double byz = std::sqrt(bv[1] * bv[1] + bv[2] * bv[2]);
        EXPECT_NEAR(o.lhs, std::sqrt(1 - av[0] * av[0]) * byz / (2 * std::numbers::sqrt2), 1e-12);
        EXPECT_NEAR(o.rhs, 0.25 * std::abs(bv[1] * av[2] - bv[2] * av[1]), 1e-12);
        EXPECT_GE(o.gap, -1e-12);
    }
}

TEST(Ozawa, CommutingDegenerateCase) {
    const Observable a(qt::spin_op({0, 0, 1}));
    const OzawaTerms o = ozawa_inequality(a, Observable(qt::pauli(3)), DensityMatrix(qt::bloch({0, 0, 1})), 0, 0);
    EXPECT_EQ(o.lhs, 0.0);
    EXPECT_NEAR(o.rhs, 0.0, 1e-16);
    EXPECT_THROW(ozawa_inequality(a, a, DensityMatrix(qt::bloch({0, 0, 1})), -1.0, 0.0), InvariantError);
}

TEST(Olw, ThetaZeroIsTheIdealForm) {
    Rng rng(qt::kSeed + 12);
    for (int trial = 0; trial < 100; ++trial) {
        const spin::BlochState s(random_in_ball(rng));
        const spin::SpinObservable b{random_unit_vector(rng)};
        const OlwTerms o = olw_inequality(0.0, s, b);
        EXPECT_EQ(o.noise_disturbance, 0.0);
        EXPECT_EQ(o.noise_spread, 0.0);
        EXPECT_EQ(o.lhs, o.ideal);
        EXPECT_NEAR(o.lhs, spin::sharp_two_state_bound(s, b).lhs, 1e-14);
    }
}

TEST(Olw, NewTermsAreNonNegative) {
    Rng rng(qt::kSeed + 13);
    for (int trial = 0; trial < 1000; ++trial) {
        const double theta = std::uniform_real_distribution<double>(0, kPi / 4)(rng);
        const OlwTerms o =
            olw_inequality(theta, spin::BlochState(random_in_ball(rng)), spin::SpinObservable{random_unit_vector(rng)});
        EXPECT_GE(o.noise_disturbance, 0.0);
        EXPECT_GE(o.noise_spread, 0.0);
        EXPECT_GT(o.gap, 0.0);
    }
    EXPECT_THROW(olw_inequality(1.0, spin::BlochState({0, 0, 1}), spin::SpinObservable{{0, 1, 0}}), DomainError);
}

TEST(Olw, EighthPiExample) {
    const double t = kPi / 8;
    const OlwTerms o = olw_inequality(t, spin::BlochState({0, 0, 1}), spin::SpinObservable{{0, 1, 0}});
    const double s = std::sin(t), c = std::cos(t);
    EXPECT_NEAR(o.lhs, 2 * s * (c - s) + std::numbers::sqrt2 * s + 1.0, 1e-14);
    EXPECT_NEAR(o.rhs, 1 / std::numbers::sqrt2, 1e-15);
    EXPECT_GT(o.gap, 0.0);
    // Engine cross-check: each printed term is 2√2 times a product of engine values.
    EXPECT_NEAR(o.noise_spread, 2 * std::numbers::sqrt2 * o.epsilon * 0.5, 1e-12);
}
