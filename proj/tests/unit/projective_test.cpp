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
#include "qmeas/projective.hpp"
#include "qmeas/random.hpp"
#include "support.hpp"

using namespace qmeas;

namespace {

// Σ P ρ P by hand.
ComplexMatrix pinched(const ComplexMatrix &rho, const PVM &p) {
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (const auto &q : p.projectors()) {
        out += q * rho * q;
    }
    return out;
}

// Tr[((B − B̂)² + hat(B²) − B̂²) ρ] with every piece written out.
double eta2_direct(const ComplexMatrix &b, const PVM &p, const ComplexMatrix &rho) {
    const ComplexMatrix bh = pinched(b, p);
    const ComplexMatrix d = b - bh;
    return qt::re_trace((d * d + pinched(b * b, p) - bh * bh) * rho);
}

PVM jx_pvm() { return pvm_from_observable(Observable(qt::spin_op({1, 0, 0}))); }

}  // namespace

TEST(CollapsePvm, EigenstateUnchanged) {
    const PVM p = jx_pvm();
    const DensityMatrix up(qt::bloch({1, 0, 0}));
    const MeasurementOutcome m = collapse_pvm(up, p);
    EXPECT_LT(max_abs(m.post_state.matrix() - up.matrix()), 1e-15);
    EXPECT_NEAR(m.outcome_probs[1].prob, 1.0, 1e-15);
    EXPECT_NEAR(m.outcome_probs[1].value, 0.5, 1e-15);
}

TEST(CollapsePvm, TwoStateKeepsOnlyAx) {
    Rng rng(qt::kSeed);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_in_ball(rng);
        const MeasurementOutcome m = collapse_pvm(DensityMatrix(qt::bloch(a)), jx_pvm());
        EXPECT_LT(max_abs(m.post_state.matrix() - qt::bloch({a[0], 0, 0})), 1e-15);
    }
}

TEST(CollapsePvm, PurityNeverIncreases) {
    Rng rng(qt::kSeed + 1);
    for (int trial = 0; trial < 200; ++trial) {
        const DensityMatrix rho = random_density(rng, 4);
        const PVM p = random_pvm(rng, 4, 3);
        const MeasurementOutcome m = collapse_pvm(rho, p);
        EXPECT_LE(m.post_state.purity(), rho.purity() + 1e-12);
        EXPECT_LT(max_abs(m.post_state.matrix() - pinched(rho.matrix(), p)), 1e-14);
        double total = 0.0;
        for (const auto &o : m.outcome_probs) {
            total += o.prob;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(CollapsePvm, PreservesMomentsAndDecoheres) {
    Rng rng(qt::kSeed + 2);
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Index dim = 2 + trial % 4;
        const Observable a = random_observable(rng, dim);
        const PVM p = pvm_from_observable(a);
        const DensityMatrix rho = random_density(rng, dim);
        const Observable b = random_observable(rng, dim);
        const DensityMatrix hat = collapse_pvm(rho, p).post_state;
        for (int n = 1; n <= 4; ++n) {
            EXPECT_LE(std::abs(moment(a, n, hat) - moment(a, n, rho)), 1e-10);
        }
        EXPECT_LE(std::abs(expectation(commutator(a.matrix(), b.matrix()), hat)), 1e-10);
    }
}

TEST(HatOperator, Examples) {
    const PVM p = jx_pvm();
    EXPECT_LT(max_abs(hat_operator(Observable(qt::spin_op({0, 1, 0})), p).matrix()), 1e-15);
    const std::array<double, 3> b{0.3, -0.7, 0.4};
    EXPECT_LT(max_abs(hat_operator(Observable(qt::spin_op(b)), p).matrix() - qt::spin_op({b[0], 0, 0})), 1e-15);

    Rng rng(qt::kSeed + 3);
    const ComplexMatrix u = random_unitary(rng, 3);
    const Observable a(ComplexMatrix(u * Eigen::Vector3cd(1, 2, 3).asDiagonal() * u.adjoint()), 1e-12);
    const Observable c(ComplexMatrix(u * Eigen::Vector3cd(-4, 0.5, 2).asDiagonal() * u.adjoint()), 1e-12);
    EXPECT_LT(max_abs(hat_operator(c, pvm_from_observable(a)).matrix() - c.matrix()), 1e-13);
}

TEST(DisturbanceEta, CommutingIsZero) {
    Rng rng(qt::kSeed + 4);
    const ComplexMatrix u = random_unitary(rng, 3);
    const Observable a(ComplexMatrix(u * Eigen::Vector3cd(1, 1, 3).asDiagonal() * u.adjoint()), 1e-12);
    const Observable b(ComplexMatrix(u * Eigen::Vector3cd(2, -1, 0).asDiagonal() * u.adjoint()), 1e-12);
    EXPECT_NEAR(disturbance_eta(b, pvm_from_observable(a), random_density(rng, 3)), 0.0, 1e-7);
}

TEST(DisturbanceEta, TwoStateIsStateIndependent) {
    Rng rng(qt::kSeed + 5);
    const std::array<double, 3> b{0.2, 0.9, -0.4};
    const double want = 0.5 * (b[1] * b[1] + b[2] * b[2]);
    for (int trial = 0; trial < 100; ++trial) {
        const double eta = disturbance_eta(Observable(qt::spin_op(b)), jx_pvm(), DensityMatrix(qt::bloch(random_in_ball(rng))));
        EXPECT_NEAR(eta * eta, want, 1e-12);
    }
}

TEST(DisturbanceEta, DisturbingExample) {
    const double r = std::numbers::sqrt2 / 2;
    const DensityMatrix rho(qt::bloch({r, r, 0}));
    const Observable b(qt::spin_op({r, -r, 0}));
    const double eta = disturbance_eta(b, jx_pvm(), rho);
    EXPECT_NEAR(eta * eta, 0.25, 1e-12);
    EXPECT_NEAR(delta_uncertainty(b, jx_pvm(), rho), -1.0 / 16, 1e-12);
}

TEST(DisturbanceEta, MatchesDirectFormula) {
    Rng rng(qt::kSeed + 6);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index dim = 2 + trial % 4;
        const PVM p = random_pvm(rng, dim, 1 + static_cast<int>(trial % dim));
        const Observable b = random_observable(rng, dim);
        const DensityMatrix rho = random_density(rng, dim);
        const double eta = disturbance_eta(b, p, rho);
        EXPECT_NEAR(eta * eta, eta2_direct(b.matrix(), p, rho.matrix()), 1e-11);
    }
}

TEST(SuccessiveBound, JxThenJy) {
    Rng rng(qt::kSeed + 7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_in_ball(rng);
        const SuccessiveBound s = successive_bound(Observable(qt::spin_op({1, 0, 0})),
                                                   Observable(qt::spin_op({0, 1, 0})), DensityMatrix(qt::bloch(a)));
        EXPECT_NEAR(s.product, (1 - a[0] * a[0]) / 16, 1e-14);
        EXPECT_NEAR(s.term1, 0.0, 1e-15);
    }
}

TEST(SuccessiveBound, CommutingHasNoSecondTerm) {
    Rng rng(qt::kSeed + 8);
    const ComplexMatrix u = random_unitary(rng, 3);
    const Observable a(ComplexMatrix(u * Eigen::Vector3cd(1, 2, 3).asDiagonal() * u.adjoint()), 1e-12);
    const Observable b(ComplexMatrix(u * Eigen::Vector3cd(0, 5, -1).asDiagonal() * u.adjoint()), 1e-12);
    const SuccessiveBound s = successive_bound(a, b, random_density(rng, 3));
    EXPECT_NEAR(s.term2, 0.0, 1e-12);
    EXPECT_GE(s.product - s.term1, -1e-12);
}

TEST(SuccessiveBound, HoldsByExplicitCollapse) {
    Rng rng(qt::kSeed + 9);
    for (int trial = 0; trial < 500; ++trial) {
        const Observable a = random_observable(rng, 3);
        const Observable b = random_observable(rng, 3);
        const DensityMatrix rho = random_density(rng, 3);
        const SuccessiveBound s = successive_bound(a, b, rho);
        const DensityMatrix hat = collapse_pvm(rho, pvm_from_observable(a)).post_state;
        EXPECT_NEAR(s.product, variance(a, rho) * variance(b, hat), 1e-12);
        EXPECT_GE(s.product - s.bound, -1e-12);
        EXPECT_GE(s.term1, -1e-12);
        EXPECT_GE(s.term2, -1e-12);
    }
}

TEST(ConditionalExpectation, Examples) {
    Rng rng(qt::kSeed + 10);
    const Observable a = random_observable(rng, 3);
    const PVM p = pvm_from_observable(a);
    const DensityMatrix hat = collapse_pvm(random_density(rng, 3), p).post_state;
    for (std::size_t i = 0; i < p.size(); ++i) {
        EXPECT_NEAR(conditional_expectation(a, p.projectors()[i], hat), p.eigenvalues()[i], 1e-12);
        EXPECT_NEAR(conditional_expectation(Observable(ComplexMatrix::Identity(3, 3)), p.projectors()[i], hat), 1.0,
                    1e-12);
    }
    const PVM x = jx_pvm();
    const DensityMatrix zup_hat = collapse_pvm(DensityMatrix(qt::bloch({0, 0, 1})), x).post_state;
    EXPECT_NEAR(conditional_expectation(Observable(qt::spin_op({0, 0, 1})), x.projectors()[1], zup_hat), 0.0, 1e-15);

    const DensityMatrix down(qt::bloch({-1, 0, 0}));
    EXPECT_THROW(conditional_expectation(Observable(qt::spin_op({0, 0, 1})), x.projectors()[1], down), NullEventError);
}

TEST(DeltaUncertainty, TwoStateFormula) {
    Rng rng(qt::kSeed + 11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_in_ball(rng);
        std::array<double, 3> b = random_unit_vector(rng);
        b[0] *= 1.5;
        const double ab = qt::dot(a, b);
        EXPECT_NEAR(delta_uncertainty(Observable(qt::spin_op(b)), jx_pvm(), DensityMatrix(qt::bloch(a))),
                    0.25 * (ab * ab - a[0] * a[0] * b[0] * b[0]), 1e-14);
    }
}

TEST(DeltaUncertainty, CommutingIsZero) {
    Rng rng(qt::kSeed + 12);
    const ComplexMatrix u = random_unitary(rng, 4);
    const Observable a(ComplexMatrix(u * Eigen::Vector4cd(1, 1, 2, 3).asDiagonal() * u.adjoint()), 1e-12);
    const Observable b(ComplexMatrix(u * Eigen::Vector4cd(0, 4, -1, 2).asDiagonal() * u.adjoint()), 1e-12);
    EXPECT_NEAR(delta_uncertainty(b, pvm_from_observable(a), random_density(rng, 4)), 0.0, 1e-12);
}

TEST(EtaZeroSearch, ReportsWithoutAsserting) {
    const EtaZeroSearch s = search_eta_zero_counterexample(qt::kSeed, 50, 4, 2);
    EXPECT_EQ(s.trials, 50);
    EXPECT_GE(s.eta_zero_instances, 0);
    EXPECT_LE(s.max_eta, 1e-10);
    const EtaZeroSearch again = search_eta_zero_counterexample(qt::kSeed, 50, 4, 2);
    EXPECT_EQ(s.max_distribution_change, again.max_distribution_change);
}
