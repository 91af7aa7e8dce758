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
#include "qmeas/random.hpp"
#include "qmeas/spin.hpp"
#include "support.hpp"

using namespace qmeas;
using spin::BlochState;
using spin::SpinObservable;

TEST(Bloch, RejectsOutsideBall) {
    EXPECT_THROW(BlochState({1.0, 0.1, 0.0}), InvariantError);
    EXPECT_THROW(BlochState({std::nan(""), 0, 0}), InvariantError);
    EXPECT_TRUE(BlochState({0, 0, 1}).is_pure());
    EXPECT_FALSE(BlochState({0, 0.5, 0}).is_pure());
}

TEST(Bloch, ToDensity) {
    EXPECT_LT(max_abs(spin::to_density(BlochState({0, 0, 0})).matrix() - 0.5 * ComplexMatrix::Identity(2, 2)), 1e-16);
    ComplexMatrix zup = ComplexMatrix::Zero(2, 2);
    zup(0, 0) = 1;
    EXPECT_LT(max_abs(spin::to_density(BlochState({0, 0, 1})).matrix() - zup), 1e-16);

    const double r = std::numbers::sqrt2 / 2;
    const std::complex<double> e = std::polar(1.0, std::numbers::pi / 4);
    ComplexMatrix want(2, 2);
    want << 1, std::conj(e), e, 1;
    EXPECT_LT(max_abs(spin::to_density(BlochState({r, r, 0})).matrix() - 0.5 * want), 1e-15);
}

TEST(Bloch, AngularMomentumAlgebra) {
    EXPECT_LT(max_abs(commutator(spin::jx(), spin::jy()) - kI * spin::jz()), 1e-16);
    EXPECT_LT(max_abs(spin::jx() - qt::spin_op({1, 0, 0})), 1e-16);
}

TEST(AnalyticSuite, DisturbingMinimiser) {
    const double r = std::numbers::sqrt2 / 2;
    const spin::SpinSuite s = spin::analytic_suite(BlochState({r, r, 0}), SpinObservable{{r, -r, 0}});
    EXPECT_NEAR(s.delta_var, -1.0 / 16, 1e-12);
    EXPECT_NEAR(s.eta2, 0.25, 1e-12);
}

TEST(AnalyticSuite, BAlongXHasNoDisturbance) {
    Rng rng(qt::kSeed);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_in_ball(rng);
        const spin::SpinSuite s = spin::analytic_suite(BlochState(a), SpinObservable{{1.3, 0, 0}});
        EXPECT_EQ(s.eta2, 0.0);
        EXPECT_NEAR(s.delta_var, 0.0, 1e-15);
    }
}

TEST(AnalyticSuite, MatchesMatrixEngine) {
    Rng rng(qt::kSeed + 1);
    std::uniform_real_distribution<double> scale(0.2, 2.0);
    for (int trial = 0; trial < 10000; ++trial) {
        const auto a = random_in_ball(rng);
        auto b = random_unit_vector(rng);
        const double k = scale(rng);
        for (auto &x : b) {
            x *= k;
        }
        const BlochState s(a);
        const spin::SpinSuite an = spin::analytic_suite(s, SpinObservable{b});
        const spin::SpinSuite en = spin::engine_suite(s, SpinObservable{b});
        EXPECT_NEAR(an.var_b_rho, en.var_b_rho, 1e-12);
        EXPECT_NEAR(an.var_b_hat, en.var_b_hat, 1e-12);
        EXPECT_NEAR(an.delta_var, en.delta_var, 1e-12);
        EXPECT_NEAR(an.eta2, en.eta2, 1e-12);
        EXPECT_NEAR(an.cov_rho, en.cov_rho, 1e-12);
        EXPECT_NEAR(an.cov_hat, en.cov_hat, 1e-12);
        EXPECT_NEAR(an.commutator_rhs, en.commutator_rhs, 1e-12);
        EXPECT_NEAR(an.var_a, en.var_a, 1e-12);
        EXPECT_NEAR(an.jx_jy_product, en.jx_jy_product, 1e-12);
        EXPECT_NEAR(an.jx_jy_product, (1 - a[0] * a[0]) / 16, 1e-12);
        const double ab = qt::dot(a, b);
        EXPECT_NEAR(an.delta_var, 0.25 * (ab * ab - a[0] * a[0] * b[0] * b[0]), 1e-12);
    }
}

TEST(AnalyticSuite, EtaIndependentOfState) {
    Rng rng(qt::kSeed + 2);
    const SpinObservable b{{0.4, -0.8, 0.3}};
    const double first = spin::analytic_suite(BlochState(random_in_ball(rng)), b).eta2;
    for (int trial = 0; trial < 100; ++trial) {
        EXPECT_EQ(spin::analytic_suite(BlochState(random_in_ball(rng)), b).eta2, first);
    }
}

TEST(SharpBound, Examples) {
    const spin::SharpBound s = spin::sharp_two_state_bound(BlochState({0, 0, 1}), SpinObservable{{0, 1, 0}});
    EXPECT_NEAR(s.lhs, 1.0, 1e-15);
    EXPECT_NEAR(s.sharp_rhs, 1.0, 1e-15);

    const spin::SharpBound e = spin::sharp_two_state_bound(BlochState({1, 0, 0}), SpinObservable{{0.3, 0.5, -0.2}});
    EXPECT_NEAR(e.lhs, 0.0, 1e-15);
    EXPECT_NEAR(e.sharp_rhs, 0.0, 1e-15);
}

TEST(SharpBound, HoldsOverTheBall) {
    Rng rng(qt::kSeed + 3);
    for (int trial = 0; trial < 10000; ++trial) {
        const spin::SharpBound s =
            spin::sharp_two_state_bound(BlochState(random_in_ball(rng)), SpinObservable{random_unit_vector(rng)});
        EXPECT_GE(s.lhs - s.sharp_rhs, -1e-12);
        EXPECT_NEAR(s.sharp_rhs, std::numbers::sqrt2 * s.ozawa_rhs, 1e-15);
    }
}
