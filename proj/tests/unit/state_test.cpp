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
#include "qmeas/matrix.hpp"
#include "qmeas/random.hpp"
#include "qmeas/state.hpp"
#include "support.hpp"

using namespace qmeas;

namespace {

ComplexMatrix matrix_power(const ComplexMatrix &m, int n) {
    ComplexMatrix r = ComplexMatrix::Identity(m.rows(), m.cols());
    for (int i = 0; i < n; ++i) {
        r = r * m;
    }
    return r;
}

}  // namespace

TEST(DensityMatrix, RejectsInvalidMatrices) {
    ComplexMatrix rect(2, 3);
    rect.setZero();
    EXPECT_THROW(DensityMatrix{rect}, DimensionError);

    ComplexMatrix nh = qt::bloch({0, 0, 0});
    nh(0, 1) = 0.3;
    EXPECT_THROW(DensityMatrix{nh}, InvariantError);

    EXPECT_THROW(DensityMatrix{ComplexMatrix(2 * qt::bloch({0, 0, 0}))}, InvariantError);

    ComplexMatrix neg(2, 2);
    neg << 1.5, 0, 0, -0.5;
    EXPECT_THROW(DensityMatrix{neg}, InvariantError);
}

TEST(DensityMatrix, PurityOfPureAndMixed) {
    EXPECT_NEAR(DensityMatrix(qt::bloch({0, 0, 1})).purity(), 1.0, 1e-15);
    EXPECT_NEAR(DensityMatrix(qt::bloch({0, 0, 0})).purity(), 0.5, 1e-15);
}

TEST(Observable, RejectsNonHermitian) {
    ComplexMatrix m = qt::pauli(1);
    m(0, 1) = qt::cplx(0, 1);
    EXPECT_THROW(Observable{m}, InvariantError);
}

TEST(PVM, RejectsBadProjectors) {
    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    EXPECT_NO_THROW(PVM({p0, p1}, {1.0, 2.0}));
    EXPECT_THROW(PVM({p0, p1}, {1.0, 1.0}), InvariantError);
    EXPECT_THROW(PVM({p0}, {1.0}), InvariantError);
    EXPECT_THROW(PVM({p0, p0}, {1.0, 2.0}), InvariantError);
    EXPECT_THROW(PVM({ComplexMatrix(0.5 * p0), p1}, {1.0, 2.0}), InvariantError);
    EXPECT_THROW(PVM({p0, p1}, {1.0}), InvariantError);
}

TEST(PvmFromObservable, HalfSigmaX) {
    const PVM p = pvm_from_observable(Observable(0.5 * qt::pauli(1)));
    ASSERT_EQ(p.size(), 2u);
    EXPECT_NEAR(p.eigenvalues()[0], -0.5, 1e-15);
    EXPECT_NEAR(p.eigenvalues()[1], 0.5, 1e-15);
    EXPECT_EQ(p.ranks(), (std::vector<int>{1, 1}));
    ComplexMatrix up(2, 2);
    up << 0.5, 0.5, 0.5, 0.5;
    EXPECT_LT(max_abs(p.projectors()[1] - up), 1e-14);
}

TEST(PvmFromObservable, Identity) {
    const PVM p = pvm_from_observable(Observable(ComplexMatrix::Identity(3, 3)));
    ASSERT_EQ(p.size(), 1u);
    EXPECT_NEAR(p.eigenvalues()[0], 1.0, 1e-15);
    EXPECT_LT(max_abs(p.projectors()[0] - ComplexMatrix::Identity(3, 3)), 1e-14);
}

TEST(PvmFromObservable, MergesNearDegenerateCluster) {
    const double eps = 1e-11;
    ComplexMatrix d = ComplexMatrix::Zero(3, 3);
    d(0, 0) = 1;
    d(1, 1) = 1 + eps;
    d(2, 2) = 3;
    const PVM p = pvm_from_observable(Observable(d), 1e-9);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_EQ(p.ranks(), (std::vector<int>{2, 1}));
    EXPECT_NEAR(p.eigenvalues()[0], 1 + eps / 2, 1e-14);
}

TEST(PvmFromObservable, ReconstructsRandomObservables) {
    Rng rng(qt::kSeed);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index dim = 2 + trial % 4;
        ComplexMatrix a = random_observable(rng, dim).matrix();
        if (trial % 3 == 0) {
            // Force an exact degeneracy.
            const ComplexMatrix u = random_unitary(rng, dim);
            Eigen::VectorXd ev = Eigen::VectorXd::LinSpaced(dim, -1.0, 1.0);
            ev(1) = ev(0);
            a = u * ev.cast<cplx>().asDiagonal() * u.adjoint();
            a = 0.5 * (a + a.adjoint()).eval();
        }
        const PVM p = pvm_from_observable(Observable(a));
        EXPECT_LE(max_abs(p.observable().matrix() - a), 10 * 1e-9);
    }
}

TEST(Moment, Examples) {
    const Observable sz(qt::pauli(3));
    EXPECT_NEAR(moment(sz, 1, DensityMatrix(qt::bloch({0, 0, 0}))), 0.0, 1e-15);
    EXPECT_NEAR(moment(sz, 2, DensityMatrix(qt::bloch({0.3, -0.2, 0.5}))), 1.0, 1e-15);
    const std::array<double, 3> a{0.6, -0.3, 0.2};
    EXPECT_NEAR(moment(Observable(qt::spin_op({1, 0, 0})), 1, DensityMatrix(qt::bloch(a))), a[0] / 2, 1e-15);
    EXPECT_THROW(moment(sz, 0, DensityMatrix(qt::bloch(a))), DomainError);
}

TEST(Moment, MatchesExplicitMatrixPower) {
    Rng rng(qt::kSeed + 1);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index dim = 2 + trial % 4;
        const Observable o = random_observable(rng, dim);
        const DensityMatrix rho = random_density(rng, dim);
        for (int n = 1; n <= 6; ++n) {
            const double want = qt::re_trace(matrix_power(o.matrix(), n) * rho.matrix());
            EXPECT_NEAR(moment(o, n, rho), want, 1e-12 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST(Variance, SpinExamples) {
    Rng rng(qt::kSeed + 2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_in_ball(rng);
        const auto b = random_unit_vector(rng);
        const DensityMatrix rho(qt::bloch(a));
        EXPECT_NEAR(variance(Observable(qt::spin_op({1, 0, 0})), rho), (1 - a[0] * a[0]) / 4, 1e-14);
        EXPECT_NEAR(variance(Observable(qt::spin_op(b)), rho), 0.25 * (1 - qt::dot(a, b) * qt::dot(a, b)), 1e-14);
    }
}

TEST(Variance, EigenstateHasNone) {
    Rng rng(qt::kSeed + 3);
    const Observable o = random_observable(rng, 4);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(o.matrix());
    const ComplexVector v = es.eigenvectors().col(2);
    EXPECT_NEAR(variance(o, DensityMatrix(v * v.adjoint())), 0.0, 1e-12);
}

TEST(Covariance, Examples) {
    Rng rng(qt::kSeed + 4);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_in_ball(rng);
        const auto b = random_unit_vector(rng);
        const DensityMatrix rho(qt::bloch(a));
        const Observable jx(qt::spin_op({1, 0, 0}));
        const Observable bj(qt::spin_op(b));
        EXPECT_NEAR(covariance(bj, bj, rho), variance(bj, rho), 1e-14);
        EXPECT_NEAR(covariance(jx, bj, rho), 0.25 * (b[0] - a[0] * qt::dot(a, b)), 1e-14);
        const DensityMatrix hat(qt::bloch({a[0], 0, 0}));
        EXPECT_NEAR(covariance(jx, bj, hat), 0.25 * (1 - a[0] * a[0]) * b[0], 1e-14);
    }
}

TEST(Robertson, CoherentStateSaturates) {
    const RobertsonBound r = robertson_bound(Observable(qt::spin_op({1, 0, 0})), Observable(qt::spin_op({0, 1, 0})),
                                             DensityMatrix(qt::bloch({0, 0, 1})));
    EXPECT_NEAR(r.lhs, 1.0 / 16, 1e-15);
    EXPECT_NEAR(r.commutator_rhs, 1.0 / 16, 1e-15);
}

TEST(Robertson, CommutingObservables) {
    Rng rng(qt::kSeed + 5);
    const ComplexMatrix u = random_unitary(rng, 3);
    const auto diag = [&u](double x, double y, double z) {
        return Observable(ComplexMatrix(u * Eigen::Vector3cd(x, y, z).asDiagonal() * u.adjoint()), 1e-12);
    };
    const RobertsonBound r = robertson_bound(diag(1, 2, 3), diag(-1, 0, 5), random_density(rng, 3));
    EXPECT_NEAR(r.commutator_rhs, 0.0, 1e-14);
}

TEST(Robertson, HoldsOnRandomDraws) {
    Rng rng(qt::kSeed + 6);
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Index dim = 2 + trial % 4;
        const RobertsonBound r =
            robertson_bound(random_observable(rng, dim), random_observable(rng, dim), random_density(rng, dim));
        EXPECT_GE(r.lhs - r.rhs, -1e-12);
        EXPECT_GE(r.rhs, r.commutator_rhs);
        EXPECT_GE(r.rhs, r.covariance_rhs);
    }
}

TEST(MatrixHelpers, KronAndPartialTrace) {
    Rng rng(qt::kSeed + 7);
    const ComplexMatrix a = random_ginibre(rng, 2);
    const ComplexMatrix b = random_ginibre(rng, 3);
    const ComplexMatrix k = kron(a, b);
    EXPECT_EQ(k.rows(), 6);
    EXPECT_LT(std::abs(k(4, 2) - a(1, 0) * b(1, 2)), 1e-15);
    EXPECT_LT(max_abs(partial_trace_second(k, 2, 3) - a * b.trace()), 1e-13);
}

TEST(MatrixHelpers, ExponentialOfProjector) {
    Rng rng(qt::kSeed + 8);
    const PVM p = random_pvm(rng, 4, 2);
    const double beta = 0.7;
    const ComplexMatrix want =
        ComplexMatrix::Identity(4, 4) + (std::exp(qt::cplx(0, beta)) - 1.0) * p.projectors()[0];
    EXPECT_LT(max_abs(exp_i_hermitian(p.projectors()[0], beta) - want), 1e-13);
}

TEST(MatrixHelpers, CommutatorAndJson) {
    EXPECT_LT(max_abs(commutator(qt::pauli(1), qt::pauli(2)) - 2.0 * qmeas::kI * qt::pauli(3)), 1e-15);
    Rng rng(qt::kSeed + 9);
    const ComplexMatrix m = random_ginibre(rng, 3);
    EXPECT_EQ(max_abs(matrix_from_json(matrix_to_json(m)) - m), 0.0);
    EXPECT_THROW(matrix_from_json(nlohmann::json{{"dim", 2}}), InvariantError);
}

TEST(Random, GeneratorsProduceValidObjects) {
    Rng rng(qt::kSeed + 10);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index dim = 2 + trial % 4;
        const ComplexMatrix u = random_unitary(rng, dim);
        EXPECT_LT(max_abs(u.adjoint() * u - ComplexMatrix::Identity(dim, dim)), 1e-12);
        const DensityMatrix rho = random_density(rng, dim, 1);
        EXPECT_NEAR(rho.purity(), 1.0, 1e-12);
        const auto a = random_in_ball(rng);
        EXPECT_LE(qt::dot(a, a), 1.0);
        const auto n = random_unit_vector(rng);
        EXPECT_NEAR(qt::dot(n, n), 1.0, 1e-14);
    }
    EXPECT_THROW(random_pvm(rng, 2, 3), DomainError);
}

TEST(Random, DerivedSeedsAreStable) {
    EXPECT_EQ(derive_seed(1729, 5), derive_seed(1729, 5));
    EXPECT_NE(derive_seed(1729, 5), derive_seed(1729, 6));
    EXPECT_NE(derive_seed(1729, 5), derive_seed(1730, 5));
}
