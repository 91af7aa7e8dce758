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

#include "qmeas/spin.hpp"

#include <cmath>

#include "qmeas/errors.hpp"
#include "qmeas/projective.hpp"

namespace qmeas::spin {

double dot(const Vec3 &u, const Vec3 &v) {
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

BlochState::BlochState(Vec3 a, double tol) : a_(a) {
    for (double c : a_) {
        if (!std::isfinite(c)) {
            throw InvariantError("BlochState: non-finite component");
        }
    }
    if (dot(a_, a_) > 1.0 + tol) {
        throw InvariantError("BlochState: |a| exceeds 1");
    }
}

bool BlochState::is_pure(double tol) const {
    return std::abs(dot(a_, a_) - 1.0) <= tol;
}

ComplexMatrix jx() {
    ComplexMatrix m(2, 2);
    m << 0.0, 0.5, 0.5, 0.0;
    return m;
}

ComplexMatrix jy() {
    ComplexMatrix m(2, 2);
    m << 0.0, cplx(0.0, -0.5), cplx(0.0, 0.5), 0.0;
    return m;
}

ComplexMatrix jz() {
    ComplexMatrix m(2, 2);
    m << 0.5, 0.0, 0.0, -0.5;
    return m;
}

DensityMatrix to_density(const BlochState &s) {
    const auto &a = s.a();
    ComplexMatrix rho = 0.5 * ComplexMatrix::Identity(2, 2) + a[0] * jx() + a[1] * jy() + a[2] * jz();
    return DensityMatrix(std::move(rho));
}

Observable to_observable(const SpinObservable &b) {
    return Observable(b.b[0] * jx() + b.b[1] * jy() + b.b[2] * jz());
}

SpinSuite analytic_suite(const BlochState &s, const SpinObservable &obs) {
    const auto &a = s.a();
    const auto &b = obs.b;
    const double b2 = dot(b, b);
    const double ab = dot(a, b);
    const double ax2 = a[0] * a[0];

    SpinSuite r{};
    r.var_b_rho = 0.25 * (b2 - ab * ab);
    r.var_b_hat = 0.25 * (b2 - ax2 * b[0] * b[0]);
    r.delta_var = 0.25 * (ab * ab - ax2 * b[0] * b[0]);
    r.eta2 = 0.5 * (b[1] * b[1] + b[2] * b[2]);
    r.cov_rho = 0.25 * (b[0] - a[0] * ab);
    r.cov_hat = 0.25 * (1.0 - ax2) * b[0];
    r.commutator_rhs = 0.25 * std::abs(b[1] * a[2] - b[2] * a[1]);
    r.var_a = 0.25 * (1.0 - ax2);
    r.jx_jy_product = (1.0 - ax2) / 16.0;
    return r;
}

SpinSuite engine_suite(const BlochState &s, const SpinObservable &obs) {
    const DensityMatrix rho = to_density(s);
    const Observable a(jx());
    const Observable b = to_observable(obs);
    const PVM pvm = pvm_from_observable(a);
    const DensityMatrix rho_hat = collapse_pvm(rho, pvm).post_state;

    SpinSuite r{};
    r.var_b_rho = variance(b, rho);
    r.var_b_hat = variance(b, rho_hat);
    r.delta_var = delta_uncertainty(b, pvm, rho);
    const double eta = disturbance_eta(b, pvm, rho);
    r.eta2 = eta * eta;
    r.cov_rho = covariance(a, b, rho);
    r.cov_hat = covariance(a, b, rho_hat);
    r.commutator_rhs = 0.5 * std::abs(expectation(commutator(a.matrix(), b.matrix()), rho));
    r.var_a = variance(a, rho);
    r.jx_jy_product = r.var_a * variance(Observable(jy()), rho_hat);
    return r;
}

SharpBound sharp_two_state_bound(const BlochState &s, const SpinObservable &obs, double tol) {
    const auto &a = s.a();
    const auto &b = obs.b;
    SharpBound r{};
    r.lhs = std::sqrt(std::max(0.0, 1.0 - a[0] * a[0])) * std::sqrt(b[1] * b[1] + b[2] * b[2]);
    r.sharp_rhs = std::abs(b[1] * a[2] - b[2] * a[1]);
    r.ozawa_rhs = r.sharp_rhs / std::sqrt(2.0);
    if (r.lhs < r.sharp_rhs - tol) {
        throw ConsistencyError("sharp_two_state_bound: lhs below the sharp bound");
    }
    return r;
}

}  // namespace qmeas::spin
