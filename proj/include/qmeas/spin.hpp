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

#pragma once

// Closed-form results for a spin-1/2 measured along x, used as an oracle for the matrix engine.
// Conventions: J = σ/2, A = Jx, B = b·J, ρ = ½(1 + a·σ).

#include <array>

#include "qmeas/state.hpp"

namespace qmeas::spin {

using Vec3 = std::array<double, 3>;

double dot(const Vec3 &u, const Vec3 &v);

/// Bloch vector of a two-level state; |a| ≤ 1 + tol.
class BlochState {
   public:
    explicit BlochState(Vec3 a, double tol = 1e-12);
    const Vec3 &a() const { return a_; }
    bool is_pure(double tol = 1e-12) const;

   private:
    Vec3 a_;
};

/// B = b·J. The norm of b is not constrained.
struct SpinObservable {
    Vec3 b;
};

ComplexMatrix jx();
ComplexMatrix jy();
ComplexMatrix jz();

DensityMatrix to_density(const BlochState &s);
Observable to_observable(const SpinObservable &b);

/// Every two-state quantity that has a closed form, for a measurement of Jx followed by B.
struct SpinSuite {
    double var_b_rho;       ///< (ΔB)²_ρ
    double var_b_hat;       ///< (ΔB)²_ρ̂
    double delta_var;       ///< (ΔB)²_ρ̂ − (ΔB)²_ρ
    double eta2;            ///< η(B)²
    double cov_rho;         ///< Cov(Jx, B)_ρ
    double cov_hat;         ///< Cov(Jx, B)_ρ̂
    double commutator_rhs;  ///< ½|Tr([Jx, B]ρ)|
    double var_a;           ///< (ΔJx)²_ρ
    double jx_jy_product;   ///< (ΔJx)²_ρ (ΔJy)²_ρ̂
};

/// Closed forms.
SpinSuite analytic_suite(const BlochState &s, const SpinObservable &b);

/// Same fields computed by the generic matrix engine (collapse, hat operation, traces).
SpinSuite engine_suite(const BlochState &s, const SpinObservable &b);

struct SharpBound {
    double lhs;        ///< (1 − a_x²)^½ (b_y² + b_z²)^½
    double ozawa_rhs;  ///< |b_y a_z − b_z a_y| / √2
    double sharp_rhs;  ///< |b_y a_z − b_z a_y|
};

/// Ideal Jx measurement: Ozawa's relation against the sharper two-state bound, both scaled by
/// 2√2. Throws ConsistencyError if lhs < sharp_rhs − tol.
SharpBound sharp_two_state_bound(const BlochState &s, const SpinObservable &b, double tol = 1e-12);

}  // namespace qmeas::spin
