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

#include <functional>
#include <vector>

#include "qmeas/projective.hpp"
#include "qmeas/spin.hpp"

namespace qmeas {

/// One outcome of a discrete POVM: the effect F = L†L and the Kraus operator L that fixes
/// the post-measurement state.
struct PovmElement {
    ComplexMatrix effect;
    ComplexMatrix kraus;
};

/// Finite POVM with a real label per outcome.
class DiscretePOVM {
   public:
    DiscretePOVM(std::vector<PovmElement> elements, std::vector<double> labels, double tol = 1e-10);

    /// The PVM itself, with L_i = F_i = P_i.
    static DiscretePOVM from_pvm(const PVM &pvm);

    const std::vector<PovmElement> &elements() const { return elements_; }
    const std::vector<double> &labels() const { return labels_; }
    std::size_t size() const { return elements_.size(); }
    Eigen::Index dim() const { return elements_.front().effect.rows(); }

   private:
    std::vector<PovmElement> elements_;
    std::vector<double> labels_;
};

/// ρ̂ = Σ L_i ρ L_i†, probabilities Tr(F_i ρ).
MeasurementOutcome collapse_povm(const DensityMatrix &rho, const DiscretePOVM &povm);

/// One-parameter family interpolating between the PVM of A (θ = 0) and the uniform
/// distribution over its N outcomes (θ = θ_max).
class WeakFamily {
   public:
    using Profile = std::function<double(double)>;

    /// Caller-supplied profile f on [0, theta_max]; must decrease monotonically from 1 to 0.
    WeakFamily(PVM base, Profile f, double theta_max);

    /// f(θ) = (2/N)(1 − cos β(θ)), β(θ) = 2(θ_max − θ), θ_max = 2^(N−3)π/N. Needs N ≤ 4;
    /// for N = 2 this is f(θ) = 1 − sin 2θ on [0, π/4].
    static WeakFamily standard(PVM base);

    const PVM &base() const { return base_; }
    double theta_max() const { return theta_max_; }
    int outcomes() const { return static_cast<int>(base_.size()); }

    /// f(θ); throws DomainError outside [0, θ_max].
    double f(double theta) const;

    /// g(θ) = (1 − 2/N) f + (2/N) √(N − (N − 1) f) √f.
    double g(double theta) const;

    /// Kraus operators L_i(θ) = (1/N)(√(N − (N−1)f) − √f) 1 + √f P_i.
    std::vector<ComplexMatrix> kraus(double theta) const;

   private:
    PVM base_;
    Profile f_;
    double theta_max_;
};

/// θ_max of the standard profile for N outcomes.
double standard_theta_max(int outcomes);

/// POVM of the weak family at θ. Effects are built as L†L and checked against
/// (1/N)(1 − g) 1 + g P_i.
DiscretePOVM weak_povm(const WeakFamily &w, double theta, double tol = 1e-10);

/// λ_i(θ) = (λ_i − (1 − g) λ̄) / g, so that Σ λ_i(θ) F_i(θ) = A.
/// Throws DomainError when g(θ) ≤ g_floor.
std::vector<double> contextual_values(const WeakFamily &w, double theta, double g_floor = 1e-12);

/// Õ = Σ L_i O L_i† for the weak family at θ.
ComplexMatrix tilde_operator(const ComplexMatrix &o, const WeakFamily &w, double theta);

/// ε(A)² summed directly: Σ_ij (λ_i − λ_j)² Tr(F_i P_j ρ); returns ε.
/// Throws InvariantError if the POVM labels do not match the PVM eigenvalues.
double epsilon_noise(const DiscretePOVM &m, const PVM &p, const DensityMatrix &rho);

/// ε(A) from the reduced form (1/N)(1 − g) Σ_ij (λ_i − λ_j)² Tr(P_j ρ).
double epsilon_noise_reduced(const WeakFamily &w, double theta, const DensityMatrix &rho);

/// η_θ(B) from Tr[((B − B̃)² + tilde(B²) − B̃²) ρ]. Raises ConsistencyError if η_θ² and
/// f(θ) η(B)² differ by more than tol.
double eta_weak(const Observable &b, const WeakFamily &w, double theta, const DensityMatrix &rho,
                double tol = 1e-10);

/// Auxiliary system and coupling realising the Lüders collapse as a partial trace.
struct DilationTriple {
    DensityMatrix chi;  ///< Σ P_i / (n_i N) on a copy of the system space
    ComplexMatrix u;    ///< exp(iβ Σ P_i ⊗ P_i)
    double beta;
};

/// β = arccos(1 − N/2), so that Tr_H'(U ρ⊗χ U†) = ρ̂. Throws DomainError for N > 4.
DilationTriple dilation_triple(const PVM &p, double tol = 1e-10);

/// Tr_H'(U ρ⊗χ U†).
ComplexMatrix dilated_post_state(const DilationTriple &t, const DensityMatrix &rho);

/// Same coupling with an arbitrary β. β(θ) = 2(θ_max − θ) gives the weak-family post state.
ComplexMatrix dilated_post_state(const PVM &p, double beta, const DensityMatrix &rho);

/// Tr[(U†(B⊗1)U − B⊗1)² ρ⊗χ], the disturbance defined through the dilation; returns η.
double eta_from_dilation(const DilationTriple &t, const Observable &b, const DensityMatrix &rho);

struct DilationCheck {
    int outcomes;
    double beta;
    double rho_hat_error;  ///< ‖Tr_H'(U ρ⊗χ U†) − ρ̂‖_max
    double eta_dilation;
    double eta_intrinsic;
    double eta_error;
};

/// Builds the dilation for N ∈ {2, 3, 4}, verifies the partial-trace identity and compares the
/// two definitions of η(B). ConsistencyError when either discrepancy exceeds tol.
DilationCheck dilation_crosscheck(const PVM &p, const DensityMatrix &rho, const Observable &b,
                                  double tol = 1e-10);

struct OzawaTerms {
    double lhs;  ///< ε(η + ΔB) + ΔA·η
    double rhs;  ///< ½|Tr([A,B]ρ)|
    double gap;
};

OzawaTerms ozawa_inequality(const Observable &a, const Observable &b, const DensityMatrix &rho,
                            double epsilon, double eta);

/// Two-state weak measurement of Jx (f = 1 − sin 2θ) followed by B = b·J, scaled by 2√2.
struct OlwTerms {
    double lhs;
    double rhs;  ///< |b_y a_z − b_z a_y| / √2
    double gap;
    double noise_disturbance;  ///< 2 sinθ (cosθ − sinθ)(b_y² + b_z²)^½
    double noise_spread;       ///< √2 sinθ (b² − (a·b)²)^½
    double ideal;              ///< (1 − a_x²)^½ (b_y² + b_z²)^½
    // Matrix-engine values the terms are checked against.
    double epsilon;
    double eta_theta;
    double eta;
    /// 2√2[ε(η_θ + ΔB) + ΔA·η_θ]: the relation with η_θ in every slot.
    double lhs_weak;
    double gap_weak;
};

/// Evaluates both sides as closed forms and cross-checks each LHS term against
/// epsilon_noise / eta_weak / disturbance_eta. θ ∈ [0, π/4].
OlwTerms olw_inequality(double theta, const spin::BlochState &s, const spin::SpinObservable &b,
                        double tol = 1e-10);

}  // namespace qmeas
