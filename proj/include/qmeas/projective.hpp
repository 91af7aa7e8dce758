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

#include <cstdint>
#include <vector>

#include "qmeas/state.hpp"

namespace qmeas {

struct OutcomeProbability {
    double value;
    double prob;
};

/// State after a measurement together with the outcome distribution.
struct MeasurementOutcome {
    DensityMatrix post_state;
    std::vector<OutcomeProbability> outcome_probs;
};

/// Lüders collapse ρ̂ = Σ P_i ρ P_i with probabilities Tr(P_i ρ).
MeasurementOutcome collapse_pvm(const DensityMatrix &rho, const PVM &pvm);

/// Pinching of an arbitrary operator: Σ P_i X P_i.
ComplexMatrix pinch(const ComplexMatrix &x, const PVM &pvm);

/// B̂ = Σ P_i B P_i, the part of B that commutes with the measured observable.
Observable hat_operator(const Observable &b, const PVM &pvm);

/// M_i = P_i B (1 − P_i).
std::vector<ComplexMatrix> off_block_parts(const Observable &b, const PVM &pvm);

/// Disturbance η(B) ≥ 0 caused in B by measuring the PVM.
///
/// η(B)² = Tr[((B − B̂)² + hat(B²) − B̂²) ρ]. The operator hat(B²) − B̂² is checked
/// against Σ M_i M_i† and a ConsistencyError is raised if they differ by more than `tol`.
double disturbance_eta(const Observable &b, const PVM &pvm, const DensityMatrix &rho,
                       double tol = 1e-10);

/// The two sides of the successive-measurement inequality for "A then B".
struct SuccessiveBound {
    double product;  ///< (ΔA)²_ρ (ΔB)²_ρ̂
    double bound;    ///< term1 + term2
    double term1;    ///< Cov(A, B̂)²_ρ
    double term2;    ///< (ΔA)²_ρ Σ Tr(M_i M_i† ρ)
    double var_a;
    double var_b_hat_rho;  ///< (ΔB̂)²_ρ
};

SuccessiveBound successive_bound(const Observable &a, const Observable &b, const DensityMatrix &rho,
                                 double degeneracy_tol = 1e-9);

/// Tr(P O P ρ̂) / Tr(P ρ̂): the expectation of O conditioned on the outcome with projector P.
/// Throws NullEventError if Tr(P ρ̂) <= null_tol.
double conditional_expectation(const Observable &o, const ComplexMatrix &projector,
                               const DensityMatrix &rho_hat, double null_tol = 1e-12);

/// (ΔB)²_ρ̂ − (ΔB)²_ρ. Signed; may be negative.
double delta_uncertainty(const Observable &b, const PVM &pvm, const DensityMatrix &rho);

/// Result of a randomized search for states where η(B) = 0 but the distribution of B changes.
struct EtaZeroSearch {
    int trials = 0;
    int eta_zero_instances = 0;          ///< instances with η(B) below eta_tol
    double max_distribution_change = 0;  ///< max |ΔP(b_k)| over those instances
    double max_eta = 0;                  ///< largest η among them (sanity)
    bool counterexample_found = false;   ///< some change exceeded change_tol
};

/// Builds instances with η(B) = 0 by construction (B acts off-block only outside the support
/// of ρ̂) and compares the spectral distribution of B before and after measuring A.
/// Nothing is asserted; the search reports what it found.
EtaZeroSearch search_eta_zero_counterexample(std::uint64_t seed, int trials, Eigen::Index dim,
                                             int outcomes, double eta_tol = 1e-10,
                                             double change_tol = 1e-8);

}  // namespace qmeas
