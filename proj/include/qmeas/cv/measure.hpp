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

#include "qmeas/cv/acceptance.hpp"
#include "qmeas/cv/kernel_state.hpp"

namespace qmeas::cv {

/// Finite-resolution position measurement.
struct XMeasurement {
    KernelState post;     ///< K(x,y)·F(x − y)
    double measured_mean;
    double measured_var;  ///< variance of the outcome distribution ∫|f(x − x0)|² K(x,x) dx
};

/// Raises GridError when dx > σx/4.
XMeasurement measure_x(const KernelState &rho, const AcceptanceProfile &f);

/// Gaussian momentum detector of resolution σp.
struct PMeasurement {
    KernelState post;  ///< (σp/√(π/2)) ∫du e^{−2σp²u²} K(x+u, y+u)
    double measured_mean;
    double measured_var;
};

/// Raises GridError when |⟨p⟩| + 8(Δp + σp) exceeds the grid momentum range.
PMeasurement measure_p(const KernelState &rho, double sigma_p);

/// ∫du (2πV)^{−½} e^{−u²/2V} K(x+u, y+u) on the grid (shifts by whole grid steps, entries
/// outside the domain are zero). GridError if the trapezoid weights do not sum to 1 or the
/// trace leaks out of the domain.
KernelState smear_diagonal(const KernelState &rho, double variance);

/// ε(x) from ∫dx0 Tr(F_{x0}(x − x0)²ρ). ConsistencyError unless ε(x)² = σx² within 1e-6 (relative).
double epsilon_x(const KernelState &rho, const AcceptanceProfile &f);

/// ¼(1 + √(1 + 4σx²σp²))².
double successive_bound(double sigma_x, double sigma_p);

/// x with profile f, then p with a Gaussian detector σp.
struct SuccessiveResult {
    double var_x_rho;
    double var_p_rho;
    double sigma_x2;
    double eta_p2;          ///< profile value (closed form where known)
    double eta_p2_grid;     ///< Tr(p²ρ̂) − Tr(p²ρ) after the x step
    double measured_var_x;  ///< (Δx)²_ρ + σx²
    double measured_var_p;  ///< (Δp)²_ρ + η(p)² + σp²
    double product;
    double line2;           ///< ½ + (1/4σx² + σp²)(Δx)²_ρ + σx²(Δp)²_ρ + σx²σp²
    double bound;
    double net_eta_p2;      ///< Tr(p²ρ_final) − Tr(p²ρ)
    double net_eta_x2;      ///< Tr(x²ρ_final) − Tr(x²ρ)
    KernelState after_x;
    KernelState final_state;
};

/// ConsistencyError if product < bound − 1e-8·bound.
SuccessiveResult successive_xp(const KernelState &rho, const AcceptanceProfile &f, double sigma_p);

/// Arthurs-Kelly joint measurement with h(u,v) = g(u) f(v), f Gaussian of parameter b and
/// g Gaussian of parameter a.
struct JointResult {
    double a;
    double b;
    double g_norm;  ///< ∫|g|², by quadrature
    // Raw moments ∫dx0 dk0/2π x0^k k0^l Tr(F ρ), so g enters only through g_norm.
    double measured_mean_x;
    double measured_var_x;
    double measured_mean_p;
    double measured_var_p;
    double product;
    double eta_p2;  ///< grid, Tr(p²ρ̂) − Tr(p²ρ)
    double eta_x2;
    double eta_p2_closed;  ///< (a² + b²)/(2a²b²)
    double eta_x2_closed;  ///< (a² + b²)/2
    KernelState post;
};

JointResult joint_ak(const KernelState &rho, double b, double a);

/// a² and b² that make the joint post state equal to the successive one.
struct Matching {
    double a2;
    double b2;
};

/// DomainError when σxσp > ¼: no disturbance-matched joint measurement exists.
Matching joint_matching(double sigma_x, double sigma_p);

struct JointVsSuccessiveOptions {
    int n = kDefaultGridPoints;
    double half_span = 0.0;  ///< 0 selects the default
    double var_x = 0.0;      ///< test state (centred pure Gaussian); 0 selects σx/(2σp)
};

struct JointVsSuccessive {
    double sigma_x;
    double sigma_p;
    double a2;
    double b2;
    double diff_x_closed;  ///< (1 − √D)²/(16σp²), D = 1 − 16σx²σp²
    double diff_p_closed;  ///< −[1 − 4σx²σp²(1 + √D)] / [4σx²(1 − √D)], as printed
    /// 1/(2b²) − 1/(4σx²) − σp² written out: [4σx²σp² − 1 + √D(1 + 4σx²σp²)] / [4σx²(1 − √D)].
    /// Agrees with diff_p_closed only at σxσp = ¼.
    double diff_p_derived;
    double diff_x_grid;
    double diff_p_grid;
    double var_x_joint;
    double var_x_successive;
    double var_p_joint;
    double var_p_successive;
    double post_state_mismatch;  ///< max |K_joint − K_successive| / max |K_successive|
};

JointVsSuccessive joint_vs_successive(double sigma_x, double sigma_p,
                                      const JointVsSuccessiveOptions &opt = {});

/// Golden-section search for the pure-Gaussian width minimising the successive product
/// (v + σx²)(1/4v + η(p)² + σp²) over v ∈ [1e-3, 1e3]·σx².
struct Saturation {
    double var_x;
    double product;
    double closed_var_x;    ///< σx / (2√(η(p)² + σp²))
    double closed_product;  ///< ¼ + σx²(η(p)² + σp²) + σx√(η(p)² + σp²)
};

Saturation find_saturating_width(const AcceptanceProfile &f, double sigma_p);

}  // namespace qmeas::cv
