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

// Density operators on L²(ℝ) sampled as integral kernels K(x_i, x_j). ħ = 1; the momentum
// density is n(k) = (1/2π)∫dr e^{−ikr} C(r) with C(r) = ∫dy K(y + r, y).

#include <vector>

#include "json.hpp"
#include "qmeas/cv/grid.hpp"
#include "qmeas/matrix.hpp"

namespace qmeas::cv {

inline constexpr double kTolGrid = 1e-6;

/// Validated kernel: hermitian, unit trace under the trapezoid rule, and positive
/// semidefinite as the weighted matrix W^½ K W^½ (all within tol).
class KernelState {
   public:
    KernelState(Grid grid, ComplexMatrix k, double tol = kTolGrid);

    const Grid &grid() const { return grid_; }
    const ComplexMatrix &kernel() const { return k_; }

    /// Σ w_i K_ii.
    double trace() const;

    /// Tr(ρ²) = Σ w_i w_j |K_ij|².
    double purity() const;

    /// Trapezoid values of K(x, x).
    Eigen::VectorXd diagonal() const;

   private:
    Grid grid_;
    ComplexMatrix k_;
};

/// Mean, variance and raw second moment of a distribution.
struct Moments {
    double mass;
    double mean;
    double second;  ///< ⟨·²⟩
    double var;
};

/// Position statistics from the diagonal.
Moments position_moments(const KernelState &rho);

/// C(r_m) = dx Σ_i K(x_{i+m}, x_i) for m = −(n−1) … n−1 (index m + n − 1).
std::vector<cplx> autocorrelation_diagonals(const KernelState &rho);

/// Momentum density on the dual grid k_j = j·2π/(M dx), M = 2n − 1, of the sampled C(r)·window(r).
struct MomentumDensity {
    std::vector<double> k;
    std::vector<double> density;
    double dk;
};

/// window may be empty (treated as 1). Raises GridError when more than 1e-10 of the total
/// weight sits above 0.8·k_Nyquist.
MomentumDensity momentum_density(const Grid &grid, const std::vector<cplx> &c,
                                 const std::vector<double> &window = {});

Moments moments_of(const MomentumDensity &d);

/// Tr(p ρ), Tr(p² ρ), variance.
Moments momentum_moments(const KernelState &rho);

/// Pure Gaussian wave packet ψ(x) = (2πv)^{−¼} exp[−(x − x̄)²/4v + i p̄ x], renormalised on the grid.
/// GridError when the packet is closer than 8√v to an edge, when dx > √v/4, or when
/// |p̄| + 8/(2√v) exceeds the grid's momentum range.
KernelState gaussian_state(const Grid &grid, double x_mean, double p_mean, double var_x);

/// Gaussian mixed state with (Δx)² = var_x and (Δp)² = var_p; requires var_x·var_p ≥ ¼.
/// K(x,y) = (2π var_x)^{−½} exp[−(R − x̄)²/2var_x − var_p r²/2 + i p̄ r], R = (x+y)/2, r = x − y.
KernelState mixed_gaussian_state(const Grid &grid, double x_mean, double p_mean, double var_x,
                                 double var_p);

/// P(S) = ∫_S K(x,x) dx for S = [lo, hi]; infinite ends mean the grid ends. Piecewise-cubic
/// interpolation of the diagonal. DomainError if a finite end lies outside the grid.
double pvm_probability_x(const KernelState &rho, double lo, double hi);

/// {x_min, x_max, n, re, im} with K row-major.
nlohmann::json to_json(const KernelState &rho);
KernelState kernel_from_json(const nlohmann::json &j);

}  // namespace qmeas::cv
