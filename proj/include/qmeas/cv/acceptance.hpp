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
#include <optional>
#include <string>
#include <vector>

namespace qmeas::cv {

/// Integrals of a profile evaluated by the trapezoid rule.
struct ProfileQuadrature {
    double norm;      ///< ∫ f²
    double sigma_x2;  ///< ∫ u² f²
    double eta_p2;    ///< ∫ f′²
};

/// Real, even acceptance function f(u) of a finite-resolution position detector, normalised
/// so that ∫ f² du = 1.
class AcceptanceProfile {
   public:
    enum class Kind { gaussian, smoothed_square, tabulated };

    /// f(u) = (σ√(2π))^{−½} exp(−u²/4σ²).
    static AcceptanceProfile gaussian(double sigma_x);

    /// f(u) = s / (1 + cosh(αu)/cosh(αb)), s² = α / (2 coth²(αb)(αb coth(αb) − 1)).
    static AcceptanceProfile smoothed_square(double alpha, double b);

    /// Samples on the symmetric uniform grid u_k = −U + 2kU/(m − 1), m odd. The samples must be
    /// even within 1e-12 (relative); they are rescaled to unit norm and f is taken as zero beyond U.
    static AcceptanceProfile tabulated(std::vector<double> samples, double half_width);

    /// Samples fn on [−U, U] with m points and builds a tabulated profile.
    static AcceptanceProfile from_function(const std::function<double(double)> &fn, double half_width,
                                           int m = 4001);

    Kind kind() const { return kind_; }
    std::string name() const;

    double value(double u) const;
    double derivative(double u) const;

    /// F(u) = ∫ f(w) f(w − u) dw. Closed form for the Gaussian and the smoothed square,
    /// trapezoid quadrature on the table otherwise.
    double autocorrelation(double u) const;

    /// Beyond this radius f² is below ~1e-30 of its peak (or exactly zero).
    double support_radius() const;

    /// Closed forms, when the profile has them.
    std::optional<double> sigma_x2_closed() const;
    std::optional<double> eta_p2_closed() const;

    /// Trapezoid integrals on `points` uniformly spaced nodes over the support. Tabulated
    /// profiles use their own nodes and finite-difference derivatives; `points` is ignored.
    ProfileQuadrature quadrature(int points = 40001) const;

    double gaussian_sigma() const { return p0_; }
    double alpha() const { return p0_; }
    double b() const { return p1_; }

   private:
    AcceptanceProfile() = default;

    double ss_autocorrelation_raw(double u) const;
    double table_value(double u) const;

    Kind kind_ = Kind::gaussian;
    double p0_ = 0.0;  // σ, or α
    double p1_ = 0.0;  // b
    double scale_ = 1.0;  // s for the smoothed square
    // Tabulated: half-line samples f(k h), k = 0 … m_half − 1, and their FD derivatives.
    std::vector<double> half_;
    std::vector<double> half_deriv_;
    double h_ = 0.0;
};

/// σx, using the closed form when it agrees with quadrature to 1e-8 (relative) and the
/// quadrature value otherwise.
double sigma_x_of_profile(const AcceptanceProfile &f);

/// η(p)² = ∫|f′|², closed form where known. Raises ConsistencyError if η(p)²·4σx² < 1 − 1e-8.
double eta_p(const AcceptanceProfile &f);

/// Printed closed form for σx² of the smoothed square, b²(1 − 2αb cosh/(3(αb cosh − sinh)) + π²/(3(αb)²)).
double smoothed_square_sigma_x2(double alpha, double b);

/// (α²/6)(1/(αb coth(αb) − 1) − 3/sinh²(αb)).
double smoothed_square_eta_p2(double alpha, double b);

}  // namespace qmeas::cv
