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

#include <Eigen/Dense>
#include <initializer_list>

namespace qmeas::cv {

/// Uniform grid on [x_min, x_max] with both endpoints included and trapezoidal weights.
class Grid {
   public:
    Grid(double x_min, double x_max, int n);

    /// [-half_span, half_span].
    static Grid symmetric(double half_span, int n);

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    int n() const { return n_; }
    double dx() const { return dx_; }
    double x(int i) const { return x_min_ + i * dx_; }
    double weight(int i) const { return (i == 0 || i == n_ - 1) ? 0.5 * dx_ : dx_; }

    Eigen::VectorXd points() const;
    Eigen::VectorXd weights() const;

    /// π/dx.
    double k_nyquist() const;

    bool operator==(const Grid &o) const;

   private:
    double x_min_;
    double x_max_;
    int n_;
    double dx_;
};

inline constexpr int kDefaultGridPoints = 512;

/// 8·max(scales), the default half-width of the domain given the length scales in play.
double default_half_span(std::initializer_list<double> length_scales);

}  // namespace qmeas::cv
