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

#include "qmeas/cv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qmeas/errors.hpp"

namespace qmeas::cv {

Grid::Grid(double x_min, double x_max, int n) : x_min_(x_min), x_max_(x_max), n_(n) {
    if (n_ < 16) {
        throw InvariantError("Grid: n = " + std::to_string(n_) + " is below the minimum of 16");
    }
    if (!std::isfinite(x_min_) || !std::isfinite(x_max_) || !(x_max_ > x_min_)) {
        throw InvariantError("Grid: need finite x_min < x_max");
    }
    dx_ = (x_max_ - x_min_) / (n_ - 1);
}

Grid Grid::symmetric(double half_span, int n) {
    return Grid(-half_span, half_span, n);
}

Eigen::VectorXd Grid::points() const {
    Eigen::VectorXd p(n_);
    for (int i = 0; i < n_; ++i) {
        p(i) = x(i);
    }
    return p;
}

Eigen::VectorXd Grid::weights() const {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n_, dx_);
    w(0) *= 0.5;
    w(n_ - 1) *= 0.5;
    return w;
}

double Grid::k_nyquist() const {
    return std::numbers::pi / dx_;
}

bool Grid::operator==(const Grid &o) const {
    return n_ == o.n_ && x_min_ == o.x_min_ && x_max_ == o.x_max_;
}

double default_half_span(std::initializer_list<double> length_scales) {
    double m = 0.0;
    for (double s : length_scales) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw DomainError("default_half_span: length scales must be positive and finite");
        }
        m = std::max(m, s);
    }
    if (m == 0.0) {
        throw DomainError("default_half_span: no length scale given");
    }
    return 8.0 * m;
}

}  // namespace qmeas::cv
