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
#include <complex>
#include <string_view>

#include "json.hpp"

namespace qmeas {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// Largest absolute entry; zero for an empty matrix.
double max_abs(const ComplexMatrix &m);

/// ‖m − m†‖_max.
double hermiticity_defect(const ComplexMatrix &m);

ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix anticommutator(const ComplexMatrix &a, const ComplexMatrix &b);

/// a ⊗ b with the row index of a as the slow index.
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

/// Traces out the second tensor factor of an operator on C^d1 ⊗ C^d2.
ComplexMatrix partial_trace_second(const ComplexMatrix &m, Eigen::Index d1, Eigen::Index d2);

/// exp(i·beta·H) for hermitian H, exponentiated per eigenspace.
ComplexMatrix exp_i_hermitian(const ComplexMatrix &h, double beta);

/// Throws DimensionError unless `m` is square of size `dim`.
void require_square(const ComplexMatrix &m, Eigen::Index dim, std::string_view what);

/// Throws DimensionError when a and b are not square matrices of equal size.
void require_same_dim(const ComplexMatrix &a, const ComplexMatrix &b, std::string_view what);

/// {dim, re, im} with row-major real and imaginary parts.
nlohmann::json matrix_to_json(const ComplexMatrix &m);
ComplexMatrix matrix_from_json(const nlohmann::json &j);

}  // namespace qmeas
