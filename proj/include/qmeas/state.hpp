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

#include <vector>

#include "qmeas/matrix.hpp"

namespace qmeas {

/// Validation thresholds for finite-dimensional states and operators.
struct Tolerances {
    double hermitian = 1e-10;
    double trace = 1e-10;
    double psd = 1e-8;
};

/// A mixed state on C^dim. Validated on construction and immutable afterwards.
class DensityMatrix {
   public:
    explicit DensityMatrix(ComplexMatrix mat, const Tolerances &tol = {});

    const ComplexMatrix &matrix() const { return mat_; }
    Eigen::Index dim() const { return mat_.rows(); }

    /// Tr(ρ²).
    double purity() const;

    /// Smallest eigenvalue of the (hermitian part of the) matrix.
    double min_eigenvalue() const;

   private:
    ComplexMatrix mat_;
};

/// A hermitian operator.
class Observable {
   public:
    explicit Observable(ComplexMatrix mat, double tol_hermitian = Tolerances{}.hermitian);

    const ComplexMatrix &matrix() const { return mat_; }
    Eigen::Index dim() const { return mat_.rows(); }

   private:
    ComplexMatrix mat_;
};

/// Finite projection-valued measure: orthogonal, complete projectors with distinct labels.
class PVM {
   public:
    PVM(std::vector<ComplexMatrix> projectors, std::vector<double> eigenvalues, double tol = 1e-10);

    const std::vector<ComplexMatrix> &projectors() const { return projectors_; }
    const std::vector<double> &eigenvalues() const { return eigenvalues_; }
    std::size_t size() const { return projectors_.size(); }
    Eigen::Index dim() const { return projectors_.front().rows(); }

    /// Rank of each projector (the multiplicity n_i of λ_i).
    std::vector<int> ranks() const;

    /// Σ λ_i P_i.
    Observable observable() const;

   private:
    std::vector<ComplexMatrix> projectors_;
    std::vector<double> eigenvalues_;
};

/// Spectral decomposition of A. Sorted eigenvalues closer than degeneracy_tol to their
/// neighbour are merged (single linkage); the merged label is the cluster mean.
PVM pvm_from_observable(const Observable &a, double degeneracy_tol = 1e-9);

/// Tr(Oⁿρ). Throws ConsistencyError if the trace has an imaginary part above `tol`.
double moment(const Observable &o, int n, const DensityMatrix &rho, double tol = 1e-10);

/// (ΔO)² in ρ, clamped to zero when it lies within `tol` below zero.
double variance(const Observable &o, const DensityMatrix &rho, double tol = 1e-12);

/// ⟨½{A,B}⟩ − ⟨A⟩⟨B⟩.
double covariance(const Observable &a, const Observable &b, const DensityMatrix &rho);

/// Expectation value Tr(Oρ) for a general (not necessarily hermitian) operator.
cplx expectation(const ComplexMatrix &op, const DensityMatrix &rho);

struct RobertsonBound {
    double lhs;              ///< (ΔA)²(ΔB)²
    double commutator_rhs;   ///< ¼|Tr(i[A,B]ρ)|²
    double covariance_rhs;   ///< Cov(A,B)²
    double rhs;              ///< max of the two
};

RobertsonBound robertson_bound(const Observable &a, const Observable &b, const DensityMatrix &rho);

}  // namespace qmeas
