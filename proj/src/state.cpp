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

#include "qmeas/state.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "qmeas/errors.hpp"

namespace qmeas {

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

ComplexMatrix hermitian_part(const ComplexMatrix &m) {
    return 0.5 * (m + m.adjoint());
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix mat, const Tolerances &tol) : mat_(std::move(mat)) {
    if (mat_.rows() == 0 || mat_.rows() != mat_.cols()) {
        throw DimensionError("DensityMatrix: matrix must be square and non-empty");
    }
    const double herm = hermiticity_defect(mat_);
    if (herm > tol.hermitian) {
        throw InvariantError("DensityMatrix: not hermitian (defect " + fmt_double(herm) + ")");
    }
    const double tr_err = std::abs(mat_.trace() - cplx(1.0));
    if (tr_err > tol.trace) {
        throw InvariantError("DensityMatrix: trace differs from 1 by " + fmt_double(tr_err));
    }
    const double lmin = min_eigenvalue();
    if (lmin < -tol.psd) {
        throw InvariantError("DensityMatrix: negative eigenvalue " + fmt_double(lmin));
    }
}

double DensityMatrix::purity() const {
    return (mat_ * mat_).trace().real();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(mat_), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

Observable::Observable(ComplexMatrix mat, double tol_hermitian) : mat_(std::move(mat)) {
    if (mat_.rows() == 0 || mat_.rows() != mat_.cols()) {
        throw DimensionError("Observable: matrix must be square and non-empty");
    }
    const double herm = hermiticity_defect(mat_);
    if (herm > tol_hermitian) {
        throw InvariantError("Observable: not hermitian (defect " + fmt_double(herm) + ")");
    }
}

PVM::PVM(std::vector<ComplexMatrix> projectors, std::vector<double> eigenvalues, double tol)
    : projectors_(std::move(projectors)), eigenvalues_(std::move(eigenvalues)) {
    if (projectors_.empty()) {
        throw InvariantError("PVM: at least one projector required");
    }
    if (projectors_.size() != eigenvalues_.size()) {
        throw InvariantError("PVM: one eigenvalue per projector required");
    }
    const Eigen::Index d = projectors_.front().rows();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < projectors_.size(); ++i) {
        const auto &p = projectors_[i];
        require_square(p, d, "PVM");
        if (hermiticity_defect(p) > tol) {
            throw InvariantError("PVM: projector " + std::to_string(i) + " not hermitian");
        }
        if (max_abs(p * p - p) > tol) {
            throw InvariantError("PVM: projector " + std::to_string(i) + " not idempotent");
        }
        for (std::size_t j = i + 1; j < projectors_.size(); ++j) {
            if (max_abs(p * projectors_[j]) > tol) {
                throw InvariantError("PVM: projectors " + std::to_string(i) + " and " +
                                     std::to_string(j) + " not orthogonal");
            }
            if (eigenvalues_[i] == eigenvalues_[j]) {
                throw InvariantError("PVM: eigenvalues must be pairwise distinct");
            }
        }
        sum += p;
    }
    if (max_abs(sum - ComplexMatrix::Identity(d, d)) > tol) {
        throw InvariantError("PVM: projectors do not sum to the identity");
    }
}

std::vector<int> PVM::ranks() const {
    std::vector<int> out;
    out.reserve(projectors_.size());
    for (const auto &p : projectors_) {
        out.push_back(static_cast<int>(std::lround(p.trace().real())));
    }
    return out;
}

Observable PVM::observable() const {
    ComplexMatrix a = ComplexMatrix::Zero(dim(), dim());
    for (std::size_t i = 0; i < size(); ++i) {
        a += eigenvalues_[i] * projectors_[i];
    }
    return Observable(hermitian_part(a));
}

PVM pvm_from_observable(const Observable &a, double degeneracy_tol) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix());
    if (es.info() != Eigen::Success) {
        throw Error("pvm_from_observable: eigendecomposition failed");
    }
    const auto &evals = es.eigenvalues();  // ascending
    const auto &evecs = es.eigenvectors();
    const Eigen::Index d = a.dim();

    std::vector<ComplexMatrix> projectors;
    std::vector<double> labels;
    Eigen::Index start = 0;
    for (Eigen::Index k = 1; k <= d; ++k) {
        if (k < d && evals(k) - evals(k - 1) <= degeneracy_tol) {
            continue;
        }
        const Eigen::Index len = k - start;
        const auto block = evecs.middleCols(start, len);
        projectors.emplace_back(block * block.adjoint());
        labels.push_back(evals.segment(start, len).mean());
        start = k;
    }
    return PVM(std::move(projectors), std::move(labels));
}

cplx expectation(const ComplexMatrix &op, const DensityMatrix &rho) {
    require_square(op, rho.dim(), "expectation");
    // Tr(Oρ) = Σ_ij O_ij ρ_ji without forming the product.
    return (op.transpose().cwiseProduct(rho.matrix())).sum();
}

double moment(const Observable &o, int n, const DensityMatrix &rho, double tol) {
    if (n < 1) {
        throw DomainError("moment: order must be positive");
    }
    require_square(o.matrix(), rho.dim(), "moment");
    ComplexMatrix power = o.matrix();
    for (int k = 1; k < n; ++k) {
        power = power * o.matrix();
    }
    const cplx tr = expectation(power, rho);
    const double scale = std::max(1.0, std::abs(tr));
    if (std::abs(tr.imag()) > tol * scale) {
        throw ConsistencyError("moment: trace has imaginary residue " + fmt_double(tr.imag()));
    }
    return tr.real();
}

double variance(const Observable &o, const DensityMatrix &rho, double tol) {
    const double m1 = moment(o, 1, rho);
    const double m2 = moment(o, 2, rho);
    const double v = m2 - m1 * m1;
    if (v < 0.0) {
        if (v < -tol * std::max(1.0, m2)) {
            throw ConsistencyError("variance: negative variance " + fmt_double(v));
        }
        return 0.0;
    }
    return v;
}

double covariance(const Observable &a, const Observable &b, const DensityMatrix &rho) {
    require_same_dim(a.matrix(), b.matrix(), "covariance");
    require_square(a.matrix(), rho.dim(), "covariance");
    const double sym = 0.5 * expectation(anticommutator(a.matrix(), b.matrix()), rho).real();
    return sym - expectation(a.matrix(), rho).real() * expectation(b.matrix(), rho).real();
}

RobertsonBound robertson_bound(const Observable &a, const Observable &b, const DensityMatrix &rho) {
    require_same_dim(a.matrix(), b.matrix(), "robertson_bound");
    require_square(a.matrix(), rho.dim(), "robertson_bound");
    RobertsonBound r{};
    r.lhs = variance(a, rho) * variance(b, rho);
    const cplx c = expectation(kI * commutator(a.matrix(), b.matrix()), rho);
    r.commutator_rhs = 0.25 * std::norm(c);
    const double cov = covariance(a, b, rho);
    r.covariance_rhs = cov * cov;
    r.rhs = std::max(r.commutator_rhs, r.covariance_rhs);
    return r;
}

}  // namespace qmeas
