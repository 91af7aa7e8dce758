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

#include "qmeas/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <string>

#include "qmeas/errors.hpp"

namespace qmeas {

double max_abs(const ComplexMatrix &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    return m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix &m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("hermiticity_defect: matrix is not square");
    }
    return max_abs(m - m.adjoint());
}

ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_dim(a, b, "commutator");
    return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_dim(a, b, "anticommutator");
    return a * b + b * a;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix partial_trace_second(const ComplexMatrix &m, Eigen::Index d1, Eigen::Index d2) {
    require_square(m, d1 * d2, "partial_trace_second");
    ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
    for (Eigen::Index i = 0; i < d1; ++i) {
        for (Eigen::Index j = 0; j < d1; ++j) {
            cplx acc = 0.0;
            for (Eigen::Index k = 0; k < d2; ++k) {
                acc += m(i * d2 + k, j * d2 + k);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

ComplexMatrix exp_i_hermitian(const ComplexMatrix &h, double beta) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    if (es.info() != Eigen::Success) {
        throw Error("exp_i_hermitian: eigendecomposition failed");
    }
    ComplexVector phases(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
        phases(k) = std::exp(kI * beta * es.eigenvalues()(k));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

void require_square(const ComplexMatrix &m, Eigen::Index dim, std::string_view what) {
    if (m.rows() != dim || m.cols() != dim) {
        throw DimensionError(std::string(what) + ": expected " + std::to_string(dim) + "x" +
                             std::to_string(dim) + " matrix, got " + std::to_string(m.rows()) +
                             "x" + std::to_string(m.cols()));
    }
}

void require_same_dim(const ComplexMatrix &a, const ComplexMatrix &b, std::string_view what) {
    if (a.rows() != a.cols()) {
        throw DimensionError(std::string(what) + ": first operand is not square");
    }
    require_square(b, a.rows(), what);
}

nlohmann::json matrix_to_json(const ComplexMatrix &m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("matrix_to_json: matrix is not square");
    }
    std::vector<double> re;
    std::vector<double> im;
    re.reserve(static_cast<std::size_t>(m.size()));
    im.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            re.push_back(m(i, j).real());
            im.push_back(m(i, j).imag());
        }
    }
    return {{"dim", m.rows()}, {"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const nlohmann::json &j) {
    if (!j.contains("dim") || !j.contains("re") || !j.contains("im")) {
        throw InvariantError("matrix_from_json: object needs keys dim, re, im");
    }
    const auto dim = j.at("dim").get<long>();
    if (dim <= 0) {
        throw InvariantError("matrix_from_json: dim must be positive");
    }
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    const auto expected = static_cast<std::size_t>(dim * dim);
    if (re.size() != expected || im.size() != expected) {
        throw InvariantError("matrix_from_json: re/im must hold dim*dim entries");
    }
    ComplexMatrix m(dim, dim);
    for (long i = 0; i < dim; ++i) {
        for (long j2 = 0; j2 < dim; ++j2) {
            const auto k = static_cast<std::size_t>(i * dim + j2);
            m(i, j2) = cplx(re[k], im[k]);
        }
    }
    return m;
}

}  // namespace qmeas
