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

#include "qmeas/random.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "qmeas/errors.hpp"

namespace qmeas {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finalizer over (seed, index)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

ComplexMatrix random_ginibre(Rng &rng, Eigen::Index dim) {
    std::normal_distribution<double> n01(0.0, 1.0);
    ComplexMatrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            g(i, j) = cplx(n01(rng), n01(rng));
        }
    }
    return g;
}

ComplexMatrix random_unitary(Rng &rng, Eigen::Index dim) {
    const ComplexMatrix g = random_ginibre(rng, dim);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity of QR so that Q is Haar distributed.
    for (Eigen::Index k = 0; k < dim; ++k) {
        const cplx d = r(k, k);
        const double mag = std::abs(d);
        if (mag > 0.0) {
            q.col(k) *= d / mag;
        }
    }
    return q;
}

Observable random_observable(Rng &rng, Eigen::Index dim) {
    const ComplexMatrix g = random_ginibre(rng, dim);
    return Observable(0.5 * (g + g.adjoint()));
}

DensityMatrix random_density(Rng &rng, Eigen::Index dim, int rank) {
    if (rank <= 0) {
        std::uniform_int_distribution<int> pick(1, static_cast<int>(dim));
        rank = pick(rng);
    }
    rank = std::min<int>(rank, static_cast<int>(dim));
    std::normal_distribution<double> n01(0.0, 1.0);
    ComplexMatrix w(dim, rank);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < rank; ++j) {
            w(i, j) = cplx(n01(rng), n01(rng));
        }
    }
    ComplexMatrix rho = w * w.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint());
    return DensityMatrix(std::move(rho));
}

PVM random_pvm(Rng &rng, Eigen::Index dim, int outcomes) {
    if (outcomes < 1 || outcomes > dim) {
        throw DomainError("random_pvm: outcome count must lie in [1, dim]");
    }
    // Split dim basis vectors into `outcomes` non-empty groups.
    std::vector<int> sizes(static_cast<std::size_t>(outcomes), 1);
    std::uniform_int_distribution<int> pick(0, outcomes - 1);
    for (Eigen::Index extra = outcomes; extra < dim; ++extra) {
        ++sizes[static_cast<std::size_t>(pick(rng))];
    }
    const ComplexMatrix u = random_unitary(rng, dim);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<ComplexMatrix> projectors;
    std::vector<double> labels;
    Eigen::Index col = 0;
    for (int s : sizes) {
        const auto block = u.middleCols(col, s);
        projectors.emplace_back(block * block.adjoint());
        labels.push_back(n01(rng));
        col += s;
    }
    return PVM(std::move(projectors), std::move(labels));
}

std::array<double, 3> random_unit_vector(Rng &rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    for (;;) {
        const double x = n01(rng);
        const double y = n01(rng);
        const double z = n01(rng);
        const double r = std::sqrt(x * x + y * y + z * z);
        if (r > 1e-12) {
            return {x / r, y / r, z / r};
        }
    }
}

std::array<double, 3> random_in_ball(Rng &rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const auto dir = random_unit_vector(rng);
    const double r = std::cbrt(u01(rng));
    return {r * dir[0], r * dir[1], r * dir[2]};
}

}  // namespace qmeas
