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

#include "qmeas/projective.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "qmeas/errors.hpp"
#include "qmeas/random.hpp"

namespace qmeas {

namespace {

ComplexMatrix herm(const ComplexMatrix &m) {
    return 0.5 * (m + m.adjoint());
}

void require_pvm_dim(const PVM &pvm, Eigen::Index dim, const char *what) {
    if (pvm.dim() != dim) {
        throw DimensionError(std::string(what) + ": PVM acts on dimension " +
                             std::to_string(pvm.dim()) + ", operand has " + std::to_string(dim));
    }
}

}  // namespace

ComplexMatrix pinch(const ComplexMatrix &x, const PVM &pvm) {
    require_square(x, pvm.dim(), "pinch");
    ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
    for (const auto &p : pvm.projectors()) {
        out += p * x * p;
    }
    return out;
}

MeasurementOutcome collapse_pvm(const DensityMatrix &rho, const PVM &pvm) {
    require_pvm_dim(pvm, rho.dim(), "collapse_pvm");
    std::vector<OutcomeProbability> probs;
    probs.reserve(pvm.size());
    for (std::size_t i = 0; i < pvm.size(); ++i) {
        probs.push_back({pvm.eigenvalues()[i], expectation(pvm.projectors()[i], rho).real()});
    }
    return {DensityMatrix(herm(pinch(rho.matrix(), pvm))), std::move(probs)};
}

Observable hat_operator(const Observable &b, const PVM &pvm) {
    require_pvm_dim(pvm, b.dim(), "hat_operator");
    return Observable(herm(pinch(b.matrix(), pvm)));
}

std::vector<ComplexMatrix> off_block_parts(const Observable &b, const PVM &pvm) {
    require_pvm_dim(pvm, b.dim(), "off_block_parts");
    const ComplexMatrix id = ComplexMatrix::Identity(b.dim(), b.dim());
    std::vector<ComplexMatrix> out;
    out.reserve(pvm.size());
    for (const auto &p : pvm.projectors()) {
        out.emplace_back(p * b.matrix() * (id - p));
    }
    return out;
}

double disturbance_eta(const Observable &b, const PVM &pvm, const DensityMatrix &rho, double tol) {
    require_pvm_dim(pvm, b.dim(), "disturbance_eta");
    require_square(b.matrix(), rho.dim(), "disturbance_eta");
    const ComplexMatrix &bm = b.matrix();
    const ComplexMatrix b_hat = pinch(bm, pvm);
    const ComplexMatrix b2_hat = pinch(bm * bm, pvm);
    const ComplexMatrix spread = b2_hat - b_hat * b_hat;

    ComplexMatrix mm = ComplexMatrix::Zero(bm.rows(), bm.cols());
    for (const auto &m : off_block_parts(b, pvm)) {
        mm += m * m.adjoint();
    }
    const double scale = std::max(1.0, max_abs(bm * bm));
    if (max_abs(spread - mm) > tol * scale) {
        throw ConsistencyError("disturbance_eta: hat(B^2) - hat(B)^2 differs from sum M M^dagger");
    }

    const ComplexMatrix diff = bm - b_hat;
    const double eta2 = expectation(diff * diff + spread, rho).real();
    if (eta2 < -tol * scale) {
        throw ConsistencyError("disturbance_eta: negative eta^2");
    }
    return std::sqrt(std::max(0.0, eta2));
}

SuccessiveBound successive_bound(const Observable &a, const Observable &b, const DensityMatrix &rho,
                                 double degeneracy_tol) {
    require_same_dim(a.matrix(), b.matrix(), "successive_bound");
    require_square(a.matrix(), rho.dim(), "successive_bound");
    const PVM pvm = pvm_from_observable(a, degeneracy_tol);
    const auto collapsed = collapse_pvm(rho, pvm);
    const Observable b_hat = hat_operator(b, pvm);

    SuccessiveBound r{};
    r.var_a = variance(a, rho);
    r.product = r.var_a * variance(b, collapsed.post_state);
    const double cov = covariance(a, b_hat, rho);
    r.term1 = cov * cov;
    double mm = 0.0;
    for (const auto &m : off_block_parts(b, pvm)) {
        mm += expectation(m * m.adjoint(), rho).real();
    }
    r.term2 = r.var_a * mm;
    r.bound = r.term1 + r.term2;
    r.var_b_hat_rho = variance(b_hat, rho);
    return r;
}

double conditional_expectation(const Observable &o, const ComplexMatrix &projector,
                               const DensityMatrix &rho_hat, double null_tol) {
    require_square(projector, rho_hat.dim(), "conditional_expectation");
    require_square(o.matrix(), rho_hat.dim(), "conditional_expectation");
    const double z = expectation(projector, rho_hat).real();
    if (z <= null_tol) {
        throw NullEventError("conditional_expectation: conditioning on null event (probability " +
                             std::to_string(z) + ")");
    }
    return expectation(projector * o.matrix() * projector, rho_hat).real() / z;
}

double delta_uncertainty(const Observable &b, const PVM &pvm, const DensityMatrix &rho) {
    const auto collapsed = collapse_pvm(rho, pvm);
    return variance(b, collapsed.post_state) - variance(b, rho);
}

EtaZeroSearch search_eta_zero_counterexample(std::uint64_t seed, int trials, Eigen::Index dim,
                                             int outcomes, double eta_tol, double change_tol) {
    EtaZeroSearch out;
    out.trials = trials;
    for (int t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        const PVM a = random_pvm(rng, dim, outcomes);
        const DensityMatrix rho = random_density(rng, dim, 1);
        const DensityMatrix rho_hat = collapse_pvm(rho, a).post_state;

        // Q projects onto the complement of supp(ρ̂); it commutes with every P_i.
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_hat.matrix());
        ComplexMatrix q = ComplexMatrix::Identity(dim, dim);
        for (Eigen::Index k = 0; k < dim; ++k) {
            if (es.eigenvalues()(k) > 1e-12) {
                const auto v = es.eigenvectors().col(k);
                q -= v * v.adjoint();
            }
        }
        const ComplexMatrix x = random_observable(rng, dim).matrix();
        const ComplexMatrix qxq = q * x * q;
        const ComplexMatrix off = qxq - pinch(qxq, a);
        const ComplexMatrix diag = pinch(random_observable(rng, dim).matrix(), a);
        const Observable b(herm(diag + off));

        const double eta = disturbance_eta(b, a, rho);
        if (eta > eta_tol) {
            continue;
        }
        ++out.eta_zero_instances;
        out.max_eta = std::max(out.max_eta, eta);
        const PVM b_pvm = pvm_from_observable(b, 1e-9);
        for (const auto &p : b_pvm.projectors()) {
            const double before = expectation(p, rho).real();
            const double after = expectation(p, rho_hat).real();
            out.max_distribution_change = std::max(out.max_distribution_change, std::abs(after - before));
        }
    }
    out.counterexample_found = out.max_distribution_change > change_tol;
    return out;
}

}  // namespace qmeas
