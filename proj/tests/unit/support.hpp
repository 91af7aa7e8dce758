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

// Hand-built Pauli algebra used as an oracle independent of the library's spin helpers.

#include <array>
#include <cmath>
#include <random>

#include "qmeas/matrix.hpp"
#include "qmeas/random.hpp"

namespace qt {

using qmeas::ComplexMatrix;
using qmeas::cplx;

inline constexpr std::uint64_t kSeed = 1729;

inline ComplexMatrix pauli(int k) {
    ComplexMatrix m(2, 2);
    switch (k) {
        case 0:
            m << 1, 0, 0, 1;
            break;
        case 1:
            m << 0, 1, 1, 0;
            break;
        case 2:
            m << 0, cplx(0, -1), cplx(0, 1), 0;
            break;
        default:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

/// ½(1 + a·σ).
inline ComplexMatrix bloch(const std::array<double, 3> &a) {
    return 0.5 * (pauli(0) + a[0] * pauli(1) + a[1] * pauli(2) + a[2] * pauli(3));
}

/// ½ b·σ.
inline ComplexMatrix spin_op(const std::array<double, 3> &b) {
    return 0.5 * (b[0] * pauli(1) + b[1] * pauli(2) + b[2] * pauli(3));
}

inline double re_trace(const ComplexMatrix &m) { return m.trace().real(); }

inline double dot(const std::array<double, 3> &u, const std::array<double, 3> &v) {
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

}  // namespace qt
