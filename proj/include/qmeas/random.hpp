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

// Random instance generators shared by property tests, the acceptance suite and CLI sweeps.

#include <array>
#include <cstdint>
#include <random>

#include "qmeas/state.hpp"

namespace qmeas {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 1729;

/// Independent stream for row `index` of a sweep seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

ComplexMatrix random_ginibre(Rng &rng, Eigen::Index dim);
ComplexMatrix random_unitary(Rng &rng, Eigen::Index dim);
Observable random_observable(Rng &rng, Eigen::Index dim);

/// Random state of the given rank (rank <= 0 picks a rank uniformly in [1, dim]).
DensityMatrix random_density(Rng &rng, Eigen::Index dim, int rank = 0);

/// Random PVM with `outcomes` projectors of random rank in a Haar-random basis and
/// labels drawn from N(0, 1).
PVM random_pvm(Rng &rng, Eigen::Index dim, int outcomes);

/// Uniform point in the closed unit ball.
std::array<double, 3> random_in_ball(Rng &rng);

/// Uniform point on the unit sphere.
std::array<double, 3> random_unit_vector(Rng &rng);

}  // namespace qmeas
