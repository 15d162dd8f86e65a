// Copyright 2026 The vibronic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VIBRONIC_LINEAR_HPP
#define VIBRONIC_LINEAR_HPP

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "vibronic/model.hpp"
#include "vibronic/pattern.hpp"
#include "vibronic/spectrum.hpp"

namespace vibronic {

/// Transition probability under the linear coupling approximation:
/// a product of Poisson terms |beta_i|^{2 m_i} e^{-|beta_i|^2} / m_i!.
/// Squeezing parameters are ignored.
double linear_fcf(const std::vector<DisplacedSqueezedMode> &modes,
                  const PhotonPattern &pattern);

/// Deterministic alternative to sampling: lists every pattern in the product
/// of per-mode Poisson supports, each mode truncated at the smallest cutoff
/// whose tail mass is below tail_bound / M. Listed probability mass is at
/// least 1 - tail_bound. Patterns are in lexicographic order.
std::vector<std::pair<PhotonPattern, double>> linear_enumerate(
    const std::vector<DisplacedSqueezedMode> &modes, double tail_bound);

/// Draws n_shots i.i.d. patterns, each mode Poisson(|beta_i|^2).
/// Deterministic for a given seed (block-split, see rng.hpp).
SampleSet linear_sample(const std::vector<DisplacedSqueezedMode> &modes,
                        std::uint64_t n_shots, std::uint64_t seed);

namespace detail {
/// Exact inversion-by-search Poisson sampler, suitable for the small means
/// (Huang-Rhys factors) that occur here.
int poisson_draw(double mean, std::mt19937_64 &rng);
}  // namespace detail

}  // namespace vibronic

#endif
