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

#ifndef VIBRONIC_PARALLEL_HPP
#define VIBRONIC_PARALLEL_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "vibronic/model.hpp"
#include "vibronic/pattern.hpp"
#include "vibronic/spectrum.hpp"

namespace vibronic {

/// Photon-number probability of a single displaced squeezed state,
/// P(m) = |<m| D(beta) S(xi) |0>|^2 with xi = r_abs * e^{i r_phase}:
///
///   P(m) = (1/2 tanh|r|)^m / (m! cosh|r|)
///          * |H_m(gamma / sqrt(e^{i theta} sinh 2|r|))|^2
///          * exp(-|beta|^2 - Re(conj(beta)^2 e^{i theta}) tanh|r|),
///
/// gamma = beta cosh|r| + conj(beta) e^{i theta} sinh|r|. The Hermite factor
/// is evaluated by a prefactor-absorbed recurrence with log-scale tracking,
/// so no intermediate overflows for any m; below |r| = 1e-12 the exact
/// Poisson limit |beta|^{2m} e^{-|beta|^2} / m! is taken instead.
double dsq_mode_prob(const DisplacedSqueezedMode &mode, int m);

/// Product of dsq_mode_prob over independent modes (the parallel
/// approximation).
double parallel_fcf(const std::vector<DisplacedSqueezedMode> &modes,
                    const PhotonPattern &pattern);

/// Full product-support listing with per-mode cutoffs chosen so each mode
/// retains at least 1 - tail_bound / M of its mass; total listed mass is at
/// least 1 - tail_bound. Lexicographic order.
std::vector<std::pair<PhotonPattern, double>> parallel_enumerate(
    const std::vector<DisplacedSqueezedMode> &modes, double tail_bound);

/// Per-mode inverse-CDF sampling over the truncated distribution; the
/// residual tail mass is assigned to the cutoff count. Deterministic for a
/// given seed.
SampleSet parallel_sample(const std::vector<DisplacedSqueezedMode> &modes,
                          std::uint64_t n_shots, std::uint64_t seed,
                          double tail_bound = 1e-9);

namespace detail {
/// P(0..max_m) for one mode in a single recurrence pass.
std::vector<double> dsq_mode_distribution(const DisplacedSqueezedMode &mode, int max_m);
}  // namespace detail

}  // namespace vibronic

#endif
