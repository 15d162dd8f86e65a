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

#include "vibronic/linear.hpp"

#include <cmath>

#include "vibronic/errors.hpp"
#include "vibronic/rng.hpp"

namespace vibronic {

namespace {

void check_dimensions(const std::vector<DisplacedSqueezedMode> &modes,
                      const PhotonPattern &pattern) {
    if (modes.size() != pattern.size()) {
        throw ValidationError("pattern length does not match mode count");
    }
    for (int c : pattern.counts) {
        if (c < 0) throw ValidationError("photon counts must be nonnegative");
    }
}

double poisson_pmf(double mean, int k) {
    if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

// Smallest cutoff c with sum_{k<=c} pmf(k) >= 1 - bound, plus the retained
// per-mode probabilities. The pmf is evaluated by the stable upward
// recurrence p_{k+1} = p_k * mean / (k+1).
std::vector<double> truncated_poisson(double mean, double bound) {
    std::vector<double> probs;
    double p = std::exp(-mean);
    double cum = p;
    probs.push_back(p);
    constexpr int kMaxCutoff = 4096;
    while (1.0 - cum >= bound) {
        const int k = static_cast<int>(probs.size());
        if (k > kMaxCutoff) {
            throw NumericalError("Poisson cutoff exceeds 4096; mean too large for "
                                 "deterministic enumeration");
        }
        p *= mean / k;
        cum += p;
        probs.push_back(p);
    }
    return probs;
}

}  // namespace

double linear_fcf(const std::vector<DisplacedSqueezedMode> &modes,
                  const PhotonPattern &pattern) {
    check_dimensions(modes, pattern);
    double prob = 1.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        prob *= poisson_pmf(modes[i].huang_rhys(), pattern[i]);
    }
    return prob;
}

std::vector<std::pair<PhotonPattern, double>> linear_enumerate(
    const std::vector<DisplacedSqueezedMode> &modes, double tail_bound) {
    if (!(tail_bound > 0.0 && tail_bound < 1.0)) {
        throw ValidationError("tail_bound must lie in (0, 1)");
    }
    const double per_mode = tail_bound / std::max<std::size_t>(modes.size(), 1);
    std::vector<std::vector<double>> per_mode_probs;
    per_mode_probs.reserve(modes.size());
    std::size_t total = 1;
    for (const auto &mode : modes) {
        per_mode_probs.push_back(truncated_poisson(mode.huang_rhys(), per_mode));
        total *= per_mode_probs.back().size();
        if (total > 50'000'000) {
            throw NumericalError("enumeration would exceed 5e7 patterns; sample instead");
        }
    }

    std::vector<std::pair<PhotonPattern, double>> entries;
    entries.reserve(total);
    PhotonPattern pattern = PhotonPattern::zeros(modes.size());
    // Odometer walk over the product support, lexicographic order.
    while (true) {
        double prob = 1.0;
        for (std::size_t i = 0; i < modes.size(); ++i) {
            prob *= per_mode_probs[i][static_cast<std::size_t>(pattern[i])];
        }
        entries.emplace_back(pattern, prob);
        std::size_t i = modes.size();
        while (i > 0) {
            --i;
            if (pattern[i] + 1 < static_cast<int>(per_mode_probs[i].size())) {
                ++pattern[i];
                break;
            }
            pattern[i] = 0;
            if (i == 0) return entries;
        }
        if (modes.empty()) return entries;
    }
}

int detail::poisson_draw(double mean, std::mt19937_64 &rng) {
    if (mean == 0.0) return 0;
    const double u = uniform01(rng);
    double p = std::exp(-mean);
    double cum = p;
    int k = 0;
    while (u >= cum && k < 1'000'000) {
        ++k;
        p *= mean / k;
        cum += p;
    }
    return k;
}

SampleSet linear_sample(const std::vector<DisplacedSqueezedMode> &modes,
                        std::uint64_t n_shots, std::uint64_t seed) {
    if (n_shots < 1) throw ValidationError("n_shots must be at least 1");
    SampleSet samples;
    samples.n_shots = n_shots;
    samples.mode_frequencies.resize(static_cast<Eigen::Index>(modes.size()));
    for (std::size_t i = 0; i < modes.size(); ++i) {
        samples.mode_frequencies[static_cast<Eigen::Index>(i)] = modes[i].omega_final_i;
    }

    PhotonPattern pattern = PhotonPattern::zeros(modes.size());
    const std::uint64_t blocks = (n_shots + kShotBlockSize - 1) / kShotBlockSize;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        std::mt19937_64 rng = block_rng(seed, b);
        const std::uint64_t in_block =
            std::min<std::uint64_t>(kShotBlockSize, n_shots - b * kShotBlockSize);
        for (std::uint64_t s = 0; s < in_block; ++s) {
            for (std::size_t i = 0; i < modes.size(); ++i) {
                pattern[i] = detail::poisson_draw(modes[i].huang_rhys(), rng);
            }
            samples.add(pattern);
        }
    }
    return samples;
}

}  // namespace vibronic
