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

#include "vibronic/parallel.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "vibronic/errors.hpp"
#include "vibronic/rng.hpp"

namespace vibronic {

namespace {

using complexd = std::complex<double>;

// Below this squeeze magnitude the closed form is evaluated in its exact
// r -> 0 limit (a Poisson distribution); continuity across the switch is
// covered by tests.
constexpr double kPoissonBranch = 1e-12;

double poisson_pmf(double mean, int m) {
    if (mean == 0.0) return m == 0 ? 1.0 : 0.0;
    return std::exp(m * std::log(mean) - mean - std::lgamma(m + 1.0));
}

// State of the scaled Hermite recurrence. Define
//   h_m = c^m H_m(z),  c = sqrt(tanh|r| / 2),  z = gamma / sqrt(e^{i theta} sinh 2|r|),
// so that (1/2 tanh|r|)^m |H_m(z)|^2 = |h_m|^2. The recurrence
//   h_{m+1} = a h_m - b m h_{m-1},  a = 2 c z,  b = tanh|r|,
// has bounded coefficients (|a| <= 2 |beta|, b < 1), which removes the
// huge-argument/tiny-prefactor cancellation of the raw formula. A log-domain
// rescale keeps |h| representable for any m.
struct HermiteRecurrence {
    complexd a;
    double b;
    complexd h_prev{1.0, 0.0};  // h_0
    complexd h_curr;            // h_1
    double log_scale = 0.0;
    int order = 1;

    HermiteRecurrence(complexd a_in, double b_in) : a(a_in), b(b_in), h_curr(a_in) {}

    void advance() {
        const complexd h_next = a * h_curr - b * static_cast<double>(order) * h_prev;
        h_prev = h_curr;
        h_curr = h_next;
        ++order;
        const double mag = std::max(std::abs(h_prev), std::abs(h_curr));
        if (mag > 1e100) {
            h_prev /= mag;
            h_curr /= mag;
            log_scale += std::log(mag);
        }
    }

    // log |h_m|^2, or -inf at an exact parity zero.
    double log_sq(int m) const {
        const complexd &h = (m == order) ? h_curr : h_prev;
        const double mag = std::abs(h);
        if (mag == 0.0) return -std::numeric_limits<double>::infinity();
        return 2.0 * (std::log(mag) + log_scale);
    }
};

struct ModeFactors {
    complexd a;
    double b;
    double log_cosh_r;
    double exponent;  // -|beta|^2 - Re(conj(beta)^2 e^{i theta}) tanh|r|
};

ModeFactors mode_factors(const DisplacedSqueezedMode &mode) {
    const double r = mode.r_abs;
    const complexd beta = mode.displacement();
    const complexd phase = std::polar(1.0, mode.r_phase);
    const complexd gamma =
        beta * std::cosh(r) + std::conj(beta) * phase * std::sinh(r);
    const double tanh_r = std::tanh(r);
    // a = 2 gamma sqrt(tanh|r| / (2 e^{i theta} sinh 2|r|)); the ratio under
    // the root tends to 1/4 as r -> 0, so nothing blows up near the branch.
    const complexd a =
        2.0 * gamma * std::sqrt(tanh_r / (2.0 * phase * std::sinh(2.0 * r)));
    const double exponent = -std::norm(beta) -
                            (std::conj(beta) * std::conj(beta) * phase).real() * tanh_r;
    // log cosh without overflow for large r
    const double log_cosh_r =
        r > 20.0 ? r - std::log(2.0) + std::log1p(std::exp(-2.0 * r))
                 : std::log(std::cosh(r));
    return {a, tanh_r, log_cosh_r, exponent};
}

double prob_from_recurrence(const ModeFactors &f, const HermiteRecurrence &rec, int m) {
    const double log_h_sq = rec.log_sq(m);
    if (log_h_sq == -std::numeric_limits<double>::infinity()) return 0.0;
    const double log_p = log_h_sq + f.exponent - std::lgamma(m + 1.0) - f.log_cosh_r;
    return std::exp(log_p);
}

}  // namespace

double dsq_mode_prob(const DisplacedSqueezedMode &mode, int m) {
    if (m < 0) throw ValidationError("photon count must be nonnegative");
    if (mode.r_abs < kPoissonBranch) return poisson_pmf(mode.huang_rhys(), m);
    const ModeFactors f = mode_factors(mode);
    HermiteRecurrence rec(f.a, f.b);
    while (rec.order < m) rec.advance();
    return prob_from_recurrence(f, rec, m);
}

std::vector<double> detail::dsq_mode_distribution(const DisplacedSqueezedMode &mode,
                                                  int max_m) {
    std::vector<double> probs(static_cast<std::size_t>(max_m) + 1);
    if (mode.r_abs < kPoissonBranch) {
        for (int m = 0; m <= max_m; ++m) probs[static_cast<std::size_t>(m)] =
            poisson_pmf(mode.huang_rhys(), m);
        return probs;
    }
    const ModeFactors f = mode_factors(mode);
    HermiteRecurrence rec(f.a, f.b);
    probs[0] = prob_from_recurrence(f, rec, 0);
    for (int m = 1; m <= max_m; ++m) {
        while (rec.order < m) rec.advance();
        probs[static_cast<std::size_t>(m)] = prob_from_recurrence(f, rec, m);
    }
    return probs;
}

double parallel_fcf(const std::vector<DisplacedSqueezedMode> &modes,
                    const PhotonPattern &pattern) {
    if (modes.size() != pattern.size()) {
        throw ValidationError("pattern length does not match mode count");
    }
    double prob = 1.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        prob *= dsq_mode_prob(modes[i], pattern[i]);
    }
    return prob;
}

namespace {

// Truncate one mode at the smallest cutoff whose retained mass reaches
// 1 - bound. The distribution is a pmf, so the cumulative sum approaches 1;
// the cap only guards against absurd parameters.
std::vector<double> truncated_dsq(const DisplacedSqueezedMode &mode, double bound) {
    constexpr int kMaxCutoff = 512;
    const std::vector<double> all = detail::dsq_mode_distribution(mode, kMaxCutoff);
    double cum = 0.0;
    for (std::size_t m = 0; m < all.size(); ++m) {
        cum += all[m];
        if (1.0 - cum < bound) {
            return std::vector<double>(all.begin(), all.begin() + static_cast<long>(m) + 1);
        }
    }
    throw NumericalError("displaced squeezed distribution does not reach the requested "
                         "mass within 512 photons");
}

}  // namespace

std::vector<std::pair<PhotonPattern, double>> parallel_enumerate(
    const std::vector<DisplacedSqueezedMode> &modes, double tail_bound) {
    if (!(tail_bound > 0.0 && tail_bound < 1.0)) {
        throw ValidationError("tail_bound must lie in (0, 1)");
    }
    const double per_mode = tail_bound / std::max<std::size_t>(modes.size(), 1);
    std::vector<std::vector<double>> per_mode_probs;
    per_mode_probs.reserve(modes.size());
    std::size_t total = 1;
    for (const auto &mode : modes) {
        per_mode_probs.push_back(truncated_dsq(mode, per_mode));
        total *= per_mode_probs.back().size();
        if (total > 50'000'000) {
            throw NumericalError("enumeration would exceed 5e7 patterns; sample instead");
        }
    }

    std::vector<std::pair<PhotonPattern, double>> entries;
    entries.reserve(total);
    PhotonPattern pattern = PhotonPattern::zeros(modes.size());
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

SampleSet parallel_sample(const std::vector<DisplacedSqueezedMode> &modes,
                          std::uint64_t n_shots, std::uint64_t seed, double tail_bound) {
    if (n_shots < 1) throw ValidationError("n_shots must be at least 1");
    if (!(tail_bound > 0.0 && tail_bound < 1.0)) {
        throw ValidationError("tail_bound must lie in (0, 1)");
    }

    // Per-mode inverse-CDF tables; the residual tail lands on the cutoff.
    const double per_mode = tail_bound / std::max<std::size_t>(modes.size(), 1);
    std::vector<std::vector<double>> cdfs;
    cdfs.reserve(modes.size());
    for (const auto &mode : modes) {
        std::vector<double> cdf = truncated_dsq(mode, per_mode);
        double cum = 0.0;
        for (double &p : cdf) {
            cum += p;
            p = cum;
        }
        cdf.back() = 1.0;
        cdfs.push_back(std::move(cdf));
    }

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
                const double u = uniform01(rng);
                const auto &cdf = cdfs[i];
                int m = 0;
                while (u >= cdf[static_cast<std::size_t>(m)] &&
                       m + 1 < static_cast<int>(cdf.size())) {
                    ++m;
                }
                pattern[i] = m;
            }
            samples.add(pattern);
        }
    }
    return samples;
}

}  // namespace vibronic
