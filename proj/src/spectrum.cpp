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

#include "vibronic/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vibronic/errors.hpp"
#include "vibronic/rng.hpp"

namespace vibronic {

namespace {

// Neumaier-compensated accumulator; keeps mass sums exact to one ulp even
// over millions of terms, which the <= 1 + 1e-12 invariant relies on.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

struct RawStick {
    double energy;
    double probability;
    double variance;  // squared count error, 0 for exact sources
};

// Shared binning core: stable-sort by energy, then greedily merge sticks
// whose energy is within tolerance of the current bin label (the lowest
// energy in the cluster). Counting errors add in quadrature.
Spectrum bin_sticks(std::vector<RawStick> sticks, double bin_tolerance,
                    bool with_errors) {
    if (bin_tolerance < 0.0) throw ValidationError("bin_tolerance must be >= 0");
    std::stable_sort(sticks.begin(), sticks.end(),
                     [](const RawStick &a, const RawStick &b) { return a.energy < b.energy; });

    Spectrum spectrum;
    spectrum.bin_tolerance = bin_tolerance;
    spectrum.has_std_error = with_errors;

    KahanSum mass;
    std::size_t i = 0;
    while (i < sticks.size()) {
        const double label = sticks[i].energy;
        KahanSum prob;
        KahanSum var;
        while (i < sticks.size() && sticks[i].energy - label <= bin_tolerance) {
            prob.add(sticks[i].probability);
            var.add(sticks[i].variance);
            ++i;
        }
        const double p = prob.value();
        if (p > 0.0) {
            spectrum.bins.push_back({label, p, with_errors ? std::sqrt(var.value()) : 0.0});
            mass.add(p);
        }
    }
    spectrum.total_mass = mass.value();
    spectrum.validate();
    return spectrum;
}

double pattern_energy(const PhotonPattern &pattern, const Eigen::VectorXd &omega_final) {
    if (static_cast<Eigen::Index>(pattern.size()) != omega_final.size()) {
        throw ValidationError("pattern length does not match frequency vector");
    }
    double e = 0.0;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        e += pattern[i] * omega_final[static_cast<Eigen::Index>(i)];
    }
    return e;
}

}  // namespace

void SampleSet::add(const PhotonPattern &pattern, std::uint64_t n) {
    counts[pattern] += n;
}

void SampleSet::validate() const {
    std::uint64_t total = 0;
    for (const auto &[pattern, n] : counts) {
        if (n < 1) throw ValidationError("sample set stores a zero count");
        if (static_cast<Eigen::Index>(pattern.size()) != mode_frequencies.size()) {
            throw ValidationError("sample pattern length does not match frequencies");
        }
        total += n;
    }
    if (total != n_shots) {
        throw ValidationError("sample counts do not sum to n_shots");
    }
}

void Spectrum::validate() const {
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto &bin : bins) {
        if (!(bin.probability > 0.0)) {
            throw ValidationError("spectrum bin with nonpositive probability");
        }
        if (!(bin.energy - prev > bin_tolerance)) {
            throw ValidationError("spectrum bin energies not separated by tolerance");
        }
        prev = bin.energy;
    }
    if (total_mass > 1.0 + 1e-12) {
        std::ostringstream oss;
        oss << "spectrum mass " << total_mass << " exceeds 1";
        throw ValidationError(oss.str());
    }
}

void LossModel::validate() const {
    for (double l : loss) {
        if (!(l >= 0.0 && l < 1.0)) {
            throw ValidationError("loss values must lie in [0, 1)");
        }
    }
}

Spectrum assemble(const std::vector<std::pair<PhotonPattern, double>> &distribution,
                  const Eigen::VectorXd &omega_final, double bin_tolerance) {
    if (omega_final.size() > 0 && omega_final.minCoeff() <= 0.0) {
        throw ValidationError("mode frequencies must be positive");
    }
    std::vector<RawStick> sticks;
    sticks.reserve(distribution.size());
    for (const auto &[pattern, prob] : distribution) {
        if (prob < 0.0) throw ValidationError("negative probability in distribution");
        sticks.push_back({pattern_energy(pattern, omega_final), prob, 0.0});
    }
    return bin_sticks(std::move(sticks), bin_tolerance, false);
}

Spectrum assemble(const SampleSet &samples, double bin_tolerance) {
    samples.validate();
    if (samples.mode_frequencies.size() > 0 && samples.mode_frequencies.minCoeff() <= 0.0) {
        throw ValidationError("mode frequencies must be positive");
    }
    const double n = static_cast<double>(samples.n_shots);
    std::vector<RawStick> sticks;
    sticks.reserve(samples.counts.size());
    for (const auto &[pattern, count] : samples.counts) {
        const double c = static_cast<double>(count);
        sticks.push_back({pattern_energy(pattern, samples.mode_frequencies), c / n,
                          c / (n * n)});
    }
    return bin_sticks(std::move(sticks), bin_tolerance, true);
}

Spectrum convolve(const Spectrum &a, const Spectrum &b, double prune) {
    if (a.bin_tolerance != b.bin_tolerance) {
        throw ValidationError("convolve requires matching bin tolerances");
    }
    if (prune < 0.0) throw ValidationError("prune threshold must be >= 0");
    std::vector<RawStick> sticks;
    sticks.reserve(a.bins.size() * b.bins.size());
    for (const auto &ba : a.bins) {
        for (const auto &bb : b.bins) {
            sticks.push_back({ba.energy + bb.energy, ba.probability * bb.probability, 0.0});
        }
    }
    Spectrum out = bin_sticks(std::move(sticks), a.bin_tolerance, false);
    if (prune > 0.0) {
        KahanSum dropped;
        std::vector<SpectrumBin> kept;
        kept.reserve(out.bins.size());
        for (const auto &bin : out.bins) {
            if (bin.probability < prune) {
                dropped.add(bin.probability);
            } else {
                kept.push_back(bin);
            }
        }
        out.bins = std::move(kept);
        out.dropped_mass = dropped.value();
        out.total_mass -= out.dropped_mass;
    }
    return out;
}

double similarity(const Spectrum &p, const Spectrum &q) {
    if (p.bin_tolerance != q.bin_tolerance) {
        throw ValidationError("similarity requires matching bin tolerances");
    }
    const double tol = p.bin_tolerance;
    KahanSum f;
    std::size_t i = 0, j = 0;
    // Both bin lists are sorted with gaps > tol, so a single merge pass
    // aligns the union grid; ties break toward the lower energy.
    while (i < p.bins.size() && j < q.bins.size()) {
        const double de = p.bins[i].energy - q.bins[j].energy;
        if (std::abs(de) <= tol) {
            f.add(std::sqrt(p.bins[i].probability * q.bins[j].probability));
            ++i;
            ++j;
        } else if (de < 0.0) {
            ++i;
        } else {
            ++j;
        }
    }
    return f.value();
}

std::vector<DisplacedSqueezedMode> compensate_loss(
    const std::vector<DisplacedSqueezedMode> &modes, const LossModel &loss) {
    loss.validate();
    if (loss.loss.size() != modes.size()) {
        throw ValidationError("loss vector length does not match mode count");
    }
    std::vector<DisplacedSqueezedMode> out = modes;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i].r_abs != 0.0) {
            throw ValidationError(
                "loss compensation is only valid for the coherent path (all r_i = 0); "
                "squeezed photon statistics change under loss");
        }
        out[i].beta_abs = modes[i].beta_abs / std::sqrt(1.0 - loss.loss[i]);
    }
    return out;
}

SampleSet apply_loss_to_samples(const SampleSet &samples, const LossModel &loss,
                                std::uint64_t seed) {
    samples.validate();
    loss.validate();
    if (static_cast<Eigen::Index>(loss.loss.size()) != samples.mode_frequencies.size()) {
        throw ValidationError("loss vector length does not match mode count");
    }
    SampleSet out;
    out.n_shots = samples.n_shots;
    out.mode_frequencies = samples.mode_frequencies;

    // One deterministic block per stored pattern keeps the result
    // independent of how shots were ordered into the input set.
    std::uint64_t block = 0;
    PhotonPattern thinned;
    for (const auto &[pattern, count] : samples.counts) {
        std::mt19937_64 rng = block_rng(seed, block++);
        thinned = pattern;
        for (std::uint64_t shot = 0; shot < count; ++shot) {
            for (std::size_t i = 0; i < pattern.size(); ++i) {
                int kept = 0;
                for (int ph = 0; ph < pattern[i]; ++ph) {
                    if (uniform01(rng) >= loss.loss[i]) ++kept;
                }
                thinned[i] = kept;
            }
            out.add(thinned);
        }
    }
    return out;
}

}  // namespace vibronic
