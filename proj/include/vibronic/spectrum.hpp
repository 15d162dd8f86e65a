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

#ifndef VIBRONIC_SPECTRUM_HPP
#define VIBRONIC_SPECTRUM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "vibronic/constants.hpp"
#include "vibronic/model.hpp"
#include "vibronic/pattern.hpp"

namespace vibronic {

/// N_S detector shots aggregated as pattern -> occurrence counts, together
/// with the final-state frequencies needed to map patterns to energies.
struct SampleSet {
    std::uint64_t n_shots = 0;
    std::map<PhotonPattern, std::uint64_t> counts;
    Eigen::VectorXd mode_frequencies;  ///< omega', cm^-1

    void add(const PhotonPattern &pattern, std::uint64_t n = 1);
    /// Throws ValidationError unless counts sum to n_shots and every stored
    /// count is >= 1.
    void validate() const;
};

/// One stick of a Franck-Condon profile. std_error is a Poissonian
/// sqrt(N)/N_S annotation, populated only for spectra assembled from samples.
struct SpectrumBin {
    double energy = 0.0;       ///< transition frequency omega'', cm^-1
    double probability = 0.0;  ///< > 0
    double std_error = 0.0;
};

/// A binned Franck-Condon profile: sorted sticks whose energies differ by
/// more than bin_tolerance, plus mass bookkeeping.
struct Spectrum {
    std::vector<SpectrumBin> bins;
    double bin_tolerance = kDefaultBinTolerance;  ///< cm^-1
    double total_mass = 0.0;
    double dropped_mass = 0.0;  ///< pruned away by convolve()
    bool has_std_error = false;

    void validate() const;
};

/// Per-mode optical loss, L_i in [0, 1).
struct LossModel {
    std::vector<double> loss;

    void validate() const;
};

/// Bins an exact distribution into a profile: each pattern contributes its
/// probability at omega'' = sum_i m_i * omega'_i, and energies closer than
/// bin_tolerance collapse into one stick (lowest energy wins the label).
Spectrum assemble(const std::vector<std::pair<PhotonPattern, double>> &distribution,
                  const Eigen::VectorXd &omega_final,
                  double bin_tolerance = kDefaultBinTolerance);

/// Same for an empirical sample set, with probabilities N(m)/N_S and
/// Poissonian per-bin standard errors.
Spectrum assemble(const SampleSet &samples,
                  double bin_tolerance = kDefaultBinTolerance);

/// Recombines independently measured runs: sums energies and multiplies
/// probabilities over all stick pairs, re-bins, and drops result bins with
/// probability < prune (the dropped mass is recorded on the result).
Spectrum convolve(const Spectrum &a, const Spectrum &b, double prune = 0.0);

/// Bhattacharyya-style similarity F = sum_k sqrt(p_k q_k) over the union
/// energy grid; bins of the two spectra are matched within the (shared)
/// tolerance and unmatched bins contribute zero. Symmetric, in [0, 1] for
/// normalized spectra.
double similarity(const Spectrum &p, const Spectrum &q);

/// Loss pre-compensation for the coherent path: beta_i' = beta_i/sqrt(1-L_i),
/// so that per-photon loss L_i on the output reproduces the target Poisson
/// statistics. Requires every r_i = 0; squeezed statistics do not survive
/// loss.
std::vector<DisplacedSqueezedMode> compensate_loss(
    const std::vector<DisplacedSqueezedMode> &modes, const LossModel &loss);

/// Binomial thinning of recorded shots: each photon in mode i survives with
/// probability 1 - L_i. Deterministic for a given seed.
SampleSet apply_loss_to_samples(const SampleSet &samples, const LossModel &loss,
                                std::uint64_t seed);

}  // namespace vibronic

#endif
