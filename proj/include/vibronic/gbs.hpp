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

#ifndef VIBRONIC_GBS_HPP
#define VIBRONIC_GBS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "vibronic/model.hpp"
#include "vibronic/pattern.hpp"
#include "vibronic/spectrum.hpp"

namespace vibronic {

/// Quadrature bookkeeping for GaussianState. Only one convention is
/// implemented; it is carried as data so serialized states are unambiguous.
enum class QuadratureOrder { Xxpp };

/// Gaussian state of M modes in quadrature form: mean vector of length 2M
/// and 2M x 2M covariance, ordered (x_1..x_M, p_1..p_M) with hbar = 2, so
/// the vacuum covariance is the identity. Every convention-dependent
/// constant in the photon-statistics kernel lives in GbsKernel, keyed on
/// these metadata fields.
struct GaussianState {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    QuadratureOrder order = QuadratureOrder::Xxpp;
    double hbar = 2.0;
    Eigen::VectorXd omega_final;  ///< cm^-1, for spectrum reconstruction

    Eigen::Index mode_count() const { return mean.size() / 2; }

    /// Complex displacement amplitudes alpha_i = (x_i + i p_i) / 2.
    Eigen::VectorXcd displacement() const;

    /// Checks symmetry, the uncertainty relation cov + i Omega >= 0 (to 1e-9
    /// on eigenvalues) and purity (symplectic eigenvalues 1 within 1e-8).
    void validate() const;
};

/// Prepares D(beta) R(u_left) S(sigma) |0>: per-mode squeezing, then the
/// passive rotation, then displacement. u_right is never consulted (the
/// initial state is vacuum).
GaussianState build_gaussian(const DoktorovDecomposition &decomp);

/// Largest supported pattern total: the repeated kernel matrix has dimension
/// 2 * sum(m), and the exact evaluator is exponential in it.
inline constexpr int kDefaultPhotonBudget = 10;
inline constexpr int kMaxPatternTotal = 11;

/// Loop hafnian of a complex symmetric matrix: sum over all perfect
/// matchings of the complete graph on the indices, where matched pairs
/// contribute the off-diagonal entry and unmatched vertices contribute their
/// diagonal (loop) entry. Exact subset-memoized evaluation, dimension <= 24.
std::complex<double> loop_hafnian(const Eigen::MatrixXcd &mat);

/// Photon-statistics kernel of a Gaussian state: the Husimi covariance in
/// the (a, a^dagger) basis, its derived adjacency matrix and loop vector,
/// and the vacuum overlap. Probabilities follow by repeating kernel rows and
/// columns per pattern and evaluating a loop hafnian.
class GbsKernel {
  public:
    explicit GbsKernel(const GaussianState &state);

    /// |<m| state >|^2. Throws when sum(m) exceeds max_total.
    double probability(const PhotonPattern &pattern,
                       int max_total = kMaxPatternTotal) const;

    double vacuum_probability() const { return vacuum_prob_; }
    const Eigen::MatrixXcd &adjacency() const { return adjacency_; }
    const Eigen::VectorXcd &loops() const { return loops_; }

  private:
    Eigen::Index modes_;
    Eigen::MatrixXcd adjacency_;  // X (I - Q^-1), complex symmetric
    Eigen::VectorXcd loops_;      // X Q^-1 zeta, diagonal entries
    double vacuum_prob_ = 0.0;    // exp(-zeta^dag Q^-1 zeta / 2) / sqrt(det Q)
};

/// Transition probability of the full Duschinsky pipeline via the
/// loop-hafnian kernel of `state`.
double gbs_fcf(const GaussianState &state, const PhotonPattern &pattern,
               int max_total = kMaxPatternTotal);

/// All patterns with sum(m) <= photon_budget and their probabilities, in
/// lexicographic order, plus the probability mass they capture.
struct GbsEnumeration {
    std::vector<std::pair<PhotonPattern, double>> entries;
    double captured_mass = 0.0;
};
GbsEnumeration gbs_enumerate(const GaussianState &state, int photon_budget);

/// Exhaustive-enumeration sampler: enumerates the budgeted pattern space,
/// renormalizes the captured mass and draws categorically. Throws
/// NumericalError when the captured mass is below mass_floor.
SampleSet gbs_sample(const GaussianState &state, std::uint64_t n_shots,
                     std::uint64_t seed, int photon_budget = kDefaultPhotonBudget,
                     double mass_floor = 0.99);

/// decompose() restricted to frequency-preserving problems (omega == omega'
/// elementwise). Mode mixing alone still produces nonzero squeezing, but the
/// squeezing parameters always sum to zero (det J = det U = +-1).
DoktorovDecomposition no_frequency_change_decompose(const VibronicProblem &problem);

/// Independent brute-force check: builds the final state in a truncated Fock
/// space by exponentiating truncated mode operators (squeeze and displace as
/// dense per-mode matrix exponentials, the rotation generator applied by a
/// scaled Taylor expansion), in the same S -> R -> D order. Amplitudes are
/// computed at an internally enlarged dimension and projected back to
/// `cutoff`; the projection's norm deficit is the reported truncation error.
class FockOracle {
  public:
    /// Requires 1 <= modes <= 3 and cutoff >= 2; throws NumericalError if the
    /// norm deficit exceeds 1e-8 (cutoff too small for the state).
    FockOracle(const DoktorovDecomposition &decomp, int cutoff);

    /// |<m| state >|^2; every m_i must be below the cutoff.
    double fcf(const PhotonPattern &pattern) const;

    double norm_deficit() const { return norm_deficit_; }

  private:
    Eigen::Index modes_;
    int cutoff_;
    int work_dim_;
    Eigen::VectorXcd state_;  // projected onto counts < cutoff
    double norm_deficit_ = 0.0;
};

/// One-shot convenience wrapper around FockOracle.
double fock_oracle_fcf(const DoktorovDecomposition &decomp, const PhotonPattern &pattern,
                       int cutoff);

}  // namespace vibronic

#endif
