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

#ifndef VIBRONIC_MODEL_HPP
#define VIBRONIC_MODEL_HPP

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace vibronic {

/// Raw molecular input for a vibronic transition: vibrational frequencies of
/// the initial and final electronic states, the rotation mixing their normal
/// coordinates, and the origin shift between them.
///
/// All vectors and the matrix share one dimension M (the mode count). The
/// origin shift is given either as mass-weighted coordinates delta_q (atomic
/// units) or directly as dimensionless displacement amplitudes beta; exactly
/// one of the two must be present.
struct VibronicProblem {
    std::string name;
    Eigen::VectorXd omega_initial;           ///< cm^-1, all > 0
    Eigen::VectorXd omega_final;             ///< cm^-1, all > 0
    Eigen::MatrixXd duschinsky;              ///< orthogonal M x M mode-mixing matrix
    std::optional<Eigen::VectorXd> delta_q;  ///< mass-weighted a.u.
    std::optional<Eigen::VectorXcd> beta;    ///< dimensionless amplitudes

    Eigen::Index mode_count() const { return omega_initial.size(); }

    /// Throws ValidationError unless all type invariants hold
    /// (dimensions consistent, frequencies positive, duschinsky orthogonal
    /// to 1e-8, exactly one displacement convention).
    void validate() const;
};

/// One independent mode of the decomposed transition: a displaced squeezed
/// state with amplitude/phase split for both parameters, plus the final-state
/// frequency used for energy reconstruction.
///
/// Derived quantities: the complex displacement is beta_abs*e^{i beta_phase},
/// the complex squeeze parameter r_abs*e^{i r_phase}, the Huang-Rhys factor
/// is |beta|^2 and the mode reorganization energy |beta|^2 * omega_final_i.
struct DisplacedSqueezedMode {
    double beta_abs = 0.0;       ///< displacement magnitude, >= 0
    double beta_phase = 0.0;     ///< radians in [0, 2*pi)
    double r_abs = 0.0;          ///< squeeze magnitude, >= 0
    double r_phase = 0.0;        ///< radians in [0, 2*pi)
    double omega_final_i = 0.0;  ///< cm^-1

    std::complex<double> displacement() const;
    std::complex<double> squeeze_parameter() const;
    double huang_rhys() const { return beta_abs * beta_abs; }
    double reorganization_energy() const { return huang_rhys() * omega_final_i; }

    /// gamma = beta*cosh|r| + conj(beta)*e^{i theta}*sinh|r|, the effective
    /// displacement entering the closed-form photon distribution.
    std::complex<double> gamma() const;

    static DisplacedSqueezedMode from_complex(std::complex<double> beta,
                                              std::complex<double> squeeze,
                                              double omega_final_i);
};

/// Photonic parameters of the transition: J = Omega' U Omega^-1 factored as
/// u_left * diag(sigma) * u_right, with per-mode squeezing r_i = ln(sigma_i)
/// and displacements carried by `modes`. Singular values are index-aligned
/// with modes (natural mode order, no sorting).
struct DoktorovDecomposition {
    Eigen::MatrixXcd u_left;
    Eigen::MatrixXcd u_right;
    Eigen::VectorXd sigma;
    std::vector<DisplacedSqueezedMode> modes;
    Eigen::VectorXd omega_final;  ///< cm^-1, copy for energy reconstruction

    Eigen::Index mode_count() const { return sigma.size(); }

    /// u_left * diag(sigma) * u_right; equals Omega' U Omega^-1 to 1e-10
    /// elementwise for decompositions produced by decompose().
    Eigen::MatrixXcd reconstruct() const;

    /// Frobenius norm of u_left with its diagonal removed; zero when the
    /// modes are independent.
    double off_diagonal_norm() const;
};

/// Tiers of the approximation hierarchy, ordered by the photonic resources
/// they need: coherent states only, displaced squeezed states, or the full
/// squeezing + interferometer + displacement pipeline.
enum class Tier { Linear, Parallel, Full };

std::string to_string(Tier tier);
Tier tier_from_string(const std::string &name);

/// Builds Omega = diag(sqrt(omega)), Omega' = diag(sqrt(omega')), factors
/// J = Omega' U Omega^-1 by SVD and converts the origin shift to
/// dimensionless displacements. Deterministic: singular values keep natural
/// mode order (greedy row alignment of u_left) and signs are chosen so the
/// diagonal of u_left is nonnegative where possible; photon statistics are
/// invariant to both choices.
DoktorovDecomposition decompose(const VibronicProblem &problem);

/// Conservative classifier: Linear when max |r_i| < eps_r and the
/// off-diagonal norm of u_left < eps_u, Parallel when only the u_left
/// condition holds, Full otherwise. Note this cannot see that mixing only
/// matters on modes whose squeezing is non-negligible, so it may demand a
/// higher tier than the spectrum actually requires; thresholds are
/// configuration, not physics.
Tier recommend_tier(const DoktorovDecomposition &decomp, double eps_r = 0.01,
                    double eps_u = 0.01);

/// Restricts the decomposition to modes with |beta_i|^2 > min_s (strict).
/// Only valid when the modes are independent (u_left diagonal to diag_tol);
/// throws ValidationError on a Full-tier decomposition.
DoktorovDecomposition filter_modes(const DoktorovDecomposition &decomp,
                                   double min_s = 1e-4, double diag_tol = 1e-8);

}  // namespace vibronic

#endif
