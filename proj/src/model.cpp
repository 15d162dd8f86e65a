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

#include "vibronic/model.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vibronic/constants.hpp"
#include "vibronic/errors.hpp"

namespace vibronic {

namespace {

double wrap_phase(double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(phi, two_pi);
    if (w < 0.0) w += two_pi;
    // fmod can land exactly on 2*pi after the correction
    if (w >= two_pi) w = 0.0;
    return w;
}

void require(bool ok, const std::string &msg) {
    if (!ok) throw ValidationError(msg);
}

}  // namespace

double displacement_amplitude(double omega_final_cm, double delta_q_au) {
    return std::sqrt(wavenumber_to_au(omega_final_cm) / 2.0) * delta_q_au;
}

double origin_shift_from_amplitude(double omega_final_cm, double beta) {
    return beta / std::sqrt(wavenumber_to_au(omega_final_cm) / 2.0);
}

void VibronicProblem::validate() const {
    const Eigen::Index m = omega_initial.size();
    require(m > 0, "problem '" + name + "' has no modes");
    require(omega_final.size() == m, "omega_final dimension mismatch");
    require(duschinsky.rows() == m && duschinsky.cols() == m,
            "duschinsky matrix dimension mismatch");
    require(delta_q.has_value() != beta.has_value(),
            "exactly one of delta_q and beta must be provided");
    if (delta_q) require(delta_q->size() == m, "delta_q dimension mismatch");
    if (beta) require(beta->size() == m, "beta dimension mismatch");

    for (Eigen::Index i = 0; i < m; ++i) {
        require(std::isfinite(omega_initial[i]) && omega_initial[i] > 0.0,
                "omega_initial must be strictly positive and finite");
        require(std::isfinite(omega_final[i]) && omega_final[i] > 0.0,
                "omega_final must be strictly positive and finite");
    }
    require(duschinsky.allFinite(), "duschinsky matrix contains non-finite entries");
    if (delta_q) require(delta_q->allFinite(), "delta_q contains non-finite entries");
    if (beta) require(beta->allFinite(), "beta contains non-finite entries");

    const double orth_err =
        (duschinsky.transpose() * duschinsky - Eigen::MatrixXd::Identity(m, m))
            .cwiseAbs()
            .maxCoeff();
    if (orth_err >= 1e-8) {
        std::ostringstream oss;
        oss << "duschinsky matrix is not orthogonal (|U^T U - I|_inf = " << orth_err
            << ")";
        throw ValidationError(oss.str());
    }
}

std::complex<double> DisplacedSqueezedMode::displacement() const {
    return std::polar(beta_abs, beta_phase);
}

std::complex<double> DisplacedSqueezedMode::squeeze_parameter() const {
    return std::polar(r_abs, r_phase);
}

std::complex<double> DisplacedSqueezedMode::gamma() const {
    const std::complex<double> b = displacement();
    const std::complex<double> phase = std::polar(1.0, r_phase);
    return b * std::cosh(r_abs) + std::conj(b) * phase * std::sinh(r_abs);
}

DisplacedSqueezedMode DisplacedSqueezedMode::from_complex(std::complex<double> beta,
                                                          std::complex<double> squeeze,
                                                          double omega_final_i) {
    DisplacedSqueezedMode mode;
    mode.beta_abs = std::abs(beta);
    mode.beta_phase = mode.beta_abs > 0.0 ? wrap_phase(std::arg(beta)) : 0.0;
    mode.r_abs = std::abs(squeeze);
    mode.r_phase = mode.r_abs > 0.0 ? wrap_phase(std::arg(squeeze)) : 0.0;
    mode.omega_final_i = omega_final_i;
    return mode;
}

Eigen::MatrixXcd DoktorovDecomposition::reconstruct() const {
    return u_left * sigma.asDiagonal() * u_right;
}

double DoktorovDecomposition::off_diagonal_norm() const {
    Eigen::MatrixXcd off = u_left;
    off.diagonal().setZero();
    return off.norm();
}

std::string to_string(Tier tier) {
    switch (tier) {
        case Tier::Linear: return "linear";
        case Tier::Parallel: return "parallel";
        case Tier::Full: return "full";
    }
    return "unknown";
}

Tier tier_from_string(const std::string &name) {
    if (name == "linear") return Tier::Linear;
    if (name == "parallel") return Tier::Parallel;
    if (name == "full") return Tier::Full;
    throw ValidationError("unknown tier '" + name + "'");
}

namespace {

// Reorder the sorted SVD triplets back to natural mode order: repeatedly
// assign the singular vector whose largest remaining |u_left| entry sits in
// an unassigned mode row. Exact for (near-)diagonal u_left; deterministic
// everywhere, and photon statistics do not depend on the choice.
std::vector<Eigen::Index> natural_order_permutation(const Eigen::MatrixXd &u_left) {
    const Eigen::Index m = u_left.rows();
    std::vector<Eigen::Index> col_for_row(m, -1);
    std::vector<bool> row_used(m, false), col_used(m, false);
    for (Eigen::Index step = 0; step < m; ++step) {
        Eigen::Index best_row = -1, best_col = -1;
        double best = -1.0;
        for (Eigen::Index r = 0; r < m; ++r) {
            if (row_used[r]) continue;
            for (Eigen::Index c = 0; c < m; ++c) {
                if (col_used[c]) continue;
                const double v = std::abs(u_left(r, c));
                if (v > best) {
                    best = v;
                    best_row = r;
                    best_col = c;
                }
            }
        }
        row_used[best_row] = true;
        col_used[best_col] = true;
        col_for_row[best_row] = best_col;
    }
    return col_for_row;
}

}  // namespace

DoktorovDecomposition decompose(const VibronicProblem &problem) {
    problem.validate();
    const Eigen::Index m = problem.mode_count();

    const Eigen::VectorXd sqrt_wi = problem.omega_initial.cwiseSqrt();
    const Eigen::VectorXd sqrt_wf = problem.omega_final.cwiseSqrt();
    const Eigen::MatrixXd j_matrix =
        sqrt_wf.asDiagonal() * problem.duschinsky * sqrt_wi.cwiseInverse().asDiagonal();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(j_matrix,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXd u_l = svd.matrixU();
    Eigen::MatrixXd u_r = svd.matrixV().transpose();
    Eigen::VectorXd sigma = svd.singularValues();
    if (!sigma.allFinite() || sigma.minCoeff() <= 0.0) {
        throw NumericalError("singular value decomposition of J failed (degenerate or "
                             "ill-conditioned input)");
    }

    // Natural mode order instead of Eigen's descending singular values.
    const std::vector<Eigen::Index> perm = natural_order_permutation(u_l);
    Eigen::MatrixXd u_l_ordered(m, m);
    Eigen::MatrixXd u_r_ordered(m, m);
    Eigen::VectorXd sigma_ordered(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        u_l_ordered.col(i) = u_l.col(perm[i]);
        u_r_ordered.row(i) = u_r.row(perm[i]);
        sigma_ordered[i] = sigma[perm[i]];
    }

    // Sign convention: nonnegative u_left diagonal where possible.
    for (Eigen::Index i = 0; i < m; ++i) {
        if (u_l_ordered(i, i) < 0.0) {
            u_l_ordered.col(i) *= -1.0;
            u_r_ordered.row(i) *= -1.0;
        }
    }

    DoktorovDecomposition decomp;
    decomp.u_left = u_l_ordered.cast<std::complex<double>>();
    decomp.u_right = u_r_ordered.cast<std::complex<double>>();
    decomp.sigma = sigma_ordered;
    decomp.omega_final = problem.omega_final;
    decomp.modes.reserve(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        std::complex<double> beta_i;
        if (problem.delta_q) {
            beta_i = displacement_amplitude(problem.omega_final[i], (*problem.delta_q)[i]);
        } else {
            beta_i = (*problem.beta)[i];
        }
        const double r_i = std::log(sigma_ordered[i]);
        decomp.modes.push_back(DisplacedSqueezedMode::from_complex(
            beta_i, std::complex<double>(r_i, 0.0), problem.omega_final[i]));
    }

    const double recon_err =
        (decomp.reconstruct() - j_matrix.cast<std::complex<double>>()).cwiseAbs().maxCoeff();
    if (recon_err >= 1e-10) {
        std::ostringstream oss;
        oss << "SVD reconstruction residual " << recon_err << " exceeds 1e-10";
        throw NumericalError(oss.str());
    }
    return decomp;
}

Tier recommend_tier(const DoktorovDecomposition &decomp, double eps_r, double eps_u) {
    require(eps_r > 0.0 && eps_u > 0.0, "tier thresholds must be positive");
    double max_r = 0.0;
    for (const auto &mode : decomp.modes) max_r = std::max(max_r, mode.r_abs);
    const bool mixing_negligible = decomp.off_diagonal_norm() < eps_u;
    if (mixing_negligible && max_r < eps_r) return Tier::Linear;
    if (mixing_negligible) return Tier::Parallel;
    return Tier::Full;
}

DoktorovDecomposition filter_modes(const DoktorovDecomposition &decomp, double min_s,
                                   double diag_tol) {
    require(min_s >= 0.0, "min_s must be nonnegative");
    if (decomp.off_diagonal_norm() >= diag_tol) {
        throw ValidationError(
            "filter_modes requires independent modes (u_left is not diagonal)");
    }
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < decomp.mode_count(); ++i) {
        if (decomp.modes[static_cast<std::size_t>(i)].huang_rhys() > min_s)
            keep.push_back(i);
    }
    const Eigen::Index k = static_cast<Eigen::Index>(keep.size());
    DoktorovDecomposition out;
    out.u_left.resize(k, k);
    out.u_right.resize(k, k);
    out.sigma.resize(k);
    out.omega_final.resize(k);
    out.modes.reserve(keep.size());
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) {
            out.u_left(a, b) = decomp.u_left(keep[a], keep[b]);
            out.u_right(a, b) = decomp.u_right(keep[a], keep[b]);
        }
        out.sigma[a] = decomp.sigma[keep[a]];
        out.omega_final[a] = decomp.omega_final[keep[a]];
        out.modes.push_back(decomp.modes[static_cast<std::size_t>(keep[a])]);
    }
    return out;
}

}  // namespace vibronic
