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

#include "vibronic/gbs.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <sstream>

#include "vibronic/errors.hpp"
#include "vibronic/rng.hpp"

namespace vibronic {

namespace {

using complexd = std::complex<double>;

// Symplectic form in xxpp ordering: Omega = [[0, I], [-I, 0]].
Eigen::MatrixXd symplectic_form(Eigen::Index m) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    omega.topRightCorner(m, m) = Eigen::MatrixXd::Identity(m, m);
    omega.bottomLeftCorner(m, m) = -Eigen::MatrixXd::Identity(m, m);
    return omega;
}

void check_pattern(const PhotonPattern &pattern, Eigen::Index modes) {
    if (static_cast<Eigen::Index>(pattern.size()) != modes) {
        throw ValidationError("pattern length does not match mode count");
    }
    for (int c : pattern.counts) {
        if (c < 0) throw ValidationError("photon counts must be nonnegative");
    }
}

}  // namespace

Eigen::VectorXcd GaussianState::displacement() const {
    const Eigen::Index m = mode_count();
    Eigen::VectorXcd alpha(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        alpha[i] = complexd(mean[i] / 2.0, mean[m + i] / 2.0);
    }
    return alpha;
}

void GaussianState::validate() const {
    const Eigen::Index m = mode_count();
    if (mean.size() != 2 * m || cov.rows() != 2 * m || cov.cols() != 2 * m || m < 1) {
        throw ValidationError("gaussian state dimensions inconsistent");
    }
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
        throw ValidationError("covariance matrix is not symmetric");
    }
    const Eigen::MatrixXd omega = symplectic_form(m);
    // Uncertainty relation: cov + i*Omega is positive semidefinite.
    Eigen::MatrixXcd unc = cov.cast<complexd>() + complexd(0.0, 1.0) * omega.cast<complexd>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(unc);
    if (es.eigenvalues().minCoeff() < -1e-9) {
        std::ostringstream oss;
        oss << "state is unphysical: min eigenvalue of cov + i*Omega is "
            << es.eigenvalues().minCoeff();
        throw ValidationError(oss.str());
    }
    // Purity: symplectic eigenvalues (|eigenvalues of i Omega cov|) all 1.
    Eigen::MatrixXcd iwc = complexd(0.0, 1.0) * omega.cast<complexd>() * cov.cast<complexd>();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(iwc, false);
    for (Eigen::Index k = 0; k < ces.eigenvalues().size(); ++k) {
        if (std::abs(std::abs(ces.eigenvalues()[k]) - 1.0) > 1e-8) {
            throw ValidationError("state is not pure (symplectic eigenvalue away from 1)");
        }
    }
}

GaussianState build_gaussian(const DoktorovDecomposition &decomp) {
    const Eigen::Index m = decomp.mode_count();
    if (m < 1 || static_cast<Eigen::Index>(decomp.modes.size()) != m) {
        throw ValidationError("decomposition has inconsistent mode data");
    }

    // Single-mode squeeze symplectic, from a -> a cosh r - a^dag e^{i theta} sinh r:
    //   x' = (cosh r - sinh r cos theta) x - sinh r sin theta p
    //   p' = -sinh r sin theta x + (cosh r + sinh r cos theta) p
    Eigen::MatrixXd squeeze = Eigen::MatrixXd::Identity(2 * m, 2 * m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto &mode = decomp.modes[static_cast<std::size_t>(i)];
        const double ch = std::cosh(mode.r_abs);
        const double sh = std::sinh(mode.r_abs);
        const double c = std::cos(mode.r_phase);
        const double s = std::sin(mode.r_phase);
        squeeze(i, i) = ch - sh * c;
        squeeze(i, m + i) = -sh * s;
        squeeze(m + i, i) = -sh * s;
        squeeze(m + i, m + i) = ch + sh * c;
    }

    // Passive rotation a_i -> sum_j U_ij a_j: O = [[Re U, -Im U], [Im U, Re U]].
    Eigen::MatrixXd rot(2 * m, 2 * m);
    rot.topLeftCorner(m, m) = decomp.u_left.real();
    rot.topRightCorner(m, m) = -decomp.u_left.imag();
    rot.bottomLeftCorner(m, m) = decomp.u_left.imag();
    rot.bottomRightCorner(m, m) = decomp.u_left.real();

    GaussianState state;
    state.cov = rot * squeeze * squeeze.transpose() * rot.transpose();
    state.mean = Eigen::VectorXd::Zero(2 * m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const complexd alpha = decomp.modes[static_cast<std::size_t>(i)].displacement();
        state.mean[i] = 2.0 * alpha.real();
        state.mean[m + i] = 2.0 * alpha.imag();
    }
    state.omega_final = decomp.omega_final;
    state.validate();
    return state;
}

std::complex<double> loop_hafnian(const Eigen::MatrixXcd &mat) {
    const int n = static_cast<int>(mat.rows());
    if (mat.cols() != n) throw ValidationError("loop hafnian needs a square matrix");
    if (n == 0) return complexd(1.0, 0.0);
    if (n > 2 * kMaxPatternTotal) {
        throw NumericalError("loop hafnian dimension above 22 is outside desk scale");
    }
    if ((mat - mat.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + mat.cwiseAbs().maxCoeff())) {
        throw ValidationError("loop hafnian needs a symmetric matrix");
    }

    // f(mask) = lhaf of the submatrix on the vertices in mask. The lowest
    // vertex is either a loop or pairs with another member; memoizing over
    // subsets gives O(n 2^n) instead of the telephone-number blowup.
    const std::uint32_t full = (n >= 32) ? 0xffffffffu : ((1u << n) - 1u);
    std::vector<complexd> memo(static_cast<std::size_t>(full) + 1);
    std::vector<bool> seen(static_cast<std::size_t>(full) + 1, false);
    memo[0] = complexd(1.0, 0.0);
    seen[0] = true;

    struct Rec {
        const Eigen::MatrixXcd &b;
        std::vector<complexd> &memo;
        std::vector<bool> &seen;
        complexd eval(std::uint32_t mask) {
            if (seen[mask]) return memo[mask];
            const int v = std::countr_zero(mask);
            const std::uint32_t rest = mask & (mask - 1);
            complexd res = b(v, v) * eval(rest);
            std::uint32_t others = rest;
            while (others != 0) {
                const int u = std::countr_zero(others);
                others &= others - 1;
                res += b(v, u) * eval(rest & ~(1u << u));
            }
            seen[mask] = true;
            memo[mask] = res;
            return res;
        }
    } rec{mat, memo, seen};
    return rec.eval(full);
}

GbsKernel::GbsKernel(const GaussianState &state) {
    state.validate();
    const Eigen::Index m = state.mode_count();
    modes_ = m;

    // Scale so the vacuum covariance is the identity in any hbar convention.
    const Eigen::MatrixXd cov = state.cov * (2.0 / state.hbar);
    const Eigen::MatrixXd xx = cov.topLeftCorner(m, m);
    const Eigen::MatrixXd xp = cov.topRightCorner(m, m);
    const Eigen::MatrixXd pp = cov.bottomRightCorner(m, m);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(m, m);

    // Fluctuation moments in the mode basis: n_mat = <da^dag da>,
    // m_mat = <da da> (symmetric).
    const complexd iu(0.0, 1.0);
    const Eigen::MatrixXcd n_mat =
        ((xx + pp - 2.0 * eye) / 4.0).cast<complexd>() +
        iu * ((xp - xp.transpose()) / 4.0).cast<complexd>();
    const Eigen::MatrixXcd m_mat = ((xx - pp) / 4.0).cast<complexd>() +
                                   iu * ((xp + xp.transpose()) / 4.0).cast<complexd>();

    // Husimi covariance in the basis zeta = (a, a^dag):
    //   Q = [[N^T + I, M], [M^*, N + I]].
    Eigen::MatrixXcd q(2 * m, 2 * m);
    q.topLeftCorner(m, m) = n_mat.transpose() + eye.cast<complexd>();
    q.topRightCorner(m, m) = m_mat;
    q.bottomLeftCorner(m, m) = m_mat.conjugate();
    q.bottomRightCorner(m, m) = n_mat + eye.cast<complexd>();

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(q);
    const complexd det_q = lu.determinant();
    if (!(det_q.real() > 0.0) || std::abs(det_q.imag()) > 1e-9 * det_q.real()) {
        throw NumericalError("Husimi covariance has non-positive determinant");
    }
    const Eigen::MatrixXcd q_inv = lu.inverse();

    // zeta = (alpha, alpha^*); A = X (I - Q^-1); loops = X Q^-1 zeta.
    const Eigen::VectorXcd alpha = state.displacement();
    Eigen::VectorXcd zeta(2 * m);
    zeta.head(m) = alpha;
    zeta.tail(m) = alpha.conjugate();

    Eigen::MatrixXcd x_swap = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
    x_swap.topRightCorner(m, m) = eye.cast<complexd>();
    x_swap.bottomLeftCorner(m, m) = eye.cast<complexd>();

    adjacency_ = x_swap * (Eigen::MatrixXcd::Identity(2 * m, 2 * m) - q_inv);
    // Symmetrize away the last-ulp asymmetry from the inversion.
    adjacency_ = 0.5 * (adjacency_ + adjacency_.transpose()).eval();
    loops_ = x_swap * (q_inv * zeta);
    const complexd quad = zeta.dot(q_inv * zeta);
    vacuum_prob_ = std::exp(-0.5 * quad.real()) / std::sqrt(det_q.real());
}

double GbsKernel::probability(const PhotonPattern &pattern, int max_total) const {
    check_pattern(pattern, modes_);
    const int total = pattern.total();
    if (total > kMaxPatternTotal || total > max_total) {
        std::ostringstream oss;
        oss << "pattern total " << total << " exceeds the configured photon budget";
        throw NumericalError(oss.str());
    }
    if (total == 0) return vacuum_prob_;

    // Repeat kernel row/column i and M+i once per photon in mode i; the
    // diagonal carries the loop vector.
    std::vector<Eigen::Index> idx;
    idx.reserve(static_cast<std::size_t>(2 * total));
    for (Eigen::Index i = 0; i < modes_; ++i) {
        for (int k = 0; k < pattern[static_cast<std::size_t>(i)]; ++k) idx.push_back(i);
    }
    for (Eigen::Index i = 0; i < modes_; ++i) {
        for (int k = 0; k < pattern[static_cast<std::size_t>(i)]; ++k)
            idx.push_back(modes_ + i);
    }
    const int n = static_cast<int>(idx.size());
    Eigen::MatrixXcd repeated(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            repeated(r, c) = (r == c) ? loops_[idx[static_cast<std::size_t>(r)]]
                                      : adjacency_(idx[static_cast<std::size_t>(r)],
                                                   idx[static_cast<std::size_t>(c)]);
        }
    }

    double log_fact = 0.0;
    for (int c : pattern.counts) log_fact += std::lgamma(c + 1.0);
    const complexd lhaf = loop_hafnian(repeated);
    const double prob = vacuum_prob_ * lhaf.real() * std::exp(-log_fact);
    // The exact value is real; clamp the ulp-level noise.
    return prob > 0.0 ? prob : 0.0;
}

double gbs_fcf(const GaussianState &state, const PhotonPattern &pattern, int max_total) {
    return GbsKernel(state).probability(pattern, max_total);
}

namespace {

void enumerate_rec(Eigen::Index mode, int remaining, PhotonPattern &pattern,
                   const GbsKernel &kernel, GbsEnumeration &out) {
    if (mode == static_cast<Eigen::Index>(pattern.size())) {
        const double p = kernel.probability(pattern);
        out.entries.emplace_back(pattern, p);
        return;
    }
    for (int k = 0; k <= remaining; ++k) {
        pattern[static_cast<std::size_t>(mode)] = k;
        enumerate_rec(mode + 1, remaining - k, pattern, kernel, out);
    }
    pattern[static_cast<std::size_t>(mode)] = 0;
}

}  // namespace

GbsEnumeration gbs_enumerate(const GaussianState &state, int photon_budget) {
    if (photon_budget < 0 || photon_budget > kMaxPatternTotal) {
        throw ValidationError("photon budget must lie in [0, 11]");
    }
    GbsKernel kernel(state);
    GbsEnumeration out;
    PhotonPattern pattern = PhotonPattern::zeros(static_cast<std::size_t>(state.mode_count()));
    enumerate_rec(0, photon_budget, pattern, kernel, out);
    double mass = 0.0;
    double comp = 0.0;
    for (const auto &[pat, p] : out.entries) {
        const double t = mass + p;
        comp += std::abs(mass) >= std::abs(p) ? (mass - t) + p : (p - t) + mass;
        mass = t;
    }
    out.captured_mass = mass + comp;
    return out;
}

SampleSet gbs_sample(const GaussianState &state, std::uint64_t n_shots,
                     std::uint64_t seed, int photon_budget, double mass_floor) {
    if (n_shots < 1) throw ValidationError("n_shots must be at least 1");
    GbsEnumeration enumeration = gbs_enumerate(state, photon_budget);
    if (enumeration.captured_mass < mass_floor) {
        std::ostringstream oss;
        oss << "photon budget " << photon_budget << " captures only "
            << enumeration.captured_mass << " of the distribution (floor " << mass_floor
            << ")";
        throw NumericalError(oss.str());
    }

    std::vector<double> cdf;
    cdf.reserve(enumeration.entries.size());
    double cum = 0.0;
    for (const auto &[pat, p] : enumeration.entries) {
        cum += p / enumeration.captured_mass;
        cdf.push_back(cum);
    }
    cdf.back() = 1.0;

    SampleSet samples;
    samples.n_shots = n_shots;
    samples.mode_frequencies = state.omega_final;
    const std::uint64_t blocks = (n_shots + kShotBlockSize - 1) / kShotBlockSize;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        std::mt19937_64 rng = block_rng(seed, b);
        const std::uint64_t in_block =
            std::min<std::uint64_t>(kShotBlockSize, n_shots - b * kShotBlockSize);
        for (std::uint64_t s = 0; s < in_block; ++s) {
            const double u = uniform01(rng);
            const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
            const std::size_t k = static_cast<std::size_t>(it - cdf.begin());
            samples.add(enumeration.entries[std::min(k, cdf.size() - 1)].first);
        }
    }
    return samples;
}

DoktorovDecomposition no_frequency_change_decompose(const VibronicProblem &problem) {
    if (problem.omega_initial != problem.omega_final) {
        throw ValidationError(
            "no_frequency_change_decompose requires omega_initial == omega_final");
    }
    return decompose(problem);
}

}  // namespace vibronic
