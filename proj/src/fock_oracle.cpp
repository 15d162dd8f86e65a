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

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "vibronic/errors.hpp"
#include "vibronic/gbs.hpp"

namespace vibronic {

namespace {

using complexd = std::complex<double>;

// Extra per-mode levels above the requested cutoff. Operators act at the
// enlarged dimension so that truncation artifacts stay in the guard band;
// the mass found there after projection is the reported deficit.
constexpr int kGuardLevels = 8;

// Truncated annihilation operator, a(n-1, n) = sqrt(n).
Eigen::MatrixXcd lowering(int dim) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

// Applies a dim x dim single-mode operator along one tensor axis.
void apply_single_mode(Eigen::VectorXcd &state, const Eigen::MatrixXcd &op, int dim,
                       Eigen::Index stride) {
    const Eigen::Index total = state.size();
    Eigen::VectorXcd slice(dim);
    for (Eigen::Index base = 0; base < total; base += static_cast<Eigen::Index>(dim) * stride) {
        for (Eigen::Index inner = 0; inner < stride; ++inner) {
            for (int n = 0; n < dim; ++n) slice[n] = state[base + inner + n * stride];
            slice = (op * slice).eval();
            for (int n = 0; n < dim; ++n) state[base + inner + n * stride] = slice[n];
        }
    }
}

// Principal logarithm of a unitary matrix via its Schur form. For a unitary
// input the triangular factor is diagonal up to roundoff, which also covers
// degenerate eigenvalues.
Eigen::MatrixXcd unitary_log(const Eigen::MatrixXcd &u) {
    const Eigen::Index m = u.rows();
    const double unitarity =
        (u.adjoint() * u - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff();
    if (unitarity > 1e-8) {
        throw ValidationError("rotation matrix is not unitary");
    }
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(u);
    const Eigen::MatrixXcd &t = schur.matrixT();
    Eigen::MatrixXcd off = t;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > 1e-8) {
        throw NumericalError("Schur form of the rotation is not diagonal");
    }
    Eigen::VectorXcd log_diag(m);
    for (Eigen::Index k = 0; k < m; ++k) log_diag[k] = std::log(t(k, k));
    return schur.matrixU() * log_diag.asDiagonal() * schur.matrixU().adjoint();
}

// w = (sum_ij H_ij a^dag_i a_j) v on the truncated product space. Targets
// outside the truncation are dropped, which is exactly the compression
// P K P and keeps the generator anti-Hermitian.
void apply_number_generator(const Eigen::MatrixXcd &h, const Eigen::VectorXcd &v,
                            Eigen::VectorXcd &w, int dim,
                            const std::vector<Eigen::Index> &strides) {
    const Eigen::Index m = static_cast<Eigen::Index>(strides.size());
    const Eigen::Index total = v.size();
    w.setZero();
    std::vector<int> digits(static_cast<std::size_t>(m));
    for (Eigen::Index idx = 0; idx < total; ++idx) {
        const complexd amp = v[idx];
        if (amp == complexd(0.0, 0.0)) continue;
        for (Eigen::Index k = 0; k < m; ++k) {
            digits[static_cast<std::size_t>(k)] =
                static_cast<int>((idx / strides[static_cast<std::size_t>(k)]) % dim);
        }
        for (Eigen::Index j = 0; j < m; ++j) {
            const int nj = digits[static_cast<std::size_t>(j)];
            if (nj == 0) continue;
            for (Eigen::Index i = 0; i < m; ++i) {
                if (h(i, j) == complexd(0.0, 0.0)) continue;
                if (i == j) {
                    w[idx] += h(i, j) * static_cast<double>(nj) * amp;
                    continue;
                }
                const int ni = digits[static_cast<std::size_t>(i)];
                if (ni + 1 >= dim) continue;
                const Eigen::Index target = idx - strides[static_cast<std::size_t>(j)] +
                                            strides[static_cast<std::size_t>(i)];
                w[target] += h(i, j) * std::sqrt(static_cast<double>(nj) *
                                                 static_cast<double>(ni + 1)) *
                             amp;
            }
        }
    }
}

// state <- exp(K) state by scaling and a Taylor series per scaled step. K is
// anti-Hermitian, so each step is norm-preserving and errors cannot pile up.
void apply_rotation(const Eigen::MatrixXcd &h, Eigen::VectorXcd &state, int dim,
                    const std::vector<Eigen::Index> &strides) {
    const double bound = h.cwiseAbs().sum() * static_cast<double>(dim);
    int scale_pow = 0;
    while ((bound / std::pow(2.0, scale_pow)) > 0.5 && scale_pow < 40) ++scale_pow;
    const double scale = std::pow(2.0, scale_pow);
    const Eigen::MatrixXcd h_scaled = h / scale;

    const double norm_in = state.norm();
    Eigen::VectorXcd term(state.size());
    Eigen::VectorXcd next(state.size());
    for (long step = 0; step < (1L << scale_pow); ++step) {
        term = state;
        for (int k = 1; k <= 64; ++k) {
            apply_number_generator(h_scaled, term, next, dim, strides);
            term = next / static_cast<double>(k);
            state += term;
            if (term.norm() < 1e-18 * state.norm()) break;
        }
    }
    if (std::abs(state.norm() - norm_in) > 1e-10 * norm_in) {
        throw NumericalError("rotation application lost unitarity");
    }
}

}  // namespace

FockOracle::FockOracle(const DoktorovDecomposition &decomp, int cutoff) {
    modes_ = decomp.mode_count();
    if (modes_ < 1 || modes_ > 3) {
        throw ValidationError("Fock oracle supports 1 to 3 modes (memory grows as "
                              "cutoff^M)");
    }
    if (static_cast<Eigen::Index>(decomp.modes.size()) != modes_) {
        throw ValidationError("decomposition has inconsistent mode data");
    }
    if (cutoff < 2) throw ValidationError("cutoff must be at least 2");
    cutoff_ = cutoff;
    work_dim_ = cutoff + kGuardLevels;

    double total_d = std::pow(static_cast<double>(work_dim_), static_cast<double>(modes_));
    if (total_d > 2e6) {
        throw NumericalError("truncated space exceeds 2e6 amplitudes");
    }
    const Eigen::Index total = static_cast<Eigen::Index>(total_d + 0.5);

    std::vector<Eigen::Index> strides(static_cast<std::size_t>(modes_));
    Eigen::Index s = 1;
    for (Eigen::Index k = modes_ - 1; k >= 0; --k) {
        strides[static_cast<std::size_t>(k)] = s;
        s *= work_dim_;
    }

    state_ = Eigen::VectorXcd::Zero(total);
    state_[0] = complexd(1.0, 0.0);

    const Eigen::MatrixXcd a = lowering(work_dim_);
    const Eigen::MatrixXcd a_dag = a.adjoint();

    // S(xi_i) = exp((conj(xi) a^2 - xi a^dag^2) / 2) per mode.
    for (Eigen::Index i = 0; i < modes_; ++i) {
        const complexd xi = decomp.modes[static_cast<std::size_t>(i)].squeeze_parameter();
        if (xi == complexd(0.0, 0.0)) continue;
        const Eigen::MatrixXcd gen =
            0.5 * (std::conj(xi) * a * a - xi * a_dag * a_dag);
        apply_single_mode(state_, gen.exp(), work_dim_, strides[static_cast<std::size_t>(i)]);
    }

    // R(u_left) = exp(sum_ij log(u_left)_ij a^dag_i a_j).
    if ((decomp.u_left - Eigen::MatrixXcd::Identity(modes_, modes_)).cwiseAbs().maxCoeff() >
        0.0) {
        const Eigen::MatrixXcd h = unitary_log(decomp.u_left);
        apply_rotation(h, state_, work_dim_, strides);
    }

    // D(beta_i) = exp(beta a^dag - conj(beta) a) per mode, after the rotation.
    for (Eigen::Index i = 0; i < modes_; ++i) {
        const complexd beta = decomp.modes[static_cast<std::size_t>(i)].displacement();
        if (beta == complexd(0.0, 0.0)) continue;
        const Eigen::MatrixXcd gen = beta * a_dag - std::conj(beta) * a;
        apply_single_mode(state_, gen.exp(), work_dim_, strides[static_cast<std::size_t>(i)]);
    }

    // Project onto counts below the requested cutoff; what remains in the
    // guard band is the truncation deficit.
    double kept = 0.0;
    for (Eigen::Index idx = 0; idx < total; ++idx) {
        bool inside = true;
        for (Eigen::Index k = 0; k < modes_; ++k) {
            if (static_cast<int>((idx / strides[static_cast<std::size_t>(k)]) % work_dim_) >=
                cutoff_) {
                inside = false;
                break;
            }
        }
        if (inside) {
            kept += std::norm(state_[idx]);
        } else {
            state_[idx] = complexd(0.0, 0.0);
        }
    }
    norm_deficit_ = 1.0 - kept;
    if (norm_deficit_ > 1e-8) {
        std::ostringstream oss;
        oss << "Fock truncation deficit " << norm_deficit_ << " exceeds 1e-8; raise the "
            << "cutoff";
        throw NumericalError(oss.str());
    }
}

double FockOracle::fcf(const PhotonPattern &pattern) const {
    if (static_cast<Eigen::Index>(pattern.size()) != modes_) {
        throw ValidationError("pattern length does not match mode count");
    }
    Eigen::Index idx = 0;
    for (std::size_t k = 0; k < pattern.size(); ++k) {
        if (pattern[k] < 0 || pattern[k] >= cutoff_) {
            throw ValidationError("pattern count outside the oracle cutoff");
        }
        idx = idx * work_dim_ + pattern[k];
    }
    return std::norm(state_[idx]);
}

double fock_oracle_fcf(const DoktorovDecomposition &decomp, const PhotonPattern &pattern,
                       int cutoff) {
    return FockOracle(decomp, cutoff).fcf(pattern);
}

}  // namespace vibronic
