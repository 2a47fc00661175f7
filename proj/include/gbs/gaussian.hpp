// Copyright 2026 The gbsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GBSIM_GAUSSIAN_HPP
#define GBSIM_GAUSSIAN_HPP

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

namespace gbs {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

/// Photon-count pattern over m modes, each entry capped by the cutoff.
using Pattern = std::vector<int>;

/// m-mode passive linear interferometer. Unitarity is checked at construction.
struct Interferometer {
    int m;
    Matrix T;
    int64_t seed = 0;  // provenance when generated; untouched otherwise

    Interferometer(int m_modes, Matrix transfer, int64_t seed_used = 0);
};

/// K squeezed input modes out of m total, constant squeezing parameter r.
struct SqueezingSpec {
    int K;
    int m;
    double r;

    SqueezingSpec(int squeezed, int modes, double squeezing);
};

/// Real symmetric covariance in (x, p) ordering; vacuum is the identity
/// under the hbar = 2 convention used throughout.
struct XpCovariance {
    RealMatrix V;  // 2m x 2m

    explicit XpCovariance(RealMatrix cov);
    int modes() const { return static_cast<int>(V.rows()) / 2; }
};

/// Gaussian state as the covariance of its Q-function, (x+ip, x-ip) ordering,
/// plus the displacement vector alpha_bar = (beta, beta*).
struct GaussianState {
    int m;
    Matrix Q;          // 2m x 2m, Hermitian, eigenvalues >= 1/2
    Vector alpha_bar;  // length 2m, second half conjugate of first

    GaussianState(Matrix q, Vector displacement);
    static GaussianState vacuum(int modes);

    /// Smallest eigenvalue of Q; physical states satisfy >= 1/2.
    double min_q_eigenvalue() const;
    bool is_physical(double tol = 1e-8) const { return min_q_eigenvalue() >= 0.5 - tol; }
};

/// Kernel matrix A = X (I - Q^{-1}), with the pure-state half block B when
/// A splits as B + B* on the diagonal blocks.
struct KernelMatrix {
    Matrix A;  // 2m x 2m symmetric
    std::optional<Matrix> pure_block;
};

XpCovariance build_input_covariance(const SqueezingSpec &spec);

GaussianState xp_to_q(const XpCovariance &cov);

GaussianState apply_interferometer(const GaussianState &state, const Interferometer &itf);

KernelMatrix kernel_matrix(const GaussianState &state, double purity_tol = 1e-10);

XpCovariance lossy_covariance(const XpCovariance &ideal, double eta_t);

/// Actual-part covariance (first) plus K virtual single-mode-squeezed
/// covariances for the partial-distinguishability model.
std::pair<XpCovariance, std::vector<XpCovariance>> distinguishable_covariances(
    const SqueezingSpec &spec,
    double eta_ind);

Interferometer haar_unitary(int m, uint64_t seed);

/// Conditions on heterodyne outcomes for the discarded modes; `outcomes`
/// holds one complex value per entry of `discarded_modes` (0-based).
GaussianState condition_on_heterodyne(
    const GaussianState &state,
    const std::vector<int> &kept_modes,
    const std::vector<int> &discarded_modes,
    const Vector &outcomes);

/// Marginal state on a subset of modes (partial trace of the rest).
GaussianState reduce_state(const GaussianState &state, const std::vector<int> &kept_modes);

}  // namespace gbs

#endif
