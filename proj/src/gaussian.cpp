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

#include "gbs/gaussian.hpp"

#include <cmath>

#include "gbs/errors.hpp"
#include "gbs/rng.hpp"

namespace gbs {

namespace {

constexpr Complex kI{0.0, 1.0};

void hermitize(Matrix &M) {
    M = ((M + M.adjoint()) / 2.0).eval();
}

// Row/column indices (both halves) for a set of modes in a 2m-dim object.
std::vector<int> doubled_indices(const std::vector<int> &modes, int m) {
    std::vector<int> idx;
    idx.reserve(2 * modes.size());
    for (int mode : modes) {
        idx.push_back(mode);
    }
    for (int mode : modes) {
        idx.push_back(mode + m);
    }
    return idx;
}

Matrix pick_submatrix(const Matrix &M, const std::vector<int> &rows, const std::vector<int> &cols) {
    Matrix out(rows.size(), cols.size());
    for (size_t i = 0; i < rows.size(); i++) {
        for (size_t j = 0; j < cols.size(); j++) {
            out(i, j) = M(rows[i], cols[j]);
        }
    }
    return out;
}

Vector pick_subvector(const Vector &v, const std::vector<int> &rows) {
    Vector out(rows.size());
    for (size_t i = 0; i < rows.size(); i++) {
        out(i) = v(rows[i]);
    }
    return out;
}

}  // namespace

Interferometer::Interferometer(int m_modes, Matrix transfer, int64_t seed_used)
    : m(m_modes), T(std::move(transfer)), seed(seed_used) {
    if (m < 1 || T.rows() != m || T.cols() != m) {
        throw invalid_parameter("interferometer matrix must be m x m with m >= 1");
    }
    Matrix defect = T.adjoint() * T - Matrix::Identity(m, m);
    if (defect.cwiseAbs().maxCoeff() >= 1e-10) {
        throw invalid_parameter("interferometer matrix is not unitary");
    }
}

SqueezingSpec::SqueezingSpec(int squeezed, int modes, double squeezing)
    : K(squeezed), m(modes), r(squeezing) {
    if (K < 1 || K > m || r < 0.0) {
        throw invalid_parameter("squeezing spec requires 1 <= K <= m and r >= 0");
    }
}

XpCovariance::XpCovariance(RealMatrix cov) : V(std::move(cov)) {
    if (V.rows() != V.cols() || V.rows() % 2 != 0) {
        throw invalid_parameter("xp covariance must be 2m x 2m");
    }
    if ((V - V.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
        throw invalid_parameter("xp covariance must be symmetric");
    }
    V = ((V + V.transpose()) / 2.0).eval();
}

GaussianState::GaussianState(Matrix q, Vector displacement)
    : m(static_cast<int>(q.rows()) / 2), Q(std::move(q)), alpha_bar(std::move(displacement)) {
    if (Q.rows() != Q.cols() || Q.rows() % 2 != 0 || alpha_bar.size() != Q.rows()) {
        throw invalid_parameter("Q must be 2m x 2m with matching displacement length");
    }
    hermitize(Q);
    // Enforce the (beta, beta*) structure of the displacement.
    for (int i = 0; i < m; i++) {
        Complex avg = (alpha_bar(i) + std::conj(alpha_bar(i + m))) / 2.0;
        alpha_bar(i) = avg;
        alpha_bar(i + m) = std::conj(avg);
    }
}

GaussianState GaussianState::vacuum(int modes) {
    return GaussianState(Matrix::Identity(2 * modes, 2 * modes), Vector::Zero(2 * modes));
}

double GaussianState::min_q_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(Q, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

XpCovariance build_input_covariance(const SqueezingSpec &spec) {
    RealMatrix V = RealMatrix::Identity(2 * spec.m, 2 * spec.m);
    for (int i = 0; i < spec.K; i++) {
        V(i, i) = std::exp(2.0 * spec.r);
        V(i + spec.m, i + spec.m) = std::exp(-2.0 * spec.r);
    }
    return XpCovariance(V);
}

GaussianState xp_to_q(const XpCovariance &cov) {
    int m = cov.modes();
    Matrix W(2 * m, 2 * m);
    W.setZero();
    W.topLeftCorner(m, m) = Matrix::Identity(m, m);
    W.topRightCorner(m, m) = kI * Matrix::Identity(m, m);
    W.bottomLeftCorner(m, m) = Matrix::Identity(m, m);
    W.bottomRightCorner(m, m) = -kI * Matrix::Identity(m, m);

    Matrix Q = 0.25 * W * cov.V.cast<Complex>() * W.adjoint() +
               0.5 * Matrix::Identity(2 * m, 2 * m);
    return GaussianState(std::move(Q), Vector::Zero(2 * m));
}

GaussianState apply_interferometer(const GaussianState &state, const Interferometer &itf) {
    if (state.m != itf.m) {
        throw invalid_parameter("state and interferometer mode counts differ");
    }
    int m = state.m;
    Matrix blk(2 * m, 2 * m);
    blk.setZero();
    blk.topLeftCorner(m, m) = itf.T;
    blk.bottomRightCorner(m, m) = itf.T.conjugate();

    Matrix Q = blk * state.Q * blk.adjoint();
    Vector disp = blk * state.alpha_bar;
    return GaussianState(std::move(Q), std::move(disp));
}

KernelMatrix kernel_matrix(const GaussianState &state, double purity_tol) {
    int m = state.m;
    Eigen::FullPivLU<Matrix> lu(state.Q);
    if (!lu.isInvertible()) {
        throw numerical_degeneracy("Q matrix is singular");
    }
    Matrix Qinv = lu.inverse();

    Matrix X(2 * m, 2 * m);
    X.setZero();
    X.topRightCorner(m, m) = Matrix::Identity(m, m);
    X.bottomLeftCorner(m, m) = Matrix::Identity(m, m);

    Matrix A = X * (Matrix::Identity(2 * m, 2 * m) - Qinv);
    A = ((A + A.transpose()) / 2.0).eval();

    KernelMatrix result{std::move(A), std::nullopt};
    double off_norm = std::max(result.A.topRightCorner(m, m).cwiseAbs().maxCoeff(),
                               result.A.bottomLeftCorner(m, m).cwiseAbs().maxCoeff());
    if (off_norm < purity_tol) {
        result.pure_block = result.A.topLeftCorner(m, m);
    }
    return result;
}

XpCovariance lossy_covariance(const XpCovariance &ideal, double eta_t) {
    if (eta_t < 0.0 || eta_t > 1.0) {
        throw invalid_parameter("transmission must lie in [0, 1]");
    }
    RealMatrix V = eta_t * ideal.V +
                   (1.0 - eta_t) * RealMatrix::Identity(ideal.V.rows(), ideal.V.cols());
    return XpCovariance(std::move(V));
}

std::pair<XpCovariance, std::vector<XpCovariance>> distinguishable_covariances(
    const SqueezingSpec &spec,
    double eta_ind) {
    if (eta_ind < 0.0 || eta_ind > 1.0) {
        throw invalid_parameter("indistinguishability must lie in [0, 1]");
    }
    XpCovariance ideal = build_input_covariance(spec);
    RealMatrix actual = eta_ind * ideal.V +
                        (1.0 - eta_ind) * RealMatrix::Identity(2 * spec.m, 2 * spec.m);

    std::vector<XpCovariance> virtuals;
    virtuals.reserve(spec.K);
    for (int i = 0; i < spec.K; i++) {
        RealMatrix V = RealMatrix::Identity(2 * spec.m, 2 * spec.m);
        V(i, i) = (1.0 - eta_ind) * (std::exp(2.0 * spec.r) - 1.0) + 1.0;
        V(i + spec.m, i + spec.m) = (1.0 - eta_ind) * (std::exp(-2.0 * spec.r) - 1.0) + 1.0;
        virtuals.emplace_back(std::move(V));
    }
    return {XpCovariance(std::move(actual)), std::move(virtuals)};
}

Interferometer haar_unitary(int m, uint64_t seed) {
    if (m < 1) {
        throw invalid_parameter("mode count must be >= 1");
    }
    RngStream rng(seed, 0);
    Matrix G(m, m);
    for (int i = 0; i < m; i++) {
        for (int j = 0; j < m; j++) {
            G(i, j) = Complex(rng.normal(), rng.normal());
        }
    }
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ() * Matrix::Identity(m, m);
    Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity of QR so the draw is Haar distributed.
    for (int j = 0; j < m; j++) {
        Complex d = R(j, j);
        Complex phase = (std::abs(d) > 0.0) ? d / std::abs(d) : Complex(1.0, 0.0);
        Q.col(j) *= phase;
    }
    return Interferometer(m, std::move(Q), static_cast<int64_t>(seed));
}

GaussianState condition_on_heterodyne(
    const GaussianState &state,
    const std::vector<int> &kept_modes,
    const std::vector<int> &discarded_modes,
    const Vector &outcomes) {
    if (kept_modes.size() + discarded_modes.size() != static_cast<size_t>(state.m)) {
        throw invalid_parameter("kept and discarded modes must partition the mode set");
    }
    if (outcomes.size() != static_cast<Eigen::Index>(discarded_modes.size())) {
        throw invalid_parameter("one heterodyne outcome required per discarded mode");
    }
    if (discarded_modes.empty()) {
        return state;
    }

    std::vector<int> a = doubled_indices(kept_modes, state.m);
    std::vector<int> b = doubled_indices(discarded_modes, state.m);

    Matrix Qaa = pick_submatrix(state.Q, a, a);
    Matrix Qab = pick_submatrix(state.Q, a, b);
    Matrix Qba = pick_submatrix(state.Q, b, a);
    Matrix Qbb = pick_submatrix(state.Q, b, b);

    Eigen::FullPivLU<Matrix> lu(Qbb);
    if (!lu.isInvertible()) {
        throw numerical_degeneracy("conditioning block Q_BB is singular");
    }

    size_t nb = discarded_modes.size();
    Vector outcome_bar(2 * nb);
    for (size_t i = 0; i < nb; i++) {
        outcome_bar(i) = outcomes(i);
        outcome_bar(i + nb) = std::conj(outcomes(i));
    }

    Vector alpha_a = pick_subvector(state.alpha_bar, a);
    Vector alpha_b = pick_subvector(state.alpha_bar, b);

    Matrix gain = Qab * lu.inverse();
    Matrix Qcond = Qaa - gain * Qba;
    Vector disp = alpha_a + gain * (outcome_bar - alpha_b);
    return GaussianState(std::move(Qcond), std::move(disp));
}

GaussianState reduce_state(const GaussianState &state, const std::vector<int> &kept_modes) {
    std::vector<int> idx = doubled_indices(kept_modes, state.m);
    return GaussianState(pick_submatrix(state.Q, idx, idx), pick_subvector(state.alpha_bar, idx));
}

}  // namespace gbs
