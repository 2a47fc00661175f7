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

#include "gbs/matchpoly.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>

#include "gbs/errors.hpp"

namespace gbs {

namespace {

Complex hafnian_recursive(const Matrix &M, std::vector<int> &active) {
    if (active.empty()) {
        return Complex(1.0, 0.0);
    }
    int first = active.front();
    Complex total(0.0, 0.0);
    std::vector<int> rest(active.begin() + 1, active.end());
    for (size_t j = 0; j < rest.size(); j++) {
        Complex weight = M(first, rest[j]);
        if (weight == Complex(0.0, 0.0)) {
            continue;
        }
        std::vector<int> remaining;
        remaining.reserve(rest.size() - 1);
        for (size_t k = 0; k < rest.size(); k++) {
            if (k != j) {
                remaining.push_back(rest[k]);
            }
        }
        total += weight * hafnian_recursive(M, remaining);
    }
    return total;
}

Complex loop_hafnian_recursive(const Matrix &M, std::vector<int> &active) {
    if (active.empty()) {
        return Complex(1.0, 0.0);
    }
    int first = active.front();
    std::vector<int> rest(active.begin() + 1, active.end());
    // Self-loop on the first unmatched vertex.
    Complex total = M(first, first) * loop_hafnian_recursive(M, rest);
    for (size_t j = 0; j < rest.size(); j++) {
        Complex weight = M(first, rest[j]);
        if (weight == Complex(0.0, 0.0)) {
            continue;
        }
        std::vector<int> remaining;
        remaining.reserve(rest.size() - 1);
        for (size_t k = 0; k < rest.size(); k++) {
            if (k != j) {
                remaining.push_back(rest[k]);
            }
        }
        total += weight * loop_hafnian_recursive(M, remaining);
    }
    return total;
}

// Repeats index i of M counts[i] times and fills the diagonal from mu.
Matrix build_repeated_filldiag(const Matrix &M, const std::vector<int> &counts, const Vector &mu) {
    std::vector<int> sources;
    for (size_t i = 0; i < counts.size(); i++) {
        for (int c = 0; c < counts[i]; c++) {
            sources.push_back(static_cast<int>(i));
        }
    }
    int n = static_cast<int>(sources.size());
    Matrix out(n, n);
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < n; j++) {
            out(i, j) = (i == j) ? mu(sources[i]) : M(sources[i], sources[j]);
        }
    }
    return out;
}

double binomial_coeff(int n, int k) {
    double value = 1.0;
    for (int i = 0; i < k; i++) {
        value *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    }
    return value;
}

// Truncated product of two polynomials, both indexed by degree.
std::vector<Complex> poly_mul(const std::vector<Complex> &a,
                              const std::vector<Complex> &b,
                              int max_degree) {
    std::vector<Complex> out(max_degree + 1, Complex(0.0, 0.0));
    for (int i = 0; i <= max_degree && i < static_cast<int>(a.size()); i++) {
        if (a[i] == Complex(0.0, 0.0)) {
            continue;
        }
        int jmax = std::min<int>(max_degree - i, static_cast<int>(b.size()) - 1);
        for (int j = 0; j <= jmax; j++) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

}  // namespace

SymmetricComplexMatrix::SymmetricComplexMatrix(Matrix raw) : entries(std::move(raw)) {
    if (entries.rows() != entries.cols()) {
        throw invalid_parameter("symmetric matrix must be square");
    }
    entries = ((entries + entries.transpose()) / 2.0).eval();
}

Complex hafnian_reference(const SymmetricComplexMatrix &M) {
    if (M.dim() % 2 != 0) {
        return Complex(0.0, 0.0);
    }
    std::vector<int> active(M.dim());
    std::iota(active.begin(), active.end(), 0);
    return hafnian_recursive(M.entries, active);
}

Complex loop_hafnian_reference(const SymmetricComplexMatrix &M) {
    std::vector<int> active(M.dim());
    std::iota(active.begin(), active.end(), 0);
    return loop_hafnian_recursive(M.entries, active);
}

Complex permanent(const Matrix &M) {
    int n = static_cast<int>(M.rows());
    if (M.cols() != n) {
        throw invalid_parameter("permanent requires a square matrix");
    }
    if (n == 0) {
        return Complex(1.0, 0.0);
    }
    // Glynn's formula with Gray-code sign flips over delta in {-1,1}^n, delta_0 fixed.
    Vector column_sums = M.colwise().sum();
    double sign = 1.0;
    Complex total(0.0, 0.0);
    uint64_t terms = 1ull << (n - 1);
    std::vector<double> delta(n, 1.0);
    for (uint64_t g = 0;; g++) {
        Complex prod(1.0, 0.0);
        for (int j = 0; j < n; j++) {
            prod *= column_sums(j);
        }
        total += sign * prod;
        if (g + 1 >= terms) {
            break;
        }
        // Lowest set bit of g+1 selects the row to flip (rows 1..n-1).
        int bit = static_cast<int>(__builtin_ctzll(g + 1)) + 1;
        delta[bit] = -delta[bit];
        column_sums += Complex(2.0 * delta[bit], 0.0) * M.row(bit).transpose();
        sign = -sign;
    }
    return total / static_cast<double>(terms);
}

PairSpec greedy_pairing(const std::vector<int> &counts, const Matrix &B, const Vector &beta) {
    int d = static_cast<int>(counts.size());
    if (B.rows() != d || B.cols() != d || beta.size() != d) {
        throw invalid_parameter("matrix and displacement must match the counts length");
    }
    PairSpec spec;
    std::vector<int> leftovers;
    for (int i = 0; i < d; i++) {
        if (counts[i] < 0) {
            throw invalid_parameter("photon counts must be nonnegative");
        }
        if (counts[i] / 2 > 0) {
            spec.pairs.emplace_back(i, i);
            spec.multiplicity.push_back(counts[i] / 2);
        }
        if (counts[i] % 2 == 1) {
            leftovers.push_back(i);
        }
    }
    for (size_t k = 0; k + 1 < leftovers.size(); k += 2) {
        spec.pairs.emplace_back(leftovers[k], leftovers[k + 1]);
        spec.multiplicity.push_back(1);
    }
    bool uses_virtual = leftovers.size() % 2 == 1;
    if (uses_virtual) {
        // lhaf(G) == lhaf(G + [1]) lets a lone photon pair with a virtual
        // mode whose only nonzero weight is the unit self-loop.
        spec.pairs.emplace_back(leftovers.back(), d);
        spec.multiplicity.push_back(1);
    }

    auto entry = [&](int row, int col) -> Complex {
        if (row == d || col == d) {
            return Complex(0.0, 0.0);
        }
        return B(row, col);
    };
    auto loop_weight = [&](int idx) -> Complex {
        return idx == d ? Complex(1.0, 0.0) : beta(idx);
    };

    int P = static_cast<int>(spec.pairs.size());
    spec.C = Matrix(2 * P, 2 * P);
    spec.mu_bar = Vector(2 * P);
    for (int k = 0; k < P; k++) {
        spec.mu_bar(k) = loop_weight(spec.pairs[k].first);
        spec.mu_bar(k + P) = loop_weight(spec.pairs[k].second);
        for (int l = 0; l < P; l++) {
            spec.C(k, l) = entry(spec.pairs[k].first, spec.pairs[l].first);
            spec.C(k, l + P) = entry(spec.pairs[k].first, spec.pairs[l].second);
            spec.C(k + P, l) = entry(spec.pairs[k].second, spec.pairs[l].first);
            spec.C(k + P, l + P) = entry(spec.pairs[k].second, spec.pairs[l].second);
        }
    }
    return spec;
}

Matrix build_Xz(const std::vector<int> &multiplicity, const std::vector<int> &z) {
    if (z.size() != multiplicity.size()) {
        throw invalid_parameter("z must have one entry per pair");
    }
    int half = 0;
    for (int n : multiplicity) {
        half += n;
    }
    std::vector<double> lambda;
    lambda.reserve(half);
    for (size_t i = 0; i < multiplicity.size(); i++) {
        int n = multiplicity[i];
        if (z[i] < -n || z[i] > n || (n - z[i]) % 2 != 0) {
            throw invalid_parameter("z entries must match the parity and range of n");
        }
        for (int k = 0; k < (n + z[i]) / 2; k++) {
            lambda.push_back(1.0);
        }
        for (int k = 0; k < (n - z[i]) / 2; k++) {
            lambda.push_back(-1.0);
        }
    }
    Matrix X = Matrix::Zero(2 * half, 2 * half);
    for (int i = 0; i < half; i++) {
        X(i, i + half) = lambda[i];
        X(i + half, i) = lambda[i];
    }
    return X;
}

std::vector<Complex> power_traces(const Matrix &M, int max_power) {
    if (max_power < 1) {
        throw invalid_parameter("max power must be >= 1");
    }
    Eigen::ComplexSchur<Matrix> schur(M, /*computeU=*/false);
    Vector eig = schur.matrixT().diagonal();
    std::vector<Complex> traces(max_power);
    Vector powers = Vector::Ones(eig.size());
    for (int k = 0; k < max_power; k++) {
        powers = powers.cwiseProduct(eig).eval();
        traces[k] = powers.sum();
    }
    return traces;
}

Complex lhafmix(const PairSpec &spec) {
    int P = static_cast<int>(spec.pairs.size());
    if (P == 0) {
        return Complex(1.0, 0.0);
    }
    int N = spec.total_photons();
    int half = N / 2;

    // C_n / mu_n: rows k and k+P of C repeated multiplicity[k] times.
    std::vector<int> sources;
    for (int k = 0; k < P; k++) {
        for (int c = 0; c < spec.multiplicity[k]; c++) {
            sources.push_back(k);
        }
    }
    Matrix Cn(N, N);
    Vector mun(N);
    for (int i = 0; i < half; i++) {
        mun(i) = spec.mu_bar(sources[i]);
        mun(i + half) = spec.mu_bar(sources[i] + P);
        for (int j = 0; j < half; j++) {
            Cn(i, j) = spec.C(sources[i], sources[j]);
            Cn(i, j + half) = spec.C(sources[i], sources[j] + P);
            Cn(i + half, j) = spec.C(sources[i] + P, sources[j]);
            Cn(i + half, j + half) = spec.C(sources[i] + P, sources[j] + P);
        }
    }
    bool displaced = mun.cwiseAbs().maxCoeff() > 0.0;

    // Enumerate z by mixed radix; each term is independent, so the loop can
    // be filled in parallel and reduced pairwise by z index.
    int64_t z_count = 1;
    for (int k = 0; k < P; k++) {
        z_count *= spec.multiplicity[k] + 1;
    }
    std::vector<Complex> contributions(z_count);

#pragma omp parallel for schedule(dynamic)
    for (int64_t zi = 0; zi < z_count; zi++) {
        std::vector<int> z(P);
        int64_t rem = zi;
        double weight = 1.0;
        int sign_flips = 0;
        for (int k = 0; k < P; k++) {
            int digit = static_cast<int>(rem % (spec.multiplicity[k] + 1));
            rem /= spec.multiplicity[k] + 1;
            z[k] = -spec.multiplicity[k] + 2 * digit;
            sign_flips += (spec.multiplicity[k] - z[k]) / 2;
            weight *= binomial_coeff(spec.multiplicity[k], (spec.multiplicity[k] + z[k]) / 2);
        }
        double sign = (sign_flips % 2 == 0) ? 1.0 : -1.0;

        // diag(Lambda_z) expanded over the repeated pairs.
        Eigen::VectorXd lambda(half);
        int pos = 0;
        for (int k = 0; k < P; k++) {
            for (int c = 0; c < (spec.multiplicity[k] + z[k]) / 2; c++) {
                lambda(pos++) = 1.0;
            }
            for (int c = 0; c < (spec.multiplicity[k] - z[k]) / 2; c++) {
                lambda(pos++) = -1.0;
            }
        }
        // C_n X_z: X_z swaps the half blocks with signs from Lambda_z.
        Matrix CX(N, N);
        CX.leftCols(half) = Cn.rightCols(half);
        CX.rightCols(half) = Cn.leftCols(half);
        for (int j = 0; j < half; j++) {
            CX.col(j) *= lambda(j);
            CX.col(j + half) *= lambda(j);
        }

        std::vector<Complex> traces = power_traces(CX, half);

        // g(lambda) = sum_k [tr((C_n X_z)^k)/(2k) + mu X (C X)^{k-1} mu^T / 2] lambda^k
        std::vector<Complex> g(half + 1, Complex(0.0, 0.0));
        for (int k = 1; k <= half; k++) {
            g[k] = traces[k - 1] / (2.0 * k);
        }
        if (displaced) {
            // Row vector u_k = mu X (C X)^{k-1}, built iteratively.
            Vector u(N);
            for (int i = 0; i < half; i++) {
                u(i) = mun(i + half) * lambda(i);
                u(i + half) = mun(i) * lambda(i);
            }
            for (int k = 1; k <= half; k++) {
                g[k] += u.cwiseProduct(mun).sum() / 2.0;  // plain u . mun, no conjugation
                if (k < half) {
                    u = (CX.transpose() * u).eval();
                }
            }
        }

        // Coefficient of lambda^{N/2} in exp(g) - 1 by truncated polynomials.
        std::vector<Complex> f(half + 1, Complex(0.0, 0.0));
        std::vector<Complex> term(1, Complex(1.0, 0.0));
        for (int j = 1; j <= half; j++) {
            term = poly_mul(term, g, half);
            for (auto &c : term) {
                c /= static_cast<double>(j);
            }
            for (int deg = 0; deg <= half; deg++) {
                f[deg] += term[deg];
            }
        }
        contributions[zi] = sign * weight * f[half];
    }

    // Pairwise tree reduction keyed by z index keeps the sum bit-stable.
    std::vector<Complex> level = std::move(contributions);
    while (level.size() > 1) {
        std::vector<Complex> next((level.size() + 1) / 2);
        for (size_t i = 0; i < next.size(); i++) {
            next[i] = (2 * i + 1 < level.size()) ? level[2 * i] + level[2 * i + 1] : level[2 * i];
        }
        level = std::move(next);
    }
    return level[0] / std::pow(2.0, half);
}

Complex lhaf_repeated(const Matrix &M, const std::vector<int> &counts, const Vector &mu) {
    int total = 0;
    for (int c : counts) {
        total += c;
    }
    if (total == 0) {
        return Complex(1.0, 0.0);
    }
    return lhafmix(greedy_pairing(counts, M, mu));
}

Complex lhaf_repeated_reference(const Matrix &M, const std::vector<int> &counts, const Vector &mu) {
    Matrix repeated = build_repeated_filldiag(M, counts, mu);
    return loop_hafnian_reference(SymmetricComplexMatrix(std::move(repeated)));
}

StateProbability::StateProbability(const GaussianState &state, bool check_physical)
    : m_(state.m) {
    if (check_physical && !state.is_physical()) {
        throw invalid_parameter("state is not physical: Q eigenvalue below 1/2");
    }
    Eigen::PartialPivLU<Matrix> lu(state.Q);
    double log_det = 0.0;
    for (int i = 0; i < 2 * m_; i++) {
        log_det += std::log(std::abs(lu.matrixLU()(i, i)));
    }
    Matrix Qinv = lu.solve(Matrix::Identity(2 * m_, 2 * m_));

    Matrix X = Matrix::Zero(2 * m_, 2 * m_);
    X.topRightCorner(m_, m_) = Matrix::Identity(m_, m_);
    X.bottomLeftCorner(m_, m_) = Matrix::Identity(m_, m_);
    A_ = X * (Matrix::Identity(2 * m_, 2 * m_) - Qinv);
    A_ = ((A_ + A_.transpose()) / 2.0).eval();

    double off_norm = std::max(A_.topRightCorner(m_, m_).cwiseAbs().maxCoeff(),
                               A_.bottomLeftCorner(m_, m_).cwiseAbs().maxCoeff());
    pure_ = off_norm < 1e-10;
    if (pure_) {
        B_ = A_.topLeftCorner(m_, m_);
    }

    gamma_bar_ = (Qinv * state.alpha_bar).conjugate();
    displaced_ = state.alpha_bar.cwiseAbs().maxCoeff() > 1e-14;
    double quad = displaced_ ? std::real(state.alpha_bar.dot(Qinv * state.alpha_bar)) : 0.0;
    log_prefactor_ = -0.5 * quad - 0.5 * log_det;
}

double StateProbability::finish(Complex matching_value, const Pattern &s) const {
    double log_factorials = 0.0;
    for (int count : s) {
        log_factorials += std::lgamma(count + 1.0);
    }
    double value = std::real(matching_value) * std::exp(log_prefactor_ - log_factorials);
    return value > 0.0 ? value : 0.0;
}

double StateProbability::prob(const Pattern &s) const {
    if (static_cast<int>(s.size()) != m_) {
        throw invalid_parameter("pattern length must equal the mode count");
    }
    if (pure_) {
        Vector beta = displaced_ ? gamma_bar_.head(m_).eval() : Vector::Zero(m_).eval();
        Complex half_value = lhaf_repeated(B_, s, beta);
        return finish(Complex(std::norm(half_value), 0.0), s);
    }
    std::vector<int> doubled(2 * m_);
    for (int i = 0; i < m_; i++) {
        doubled[i] = s[i];
        doubled[i + m_] = s[i];
    }
    Vector gamma = displaced_ ? gamma_bar_ : Vector::Zero(2 * m_).eval();
    return finish(lhaf_repeated(A_, doubled, gamma), s);
}

double StateProbability::prob_reference(const Pattern &s) const {
    std::vector<int> doubled(2 * m_);
    for (int i = 0; i < m_; i++) {
        doubled[i] = s[i];
        doubled[i + m_] = s[i];
    }
    Vector gamma = displaced_ ? gamma_bar_ : Vector::Zero(2 * m_).eval();
    return finish(lhaf_repeated_reference(A_, doubled, gamma), s);
}

double pattern_probability(const GaussianState &state, const Pattern &s) {
    if (static_cast<int>(s.size()) != state.m) {
        throw invalid_parameter("pattern length must equal the mode count");
    }
    return StateProbability(state, /*check_physical=*/true).prob(s);
}

}  // namespace gbs
