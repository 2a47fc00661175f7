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

#ifndef GBSIM_MATCHPOLY_HPP
#define GBSIM_MATCHPOLY_HPP

#include <complex>
#include <utility>
#include <vector>

#include "gbs/gaussian.hpp"

namespace gbs {

/// Complex symmetric matrix; symmetry enforced by averaging at construction.
struct SymmetricComplexMatrix {
    Matrix entries;

    explicit SymmetricComplexMatrix(Matrix raw);
    int dim() const { return static_cast<int>(entries.rows()); }
};

/// Photon pairs produced by the greedy pairing step, with the pair-indexed
/// matrix C and displacement slice mu_bar consumed by lhafmix. Pair index
/// equal to the source dimension denotes the appended virtual mode.
struct PairSpec {
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> multiplicity;  // one entry per pair
    Matrix C;                       // 2P x 2P, P = pairs.size()
    Vector mu_bar;                  // length 2P

    int total_photons() const {
        int n = 0;
        for (int mult : multiplicity) {
            n += 2 * mult;
        }
        return n;
    }
};

/// Sum over perfect matchings; O((n-1)!!) recursion, intended for n <= 12.
/// Odd dimension gives 0, an empty matrix gives 1.
Complex hafnian_reference(const SymmetricComplexMatrix &M);

/// Hafnian variant allowing self-loops weighted by the diagonal.
Complex loop_hafnian_reference(const SymmetricComplexMatrix &M);

/// Exact permanent by Glynn's O(2^n n) formula with Gray-code updates.
Complex permanent(const Matrix &M);

/// Pairs the photons of `counts` (same index first, leftovers across indices
/// in ascending order, a final odd photon against a virtual mode).
PairSpec greedy_pairing(const std::vector<int> &counts, const Matrix &B, const Vector &beta);

/// Sign matrix for one term of the finite-difference sieve; z_i must match
/// the parity of n_i and lie in [-n_i, n_i].
Matrix build_Xz(const std::vector<int> &multiplicity, const std::vector<int> &z);

/// [tr(M^1), ..., tr(M^K)] from the Schur upper-triangularization of M.
std::vector<Complex> power_traces(const Matrix &M, int max_power);

/// Loop hafnian of the pair-repeated matrix via the finite-difference sieve;
/// the lambda derivative is realized as exact truncated-polynomial coefficient
/// extraction.
Complex lhafmix(const PairSpec &spec);

/// lhaf of filldiag(M_repeated, mu_repeated) where index i of the symmetric
/// matrix M is repeated counts[i] times; pairing + sieve fast path.
Complex lhaf_repeated(const Matrix &M, const std::vector<int> &counts, const Vector &mu);

/// Same value by the brute-force reference (builds the repeated matrix).
Complex lhaf_repeated_reference(const Matrix &M, const std::vector<int> &counts, const Vector &mu);

/// Per-state probability evaluator. Precomputes the kernel matrix, the
/// displacement image gamma_bar and the scalar prefactor once, so probing
/// many patterns of one state stays cheap (the chain-rule hot path).
class StateProbability {
  public:
    explicit StateProbability(const GaussianState &state, bool check_physical = false);

    /// Probability of pattern s via the pure (B_s) or mixed (A_s) route.
    double prob(const Pattern &s) const;

    /// Brute-force route through the reference loop hafnian.
    double prob_reference(const Pattern &s) const;

    bool pure() const { return pure_; }
    int modes() const { return m_; }

  private:
    int m_;
    bool pure_;
    bool displaced_;
    double log_prefactor_;  // -0.5 a^dag Q^-1 a - 0.5 log det Q
    Matrix A_;              // 2m x 2m kernel
    Matrix B_;              // m x m when pure
    Vector gamma_bar_;      // (Q^-1 alpha_bar)^*, length 2m

    double finish(Complex matching_value, const Pattern &s) const;
};

/// One-shot wrapper around StateProbability; validates physicality.
double pattern_probability(const GaussianState &state, const Pattern &s);

}  // namespace gbs

#endif
