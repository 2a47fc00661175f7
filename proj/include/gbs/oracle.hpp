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

#ifndef GBSIM_ORACLE_HPP
#define GBSIM_ORACLE_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "gbs/gaussian.hpp"

namespace gbs {

/// Exhaustive pattern -> probability map over the truncated Hilbert space.
/// Raw tables carry the truncation deficit explicitly; zero exclusion and
/// renormalization are separate transformations, never implicit.
struct ProbabilityTable {
    int m = 0;
    int n_cutoff = 0;
    std::map<Pattern, double> entries;
    bool zero_excluded = false;
    bool normalized = false;
    double truncation_deficit = 0.0;

    double total_mass() const;
};

/// Top-k mass, probability-weighted mean 2-norm distance to the most likely
/// pattern, and the short/long distance tail masses.
struct StructureStats {
    double top_k_mass = 0.0;
    double mean_l2 = 0.0;
    double short_tail_mass = 0.0;
    double long_tail_mass = 0.0;
    int k = 0;
    double short_threshold = 0.0;
    double long_threshold = 0.0;
    Pattern most_probable;
};

/// Disjoint mode subsets covering {0..m-1} for output binning.
struct BinningPartition {
    std::vector<std::vector<int>> subsets;

    BinningPartition(std::vector<std::vector<int>> groups, int m);
    int subset_count() const { return static_cast<int>(subsets.size()); }
};

uint64_t enumeration_budget();

/// Probability of every pattern in the truncated space, including zero.
ProbabilityTable enumerate_ideal(const GaussianState &state, int n_cutoff,
                                 uint64_t budget = enumeration_budget());

/// Binomial-thinning image of an ideal table (balanced loss at eta_t).
ProbabilityTable lossy_probabilities(const ProbabilityTable &ideal, double eta_t);

/// (K+1)-fold convolution of the actual and virtual tables, with patterns
/// beyond the cutoff and the zero pattern excluded, then renormalized.
ProbabilityTable distinguishable_probabilities(const ProbabilityTable &actual,
                                               const std::vector<ProbabilityTable> &virtuals,
                                               int n_cutoff);

/// Restriction to patterns with every entry <= n_max, renormalized.
ProbabilityTable marginal_probabilities(const ProbabilityTable &table, int n_max);

/// Drops the zero pattern and rescales the rest to unit mass.
ProbabilityTable exclude_zero_and_normalize(const ProbabilityTable &table);

StructureStats structure_stats(const ProbabilityTable &table, int k,
                               double short_threshold, double long_threshold);

uint64_t hilbert_dim(int m, int n_cutoff, const BinningPartition *partition = nullptr);

double l2_distance(const Pattern &a, const Pattern &b);

/// Pattern at linear index `idx` when patterns are counted in mixed radix
/// base (n_cutoff + 1), least significant mode first.
Pattern pattern_from_index(uint64_t idx, int m, int n_cutoff);

}  // namespace gbs

#endif
