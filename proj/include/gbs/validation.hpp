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

#ifndef GBSIM_VALIDATION_HPP
#define GBSIM_VALIDATION_HPP

#include <map>
#include <vector>

#include "gbs/oracle.hpp"
#include "gbs/samplers.hpp"

namespace gbs {

/// K-means++ cluster model over photon-count space, with per-cluster
/// acceptance radii learned from the bona fide training samples.
struct ClusterModel {
    int k = 0;
    std::vector<Eigen::VectorXd> centroids;
    std::vector<double> radii;
    std::vector<int> training_counts;

    /// Nearest centroid by Euclidean distance; ties go to the lowest index.
    int nearest(const Pattern &s) const;
};

struct ChiSquareResult {
    double chi2 = 0.0;
    double abandoned_fraction = 0.0;
    bool degenerate = false;  // all test samples abandoned
};

struct ChiSquareRun {
    std::vector<double> chi2_values;
    std::vector<double> abandoned_fractions;
    int repetitions = 0;
    int draw_size = 0;
};

struct PeakFit {
    double center = 0.0;
    double sigma = 0.0;
    double center_stderr = 0.0;
    double fit_residual = 0.0;
    bool fallback = false;  // fit failed to converge; moments used instead
};

/// t-th order cumulants over all mode combinations, plus the noise/ideal
/// ratio Gamma of their sums.
struct CorrelationReport {
    int order = 0;
    std::vector<std::vector<int>> combinations;
    std::vector<double> kappa_noise;
    std::vector<double> kappa_ideal;
    double gamma = 0.0;
};

/// Denominator convention for the expected contingency counts.
enum class ExpectedCounts {
    GrandTotal,   // E_ij = N_i N_j / N_total (standard contingency form)
    ClusterCount  // E_ij = N_i N_j / k (fixed-denominator variant)
};

ClusterModel train_clusters(const SampleSet &bona_fide, int k, uint64_t seed);

ChiSquareResult chi_square_test(const ClusterModel &model,
                                const std::vector<Pattern> &bona_draw,
                                const std::vector<Pattern> &test_draw,
                                ExpectedCounts convention = ExpectedCounts::GrandTotal);

ChiSquareRun sample_box_run(const ClusterModel &model,
                            const SampleSet &bona_box,
                            const SampleSet &test_box,
                            int repetitions, int draw_size, uint64_t seed,
                            ExpectedCounts convention = ExpectedCounts::GrandTotal);

PeakFit fit_gaussian_peak(const ChiSquareRun &run, int n_bins = 50);

SampleSet bin_patterns(const SampleSet &samples, const BinningPartition &partition);

/// All set partitions of {0..t-1}, deterministic order. 1 <= t <= 8.
std::vector<std::vector<std::vector<int>>> set_partitions(int t);

/// t-th order joint cumulant of the photon numbers in `modes` (0-based,
/// distinct), with moments taken as empirical means over the samples.
double correlator(const SampleSet &samples, const std::vector<int> &modes);

CorrelationReport gamma_deviation(const SampleSet &noise, const SampleSet &ideal, int order);

}  // namespace gbs

#endif
