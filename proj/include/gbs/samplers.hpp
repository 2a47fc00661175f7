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

#ifndef GBSIM_SAMPLERS_HPP
#define GBSIM_SAMPLERS_HPP

#include <string>
#include <vector>

#include "gbs/gaussian.hpp"
#include "gbs/oracle.hpp"
#include "gbs/rng.hpp"

namespace gbs {

/// Ordered sample list with full provenance. The zero pattern is never
/// present; samplers redraw instead of emitting it.
struct SampleSet {
    std::vector<Pattern> patterns;
    std::string model;  // ideal | loss | distinguishable | thermal | coherent | squashed
    double r = 0.0;
    int K = 0;
    int m = 0;
    double eta = 1.0;    // eta_t or eta_ind depending on the model
    double theta = 0.0;  // coherent mockup phase
    int n_cutoff = 0;
    uint64_t seed = 0;

    int n_samples() const { return static_cast<int>(patterns.size()); }
    double mean_total_photons() const;
};

enum class LossMethod {
    Direct,    // chain rule on the lossy (mixed) state
    Thinning,  // ideal draw followed by per-photon Bernoulli survival
};

/// Heterodyne outcomes for every mode of `state`, drawn from its Q-function.
Vector sample_heterodyne(const GaussianState &state, RngStream &rng);

/// One pattern by the chain rule: heterodyne auxiliaries for modes 2..m,
/// then mode-by-mode conditionals truncated at the cutoff. All-zero draws
/// are rejected and redrawn.
Pattern chain_rule_sample(const GaussianState &state, int n_cutoff, RngStream &rng);

/// Lossy Gaussian state: Q -> eta Q + (1 - eta) I, the Q-space image of the
/// balanced-loss covariance map.
GaussianState lossy_state(const GaussianState &state, double eta_t);

SampleSet sample_ideal(const SqueezingSpec &spec, const Interferometer &itf,
                       int n_samples, int n_cutoff, uint64_t seed);

SampleSet sample_lossy(const SqueezingSpec &spec, const Interferometer &itf, double eta_t,
                       int n_samples, int n_cutoff, uint64_t seed,
                       LossMethod method = LossMethod::Direct);

SampleSet sample_distinguishable(const SqueezingSpec &spec, const Interferometer &itf,
                                 double eta_ind, int n_samples, int n_cutoff, uint64_t seed);

SampleSet sample_thermal(const SqueezingSpec &spec, const Interferometer &itf,
                         int n_samples, int n_cutoff, uint64_t seed);

SampleSet sample_coherent(const SqueezingSpec &spec, const Interferometer &itf, double theta,
                          int n_samples, int n_cutoff, uint64_t seed);

SampleSet sample_squashed(const SqueezingSpec &spec, const Interferometer &itf,
                          int n_samples, int n_cutoff, uint64_t seed);

/// Exact inverse-CDF draws from a zero-excluded, normalized table.
SampleSet categorical_sample(const ProbabilityTable &table, int n_samples, uint64_t seed);

/// (mean total photons of samples) / (mean total photons of reference).
double mean_photon_ratio(const SampleSet &samples, const SampleSet &reference);

/// Builds the ideal output state for a spec and interferometer.
GaussianState ideal_output_state(const SqueezingSpec &spec, const Interferometer &itf);

/// Thermal-mockup probability table via permanents of D_s submatrices.
ProbabilityTable thermal_probabilities(const SqueezingSpec &spec, const Interferometer &itf,
                                       int n_cutoff);

}  // namespace gbs

#endif
