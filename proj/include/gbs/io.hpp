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

#ifndef GBSIM_IO_HPP
#define GBSIM_IO_HPP

#include <string>

#include "gbs/gaussian.hpp"
#include "gbs/oracle.hpp"
#include "gbs/samplers.hpp"
#include "gbs/validation.hpp"

namespace gbs {

/// FNV-1a hash of a string, hex-encoded. Used to stamp outputs with the
/// configuration that produced them.
std::string fnv1a_hex(const std::string &text);

void save_interferometer(const Interferometer &u, const std::string &path);
Interferometer load_interferometer(const std::string &path);

void save_probability_table(const ProbabilityTable &table, const std::string &path,
                            const std::string &config_hash, uint64_t seed);
ProbabilityTable load_probability_table(const std::string &path);

void save_sample_set(const SampleSet &samples, const std::string &path,
                     const std::string &config_hash);
SampleSet load_sample_set(const std::string &path);
void export_sample_csv(const SampleSet &samples, const std::string &path);

void save_chi_square_csv(const ChiSquareRun &run, const std::string &path);
void save_chi_square_histogram_csv(const ChiSquareRun &run, const std::string &path,
                                   int n_bins = 50);
void save_peak_fit_json(const PeakFit &fit, const std::string &path,
                        const std::string &config_hash, uint64_t seed,
                        const std::string &params_json = "{}");
void save_correlation_csv(const CorrelationReport &report, const std::string &path);
void save_correlation_json(const CorrelationReport &report, const std::string &path,
                           const std::string &config_hash, uint64_t seed,
                           const std::string &params_json = "{}");
void save_structure_stats_json(const StructureStats &stats, const std::string &path,
                               const std::string &config_hash);

}  // namespace gbs

#endif
