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

#include "gbs/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gbs/errors.hpp"

namespace gbs {

using json = nlohmann::ordered_json;

namespace {

std::ofstream open_out(const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw io_error("cannot open for writing: " + path);
    }
    out.precision(17);
    return out;
}

std::ifstream open_in(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot open for reading: " + path);
    }
    return in;
}

json parse_line(const std::string &line, const std::string &path) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
        throw io_error("malformed JSON record in " + path);
    }
    return j;
}

}  // namespace

std::string fnv1a_hex(const std::string &text) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

void save_interferometer(const Interferometer &u, const std::string &path) {
    json j;
    j["m"] = u.m;
    j["seed"] = u.seed;
    json rows = json::array();
    for (int i = 0; i < u.m; i++) {
        json row = json::array();
        for (int k = 0; k < u.m; k++) {
            row.push_back({u.T(i, k).real(), u.T(i, k).imag()});
        }
        rows.push_back(std::move(row));
    }
    j["T"] = std::move(rows);
    auto out = open_out(path);
    out << j.dump(1) << "\n";
}

Interferometer load_interferometer(const std::string &path) {
    auto in = open_in(path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("m") || !j.contains("T")) {
        throw io_error("malformed interferometer file: " + path);
    }
    int m = j["m"].get<int>();
    Matrix T(m, m);
    const auto &rows = j["T"];
    if (static_cast<int>(rows.size()) != m) {
        throw io_error("interferometer row count mismatch: " + path);
    }
    for (int i = 0; i < m; i++) {
        if (static_cast<int>(rows[i].size()) != m) {
            throw io_error("interferometer column count mismatch: " + path);
        }
        for (int k = 0; k < m; k++) {
            T(i, k) = Complex(rows[i][k][0].get<double>(), rows[i][k][1].get<double>());
        }
    }
    int64_t seed = j.value("seed", int64_t{0});
    return Interferometer(m, std::move(T), seed);
}

void save_probability_table(const ProbabilityTable &table, const std::string &path,
                            const std::string &config_hash, uint64_t seed) {
    auto out = open_out(path);
    json header;
    header["m"] = table.m;
    header["n_cutoff"] = table.n_cutoff;
    header["zero_excluded"] = table.zero_excluded;
    header["normalized"] = table.normalized;
    header["truncation_deficit"] = table.truncation_deficit;
    header["config_hash"] = config_hash;
    header["seed"] = seed;
    out << header.dump() << "\n";
    for (const auto &[pattern, p] : table.entries) {
        json rec;
        rec["s"] = pattern;
        rec["p"] = p;
        out << rec.dump() << "\n";
    }
}

ProbabilityTable load_probability_table(const std::string &path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw io_error("empty probability table file: " + path);
    }
    json header = parse_line(line, path);
    ProbabilityTable table;
    table.m = header.at("m").get<int>();
    table.n_cutoff = header.at("n_cutoff").get<int>();
    table.zero_excluded = header.value("zero_excluded", false);
    table.normalized = header.value("normalized", false);
    table.truncation_deficit = header.value("truncation_deficit", 0.0);
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        json rec = parse_line(line, path);
        table.entries[rec.at("s").get<Pattern>()] = rec.at("p").get<double>();
    }
    return table;
}

void save_sample_set(const SampleSet &samples, const std::string &path,
                     const std::string &config_hash) {
    auto out = open_out(path);
    json header;
    header["model"] = samples.model;
    header["r"] = samples.r;
    header["K"] = samples.K;
    header["m"] = samples.m;
    header["eta"] = samples.eta;
    header["theta"] = samples.theta;
    header["n_cutoff"] = samples.n_cutoff;
    header["seed"] = samples.seed;
    header["n_samples"] = samples.n_samples();
    header["config_hash"] = config_hash;
    out << header.dump() << "\n";
    for (const auto &s : samples.patterns) {
        json rec;
        rec["s"] = s;
        out << rec.dump() << "\n";
    }
}

SampleSet load_sample_set(const std::string &path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw io_error("empty sample file: " + path);
    }
    json header = parse_line(line, path);
    SampleSet samples;
    samples.model = header.value("model", std::string{});
    samples.r = header.value("r", 0.0);
    samples.K = header.value("K", 0);
    samples.m = header.at("m").get<int>();
    samples.eta = header.value("eta", 1.0);
    samples.theta = header.value("theta", 0.0);
    samples.n_cutoff = header.value("n_cutoff", 0);
    samples.seed = header.value("seed", uint64_t{0});
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        json rec = parse_line(line, path);
        samples.patterns.push_back(rec.at("s").get<Pattern>());
    }
    return samples;
}

void export_sample_csv(const SampleSet &samples, const std::string &path) {
    auto out = open_out(path);
    for (int i = 0; i < samples.m; i++) {
        out << (i ? "," : "") << "n" << i;
    }
    out << "\n";
    for (const auto &s : samples.patterns) {
        for (size_t i = 0; i < s.size(); i++) {
            out << (i ? "," : "") << s[i];
        }
        out << "\n";
    }
}

void save_chi_square_csv(const ChiSquareRun &run, const std::string &path) {
    auto out = open_out(path);
    out << "repetition,chi2,abandoned_fraction\n";
    for (size_t i = 0; i < run.chi2_values.size(); i++) {
        out << i << "," << run.chi2_values[i] << "," << run.abandoned_fractions[i] << "\n";
    }
}

void save_chi_square_histogram_csv(const ChiSquareRun &run, const std::string &path,
                                   int n_bins) {
    if (run.chi2_values.empty()) {
        throw invalid_parameter("empty chi-square run");
    }
    double lo = *std::min_element(run.chi2_values.begin(), run.chi2_values.end());
    double hi = *std::max_element(run.chi2_values.begin(), run.chi2_values.end());
    double width = (hi > lo) ? (hi - lo) / n_bins : 1.0;
    std::vector<int> counts(n_bins, 0);
    for (double v : run.chi2_values) {
        int b = std::min(static_cast<int>((v - lo) / width), n_bins - 1);
        counts[b]++;
    }
    auto out = open_out(path);
    out << "bin_center,count\n";
    for (int b = 0; b < n_bins; b++) {
        out << lo + (b + 0.5) * width << "," << counts[b] << "\n";
    }
}

void save_peak_fit_json(const PeakFit &fit, const std::string &path,
                        const std::string &config_hash, uint64_t seed,
                        const std::string &params_json) {
    json j;
    j["X_c"] = fit.center;
    j["sigma"] = fit.sigma;
    j["center_stderr"] = fit.center_stderr;
    j["fit_residual"] = fit.fit_residual;
    j["fallback"] = fit.fallback;
    j["params"] = json::parse(params_json);
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    auto out = open_out(path);
    out << j.dump(1) << "\n";
}

void save_correlation_csv(const CorrelationReport &report, const std::string &path) {
    auto out = open_out(path);
    out << "modes,kappa_noise,kappa_ideal\n";
    for (size_t i = 0; i < report.combinations.size(); i++) {
        for (size_t j = 0; j < report.combinations[i].size(); j++) {
            out << (j ? " " : "") << report.combinations[i][j];
        }
        out << "," << report.kappa_noise[i] << "," << report.kappa_ideal[i] << "\n";
    }
}

void save_correlation_json(const CorrelationReport &report, const std::string &path,
                           const std::string &config_hash, uint64_t seed,
                           const std::string &params_json) {
    json j;
    j["order"] = report.order;
    j["gamma"] = report.gamma;
    j["n_combinations"] = report.combinations.size();
    j["params"] = json::parse(params_json);
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    auto out = open_out(path);
    out << j.dump(1) << "\n";
}

void save_structure_stats_json(const StructureStats &stats, const std::string &path,
                               const std::string &config_hash) {
    json j;
    j["top_k_mass"] = stats.top_k_mass;
    j["k"] = stats.k;
    j["mean_l2"] = stats.mean_l2;
    j["short_tail_mass"] = stats.short_tail_mass;
    j["long_tail_mass"] = stats.long_tail_mass;
    j["short_threshold"] = stats.short_threshold;
    j["long_threshold"] = stats.long_threshold;
    j["most_probable"] = stats.most_probable;
    j["config_hash"] = config_hash;
    auto out = open_out(path);
    out << j.dump(1) << "\n";
}

}  // namespace gbs
