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

#include <omp.h>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gbs/errors.hpp"
#include "gbs/io.hpp"
#include "gbs/oracle.hpp"
#include "gbs/samplers.hpp"
#include "gbs/validation.hpp"

using json = nlohmann::ordered_json;
using namespace gbs;

namespace {

struct ExperimentConfig {
    std::string model = "ideal";
    double r = 0.5;
    int K = 5;
    int m = 5;
    int n_cutoff = 4;
    int n_samples = 10000;
    uint64_t seed = 1;
    double eta = 1.0;
    std::vector<double> eta_grid;
    double theta = 0.0;
    std::string loss_method = "direct";
    // Validation stage.
    int k = 150;
    int training_samples = 3000;
    int repetitions = 10000;
    int draw_size = 1000;
    std::string bins;  // "1,2|3,4|5", 1-based mode indices
    int order = 2;     // correlator order for the correlation pipeline
    std::string raw;   // verbatim config text for hashing
};

std::string slurp_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot open config: " + path);
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

ExperimentConfig load_config(const std::string &path) {
    ExperimentConfig cfg;
    cfg.raw = slurp_file(path);
    json j = json::parse(cfg.raw, nullptr, false);
    if (j.is_discarded()) {
        throw io_error("malformed config JSON: " + path);
    }
    cfg.model = j.value("model", cfg.model);
    cfg.r = j.value("r", cfg.r);
    cfg.K = j.value("K", cfg.K);
    cfg.m = j.value("m", cfg.m);
    cfg.n_cutoff = j.value("n_cutoff", cfg.n_cutoff);
    cfg.n_samples = j.value("n_samples", cfg.n_samples);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.eta = j.value("eta", cfg.eta);
    cfg.eta_grid = j.value("eta_grid", cfg.eta_grid);
    cfg.theta = j.value("theta", cfg.theta);
    cfg.loss_method = j.value("loss_method", cfg.loss_method);
    if (j.contains("validation")) {
        const json &v = j["validation"];
        cfg.k = v.value("k", cfg.k);
        cfg.training_samples = v.value("training_samples", cfg.training_samples);
        cfg.repetitions = v.value("repetitions", cfg.repetitions);
        cfg.draw_size = v.value("draw_size", cfg.draw_size);
        cfg.bins = v.value("bins", cfg.bins);
        cfg.order = v.value("order", cfg.order);
    }
    return cfg;
}

BinningPartition parse_bins(const std::string &text, int m) {
    std::vector<std::vector<int>> groups;
    std::istringstream stream(text);
    std::string group;
    while (std::getline(stream, group, '|')) {
        std::vector<int> modes;
        std::istringstream inner(group);
        std::string tok;
        while (std::getline(inner, tok, ',')) {
            if (tok.empty()) {
                continue;
            }
            modes.push_back(std::stoi(tok) - 1);  // flags use 1-based modes
        }
        if (!modes.empty()) {
            groups.push_back(std::move(modes));
        }
    }
    return BinningPartition(groups, m);
}

SampleSet dispatch_sampler(const ExperimentConfig &cfg, const Interferometer &itf,
                           double eta, uint64_t seed) {
    SqueezingSpec spec(cfg.K, cfg.m, cfg.r);
    if (cfg.model == "ideal") {
        return sample_ideal(spec, itf, cfg.n_samples, cfg.n_cutoff, seed);
    }
    if (cfg.model == "loss") {
        LossMethod method =
            cfg.loss_method == "thinning" ? LossMethod::Thinning : LossMethod::Direct;
        return sample_lossy(spec, itf, eta, cfg.n_samples, cfg.n_cutoff, seed, method);
    }
    if (cfg.model == "distinguishable") {
        return sample_distinguishable(spec, itf, eta, cfg.n_samples, cfg.n_cutoff, seed);
    }
    if (cfg.model == "thermal") {
        return sample_thermal(spec, itf, cfg.n_samples, cfg.n_cutoff, seed);
    }
    if (cfg.model == "coherent") {
        return sample_coherent(spec, itf, cfg.theta, cfg.n_samples, cfg.n_cutoff, seed);
    }
    if (cfg.model == "squashed") {
        return sample_squashed(spec, itf, cfg.n_samples, cfg.n_cutoff, seed);
    }
    throw invalid_parameter("unknown model: " + cfg.model);
}

std::string eta_tag(double eta) {
    std::ostringstream out;
    out << "eta" << eta;
    std::string s = out.str();
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

int cmd_generate_unitary(int m, uint64_t seed, const std::string &out) {
    save_interferometer(haar_unitary(m, seed), out);
    return 0;
}

int cmd_sample(const ExperimentConfig &cfg, const std::string &unitary,
               const std::string &out_dir) {
    Interferometer itf = load_interferometer(unitary);
    std::string hash = fnv1a_hex(cfg.raw);
    std::vector<double> etas = cfg.eta_grid.empty() ? std::vector<double>{cfg.eta}
                                                    : cfg.eta_grid;
    for (size_t i = 0; i < etas.size(); i++) {
        // Sub-seed rule: top seed + grid index keeps grid points independent.
        SampleSet samples = dispatch_sampler(cfg, itf, etas[i], cfg.seed + i);
        std::string stem = out_dir + "/samples_" + cfg.model + "_" + eta_tag(etas[i]);
        save_sample_set(samples, stem + ".ndjson", hash);
        export_sample_csv(samples, stem + ".csv");
        std::cout << stem << ".ndjson (" << samples.n_samples() << " samples)\n";
    }
    return 0;
}

int cmd_enumerate(const ExperimentConfig &cfg, const std::string &unitary,
                  const std::string &out_dir) {
    Interferometer itf = load_interferometer(unitary);
    std::string hash = fnv1a_hex(cfg.raw);
    SqueezingSpec spec(cfg.K, cfg.m, cfg.r);
    std::vector<double> etas = cfg.eta_grid.empty() ? std::vector<double>{cfg.eta}
                                                    : cfg.eta_grid;
    ProbabilityTable ideal = enumerate_ideal(ideal_output_state(spec, itf), cfg.n_cutoff);
    for (double eta : etas) {
        ProbabilityTable table;
        if (cfg.model == "loss" || cfg.model == "ideal") {
            table = eta < 1.0 ? lossy_probabilities(ideal, eta) : ideal;
        } else if (cfg.model == "distinguishable") {
            auto [actual_cov, virtual_covs] = distinguishable_covariances(spec, eta);
            ProbabilityTable actual =
                enumerate_ideal(apply_interferometer(xp_to_q(actual_cov), itf), cfg.n_cutoff);
            std::vector<ProbabilityTable> virtuals;
            for (const auto &cov : virtual_covs) {
                virtuals.push_back(
                    enumerate_ideal(apply_interferometer(xp_to_q(cov), itf), cfg.n_cutoff));
            }
            table = distinguishable_probabilities(actual, virtuals, cfg.n_cutoff);
        } else if (cfg.model == "thermal") {
            table = thermal_probabilities(spec, itf, cfg.n_cutoff);
        } else {
            throw invalid_parameter("enumerate supports ideal, loss, distinguishable, thermal");
        }
        std::string stem = out_dir + "/table_" + cfg.model + "_" + eta_tag(eta);
        save_probability_table(table, stem + ".ndjson", hash, cfg.seed);
        double long_thresh = cfg.model == "distinguishable" ? 2.0 : 3.0;
        StructureStats stats =
            structure_stats(exclude_zero_and_normalize(table), 10, 0.0, long_thresh);
        save_structure_stats_json(stats, stem + "_stats.json", hash);
        std::cout << stem << ".ndjson (" << table.entries.size() << " patterns)\n";
    }
    return 0;
}

int cmd_validate(const ExperimentConfig &cfg, const std::string &bona_file,
                 const std::string &test_file, const std::string &out_dir,
                 const std::string &mode) {
    SampleSet bona = load_sample_set(bona_file);
    SampleSet test = load_sample_set(test_file);
    if (bona.m != test.m) {
        throw invalid_parameter("bona fide and test sample files disagree on mode count");
    }
    std::string hash = fnv1a_hex(cfg.raw);
    json params;
    params["eta"] = test.eta;
    params["model"] = test.model;

    if (mode == "correlation") {
        CorrelationReport report = gamma_deviation(test, bona, cfg.order);
        save_correlation_csv(report, out_dir + "/correlation.csv");
        save_correlation_json(report, out_dir + "/correlation.json", hash, cfg.seed,
                              params.dump());
        std::cout << "gamma(t=" << cfg.order << ") = " << report.gamma << "\n";
        return 0;
    }

    if (!cfg.bins.empty()) {
        BinningPartition partition = parse_bins(cfg.bins, bona.m);
        bona = bin_patterns(bona, partition);
        test = bin_patterns(test, partition);
    }
    if (cfg.training_samples > bona.n_samples()) {
        throw invalid_parameter("training size exceeds the bona fide sample count");
    }
    SampleSet training = bona;
    training.patterns.assign(bona.patterns.begin(),
                             bona.patterns.begin() + cfg.training_samples);
    ClusterModel model = train_clusters(training, cfg.k, cfg.seed);
    ChiSquareRun run =
        sample_box_run(model, bona, test, cfg.repetitions, cfg.draw_size, cfg.seed + 1);
    PeakFit fit = fit_gaussian_peak(run);
    save_chi_square_csv(run, out_dir + "/chi2.csv");
    save_chi_square_histogram_csv(run, out_dir + "/chi2_hist.csv");
    save_peak_fit_json(fit, out_dir + "/peak_fit.json", hash, cfg.seed, params.dump());
    std::cout << "X_c = " << fit.center << ", sigma = " << fit.sigma << "\n";
    return 0;
}

int cmd_report(const std::vector<std::string> &inputs, const std::string &out) {
    struct Row {
        double eta;
        json body;
    };
    std::vector<Row> rows;
    for (const auto &path : inputs) {
        json j = json::parse(slurp_file(path), nullptr, false);
        if (j.is_discarded() || (!j.contains("X_c") && !j.contains("gamma"))) {
            throw io_error("not a result JSON: " + path);
        }
        double eta = j.contains("params") ? j["params"].value("eta", 1.0) : 1.0;
        rows.push_back({eta, j});
    }
    std::sort(rows.begin(), rows.end(),
              [](const Row &a, const Row &b) { return a.eta < b.eta; });
    std::ofstream csv(out);
    if (!csv) {
        throw io_error("cannot open for writing: " + out);
    }
    csv.precision(17);
    csv << "eta,X_c,sigma,gamma\n";
    for (const auto &row : rows) {
        csv << row.eta << "," << row.body.value("X_c", 0.0) << ","
            << row.body.value("sigma", 0.0) << "," << row.body.value("gamma", 0.0) << "\n";
    }
    std::cout << out << " (" << rows.size() << " rows)\n";
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Exact Gaussian boson sampling simulator and validation driver"};
    app.require_subcommand(1);

    std::string config_path, unitary_path, out_path = ".", bona_file, test_file;
    std::string model_flag, bins_flag, validate_mode = "pattern";
    std::vector<std::string> report_inputs;
    int m = 5, threads = 0;
    uint64_t seed = 1;
    bool seed_set = false;
    double eta = -1.0;

    auto *gen = app.add_subcommand("generate-unitary", "Write a Haar-random interferometer");
    gen->add_option("--m", m, "mode count")->check(CLI::PositiveNumber);
    gen->add_option("--seed", seed, "RNG seed");
    gen->add_option("--out", out_path, "output file")->required();

    auto *sam = app.add_subcommand("sample", "Draw photon-count samples");
    sam->add_option("--config", config_path)->required();
    sam->add_option("--unitary", unitary_path)->required();
    sam->add_option("--out", out_path, "output directory");
    sam->add_option("--seed", seed)->each([&](const std::string &) { seed_set = true; });
    sam->add_option("--threads", threads);
    sam->add_option("--model", model_flag);
    sam->add_option("--eta", eta);

    auto *enu = app.add_subcommand("enumerate", "Enumerate exact pattern probabilities");
    enu->add_option("--config", config_path)->required();
    enu->add_option("--unitary", unitary_path)->required();
    enu->add_option("--out", out_path, "output directory");
    enu->add_option("--threads", threads);
    enu->add_option("--model", model_flag);
    enu->add_option("--eta", eta);

    auto *val = app.add_subcommand("validate", "Pattern-recognition or correlation validation");
    val->add_option("--config", config_path)->required();
    val->add_option("--bona", bona_file, "bona fide sample file")->required();
    val->add_option("--test", test_file, "test sample file")->required();
    val->add_option("--out", out_path, "output directory");
    val->add_option("--seed", seed)->each([&](const std::string &) { seed_set = true; });
    val->add_option("--threads", threads);
    val->add_option("--bins", bins_flag, "partition such as \"1,2|3,4|5\"");
    val->add_option("--mode", validate_mode)
        ->check(CLI::IsMember({"pattern", "correlation"}));

    auto *rep = app.add_subcommand("report", "Merge result JSONs into a plot-ready CSV");
    rep->add_option("--out", out_path, "output CSV")->required();
    rep->add_option("inputs", report_inputs, "result JSON files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (threads > 0) {
            omp_set_num_threads(threads);
        }
        if (gen->parsed()) {
            return cmd_generate_unitary(m, seed, out_path);
        }
        if (rep->parsed()) {
            return cmd_report(report_inputs, out_path);
        }
        ExperimentConfig cfg = load_config(config_path);
        if (!model_flag.empty()) {
            cfg.model = model_flag;
        }
        if (seed_set) {
            cfg.seed = seed;
        }
        if (eta >= 0.0) {
            cfg.eta = eta;
            cfg.eta_grid.clear();
        }
        if (!bins_flag.empty()) {
            cfg.bins = bins_flag;
        }
        if (sam->parsed()) {
            return cmd_sample(cfg, unitary_path, out_path);
        }
        if (enu->parsed()) {
            return cmd_enumerate(cfg, unitary_path, out_path);
        }
        return cmd_validate(cfg, bona_file, test_file, out_path, validate_mode);
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
