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

#include "gbs/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gbs/errors.hpp"

namespace gbs {

namespace {

Eigen::VectorXd embed(const Pattern &s) {
    Eigen::VectorXd v(s.size());
    for (size_t i = 0; i < s.size(); i++) {
        v(i) = s[i];
    }
    return v;
}

double sq_distance(const Eigen::VectorXd &a, const Eigen::VectorXd &b) {
    return (a - b).squaredNorm();
}

}  // namespace

int ClusterModel::nearest(const Pattern &s) const {
    Eigen::VectorXd v = embed(s);
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; c++) {
        double d = sq_distance(v, centroids[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

ClusterModel train_clusters(const SampleSet &bona_fide, int k, uint64_t seed) {
    int n = bona_fide.n_samples();
    if (k < 2 || k > n) {
        throw invalid_parameter("cluster count must satisfy 2 <= k <= sample count");
    }
    std::vector<Eigen::VectorXd> points(n);
    for (int i = 0; i < n; i++) {
        points[i] = embed(bona_fide.patterns[i]);
    }
    RngStream rng(seed, 0);

    // K-means++ seeding with D^2 weighting.
    std::vector<Eigen::VectorXd> centroids;
    centroids.reserve(k);
    centroids.push_back(points[static_cast<size_t>(rng.uniform() * n) % n]);
    std::vector<double> d2(n);
    for (int c = 1; c < k; c++) {
        for (int i = 0; i < n; i++) {
            double d = sq_distance(points[i], centroids[0]);
            for (size_t j = 1; j < centroids.size(); j++) {
                d = std::min(d, sq_distance(points[i], centroids[j]));
            }
            d2[i] = d;
        }
        size_t pick = rng.sample_discrete(d2);
        centroids.push_back(points[pick]);
    }

    // Lloyd iterations.
    std::vector<int> assignment(n, 0);
    for (int iter = 0; iter < 300; iter++) {
        for (int i = 0; i < n; i++) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; c++) {
                double d = sq_distance(points[i], centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            assignment[i] = best;
        }
        std::vector<Eigen::VectorXd> sums(k, Eigen::VectorXd::Zero(points[0].size()));
        std::vector<int> counts(k, 0);
        for (int i = 0; i < n; i++) {
            sums[assignment[i]] += points[i];
            counts[assignment[i]]++;
        }
        double max_shift = 0.0;
        for (int c = 0; c < k; c++) {
            if (counts[c] == 0) {
                // Re-seed an empty cluster from the farthest point.
                int far_idx = 0;
                double far_d = -1.0;
                for (int i = 0; i < n; i++) {
                    double d = sq_distance(points[i], centroids[assignment[i]]);
                    if (d > far_d) {
                        far_d = d;
                        far_idx = i;
                    }
                }
                centroids[c] = points[far_idx];
                max_shift = std::numeric_limits<double>::infinity();
                continue;
            }
            Eigen::VectorXd next = sums[c] / counts[c];
            max_shift = std::max(max_shift, (next - centroids[c]).norm());
            centroids[c] = next;
        }
        if (max_shift < 1e-6) {
            break;
        }
    }

    ClusterModel model;
    model.k = k;
    model.centroids = std::move(centroids);
    model.radii.assign(k, 0.0);
    model.training_counts.assign(k, 0);
    for (int i = 0; i < n; i++) {
        int c = model.nearest(bona_fide.patterns[i]);
        model.training_counts[c]++;
        model.radii[c] = std::max(model.radii[c],
                                  std::sqrt(sq_distance(points[i], model.centroids[c])));
    }
    return model;
}

ChiSquareResult chi_square_test(const ClusterModel &model,
                                const std::vector<Pattern> &bona_draw,
                                const std::vector<Pattern> &test_draw,
                                ExpectedCounts convention) {
    if (bona_draw.empty() || test_draw.empty()) {
        throw invalid_parameter("both draws must be nonempty");
    }
    std::vector<std::array<double, 2>> counts(model.k, {0.0, 0.0});
    for (const auto &s : bona_draw) {
        counts[model.nearest(s)][0] += 1.0;
    }
    int abandoned = 0;
    for (const auto &s : test_draw) {
        int c = model.nearest(s);
        Eigen::VectorXd v(s.size());
        for (size_t i = 0; i < s.size(); i++) {
            v(i) = s[i];
        }
        if ((v - model.centroids[c]).norm() <= model.radii[c]) {
            counts[c][1] += 1.0;
        } else {
            abandoned++;
        }
    }

    double n1 = static_cast<double>(bona_draw.size());
    double n2 = static_cast<double>(test_draw.size() - abandoned);

    ChiSquareResult result;
    result.abandoned_fraction = static_cast<double>(abandoned) / test_draw.size();
    result.degenerate = n2 == 0.0;

    double total = n1 + n2;
    double chi2 = 0.0;
    for (int c = 0; c < model.k; c++) {
        double row = counts[c][0] + counts[c][1];
        if (row == 0.0) {
            continue;
        }
        for (int j = 0; j < 2; j++) {
            double nj = (j == 0) ? n1 : n2;
            double expected = (convention == ExpectedCounts::GrandTotal)
                                  ? row * nj / total
                                  : row * nj / model.k;
            if (expected > 0.0) {
                double dev = counts[c][j] - expected;
                chi2 += dev * dev / expected;
            }
        }
    }
    result.chi2 = chi2;
    return result;
}

ChiSquareRun sample_box_run(const ClusterModel &model,
                            const SampleSet &bona_box,
                            const SampleSet &test_box,
                            int repetitions, int draw_size, uint64_t seed,
                            ExpectedCounts convention) {
    if (draw_size > bona_box.n_samples() || draw_size > test_box.n_samples()) {
        throw invalid_parameter("draw size exceeds a sample box");
    }
    // Cluster assignment of each boxed sample is repetition-independent, so
    // assign once and let every repetition draw indices and histogram.
    int nb = bona_box.n_samples();
    int nt = test_box.n_samples();
    std::vector<int> bona_cluster(nb);
    std::vector<int> test_cluster(nt);  // -1 when outside its cluster radius
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nb; i++) {
        bona_cluster[i] = model.nearest(bona_box.patterns[i]);
    }
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nt; i++) {
        int c = model.nearest(test_box.patterns[i]);
        Eigen::VectorXd v(test_box.patterns[i].size());
        for (size_t d = 0; d < test_box.patterns[i].size(); d++) {
            v(d) = test_box.patterns[i][d];
        }
        test_cluster[i] = ((v - model.centroids[c]).norm() <= model.radii[c]) ? c : -1;
    }

    ChiSquareRun run;
    run.repetitions = repetitions;
    run.draw_size = draw_size;
    run.chi2_values.resize(repetitions);
    run.abandoned_fractions.resize(repetitions);

#pragma omp parallel for schedule(static)
    for (int rep = 0; rep < repetitions; rep++) {
        RngStream rng(seed, static_cast<uint64_t>(rep));
        std::vector<std::array<double, 2>> counts(model.k, {0.0, 0.0});
        for (int i = 0; i < draw_size; i++) {
            counts[bona_cluster[static_cast<size_t>(rng.uniform() * nb) % nb]][0] += 1.0;
        }
        int abandoned = 0;
        for (int i = 0; i < draw_size; i++) {
            int c = test_cluster[static_cast<size_t>(rng.uniform() * nt) % nt];
            if (c >= 0) {
                counts[c][1] += 1.0;
            } else {
                abandoned++;
            }
        }
        double n1 = draw_size;
        double n2 = draw_size - abandoned;
        double total = n1 + n2;
        double chi2 = 0.0;
        for (int c = 0; c < model.k; c++) {
            double row = counts[c][0] + counts[c][1];
            if (row == 0.0) {
                continue;
            }
            for (int j = 0; j < 2; j++) {
                double nj = (j == 0) ? n1 : n2;
                double expected = (convention == ExpectedCounts::GrandTotal)
                                      ? row * nj / total
                                      : row * nj / model.k;
                if (expected > 0.0) {
                    double dev = counts[c][j] - expected;
                    chi2 += dev * dev / expected;
                }
            }
        }
        run.chi2_values[rep] = chi2;
        run.abandoned_fractions[rep] = static_cast<double>(abandoned) / draw_size;
    }
    return run;
}

PeakFit fit_gaussian_peak(const ChiSquareRun &run, int n_bins) {
    const auto &values = run.chi2_values;
    if (values.size() < 100) {
        throw invalid_parameter("peak fitting needs at least 100 chi-square values");
    }
    double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    double var = 0.0;
    for (double v : values) {
        var += (v - mean) * (v - mean);
    }
    var /= values.size();
    double sd = std::sqrt(var);

    PeakFit fit;
    if (sd < 1e-9) {
        fit.center = mean;
        fit.sigma = 1e-9;
        fit.fallback = true;
        return fit;
    }

    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    double width = (hi - lo) / n_bins;
    std::vector<double> x(n_bins), y(n_bins, 0.0);
    for (int b = 0; b < n_bins; b++) {
        x[b] = lo + (b + 0.5) * width;
    }
    for (double v : values) {
        int b = std::min(static_cast<int>((v - lo) / width), n_bins - 1);
        y[b] += 1.0;
    }

    // Levenberg-Marquardt on y = a exp(-(x-c)^2 / (2 w^2)).
    double a = *std::max_element(y.begin(), y.end());
    double c = mean;
    double w = sd;
    double lambda = 1e-3;
    auto residual_norm = [&](double pa, double pc, double pw) {
        double rss = 0.0;
        for (int b = 0; b < n_bins; b++) {
            double d = (x[b] - pc) / pw;
            double r = y[b] - pa * std::exp(-0.5 * d * d);
            rss += r * r;
        }
        return rss;
    };
    double rss = residual_norm(a, c, w);
    bool converged = false;
    Eigen::Matrix3d jtj_final = Eigen::Matrix3d::Zero();
    for (int iter = 0; iter < 200; iter++) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (int b = 0; b < n_bins; b++) {
            double d = (x[b] - c) / w;
            double e = std::exp(-0.5 * d * d);
            double r = y[b] - a * e;
            Eigen::Vector3d grad;  // d(model)/d(a, c, w)
            grad << e, a * e * d / w, a * e * d * d / w;
            jtj += grad * grad.transpose();
            jtr += grad * r;
        }
        jtj_final = jtj;
        Eigen::Matrix3d damped = jtj + lambda * Eigen::Matrix3d(jtj.diagonal().asDiagonal());
        Eigen::Vector3d step = damped.ldlt().solve(jtr);
        double na = a + step(0), nc = c + step(1), nw = w + step(2);
        if (nw == 0.0) {
            nw = w;
        }
        double nrss = residual_norm(na, nc, nw);
        if (nrss < rss) {
            double improvement = (rss - nrss) / std::max(rss, 1e-30);
            a = na;
            c = nc;
            w = nw;
            rss = nrss;
            lambda = std::max(lambda / 3.0, 1e-12);
            if (improvement < 1e-12 || step.norm() < 1e-10) {
                converged = true;
                break;
            }
        } else {
            lambda *= 3.0;
            if (lambda > 1e12) {
                break;
            }
        }
    }

    if (!converged || !std::isfinite(c) || !std::isfinite(w) || std::abs(w) < 1e-12 ||
        c < lo - (hi - lo) || c > hi + (hi - lo)) {
        fit.center = mean;
        fit.sigma = sd;
        fit.center_stderr = sd / std::sqrt(static_cast<double>(values.size()));
        fit.fit_residual = rss;
        fit.fallback = true;
        return fit;
    }
    fit.center = c;
    fit.sigma = std::abs(w);
    fit.fit_residual = rss;
    // Standard error of the center from the local quadratic model.
    double res_var = rss / std::max(n_bins - 3, 1);
    Eigen::Matrix3d cov = jtj_final.ldlt().solve(Eigen::Matrix3d::Identity()) * res_var;
    fit.center_stderr = std::sqrt(std::max(cov(1, 1), 0.0));
    return fit;
}

SampleSet bin_patterns(const SampleSet &samples, const BinningPartition &partition) {
    SampleSet out = samples;
    out.m = partition.subset_count();
    out.patterns.clear();
    out.patterns.reserve(samples.patterns.size());
    for (const auto &s : samples.patterns) {
        Pattern binned(partition.subset_count(), 0);
        for (int g = 0; g < partition.subset_count(); g++) {
            for (int mode : partition.subsets[g]) {
                binned[g] += s[mode];
            }
        }
        out.patterns.push_back(std::move(binned));
    }
    return out;
}

std::vector<std::vector<std::vector<int>>> set_partitions(int t) {
    if (t < 1 || t > 8) {
        throw invalid_parameter("set partitions supported for 1 <= t <= 8");
    }
    std::vector<std::vector<std::vector<int>>> result;
    std::vector<std::vector<int>> current;
    auto recurse = [&](auto &&self, int element) -> void {
        if (element == t) {
            result.push_back(current);
            return;
        }
        for (size_t b = 0; b < current.size(); b++) {
            current[b].push_back(element);
            self(self, element + 1);
            current[b].pop_back();
        }
        current.push_back({element});
        self(self, element + 1);
        current.pop_back();
    };
    recurse(recurse, 0);
    return result;
}

double correlator(const SampleSet &samples, const std::vector<int> &modes) {
    for (size_t i = 0; i < modes.size(); i++) {
        if (modes[i] < 0 || modes[i] >= samples.m) {
            throw invalid_parameter("correlator mode index out of range");
        }
        for (size_t j = i + 1; j < modes.size(); j++) {
            if (modes[i] == modes[j]) {
                throw invalid_parameter("correlator modes must be distinct");
            }
        }
    }
    int t = static_cast<int>(modes.size());
    // Empirical moments for every nonempty subset of the chosen modes.
    std::vector<double> moments(1ull << t, 0.0);
    for (const auto &s : samples.patterns) {
        for (uint32_t mask = 1; mask < (1u << t); mask++) {
            double prod = 1.0;
            for (int i = 0; i < t; i++) {
                if (mask & (1u << i)) {
                    prod *= s[modes[i]];
                }
            }
            moments[mask] += prod;
        }
    }
    for (auto &mval : moments) {
        mval /= static_cast<double>(samples.patterns.size());
    }

    double kappa = 0.0;
    for (const auto &partition : set_partitions(t)) {
        double term = 1.0;
        for (const auto &block : partition) {
            uint32_t mask = 0;
            for (int e : block) {
                mask |= 1u << e;
            }
            term *= moments[mask];
        }
        int blocks = static_cast<int>(partition.size());
        double factor = std::tgamma(blocks);  // (|pi| - 1)!
        kappa += ((blocks - 1) % 2 == 0 ? 1.0 : -1.0) * factor * term;
    }
    return kappa;
}

CorrelationReport gamma_deviation(const SampleSet &noise, const SampleSet &ideal, int order) {
    if (noise.m != ideal.m) {
        throw invalid_parameter("sample sets must share the mode count");
    }
    CorrelationReport report;
    report.order = order;

    std::vector<int> combo(order);
    std::iota(combo.begin(), combo.end(), 0);
    while (true) {
        report.combinations.push_back(combo);
        report.kappa_noise.push_back(correlator(noise, combo));
        report.kappa_ideal.push_back(correlator(ideal, combo));
        int i = order - 1;
        while (i >= 0 && combo[i] == noise.m - order + i) {
            i--;
        }
        if (i < 0) {
            break;
        }
        combo[i]++;
        for (int j = i + 1; j < order; j++) {
            combo[j] = combo[j - 1] + 1;
        }
    }

    double sum_noise = std::accumulate(report.kappa_noise.begin(), report.kappa_noise.end(), 0.0);
    double sum_ideal = std::accumulate(report.kappa_ideal.begin(), report.kappa_ideal.end(), 0.0);
    if (std::abs(sum_ideal) < 1e-300) {
        throw numerical_degeneracy("ideal correlator sum is zero; gamma is undefined");
    }
    report.gamma = sum_noise / sum_ideal;
    return report;
}

}  // namespace gbs
