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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the exit code is the number of failed criteria.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gbs/io.hpp"
#include "gbs/matchpoly.hpp"
#include "gbs/oracle.hpp"
#include "gbs/rng.hpp"
#include "gbs/samplers.hpp"
#include "gbs/validation.hpp"

using namespace gbs;

namespace {

int failures = 0;

void report(const std::string &id, bool ok, const std::string &detail) {
    std::printf("%-4s %s: %s\n", id.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) {
        failures++;
    }
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

Matrix random_symmetric(int n, RngStream &rng) {
    Matrix M(n, n);
    for (int i = 0; i < n; i++) {
        for (int j = i; j < n; j++) {
            M(i, j) = Complex(rng.normal(), rng.normal()) * 0.5;
            M(j, i) = M(i, j);
        }
    }
    return M;
}

std::map<Pattern, double> frequencies(const std::vector<Pattern> &patterns) {
    std::map<Pattern, double> freq;
    for (const auto &s : patterns) {
        freq[s] += 1.0 / patterns.size();
    }
    return freq;
}

// Top patterns of a normalized table by probability, lexicographic tiebreak.
std::vector<std::pair<Pattern, double>> top_patterns(const ProbabilityTable &table, int k) {
    std::vector<std::pair<Pattern, double>> all(table.entries.begin(), table.entries.end());
    std::sort(all.begin(), all.end(), [](const auto &a, const auto &b) {
        if (a.second != b.second) {
            return a.second > b.second;
        }
        return a.first < b.first;
    });
    if (static_cast<int>(all.size()) > k) {
        all.resize(k);
    }
    return all;
}

// Largest violation of |freq - p| <= 5 sqrt(p(1-p)/n) over the given patterns.
double worst_sigma_ratio(const std::vector<std::pair<Pattern, double>> &expected,
                         const std::map<Pattern, double> &freq, double n) {
    double worst = 0.0;
    for (const auto &[s, p] : expected) {
        auto it = freq.find(s);
        double f = it == freq.end() ? 0.0 : it->second;
        double sigma = std::sqrt(p * (1.0 - p) / n);
        worst = std::max(worst, std::abs(f - p) / sigma);
    }
    return worst;
}

bool strictly_monotone(const std::vector<double> &v) {
    bool inc = true, dec = true;
    for (size_t i = 1; i < v.size(); i++) {
        inc = inc && v[i] > v[i - 1];
        dec = dec && v[i] < v[i - 1];
    }
    return inc || dec;
}

// 99th percentile of chi-square with df degrees of freedom (Wilson-Hilferty).
double chi2_critical_99(double df) {
    double z = 2.3263478740408408;
    double a = 2.0 / (9.0 * df);
    double c = 1.0 - a + z * std::sqrt(a);
    return df * c * c * c;
}

std::string format(const char *fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    return buf;
}

}  // namespace

int main() {
    // --- A1: sieve vs reference loop hafnian on random cases ---
    {
        double t0 = now_seconds();
        RngStream rng(101, 0);
        double worst = 0.0;
        int cases = 0;
        for (int trial = 0; trial < 120; trial++) {
            int dim = 2 + static_cast<int>(rng.uniform() * 3);  // 2..4 indices
            Matrix M = random_symmetric(dim, rng);
            bool displaced = trial % 2 == 1;
            Vector mu = Vector::Zero(dim);
            if (displaced) {
                for (int i = 0; i < dim; i++) {
                    mu(i) = Complex(rng.normal(), rng.normal()) * 0.5;
                }
            }
            for (int rep = 0; rep < 2; rep++) {
                std::vector<int> counts(dim, 0);
                int total = 0;
                while (total < 4 + static_cast<int>(rng.uniform() * 7)) {  // N <= 10
                    int i = static_cast<int>(rng.uniform() * dim);
                    counts[i]++;
                    total++;
                }
                Complex fast = lhaf_repeated(M, counts, mu);
                Complex slow = lhaf_repeated_reference(M, counts, mu);
                // Odd undisplaced cases are exactly zero; compare absolutely there.
                double rel = std::abs(slow) < 1e-12
                                 ? std::abs(fast - slow) * 1e3
                                 : std::abs(fast - slow) / std::abs(slow);
                worst = std::max(worst, rel);
                cases++;
            }
        }
        double dt = now_seconds() - t0;
        report("A1", worst < 1e-6 && cases >= 200 && dt < 60.0,
               format("%d sieve-vs-reference cases, worst rel err %.2e, %.1fs", cases,
                      worst, dt));
    }

    // --- A2: permanent vs embedded hafnian ---
    {
        RngStream rng(102, 0);
        double worst = 0.0;
        for (int trial = 0; trial < 100; trial++) {
            int n = 2 + trial % 4;  // 2..5
            Matrix G(n, n);
            for (int i = 0; i < n; i++) {
                for (int j = 0; j < n; j++) {
                    G(i, j) = Complex(rng.normal(), rng.normal());
                }
            }
            Matrix big = Matrix::Zero(2 * n, 2 * n);
            big.topRightCorner(n, n) = G;
            big.bottomLeftCorner(n, n) = G.transpose();
            Complex haf = hafnian_reference(SymmetricComplexMatrix(big));
            Complex perm = permanent(G);
            worst = std::max(worst, std::abs(haf - perm) / std::abs(perm));
        }
        report("A2", worst < 1e-10,
               format("100 permanent embeddings, worst rel err %.2e", worst));
    }

    // --- A3: analytic single-mode squeezed vacuum ---
    {
        SqueezingSpec single(1, 1, 0.5);
        ProbabilityTable table = enumerate_ideal(xp_to_q(build_input_covariance(single)), 4);
        double r = 0.5;
        double t = std::tanh(r), c = std::cosh(r);
        double p0 = 1.0 / c;
        double p2 = t * t / (2.0 * c);
        double p4 = 3.0 * t * t * t * t / (8.0 * c);
        double worst = std::abs(table.entries.at({0}) - p0);
        worst = std::max(worst, std::abs(table.entries.at({2}) - p2));
        worst = std::max(worst, std::abs(table.entries.at({4}) - p4));
        worst = std::max(worst, std::abs(table.entries.at({1})));
        worst = std::max(worst, std::abs(table.entries.at({3})));
        report("A3", worst < 1e-10,
               format("p(0)=%.5f p(2)=%.5f, worst abs err %.2e", table.entries.at({0}),
                      table.entries.at({2}), worst));
    }

    // Shared small-scale configuration (five modes, all squeezed).
    SqueezingSpec spec5(5, 5, 0.5);
    Interferometer itf5 = haar_unitary(5, 1001);
    GaussianState out5 = ideal_output_state(spec5, itf5);
    ProbabilityTable ideal5 = enumerate_ideal(out5, 4);
    const std::vector<double> grid = {1.0, 0.975, 0.95, 0.925, 0.9};

    std::fprintf(stderr, "[acceptance] sampling small-scale boxes...\n");
    SampleSet bona5 = sample_ideal(spec5, itf5, 10000, 4, 2001);
    SampleSet train5 = sample_ideal(spec5, itf5, 3000, 4, 2002);
    SampleSet ideal_test5 = sample_ideal(spec5, itf5, 10000, 4, 2003);

    // --- A4: ideal sampler vs enumerated table ---
    {
        double t0 = now_seconds();
        ProbabilityTable norm = exclude_zero_and_normalize(ideal5);
        auto top = top_patterns(norm, 20);
        double worst = worst_sigma_ratio(top, frequencies(bona5.patterns), 10000.0);
        double dt = now_seconds() - t0;
        report("A4", worst <= 5.0,
               format("top-20 worst deviation %.2f sigma (10^4 samples, %.0fs incl. prep)",
                      worst, dt));
    }

    // --- A5: lossy table vs direct and thinning samplers ---
    SampleSet loss_direct9 = sample_lossy(spec5, itf5, 0.9, 10000, 4, 2010);
    {
        SampleSet thinning9 =
            sample_lossy(spec5, itf5, 0.9, 10000, 4, 2030, LossMethod::Thinning);
        ProbabilityTable lossy =
            exclude_zero_and_normalize(lossy_probabilities(ideal5, 0.9));
        auto top = top_patterns(lossy, 20);
        double worst_direct = worst_sigma_ratio(top, frequencies(loss_direct9.patterns), 10000.0);
        double worst_thin = worst_sigma_ratio(top, frequencies(thinning9.patterns), 10000.0);
        // Two-sample contingency test over patterns with enough pooled counts.
        std::map<Pattern, std::array<int, 2>> counts;
        for (const auto &s : loss_direct9.patterns) counts[s][0]++;
        for (const auto &s : thinning9.patterns) counts[s][1]++;
        double chi2 = 0.0;
        int df = -1;
        int other[2] = {0, 0};
        for (const auto &[s, c] : counts) {
            if (c[0] + c[1] >= 10) {
                double row = c[0] + c[1];
                for (int j = 0; j < 2; j++) {
                    double e = row / 2.0;
                    chi2 += (c[j] - e) * (c[j] - e) / e;
                }
                df++;
            } else {
                other[0] += c[0];
                other[1] += c[1];
            }
        }
        if (other[0] + other[1] >= 10) {
            double row = other[0] + other[1];
            for (int j = 0; j < 2; j++) {
                double e = row / 2.0;
                chi2 += (other[j] - e) * (other[j] - e) / e;
            }
            df++;
        }
        double crit = chi2_critical_99(df);
        report("A5",
               worst_direct <= 5.0 && worst_thin <= 5.0 && chi2 < crit,
               format("direct %.2f sigma, thinning %.2f sigma, two-sample chi2 %.1f < %.1f "
                      "(df=%d)",
                      worst_direct, worst_thin, chi2, crit, df));
    }

    // --- A6: distinguishability marginals, n_max = 1 ---
    {
        SqueezingSpec spec_d(5, 5, 0.3);
        double eta_ind = 0.9;
        auto [actual_cov, virtual_covs] = distinguishable_covariances(spec_d, eta_ind);
        // Component patterns above 1 in any mode cannot contribute to final
        // patterns with n_max = 1, so cutoff-1 component tables are exact here.
        ProbabilityTable actual =
            enumerate_ideal(apply_interferometer(xp_to_q(actual_cov), itf5), 1);
        std::vector<ProbabilityTable> virtuals;
        for (const auto &cov : virtual_covs) {
            virtuals.push_back(enumerate_ideal(apply_interferometer(xp_to_q(cov), itf5), 1));
        }
        ProbabilityTable marginal = distinguishable_probabilities(actual, virtuals, 1);
        SampleSet samples = sample_distinguishable(spec_d, itf5, eta_ind, 10000, 4, 2040);
        std::vector<Pattern> kept;
        for (const auto &s : samples.patterns) {
            if (*std::max_element(s.begin(), s.end()) <= 1) {
                kept.push_back(s);
            }
        }
        auto top = top_patterns(marginal, static_cast<int>(marginal.entries.size()));
        double worst = worst_sigma_ratio(top, frequencies(kept),
                                         static_cast<double>(kept.size()));
        report("A6", worst <= 5.0,
               format("marginal worst deviation %.2f sigma over %zu patterns (%zu samples "
                      "kept)",
                      worst, top.size(), kept.size()));
    }

    // --- A7: structure monotonicity across the noise grids ---
    {
        std::vector<double> top10, mean_l2, short_mass, long_mass;
        for (double eta : grid) {
            ProbabilityTable t = eta < 1.0 ? lossy_probabilities(ideal5, eta) : ideal5;
            StructureStats st = structure_stats(exclude_zero_and_normalize(t), 10, 0.0, 3.0);
            top10.push_back(st.top_k_mass);
            mean_l2.push_back(st.mean_l2);
            short_mass.push_back(st.short_tail_mass);
            long_mass.push_back(st.long_tail_mass);
        }
        bool loss_ok = top10.front() > top10.back() && strictly_monotone(top10) &&
                       strictly_monotone(mean_l2) && strictly_monotone(short_mass) &&
                       strictly_monotone(long_mass);

        SqueezingSpec spec_d(3, 5, 0.15);
        ProbabilityTable ideal_d = enumerate_ideal(ideal_output_state(spec_d, itf5), 2);
        std::vector<double> top10_d, mean_l2_d, short_d, long_d;
        for (double eta : grid) {
            ProbabilityTable t;
            if (eta == 1.0) {
                t = ideal_d;
            } else {
                auto [acov, vcovs] = distinguishable_covariances(spec_d, eta);
                ProbabilityTable actual =
                    enumerate_ideal(apply_interferometer(xp_to_q(acov), itf5), 2);
                std::vector<ProbabilityTable> virtuals;
                for (const auto &cov : vcovs) {
                    virtuals.push_back(
                        enumerate_ideal(apply_interferometer(xp_to_q(cov), itf5), 2));
                }
                t = distinguishable_probabilities(actual, virtuals, 2);
            }
            StructureStats st = structure_stats(exclude_zero_and_normalize(t), 10, 0.0, 2.0);
            top10_d.push_back(st.top_k_mass);
            mean_l2_d.push_back(st.mean_l2);
            short_d.push_back(st.short_tail_mass);
            long_d.push_back(st.long_tail_mass);
        }
        bool dist_ok = top10_d.front() > top10_d.back() && strictly_monotone(top10_d) &&
                       strictly_monotone(mean_l2_d) && strictly_monotone(short_d) &&
                       strictly_monotone(long_d);
        report("A7", loss_ok && dist_ok,
               format("loss top10 %.4f..%.4f (%s), dist top10 %.4f..%.4f (%s)", top10.front(),
                      top10.back(), loss_ok ? "monotone" : "NOT monotone", top10_d.front(),
                      top10_d.back(), dist_ok ? "monotone" : "NOT monotone"));
    }

    // --- A8: validation monotonicity on both noise grids ---
    ClusterModel model5 = train_clusters(train5, 150, 5001);
    {
        std::fprintf(stderr, "[acceptance] A8 lossy grid...\n");
        std::vector<double> xc, stderrs;
        for (size_t i = 0; i < grid.size(); i++) {
            SampleSet test = grid[i] == 1.0
                                 ? ideal_test5
                                 : (grid[i] == 0.9 ? loss_direct9
                                                   : sample_lossy(spec5, itf5, grid[i], 10000,
                                                                  4, 2010 + i));
            ChiSquareRun run = sample_box_run(model5, bona5, test, 10000, 1000, 6001 + i);
            PeakFit fit = fit_gaussian_peak(run);
            xc.push_back(fit.center);
            stderrs.push_back(std::max(fit.center_stderr, 1e-9));
        }
        bool sep = true;
        for (size_t i = 1; i < xc.size(); i++) {
            // grid descends in eta, so X_c must ascend.
            sep = sep && xc[i] > xc[i - 1] &&
                  xc[i] - xc[i - 1] > 2.0 * std::max(stderrs[i], stderrs[i - 1]);
        }
        std::fprintf(stderr, "[acceptance] A8 distinguishability grid...\n");
        std::vector<double> xc_d, stderrs_d;
        for (size_t i = 0; i < grid.size(); i++) {
            SampleSet test =
                grid[i] == 1.0
                    ? ideal_test5
                    : sample_distinguishable(spec5, itf5, grid[i], 10000, 4, 2020 + i);
            ChiSquareRun run = sample_box_run(model5, bona5, test, 10000, 1000, 6011 + i);
            PeakFit fit = fit_gaussian_peak(run);
            xc_d.push_back(fit.center);
            stderrs_d.push_back(std::max(fit.center_stderr, 1e-9));
        }
        bool sep_d = true;
        for (size_t i = 1; i < xc_d.size(); i++) {
            sep_d = sep_d && xc_d[i] > xc_d[i - 1] &&
                    xc_d[i] - xc_d[i - 1] > 2.0 * std::max(stderrs_d[i], stderrs_d[i - 1]);
        }
        report("A8", sep && sep_d,
               format("X_c loss %.1f..%.1f (%s), dist %.1f..%.1f (%s)", xc.front(), xc.back(),
                      sep ? "separated" : "NOT separated", xc_d.front(), xc_d.back(),
                      sep_d ? "separated" : "NOT separated"));
    }

    // --- A9: pair-binned validation on the ten-mode configuration ---
    {
        std::fprintf(stderr, "[acceptance] A9 ten-mode sampling...\n");
        SqueezingSpec spec10(10, 10, 0.2);
        Interferometer itf10 = haar_unitary(10, 1002);
        SampleSet bona10 = sample_ideal(spec10, itf10, 100000, 3, 3001);
        SampleSet train10 = sample_ideal(spec10, itf10, 20000, 3, 3002);

        std::vector<std::vector<int>> pair_groups;
        for (int g = 0; g < 5; g++) {
            pair_groups.push_back({2 * g, 2 * g + 1});
        }
        BinningPartition pairs(pair_groups, 10);

        SampleSet bona_binned = bin_patterns(bona10, pairs);
        bona_binned.patterns.resize(10000);
        SampleSet train_binned = bin_patterns(train10, pairs);
        train_binned.patterns.resize(3000);

        std::fprintf(stderr, "[acceptance] A9 binned grid...\n");
        double binned_t0 = now_seconds();
        ClusterModel model_binned = train_clusters(train_binned, 100, 5002);
        std::vector<double> xc;
        for (size_t i = 0; i < grid.size(); i++) {
            SampleSet test = grid[i] == 1.0
                                 ? sample_ideal(spec10, itf10, 10000, 3, 3010)
                                 : sample_lossy(spec10, itf10, grid[i], 10000, 3, 3010 + i);
            SampleSet test_binned = bin_patterns(test, pairs);
            ChiSquareRun run =
                sample_box_run(model_binned, bona_binned, test_binned, 10000, 1000, 6021 + i);
            xc.push_back(fit_gaussian_peak(run).center);
        }
        double binned_wall = now_seconds() - binned_t0;
        bool monotone = true;
        for (size_t i = 1; i < xc.size(); i++) {
            monotone = monotone && xc[i] > xc[i - 1];
        }

        // Unbinned run at the published validation scale, for the wall-time
        // comparison (sampling cost excluded from both sides).
        std::fprintf(stderr, "[acceptance] A9 unbinned timing run...\n");
        double unbinned_t0 = now_seconds();
        ClusterModel model10 = train_clusters(train10, 700, 5003);
        ChiSquareRun null_run = sample_box_run(model10, bona10, bona10, 10000, 1000, 6031);
        (void)fit_gaussian_peak(null_run);
        double unbinned_wall = now_seconds() - unbinned_t0;

        // Binned validation wall time, same protocol minus sampling.
        double t0 = now_seconds();
        ClusterModel mb = train_clusters(train_binned, 100, 5002);
        SampleSet probe = bona_binned;
        ChiSquareRun rb = sample_box_run(mb, bona_binned, probe, 10000, 1000, 6032);
        (void)fit_gaussian_peak(rb);
        double binned_core = now_seconds() - t0;

        report("A9", monotone && binned_core < 0.25 * unbinned_wall,
               format("binned X_c %.1f..%.1f (%s), walls: binned %.1fs vs unbinned %.1fs "
                      "(grid stage %.0fs)",
                      xc.front(), xc.back(), monotone ? "monotone" : "NOT monotone",
                      binned_core, unbinned_wall, binned_wall));
    }

    // --- A10: correlators and the Gamma deviation ---
    {
        std::fprintf(stderr, "[acceptance] A10 correlators...\n");
        const std::vector<double> etas = {0.5, 0.7, 0.9, 1.0};
        ProbabilityTable ideal_norm = exclude_zero_and_normalize(ideal5);
        SampleSet ideal_draw = categorical_sample(ideal_norm, 500000, 4010);
        ideal_draw.m = 5;

        std::vector<SampleSet> noise_draws;
        for (size_t i = 0; i < etas.size(); i++) {
            ProbabilityTable t = etas[i] < 1.0
                                     ? exclude_zero_and_normalize(
                                           lossy_probabilities(ideal5, etas[i]))
                                     : ideal_norm;
            SampleSet draw = categorical_sample(t, 500000, 4000 + i);
            draw.m = 5;
            noise_draws.push_back(std::move(draw));
        }

        CorrelationReport self = gamma_deviation(ideal_draw, ideal_draw, 2);
        bool self_ok = std::abs(self.gamma - 1.0) <= 0.02;

        bool monotone_all = true;
        std::string gammas;
        for (int t = 1; t <= 4; t++) {
            std::vector<double> gamma_by_eta;
            for (size_t i = 0; i < etas.size(); i++) {
                CorrelationReport rep = gamma_deviation(noise_draws[i], ideal_draw, t);
                gamma_by_eta.push_back(rep.gamma);
            }
            monotone_all = monotone_all && strictly_monotone(gamma_by_eta);
            gammas += format(" t=%d:%.3f..%.3f", t, gamma_by_eta.front(),
                             gamma_by_eta.back());
        }

        // t=2 cumulant equals the plain sample covariance.
        double kappa = correlator(ideal_draw, {0, 1});
        double m0 = 0.0, m1 = 0.0, m01 = 0.0;
        for (const auto &s : ideal_draw.patterns) {
            m0 += s[0];
            m1 += s[1];
            m01 += static_cast<double>(s[0]) * s[1];
        }
        double n = ideal_draw.n_samples();
        double cov = m01 / n - (m0 / n) * (m1 / n);
        bool cov_ok = std::abs(kappa - cov) < 1e-12;

        report("A10", self_ok && monotone_all && cov_ok,
               format("self gamma %.4f, monotone %s,%s, cov diff %.1e", self.gamma,
                      monotone_all ? "yes" : "NO", gammas.c_str(), std::abs(kappa - cov)));
    }

    // --- A11: mockup separation under pattern recognition ---
    {
        std::fprintf(stderr, "[acceptance] A11 mockups...\n");
        ChiSquareRun null_run =
            sample_box_run(model5, bona5, ideal_test5, 10000, 1000, 6001);
        PeakFit null_fit = fit_gaussian_peak(null_run);

        bool all_sep = true;
        std::string centers = format("ideal %.1f+-%.1f", null_fit.center, null_fit.sigma);
        SampleSet mockups[3] = {
            sample_thermal(spec5, itf5, 10000, 4, 2050),
            sample_coherent(spec5, itf5, 0.0, 10000, 4, 2051),
            sample_squashed(spec5, itf5, 10000, 4, 2052),
        };
        for (const auto &mock : mockups) {
            ChiSquareRun run = sample_box_run(model5, bona5, mock, 10000, 1000, 6041);
            PeakFit fit = fit_gaussian_peak(run);
            all_sep = all_sep && fit.center > null_fit.center + 5.0 * null_fit.sigma;
            centers += format(", %s %.1f", mock.model.c_str(), fit.center);
        }
        report("A11", all_sep, centers);
    }

    // --- A12: determinism across thread counts and re-runs ---
    {
        int max_threads = omp_get_max_threads();
        omp_set_num_threads(1);
        SampleSet s1 = sample_ideal(spec5, itf5, 500, 4, 7001);
        ProbabilityTable t1 = enumerate_ideal(out5, 3);
        ChiSquareRun r1 = sample_box_run(model5, bona5, ideal_test5, 200, 500, 7002);
        omp_set_num_threads(4);
        SampleSet s4 = sample_ideal(spec5, itf5, 500, 4, 7001);
        ProbabilityTable t4 = enumerate_ideal(out5, 3);
        ChiSquareRun r4 = sample_box_run(model5, bona5, ideal_test5, 200, 500, 7002);
        omp_set_num_threads(max_threads);
        bool threads_ok = s1.patterns == s4.patterns && r1.chi2_values == r4.chi2_values;
        double table_dev = 0.0;
        for (const auto &[s, p] : t1.entries) {
            table_dev = std::max(table_dev, std::abs(p - t4.entries.at(s)));
        }
        threads_ok = threads_ok && table_dev == 0.0;

        // Byte-identical serialization on re-run.
        std::string pa = "/tmp/gbsim_acc_a.ndjson", pb = "/tmp/gbsim_acc_b.ndjson";
        save_sample_set(s1, pa, fnv1a_hex("acc"));
        save_sample_set(s4, pb, fnv1a_hex("acc"));
        std::ifstream fa(pa), fb(pb);
        std::stringstream ba, bb;
        ba << fa.rdbuf();
        bb << fb.rdbuf();
        bool bytes_ok = ba.str() == bb.str();
        std::remove(pa.c_str());
        std::remove(pb.c_str());
        report("A12", threads_ok && bytes_ok,
               format("threads 1 vs 4 %s, serialization %s",
                      threads_ok ? "identical" : "DIFFER",
                      bytes_ok ? "byte-identical" : "DIFFERS"));
    }

    std::printf("%d/12 criteria passed\n", 12 - failures);
    return failures;
}
