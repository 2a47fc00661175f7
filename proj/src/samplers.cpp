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

#include "gbs/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gbs/errors.hpp"
#include "gbs/matchpoly.hpp"

namespace gbs {

namespace {

constexpr int kMaxRedraws = 100000;

bool is_zero_pattern(const Pattern &s) {
    return std::all_of(s.begin(), s.end(), [](int v) { return v == 0; });
}

int total_photons(const Pattern &s) {
    return std::accumulate(s.begin(), s.end(), 0);
}

// Runs `draw_one(rng) -> Pattern` per sample on its own stream, slot-ordered
// so the result is independent of the thread count.
template <typename DrawFn>
std::vector<Pattern> draw_per_stream(int n_samples, uint64_t seed, DrawFn &&draw_one) {
    std::vector<Pattern> out(n_samples);
#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < n_samples; i++) {
        RngStream rng(seed, static_cast<uint64_t>(i));
        out[i] = draw_one(rng);
    }
    return out;
}

}  // namespace

double SampleSet::mean_total_photons() const {
    if (patterns.empty()) {
        throw invalid_parameter("sample set is empty");
    }
    double total = 0.0;
    for (const auto &s : patterns) {
        total += total_photons(s);
    }
    return total / static_cast<double>(patterns.size());
}

Vector sample_heterodyne(const GaussianState &state, RngStream &rng) {
    int n = state.m;
    Matrix S(2 * n, 2 * n);
    S.setZero();
    S.topLeftCorner(n, n) = Matrix::Identity(n, n);
    S.topRightCorner(n, n) = Complex(0, 1) * Matrix::Identity(n, n);
    S.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
    S.bottomRightCorner(n, n) = Complex(0, -1) * Matrix::Identity(n, n);

    // Density in the real variables u = (x, y), beta = x + iy:
    // exp(-1/2 u^T F u) around the mean, F = Re(S^dag Q^{-1} S).
    Eigen::PartialPivLU<Matrix> lu(state.Q);
    Matrix Qinv = lu.solve(Matrix::Identity(2 * n, 2 * n));
    Eigen::MatrixXd F = (S.adjoint() * Qinv * S).real();
    F = ((F + F.transpose()) / 2.0).eval();

    Eigen::VectorXd mean = (S.adjoint() * state.alpha_bar / 2.0).real();

    Eigen::LLT<Eigen::MatrixXd> llt(F);
    if (llt.info() != Eigen::Success) {
        throw numerical_degeneracy("heterodyne precision matrix is not positive definite");
    }
    Eigen::VectorXd noise(2 * n);
    for (int i = 0; i < 2 * n; i++) {
        noise(i) = rng.normal();
    }
    // cov = F^{-1} = L^{-T} L^{-1}, so u = mean + L^{-T} noise.
    Eigen::VectorXd u = mean + llt.matrixU().solve(noise);

    Vector beta(n);
    for (int i = 0; i < n; i++) {
        beta(i) = Complex(u(i), u(i + n));
    }
    return beta;
}

namespace {

// One chain-rule draw; zero patterns are returned as-is. Returns false on a
// numerically degenerate auxiliary draw so the caller can retry.
bool chain_rule_draw(const GaussianState &state, int n_cutoff, RngStream &rng, Pattern &out) {
    int m = state.m;
    Vector aux(std::max(m - 1, 0));
    if (m > 1) {
        std::vector<int> tail_modes(m - 1);
        std::iota(tail_modes.begin(), tail_modes.end(), 1);
        aux = sample_heterodyne(reduce_state(state, tail_modes), rng);
    }

    Pattern s;
    s.reserve(m);
    for (int i = 0; i < m; i++) {
        std::vector<int> kept(i + 1);
        std::iota(kept.begin(), kept.end(), 0);
        std::vector<int> discarded(m - i - 1);
        std::iota(discarded.begin(), discarded.end(), i + 1);
        GaussianState cond =
            (i + 1 == m) ? state
                         : condition_on_heterodyne(state, kept, discarded, aux.segment(i, m - i - 1));
        StateProbability calc(cond);

        // pr(s_i = t | s_<i, alpha_>i) = joint(s_<i, t) / marginal(s_<i),
        // the marginal taken on the state with mode i traced out.
        double denominator = 1.0;
        if (i > 0) {
            std::vector<int> prefix_modes(i);
            std::iota(prefix_modes.begin(), prefix_modes.end(), 0);
            denominator = StateProbability(reduce_state(cond, prefix_modes)).prob(s);
        }
        if (denominator < 1e-300) {
            return false;
        }
        std::vector<double> weights(n_cutoff + 1);
        Pattern candidate = s;
        candidate.push_back(0);
        double sum = 0.0;
        for (int t = 0; t <= n_cutoff; t++) {
            candidate[i] = t;
            weights[t] = calc.prob(candidate) / denominator;
            sum += weights[t];
        }
        if (sum < 1e-300) {
            return false;
        }
        s.push_back(static_cast<int>(rng.sample_discrete(weights)));
    }
    out = std::move(s);
    return true;
}

// Chain-rule draw that keeps zero patterns (used for composite components).
Pattern chain_rule_allow_zero(const GaussianState &state, int n_cutoff, RngStream &rng) {
    Pattern s;
    for (int attempt = 0; attempt < kMaxRedraws; attempt++) {
        if (chain_rule_draw(state, n_cutoff, rng, s)) {
            return s;
        }
    }
    throw numerical_degeneracy("chain rule conditional probabilities underflowed");
}

}  // namespace

Pattern chain_rule_sample(const GaussianState &state, int n_cutoff, RngStream &rng) {
    Pattern s;
    for (int attempt = 0; attempt < kMaxRedraws; attempt++) {
        if (chain_rule_draw(state, n_cutoff, rng, s) && !is_zero_pattern(s)) {
            return s;
        }
    }
    throw numerical_degeneracy("chain rule produced only zero or degenerate patterns");
}

GaussianState lossy_state(const GaussianState &state, double eta_t) {
    if (eta_t < 0.0 || eta_t > 1.0) {
        throw invalid_parameter("transmission must lie in [0, 1]");
    }
    Matrix Q = eta_t * state.Q +
               (1.0 - eta_t) * Matrix::Identity(2 * state.m, 2 * state.m);
    return GaussianState(std::move(Q), std::sqrt(eta_t) * state.alpha_bar);
}

GaussianState ideal_output_state(const SqueezingSpec &spec, const Interferometer &itf) {
    if (spec.m != itf.m) {
        throw invalid_parameter("spec and interferometer mode counts differ");
    }
    return apply_interferometer(xp_to_q(build_input_covariance(spec)), itf);
}

SampleSet sample_ideal(const SqueezingSpec &spec, const Interferometer &itf,
                       int n_samples, int n_cutoff, uint64_t seed) {
    GaussianState out = ideal_output_state(spec, itf);
    SampleSet set;
    set.model = "ideal";
    set.r = spec.r;
    set.K = spec.K;
    set.m = spec.m;
    set.n_cutoff = n_cutoff;
    set.seed = seed;
    set.patterns = draw_per_stream(n_samples, seed, [&](RngStream &rng) {
        return chain_rule_sample(out, n_cutoff, rng);
    });
    return set;
}

SampleSet sample_lossy(const SqueezingSpec &spec, const Interferometer &itf, double eta_t,
                       int n_samples, int n_cutoff, uint64_t seed, LossMethod method) {
    if (eta_t < 0.0 || eta_t > 1.0) {
        throw invalid_parameter("transmission must lie in [0, 1]");
    }
    GaussianState ideal = ideal_output_state(spec, itf);
    SampleSet set;
    set.model = "loss";
    set.r = spec.r;
    set.K = spec.K;
    set.m = spec.m;
    set.eta = eta_t;
    set.n_cutoff = n_cutoff;
    set.seed = seed;

    if (method == LossMethod::Direct) {
        GaussianState lossy = lossy_state(ideal, eta_t);
        set.patterns = draw_per_stream(n_samples, seed, [&](RngStream &rng) {
            return chain_rule_sample(lossy, n_cutoff, rng);
        });
        return set;
    }
    set.patterns = draw_per_stream(n_samples, seed, [&](RngStream &rng) {
        for (int attempt = 0; attempt < kMaxRedraws; attempt++) {
            Pattern source = chain_rule_sample(ideal, n_cutoff, rng);
            Pattern thinned(source.size());
            for (size_t i = 0; i < source.size(); i++) {
                thinned[i] = rng.binomial(source[i], eta_t);
            }
            if (!is_zero_pattern(thinned)) {
                return thinned;
            }
        }
        throw numerical_degeneracy("thinning produced only zero patterns");
    });
    return set;
}

SampleSet sample_distinguishable(const SqueezingSpec &spec, const Interferometer &itf,
                                 double eta_ind, int n_samples, int n_cutoff, uint64_t seed) {
    auto [actual_cov, virtual_covs] = distinguishable_covariances(spec, eta_ind);
    GaussianState actual = apply_interferometer(xp_to_q(actual_cov), itf);
    std::vector<GaussianState> virtuals;
    virtuals.reserve(virtual_covs.size());
    for (const auto &cov : virtual_covs) {
        virtuals.push_back(apply_interferometer(xp_to_q(cov), itf));
    }

    SampleSet set;
    set.model = "distinguishable";
    set.r = spec.r;
    set.K = spec.K;
    set.m = spec.m;
    set.eta = eta_ind;
    set.n_cutoff = n_cutoff;
    set.seed = seed;
    set.patterns = draw_per_stream(n_samples, seed, [&](RngStream &rng) {
        for (int attempt = 0; attempt < kMaxRedraws; attempt++) {
            // One actual pattern plus K virtual ones, summed elementwise.
            // Component draws allow zero outcomes; only the sum is screened.
            Pattern sum = chain_rule_allow_zero(actual, n_cutoff, rng);
            bool overflow = false;
            for (const auto &virt : virtuals) {
                Pattern extra = chain_rule_allow_zero(virt, n_cutoff, rng);
                for (size_t j = 0; j < sum.size(); j++) {
                    sum[j] += extra[j];
                    if (sum[j] > n_cutoff) {
                        overflow = true;
                    }
                }
                if (overflow) {
                    break;
                }
            }
            if (!overflow && !is_zero_pattern(sum)) {
                return sum;
            }
        }
        throw numerical_degeneracy("composite sampler kept rejecting patterns");
    });
    return set;
}

ProbabilityTable thermal_probabilities(const SqueezingSpec &spec, const Interferometer &itf,
                                       int n_cutoff) {
    double mean_n = std::sinh(spec.r) * std::sinh(spec.r);
    Matrix D = Matrix::Zero(spec.m, spec.m);
    for (int j = 0; j < spec.K; j++) {
        D += (mean_n / (1.0 + mean_n)) * itf.T.col(j) * itf.T.col(j).adjoint();
    }
    double norm = std::pow(1.0 + mean_n, spec.K);

    uint64_t count = 1;
    for (int i = 0; i < spec.m; i++) {
        count *= static_cast<uint64_t>(n_cutoff) + 1;
        if (count > enumeration_budget()) {
            throw resource_limit("thermal table exceeds the enumeration budget");
        }
    }
    std::vector<double> probs(count);
#pragma omp parallel for schedule(dynamic, 16)
    for (int64_t idx = 0; idx < static_cast<int64_t>(count); idx++) {
        Pattern s = pattern_from_index(idx, spec.m, n_cutoff);
        std::vector<int> rows;
        for (int i = 0; i < spec.m; i++) {
            for (int c = 0; c < s[i]; c++) {
                rows.push_back(i);
            }
        }
        Matrix Ds(rows.size(), rows.size());
        for (size_t a = 0; a < rows.size(); a++) {
            for (size_t b = 0; b < rows.size(); b++) {
                Ds(a, b) = D(rows[a], rows[b]);
            }
        }
        double factorials = 1.0;
        for (int v : s) {
            factorials *= std::tgamma(v + 1.0);
        }
        probs[idx] = std::max(std::real(permanent(Ds)) / (factorials * norm), 0.0);
    }

    ProbabilityTable table;
    table.m = spec.m;
    table.n_cutoff = n_cutoff;
    for (uint64_t idx = 0; idx < count; idx++) {
        table.entries[pattern_from_index(idx, spec.m, n_cutoff)] = probs[idx];
    }
    table.truncation_deficit = 1.0 - table.total_mass();
    return table;
}

SampleSet sample_thermal(const SqueezingSpec &spec, const Interferometer &itf,
                         int n_samples, int n_cutoff, uint64_t seed) {
    ProbabilityTable table = exclude_zero_and_normalize(thermal_probabilities(spec, itf, n_cutoff));
    SampleSet set = categorical_sample(table, n_samples, seed);
    set.model = "thermal";
    set.r = spec.r;
    set.K = spec.K;
    return set;
}

SampleSet sample_coherent(const SqueezingSpec &spec, const Interferometer &itf, double theta,
                          int n_samples, int n_cutoff, uint64_t seed) {
    double mean_n = std::sinh(spec.r) * std::sinh(spec.r);
    if (mean_n <= 0.0) {
        throw numerical_degeneracy("coherent mockup with zero mean photons only yields vacuum");
    }
    Vector alpha = Vector::Zero(spec.m);
    for (int j = 0; j < spec.K; j++) {
        alpha(j) = std::sqrt(mean_n) * std::exp(Complex(0.0, theta));
    }
    Vector beta = itf.T.transpose() * alpha;

    SampleSet set;
    set.model = "coherent";
    set.r = spec.r;
    set.K = spec.K;
    set.m = spec.m;
    set.theta = theta;
    set.n_cutoff = n_cutoff;
    set.seed = seed;
    set.patterns = draw_per_stream(n_samples, seed, [&](RngStream &rng) {
        for (int attempt = 0; attempt < kMaxRedraws; attempt++) {
            Pattern s(spec.m);
            bool in_range = true;
            for (int i = 0; i < spec.m; i++) {
                s[i] = rng.poisson(std::norm(beta(i)));
                if (s[i] > n_cutoff) {
                    in_range = false;
                }
            }
            if (in_range && !is_zero_pattern(s)) {
                return s;
            }
        }
        throw numerical_degeneracy("coherent mockup kept rejecting patterns");
    });
    return set;
}

SampleSet sample_squashed(const SqueezingSpec &spec, const Interferometer &itf,
                          int n_samples, int n_cutoff, uint64_t seed) {
    double mean_n = std::sinh(spec.r) * std::sinh(spec.r);
    if (mean_n <= 0.0) {
        throw numerical_degeneracy("squashed mockup with zero mean photons only yields vacuum");
    }
    RealMatrix V = RealMatrix::Identity(2 * spec.m, 2 * spec.m);
    for (int i = 0; i < spec.K; i++) {
        V(i, i) = 1.0 + 4.0 * mean_n;
    }
    GaussianState out = apply_interferometer(xp_to_q(XpCovariance(V)), itf);

    SampleSet set;
    set.model = "squashed";
    set.r = spec.r;
    set.K = spec.K;
    set.m = spec.m;
    set.n_cutoff = n_cutoff;
    set.seed = seed;
    set.patterns = draw_per_stream(n_samples, seed, [&](RngStream &rng) {
        return chain_rule_sample(out, n_cutoff, rng);
    });
    return set;
}

SampleSet categorical_sample(const ProbabilityTable &table, int n_samples, uint64_t seed) {
    if (!table.normalized || !table.zero_excluded) {
        throw invalid_parameter("categorical sampling requires a zero-excluded normalized table");
    }
    std::vector<const Pattern *> patterns;
    std::vector<double> cdf;
    patterns.reserve(table.entries.size());
    cdf.reserve(table.entries.size());
    double acc = 0.0;
    for (const auto &[s, p] : table.entries) {
        acc += p;
        patterns.push_back(&s);
        cdf.push_back(acc);
    }

    SampleSet set;
    set.model = "categorical";
    set.m = table.m;
    set.n_cutoff = table.n_cutoff;
    set.seed = seed;
    set.patterns = draw_per_stream(n_samples, seed, [&](RngStream &rng) {
        double u = rng.uniform() * acc;
        size_t idx = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        if (idx >= patterns.size()) {
            idx = patterns.size() - 1;
        }
        return *patterns[idx];
    });
    return set;
}

double mean_photon_ratio(const SampleSet &samples, const SampleSet &reference) {
    return samples.mean_total_photons() / reference.mean_total_photons();
}

}  // namespace gbs
