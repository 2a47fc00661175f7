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

#include "gbs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "gbs/errors.hpp"
#include "gbs/matchpoly.hpp"

namespace gbs {

namespace {

double binomial_coeff(int n, int k) {
    double value = 1.0;
    for (int i = 0; i < k; i++) {
        value *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    }
    return value;
}

bool is_zero_pattern(const Pattern &s) {
    return std::all_of(s.begin(), s.end(), [](int v) { return v == 0; });
}

}  // namespace

double ProbabilityTable::total_mass() const {
    double total = 0.0;
    for (const auto &[pattern, p] : entries) {
        total += p;
    }
    return total;
}

BinningPartition::BinningPartition(std::vector<std::vector<int>> groups, int m)
    : subsets(std::move(groups)) {
    std::vector<bool> seen(m, false);
    for (const auto &subset : subsets) {
        if (subset.empty()) {
            throw invalid_parameter("binning partition must have no empty subset");
        }
        for (int mode : subset) {
            if (mode < 0 || mode >= m || seen[mode]) {
                throw invalid_parameter("binning partition must be disjoint and cover all modes");
            }
            seen[mode] = true;
        }
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
        throw invalid_parameter("binning partition must cover every mode");
    }
}

uint64_t enumeration_budget() {
    if (const char *env = std::getenv("GBS_BUDGET")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 1000000;
}

Pattern pattern_from_index(uint64_t idx, int m, int n_cutoff) {
    Pattern s(m);
    uint64_t base = static_cast<uint64_t>(n_cutoff) + 1;
    for (int i = 0; i < m; i++) {
        s[i] = static_cast<int>(idx % base);
        idx /= base;
    }
    return s;
}

ProbabilityTable enumerate_ideal(const GaussianState &state, int n_cutoff, uint64_t budget) {
    uint64_t count = 1;
    for (int i = 0; i < state.m; i++) {
        count *= static_cast<uint64_t>(n_cutoff) + 1;
        if (count > budget) {
            throw resource_limit("pattern count exceeds the enumeration budget");
        }
    }
    if (!state.is_physical()) {
        throw invalid_parameter("state is not physical: Q eigenvalue below 1/2");
    }

    StateProbability calc(state);
    std::vector<double> probs(count);
#pragma omp parallel for schedule(dynamic, 16)
    for (int64_t idx = 0; idx < static_cast<int64_t>(count); idx++) {
        probs[idx] = calc.prob(pattern_from_index(idx, state.m, n_cutoff));
    }

    ProbabilityTable table;
    table.m = state.m;
    table.n_cutoff = n_cutoff;
    for (uint64_t idx = 0; idx < count; idx++) {
        table.entries[pattern_from_index(idx, state.m, n_cutoff)] = probs[idx];
    }
    table.truncation_deficit = 1.0 - table.total_mass();
    return table;
}

ProbabilityTable lossy_probabilities(const ProbabilityTable &ideal, double eta_t) {
    if (eta_t < 0.0 || eta_t > 1.0) {
        throw invalid_parameter("transmission must lie in [0, 1]");
    }
    ProbabilityTable out;
    out.m = ideal.m;
    out.n_cutoff = ideal.n_cutoff;
    for (const auto &[s, unused] : ideal.entries) {
        out.entries[s] = 0.0;
    }
    // pr_loss(s) = sum over source patterns s' >= s of binomial thinning.
    for (const auto &[source, p] : ideal.entries) {
        if (p == 0.0) {
            continue;
        }
        // Walk every s <= source by mixed radix.
        Pattern s(source.size(), 0);
        while (true) {
            double weight = 1.0;
            for (size_t i = 0; i < s.size(); i++) {
                weight *= binomial_coeff(source[i], s[i]) * std::pow(eta_t, s[i]) *
                          std::pow(1.0 - eta_t, source[i] - s[i]);
            }
            out.entries[s] += p * weight;
            size_t carry = 0;
            while (carry < s.size() && s[carry] == source[carry]) {
                s[carry] = 0;
                carry++;
            }
            if (carry == s.size()) {
                break;
            }
            s[carry]++;
        }
    }
    out.truncation_deficit = 1.0 - out.total_mass();
    return out;
}

ProbabilityTable distinguishable_probabilities(const ProbabilityTable &actual,
                                               const std::vector<ProbabilityTable> &virtuals,
                                               int n_cutoff) {
    ProbabilityTable acc = actual;
    for (const auto &virt : virtuals) {
        if (virt.m != actual.m) {
            throw invalid_parameter("all component tables must share the mode count");
        }
        ProbabilityTable next;
        next.m = actual.m;
        next.n_cutoff = n_cutoff;
        for (const auto &[sa, pa] : acc.entries) {
            if (pa == 0.0) {
                continue;
            }
            for (const auto &[sv, pv] : virt.entries) {
                if (pv == 0.0) {
                    continue;
                }
                Pattern sum(sa.size());
                bool in_range = true;
                for (size_t i = 0; i < sa.size(); i++) {
                    sum[i] = sa[i] + sv[i];
                    if (sum[i] > n_cutoff) {
                        in_range = false;
                        break;
                    }
                }
                if (in_range) {
                    next.entries[sum] += pa * pv;
                }
            }
        }
        acc = std::move(next);
    }
    acc.entries.erase(Pattern(actual.m, 0));
    acc.zero_excluded = true;
    double total = acc.total_mass();
    if (total <= 0.0) {
        throw numerical_degeneracy("convolved table has no mass after exclusions");
    }
    for (auto &[s, p] : acc.entries) {
        p /= total;
    }
    acc.normalized = true;
    acc.truncation_deficit = 0.0;
    return acc;
}

ProbabilityTable marginal_probabilities(const ProbabilityTable &table, int n_max) {
    if (n_max >= table.n_cutoff) {
        throw invalid_parameter("n_max must be below the table cutoff");
    }
    ProbabilityTable out;
    out.m = table.m;
    out.n_cutoff = n_max;
    out.zero_excluded = table.zero_excluded;
    for (const auto &[s, p] : table.entries) {
        if (std::all_of(s.begin(), s.end(), [&](int v) { return v <= n_max; })) {
            out.entries[s] = p;
        }
    }
    double total = out.total_mass();
    if (total <= 0.0) {
        throw numerical_degeneracy("marginal restriction removed all mass");
    }
    for (auto &[s, p] : out.entries) {
        p /= total;
    }
    out.normalized = true;
    return out;
}

ProbabilityTable exclude_zero_and_normalize(const ProbabilityTable &table) {
    ProbabilityTable out = table;
    out.entries.erase(Pattern(table.m, 0));
    double total = out.total_mass();
    if (total <= 0.0) {
        throw numerical_degeneracy("table has no mass outside the zero pattern");
    }
    for (auto &[s, p] : out.entries) {
        p /= total;
    }
    out.zero_excluded = true;
    out.normalized = true;
    return out;
}

double l2_distance(const Pattern &a, const Pattern &b) {
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); i++) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

StructureStats structure_stats(const ProbabilityTable &table, int k,
                               double short_threshold, double long_threshold) {
    std::vector<std::pair<Pattern, double>> ranked;
    ranked.reserve(table.entries.size());
    for (const auto &[s, p] : table.entries) {
        if (!is_zero_pattern(s)) {
            ranked.emplace_back(s, p);
        }
    }
    if (ranked.empty()) {
        throw invalid_parameter("structure stats require a nonempty table");
    }
    double total = 0.0;
    for (const auto &[s, p] : ranked) {
        total += p;
    }
    // Descending probability; lexicographic patterns break ties deterministically.
    std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
        if (a.second != b.second) {
            return a.second > b.second;
        }
        return a.first < b.first;
    });

    StructureStats stats;
    stats.k = k;
    stats.short_threshold = short_threshold;
    stats.long_threshold = long_threshold;
    stats.most_probable = ranked.front().first;
    for (size_t i = 0; i < ranked.size(); i++) {
        double p = ranked[i].second / total;
        if (static_cast<int>(i) < k) {
            stats.top_k_mass += p;
        }
        double dist = l2_distance(ranked[i].first, stats.most_probable);
        stats.mean_l2 += dist * p;
        if (dist <= short_threshold) {
            stats.short_tail_mass += p;
        }
        if (dist >= long_threshold) {
            stats.long_tail_mass += p;
        }
    }
    return stats;
}

uint64_t hilbert_dim(int m, int n_cutoff, const BinningPartition *partition) {
    if (partition == nullptr) {
        uint64_t dim = 1;
        for (int i = 0; i < m; i++) {
            dim *= static_cast<uint64_t>(n_cutoff) + 1;
        }
        return dim;
    }
    uint64_t dim = 1;
    for (const auto &subset : partition->subsets) {
        dim *= static_cast<uint64_t>(subset.size()) * n_cutoff + 1;
    }
    return dim;
}

}  // namespace gbs
