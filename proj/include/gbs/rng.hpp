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

#ifndef GBSIM_RNG_HPP
#define GBSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace gbs {

/// Deterministic RNG stream keyed by (seed, stream_id).
///
/// Distinct stream ids derived from the same seed give statistically
/// independent streams, so per-sample / per-repetition work can run on any
/// number of threads without changing results. Gaussian draws use Box-Muller
/// instead of std::normal_distribution, which is implementation-defined.
class RngStream {
  public:
    RngStream(uint64_t seed, uint64_t stream_id) : gen_(mix(seed, stream_id)) {}

    uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 6.283185307179586476925286766559 * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    /// Index draw from nonnegative weights (need not be normalized).
    size_t sample_discrete(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) {
            total += w;
        }
        double target = uniform() * total;
        double acc = 0.0;
        for (size_t i = 0; i < weights.size(); i++) {
            acc += weights[i];
            if (target < acc) {
                return i;
            }
        }
        return weights.size() - 1;
    }

    /// Poisson draw by inverse-CDF walk; fine for the small means used here.
    int poisson(double mean) {
        if (mean <= 0.0) {
            return 0;
        }
        double u = uniform();
        double p = std::exp(-mean);
        double cdf = p;
        int k = 0;
        while (u >= cdf && k < 10000) {
            k++;
            p *= mean / k;
            cdf += p;
        }
        return k;
    }

    /// Binomial(n, p) by n Bernoulli trials (n is a photon count; always small).
    int binomial(int n, double p) {
        int hits = 0;
        for (int i = 0; i < n; i++) {
            if (uniform() < p) {
                hits++;
            }
        }
        return hits;
    }

  private:
    static uint64_t mix(uint64_t seed, uint64_t stream_id) {
        // SplitMix64 finalizer over the pair, applied twice.
        uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1);
        for (int round = 0; round < 2; round++) {
            x ^= x >> 30;
            x *= 0xBF58476D1CE4E5B9ULL;
            x ^= x >> 27;
            x *= 0x94D049BB133111EBULL;
            x ^= x >> 31;
        }
        return x;
    }

    std::mt19937_64 gen_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace gbs

#endif
