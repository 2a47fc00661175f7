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

// Compares the parallel kernels against their serial reference
// implementations: the matching-polynomial sieve vs the brute-force loop
// hafnian, and parallel vs single-thread enumeration and sampling.

#include <omp.h>

#include <chrono>
#include <cstdio>

#include "gbs/matchpoly.hpp"
#include "gbs/oracle.hpp"
#include "gbs/rng.hpp"
#include "gbs/samplers.hpp"

using namespace gbs;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

Matrix random_symmetric(int n, uint64_t seed) {
    RngStream rng(seed, 0);
    Matrix M(n, n);
    for (int i = 0; i < n; i++) {
        for (int j = i; j < n; j++) {
            M(i, j) = Complex(rng.normal(), rng.normal());
            M(j, i) = M(i, j);
        }
    }
    return M;
}

}  // namespace

int main() {
    // Sieve vs brute-force reference on growing photon numbers.
    std::printf("%-34s %10s %10s %8s\n", "case", "sieve[s]", "ref[s]", "rel.err");
    for (int total : {6, 8, 10, 12}) {
        Matrix M = random_symmetric(4, total);
        Vector mu = Vector::Zero(4);
        std::vector<int> counts = {total / 4, total / 4, total / 4,
                                   total - 3 * (total / 4)};
        double t0 = now_seconds();
        Complex fast = lhaf_repeated(M, counts, mu);
        double t1 = now_seconds();
        Complex slow = lhaf_repeated_reference(M, counts, mu);
        double t2 = now_seconds();
        std::printf("lhaf N=%-26d %10.4f %10.4f %8.1e\n", total, t1 - t0, t2 - t1,
                    std::abs(fast - slow) / std::abs(slow));
    }

    // Enumeration, parallel vs one thread.
    SqueezingSpec spec(3, 4, 0.5);
    Interferometer itf = haar_unitary(4, 99);
    GaussianState state = ideal_output_state(spec, itf);
    int max_threads = omp_get_max_threads();
    double t0 = now_seconds();
    ProbabilityTable par = enumerate_ideal(state, 4);
    double t1 = now_seconds();
    omp_set_num_threads(1);
    ProbabilityTable ser = enumerate_ideal(state, 4);
    double t2 = now_seconds();
    omp_set_num_threads(max_threads);
    double max_dev = 0.0;
    for (const auto &[s, p] : par.entries) {
        max_dev = std::max(max_dev, std::abs(p - ser.entries.at(s)));
    }
    std::printf("enumerate m=4 cutoff=4 (%d thr)     %10.4f %10.4f %8.1e\n",
                max_threads, t1 - t0, t2 - t1, max_dev);

    // Chain-rule sampling, parallel vs one thread; identical output required.
    t0 = now_seconds();
    SampleSet a = sample_ideal(spec, itf, 500, 4, 7);
    t1 = now_seconds();
    omp_set_num_threads(1);
    SampleSet b = sample_ideal(spec, itf, 500, 4, 7);
    t2 = now_seconds();
    omp_set_num_threads(max_threads);
    std::printf("sample 500 m=4 (%d thr)             %10.4f %10.4f %8s\n", max_threads,
                t1 - t0, t2 - t1, a.patterns == b.patterns ? "exact" : "DIFF");
    return a.patterns == b.patterns ? 0 : 1;
}
