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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gbs/errors.hpp"
#include "gbs/io.hpp"
#include "gbs/samplers.hpp"

using namespace gbs;

namespace {

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string &name) : path("/tmp/gbsim_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("interferometer round-trips bit-exactly") {
    Interferometer u = haar_unitary(5, 123);
    TempFile f("itf.json");
    save_interferometer(u, f.path);
    Interferometer back = load_interferometer(f.path);
    CHECK(back.m == 5);
    CHECK(back.seed == 123);
    for (int i = 0; i < 5; i++) {
        for (int j = 0; j < 5; j++) {
            CHECK(back.T(i, j).real() == u.T(i, j).real());
            CHECK(back.T(i, j).imag() == u.T(i, j).imag());
        }
    }
}

TEST_CASE("saving the same unitary twice is byte-identical") {
    Interferometer u = haar_unitary(4, 1);
    TempFile a("itf_a.json"), b("itf_b.json");
    save_interferometer(u, a.path);
    save_interferometer(u, b.path);
    CHECK(slurp(a.path) == slurp(b.path));
}

TEST_CASE("probability table round-trips") {
    SqueezingSpec spec(1, 1, 0.5);
    ProbabilityTable table = enumerate_ideal(xp_to_q(build_input_covariance(spec)), 4);
    TempFile f("table.ndjson");
    save_probability_table(table, f.path, "abc123", 7);
    ProbabilityTable back = load_probability_table(f.path);
    CHECK(back.m == table.m);
    CHECK(back.n_cutoff == table.n_cutoff);
    CHECK(back.entries.size() == table.entries.size());
    for (const auto &[s, p] : table.entries) {
        CHECK(back.entries.at(s) == p);
    }
    CHECK(back.truncation_deficit == table.truncation_deficit);
}

TEST_CASE("sample set round-trips with provenance") {
    SqueezingSpec spec(1, 2, 0.4);
    SampleSet samples = sample_ideal(spec, haar_unitary(2, 9), 50, 3, 11);
    TempFile f("samples.ndjson");
    save_sample_set(samples, f.path, "deadbeef");
    SampleSet back = load_sample_set(f.path);
    CHECK(back.patterns == samples.patterns);
    CHECK(back.model == samples.model);
    CHECK(back.seed == samples.seed);
    CHECK(back.m == samples.m);
    CHECK(back.r == samples.r);
}

TEST_CASE("csv export has a header and one row per sample") {
    SampleSet s;
    s.m = 3;
    s.patterns = {{1, 0, 2}, {0, 1, 1}};
    TempFile f("samples.csv");
    export_sample_csv(s, f.path);
    CHECK(slurp(f.path) == "n0,n1,n2\n1,0,2\n0,1,1\n");
}

TEST_CASE("chi square csv and histogram export") {
    ChiSquareRun run;
    run.repetitions = 3;
    run.draw_size = 10;
    run.chi2_values = {1.0, 2.0, 3.0};
    run.abandoned_fractions = {0.0, 0.1, 0.2};
    TempFile a("chi.csv"), b("hist.csv");
    save_chi_square_csv(run, a.path);
    CHECK(slurp(a.path).rfind("repetition,chi2,abandoned_fraction\n0,1,0\n", 0) == 0);
    save_chi_square_histogram_csv(run, b.path, 2);
    std::string hist = slurp(b.path);
    CHECK(hist.rfind("bin_center,count\n", 0) == 0);
}

TEST_CASE("peak fit json carries config hash and params") {
    PeakFit fit;
    fit.center = 150.0;
    fit.sigma = 12.0;
    TempFile f("fit.json");
    save_peak_fit_json(fit, f.path, "cafe", 3, "{\"eta\":0.9}");
    std::string body = slurp(f.path);
    CHECK(body.find("\"X_c\": 150.0") != std::string::npos);
    CHECK(body.find("\"cafe\"") != std::string::npos);
    CHECK(body.find("0.9") != std::string::npos);
}

TEST_CASE("missing files raise io errors with the io exit code") {
    try {
        load_interferometer("/nonexistent/path.json");
        CHECK(false);
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::Io);
        CHECK(e.exit_code() == 5);
    }
}

TEST_CASE("fnv1a hash is stable") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == fnv1a_hex("a"));
    CHECK(fnv1a_hex("a") != fnv1a_hex("b"));
}
