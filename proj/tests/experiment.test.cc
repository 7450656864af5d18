// Copyright 2026 The lgweak Authors
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

#include "lgweak/experiment.h"

#include <cmath>

#include "gtest/gtest.h"
#include "lgweak/errors.h"

using namespace lgweak;

namespace {

RunConfig row1(int64_t photons, uint64_t seed = 7) {
    RunConfig c;
    c.photons = photons;
    c.seed = seed;
    return c;
}

}  // namespace

TEST(experiment, config_round_trip) {
    RunConfig c;
    c.alpha_pi = 0.1 + 0.2;
    c.gamma_pi = 0.95;
    c.delta_pi = 1.0 / 3;
    c.photons = 12345;
    c.g_over_sigma = 0.05;
    c.pixels = 48;
    c.pitch_over_sigma = 0.25;
    c.dark_rate = 0.125;
    c.seed = 18446744073709551615ULL;
    std::string ini = c.to_ini();
    RunConfig back = RunConfig::from_ini(ini);
    EXPECT_EQ(back, c);
    EXPECT_EQ(back.to_ini(), ini);
}

TEST(experiment, config_parsing) {
    RunConfig c = RunConfig::from_ini("# comment\n[run]\nalpha = 0.8\ng_over_sigma = 0.2\nseed=3\n");
    EXPECT_EQ(c.alpha_pi, 0.8);
    EXPECT_EQ(c.g_over_sigma, 0.2);
    EXPECT_EQ(c.seed, 3u);
    EXPECT_EQ(c.gamma_pi, RunConfig{}.gamma_pi);
    EXPECT_EQ(RunConfig::from_ini(""), RunConfig{});
    EXPECT_THROW(RunConfig::from_ini("colour = blue\n"), std::invalid_argument);
    EXPECT_THROW(RunConfig::from_ini("photons = many\n"), std::invalid_argument);
    EXPECT_THROW(RunConfig::from_ini("alpha = 0.1 0.2\n"), std::invalid_argument);
}

TEST(experiment, config_validation) {
    RunConfig c;
    EXPECT_NO_THROW(c.validate());
    for (auto mutate : std::vector<void (*)(RunConfig &)>{
             [](RunConfig &r) { r.photons = 0; },
             [](RunConfig &r) { r.g_over_sigma = -0.1; },
             [](RunConfig &r) { r.pixels = 0; },
             [](RunConfig &r) { r.pitch_over_sigma = 0; },
             [](RunConfig &r) { r.dark_rate = -1; },
             [](RunConfig &r) { r.alpha_pi = std::nan(""); },
         }) {
        RunConfig bad;
        mutate(bad);
        EXPECT_THROW(bad.validate(), std::invalid_argument);
    }
}

TEST(experiment, post_selection_labels) {
    EXPECT_EQ(post_selection_label(PostSelection::kA), "A");
    EXPECT_EQ(post_selection_label(PostSelection::kD), "D");
    EXPECT_EQ(post_selection_label(PostSelection::kDPerp), "Dperp");
}

TEST(experiment, simulate_runs_deterministic) {
    RunConfig c = row1(200000);
    std::array<SimulatedRun, 3> a = simulate_runs(c);
    std::array<SimulatedRun, 3> b = simulate_runs(c);
    for (int k = 0; k < 3; k++) {
        EXPECT_EQ(a[k].frame.counts.counts, b[k].frame.counts.counts);
        EXPECT_EQ(a[k].frame.counts.seed, derive_seed(c.seed, 2 * k + 1));
    }
    c.seed = 8;
    EXPECT_NE(simulate_runs(c)[1].frame.counts.counts, a[1].frame.counts.counts);
}

TEST(experiment, simulate_runs_metadata) {
    RunConfig c = row1(200000);
    std::array<SimulatedRun, 3> runs = simulate_runs(c);
    EXPECT_EQ(runs[0].which, PostSelection::kA);
    EXPECT_EQ(runs[1].which, PostSelection::kD);
    EXPECT_EQ(runs[2].which, PostSelection::kDPerp);
    double prob_sum = runs[1].postselection_prob + runs[2].postselection_prob;
    EXPECT_NEAR(prob_sum, 1, 1e-12);
    for (const SimulatedRun &r : runs) {
        EXPECT_EQ(r.heralded, 200000);
        EXPECT_EQ(r.frame.counts.total(), r.frame.counts.photons);
        double expected = r.heralded * r.postselection_prob;
        double sd = std::sqrt(r.heralded * r.postselection_prob * (1 - r.postselection_prob));
        EXPECT_LT(std::abs(r.frame.counts.photons - expected), 5 * sd + 1);
        EXPECT_EQ(r.frame.meta.g_x, 0.1);
        EXPECT_EQ(r.frame.meta.sigma, 1);
        EXPECT_EQ(r.frame.meta.alpha_pi, 0.233);
        EXPECT_EQ(r.frame.counts.grid.n_x, 32);
    }
}

TEST(experiment, run_experiment_row1_reduced_photons) {
    ExperimentResult r = run_experiment(row1(100000));
    EXPECT_NEAR(r.theory_verdict.value, 2.8164000148826394, 1e-12);
    EXPECT_LE(std::abs(r.estimate.value - r.theory_verdict.value), std::max(3 * r.estimate.se, 0.03));
    EXPECT_NEAR(r.estimate.recompute(), r.estimate.value, 1e-12);
    EXPECT_NEAR(r.estimate.p_plus.value, 0.167, 0.01);
}

TEST(experiment, aggregation_of_estimates) {
    // p wv+ + (1 - p) wv- reproduces the I_C weak average of the
    // unconditioned run.
    for (uint64_t seed : {7, 8, 9}) {
        ExperimentResult r = run_experiment(row1(1'000'000, seed));
        const B4Estimate &e = r.estimate;
        double p = e.p_plus.value;
        double agg = p * e.run_d.value + (1 - p) * e.run_dperp.value;
        double se = std::sqrt(p * p * e.run_d.se * e.run_d.se + (1 - p) * (1 - p) * e.run_dperp.se * e.run_dperp.se +
                              std::pow(e.run_d.value - e.run_dperp.value, 2) * e.p_plus.se * e.p_plus.se +
                              e.run_a.i_c.se * e.run_a.i_c.se);
        EXPECT_LT(std::abs(agg - e.run_a.i_c.value), 3 * se) << "seed " << seed;
    }
}

TEST(experiment, b4_standard_error_scales_with_photons) {
    std::array<double, 3> se{};
    std::array<int64_t, 3> n = {10000, 100000, 1000000};
    for (int k = 0; k < 3; k++) {
        se[k] = run_experiment(row1(n[k])).estimate.se;
    }
    for (int k = 1; k < 3; k++) {
        double ratio = se[k - 1] / se[k];
        EXPECT_NEAR(ratio / std::sqrt(10.0), 1, 0.2) << "N = " << n[k];
    }
}

TEST(experiment, zero_coupling_is_reported) {
    RunConfig c = row1(10000);
    c.g_over_sigma = 0;
    EXPECT_THROW(run_experiment(c), ZeroCoupling);
}

TEST(experiment, singular_post_selection_is_reported) {
    RunConfig c = row1(10000);
    c.delta_pi = c.alpha_pi;
    EXPECT_THROW(run_experiment(c), PostSelectionSingular);
}

TEST(experiment, dark_counts_do_not_shift_p_plus) {
    RunConfig c = row1(100000);
    c.dark_rate = 5;
    ExperimentResult r = run_experiment(c);
    for (const SimulatedRun &run : r.runs) {
        EXPECT_GT(run.frame.counts.dark_counts, 0);
        EXPECT_EQ(run.frame.counts.total(), run.frame.counts.photons + run.frame.counts.dark_counts);
    }
    EXPECT_EQ(r.estimate.n_d, r.runs[1].frame.counts.photons);
    EXPECT_EQ(r.estimate.n_dperp, r.runs[2].frame.counts.photons);
}

TEST(experiment, report_fields_and_determinism) {
    RunConfig c = row1(50000);
    nlohmann::json a = experiment_report(run_experiment(c));
    nlohmann::json b = experiment_report(run_experiment(c));
    EXPECT_EQ(a.dump(), b.dump());
    EXPECT_EQ(a["angles_pi"]["alpha"], 0.233);
    EXPECT_EQ(a["g"], 0.1);
    EXPECT_EQ(a["sigma"], 1.0);
    EXPECT_EQ(a["runs"].size(), 3u);
    EXPECT_EQ(a["runs"][1]["post_selection"], "D");
    EXPECT_EQ(a["b4"]["upper_bound"], 2.0);
    EXPECT_TRUE(a["b4"].contains("se"));
    EXPECT_TRUE(a["b4"].contains("classification"));
    EXPECT_TRUE(a["anomaly_flags"].contains("wv_c_plus"));
    EXPECT_TRUE(a["estimates"]["run_a"].contains("i_bc"));
    EXPECT_EQ(a["theory"]["classification"], "pos");
}
