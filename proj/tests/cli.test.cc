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

#include "lgweak/cli.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gtest/gtest.h"
#include "lgweak/experiment.h"

using namespace lgweak;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string> &args) {
    std::stringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir(const char *name) {
    std::filesystem::path dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const SweepRow &cell_at(const SweepResult &r, const SweepSpec &spec, double alpha_pi, double delta_pi) {
    int i = static_cast<int>(std::lround((alpha_pi - spec.alpha.start) / (spec.alpha.stop - spec.alpha.start) * (spec.alpha.steps - 1)));
    int k = static_cast<int>(std::lround((delta_pi - spec.delta.start) / (spec.delta.stop - spec.delta.start) * (spec.delta.steps - 1)));
    return r.rows[static_cast<size_t>(i) * spec.delta.steps + k];
}

}  // namespace

TEST(cli, theory_row1) {
    CliResult r = run({"theory", "--alpha", "0.233", "--gamma", "0.1", "--delta", "0.867"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    nlohmann::json j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["b4"]["value"].get<double>(), 2.82, 0.005);
    EXPECT_EQ(j["b4"]["classification"], "pos");
    EXPECT_EQ(j["weak_values"]["wv_c_plus"]["anomalous"], true);
    EXPECT_EQ(j["weak_values"]["wv_c_minus"]["anomalous"], false);
    EXPECT_TRUE(j.contains("anomaly_threshold"));
    EXPECT_TRUE(j.contains("correlators"));
}

TEST(cli, theory_boundary_and_row2) {
    CliResult r = run({"theory", "--alpha", "0", "--gamma", "0", "--delta", "0.25"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    nlohmann::json j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["b4"]["value"].get<double>(), 2, 1e-12);
    EXPECT_EQ(j["b4"]["classification"], "none");

    nlohmann::json j2 = theory_report(0.767, 0.4, 0.633);
    EXPECT_NEAR(j2["b4"]["value"].get<double>(), -2.82, 0.005);
    EXPECT_EQ(j2["b4"]["classification"], "neg");
}

TEST(cli, theory_singular_post_selection) {
    CliResult r = run({"theory", "--alpha", "0.3", "--gamma", "0.1", "--delta", "0.3"});
    EXPECT_EQ(r.code, kExitNumericalGuard);
    EXPECT_NE(r.err.find("post-selection"), std::string::npos);
}

TEST(cli, theory_from_config_with_override) {
    std::filesystem::path dir = scratch_dir("lgweak_cli_config");
    std::ofstream(dir / "row4.ini") << "alpha = 0.8\ngamma = 0.95\ndelta = 0.5\n";
    CliResult r = run({"theory", "--config", (dir / "row4.ini").string(), "--delta", "0.15"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    nlohmann::json j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["b4"]["value"].get<double>(), 2.71, 0.005);
    EXPECT_EQ(j["angles_pi"]["delta"], 0.15);

    std::ofstream(dir / "bad.ini") << "alpha = 0.8\nbeta = 1\n";
    EXPECT_EQ(run({"theory", "--config", (dir / "bad.ini").string()}).code, kExitInvalidConfig);
    EXPECT_EQ(run({"theory", "--config", (dir / "missing.ini").string()}).code, kExitInvalidConfig);
    std::filesystem::remove_all(dir);
}

TEST(cli, usage_errors) {
    EXPECT_EQ(run({}).code, kExitInvalidConfig);
    EXPECT_EQ(run({"frobnicate"}).code, kExitInvalidConfig);
    EXPECT_EQ(run({"theory", "--alpha", "abc"}).code, kExitInvalidConfig);
    EXPECT_EQ(run({"sweep", "--grid", "1"}).code, kExitInvalidConfig);
    EXPECT_EQ(run({"sweep", "--alpha-range", "0", "1.5"}).code, kExitInvalidConfig);
    EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(cli, bounds) {
    CliResult r4 = run({"bounds", "--n", "4", "--brute"});
    ASSERT_EQ(r4.code, kExitOk);
    nlohmann::json j4 = nlohmann::json::parse(r4.out);
    EXPECT_EQ(j4["closed_form"]["lower"], -2.0);
    EXPECT_EQ(j4["closed_form"]["upper"], 2.0);
    EXPECT_EQ(j4["agreement"], true);

    nlohmann::json j5 = bounds_report(5, true);
    EXPECT_EQ(j5["brute_force"]["lower"], -5.0);
    EXPECT_EQ(j5["brute_force"]["upper"], 3.0);
    EXPECT_EQ(j5["agreement"], true);

    nlohmann::json closed = bounds_report(25, false);
    EXPECT_EQ(closed["closed_form"]["lower"], -25.0);
    EXPECT_FALSE(closed.contains("brute_force"));

    CliResult big = run({"bounds", "--n", "25", "--brute"});
    EXPECT_EQ(big.code, kExitNumericalGuard);
    EXPECT_EQ(run({"bounds", "--n", "2"}).code, kExitNumericalGuard);
}

TEST(cli, sweep_range_samples) {
    SweepRange r{0, 1, 101};
    EXPECT_EQ(r.at(0), 0);
    EXPECT_EQ(r.at(100), 1);
    EXPECT_DOUBLE_EQ(r.at(23), 0.23);
    SweepSpec bad;
    bad.alpha.steps = 1;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = SweepSpec{};
    bad.delta.stop = 1.01;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(cli, sweep_marked_points) {
    // gamma, alpha, delta, expected region
    struct Marked {
        double gamma, alpha, delta;
        Violation region;
    };
    const Marked marks[] = {
        {0.1, 0.233, 0.867, Violation::kPositive},
        {0.4, 0.767, 0.633, Violation::kNegative},
        {0.5, 0.833, 0.667, Violation::kNegative},
        {0.95, 0.8, 0.15, Violation::kPositive},
    };
    for (const Marked &m : marks) {
        SweepSpec spec;
        spec.gamma_pi = m.gamma;
        // 1000 intervals put every marked angle on a grid node.
        spec.alpha = {0, 1, 1001};
        spec.delta = {0, 1, 1001};
        SweepResult res = run_sweep(spec);
        const SweepRow &cell = cell_at(res, spec, m.alpha, m.delta);
        EXPECT_NEAR(cell.alpha_pi, m.alpha, 1e-12);
        EXPECT_NEAR(cell.delta_pi, m.delta, 1e-12);
        EXPECT_EQ(cell.classification, m.region) << "gamma " << m.gamma;
        EXPECT_LE(res.max.b4, 2 * std::sqrt(2.0) + 1e-9);
        EXPECT_GE(res.min.b4, -2 * std::sqrt(2.0) - 1e-9);

        // The coarse 101 x 101 map classifies the nearest node the same way.
        SweepSpec coarse;
        coarse.gamma_pi = m.gamma;
        SweepResult cres = run_sweep(coarse);
        EXPECT_EQ(cell_at(cres, coarse, m.alpha, m.delta).classification, m.region) << "gamma " << m.gamma;
    }
}

TEST(cli, sweep_csv_round_trip) {
    SweepSpec spec;
    spec.gamma_pi = 0.4;
    spec.alpha = {0.1, 0.9, 37};
    spec.delta = {0, 1, 41};
    SweepResult res = run_sweep(spec);
    std::string csv = sweep_csv(res);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "alpha_pi,delta_pi,b4,class");
    std::vector<SweepRow> back = parse_sweep_csv(csv);
    ASSERT_EQ(back.size(), res.rows.size());
    for (size_t k = 0; k < back.size(); k++) {
        EXPECT_EQ(back[k].alpha_pi, res.rows[k].alpha_pi);
        EXPECT_EQ(back[k].delta_pi, res.rows[k].delta_pi);
        EXPECT_EQ(back[k].b4, res.rows[k].b4);
        EXPECT_EQ(back[k].classification, res.rows[k].classification);
        // Re-evaluating the parsed angles reproduces the stored class.
        LGVerdict v = b4_from_correlators(back[k].alpha_pi * std::numbers::pi, spec.gamma_pi * std::numbers::pi, back[k].delta_pi * std::numbers::pi);
        EXPECT_EQ(v.classification, back[k].classification);
    }
    EXPECT_THROW(parse_sweep_csv("a,b,c,d\n"), std::invalid_argument);
    EXPECT_THROW(parse_sweep_csv("alpha_pi,delta_pi,b4,class\n0,0,1,maybe\n"), std::invalid_argument);
    EXPECT_THROW(parse_sweep_csv("alpha_pi,delta_pi,b4,class\n0,0,1\n"), std::invalid_argument);
}

TEST(cli, sweep_command_outputs) {
    std::filesystem::path dir = scratch_dir("lgweak_cli_sweep");
    std::string path = (dir / "map.csv").string();
    CliResult r = run({"sweep", "--gamma", "0.1", "--grid", "21", "--out", path});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    nlohmann::json summary = nlohmann::json::parse(r.out);
    EXPECT_TRUE(summary.contains("max"));
    EXPECT_TRUE(summary.contains("min"));
    std::vector<SweepRow> rows = parse_sweep_csv(slurp(path));
    EXPECT_EQ(rows.size(), 21u * 21u);

    CliResult to_stdout = run({"sweep", "--gamma", "0.1", "--grid", "21"});
    ASSERT_EQ(to_stdout.code, kExitOk);
    EXPECT_EQ(to_stdout.out, slurp(path));
    std::filesystem::remove_all(dir);
}

TEST(cli, simulate_and_analyze) {
    std::filesystem::path dir = scratch_dir("lgweak_cli_simulate");
    std::vector<std::string> args = {"simulate", "--alpha", "0.8", "--gamma", "0.95", "--delta", "0.15",
                                     "--photons", "100000", "--seed", "11", "--out", dir.string()};
    CliResult a = run(args);
    ASSERT_EQ(a.code, kExitOk) << a.err;
    CliResult b = run(args);
    EXPECT_EQ(a.out, b.out);
    for (const char *name : {"run_A.csv", "run_A.json", "run_D.csv", "run_D.json", "run_Dperp.csv", "run_Dperp.json",
                             "config.ini", "report.json"}) {
        EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
    }
    EXPECT_EQ(slurp(dir / "report.json"), a.out);
    RunConfig saved = RunConfig::from_ini(slurp(dir / "config.ini"));
    EXPECT_EQ(saved.photons, 100000);
    EXPECT_EQ(saved.seed, 11u);

    nlohmann::json report = nlohmann::json::parse(a.out);
    CliResult an = run({"analyze", "--frames", dir.string()});
    ASSERT_EQ(an.code, kExitOk) << an.err;
    nlohmann::json analyzed = nlohmann::json::parse(an.out);
    EXPECT_EQ(analyzed["b4"]["value"], report["b4"]["value"]);
    EXPECT_EQ(analyzed["b4"]["se"], report["b4"]["se"]);

    // Rerunning from the saved config reproduces the report.
    CliResult c = run({"simulate", "--config", (dir / "config.ini").string()});
    ASSERT_EQ(c.code, kExitOk) << c.err;
    EXPECT_EQ(c.out, a.out);
    std::filesystem::remove_all(dir);
}

TEST(cli, simulate_guards) {
    CliResult zero = run({"simulate", "--photons", "10000", "--g-over-sigma", "0"});
    EXPECT_EQ(zero.code, kExitNumericalGuard);
    EXPECT_NE(zero.err.find("g_x"), std::string::npos);
    EXPECT_EQ(run({"simulate", "--photons", "0"}).code, kExitInvalidConfig);
    EXPECT_EQ(run({"simulate", "--photons", "10000", "--pixels", "6"}).code, kExitNumericalGuard);
    EXPECT_EQ(run({"analyze", "--frames", "/nonexistent/lgweak"}).code, kExitInvalidConfig);
}
