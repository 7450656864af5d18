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

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "lgweak/errors.h"
#include "lgweak/pointer.h"
#include "lgweak/qubit.h"

namespace lgweak {

namespace {

constexpr double kPi = std::numbers::pi;

nlohmann::json measured_json(const Measured &m) {
    return {{"value", m.value}, {"se", m.se}};
}

nlohmann::json postselected_json(const PostSelectedValue &v) {
    return {{"value", v.value}, {"se", v.se}, {"anomalous", v.anomalous}};
}

template <typename T>
T parse_value(const std::string &key, const std::string &text) {
    T v{};
    if (!CLI::detail::lexical_cast(text, v)) {
        throw std::invalid_argument("config key '" + key + "' has unparsable value '" + text + "'");
    }
    return v;
}

SimulatedRun simulate_one(const RunConfig &cfg, PostSelection which, uint64_t index) {
    double alpha = cfg.alpha_pi * kPi;
    double gamma = cfg.gamma_pi * kPi;
    double delta = cfg.delta_pi * kPi;
    QubitState pre = state_from_angle(alpha);
    QubitState post = which == PostSelection::kA   ? pre
                      : which == PostSelection::kD ? state_from_angle(delta)
                                                   : orthogonal_state_from_angle(delta);
    PointerConfig pointer;
    pointer.sigma = 1.0;
    pointer.g_x = cfg.g_over_sigma;
    pointer.g_y = cfg.g_over_sigma;

    MixtureAmplitude amp =
        postselected_amplitude(pre, observable_from_angle(gamma), observable_from_angle(0), post, pointer);
    DetectorGrid grid = DetectorGrid::centered(cfg.pixels, cfg.pitch_over_sigma * pointer.sigma);
    ProbabilityMatrix pixels = pixel_probabilities(amp, grid);

    SimulatedRun run;
    run.which = which;
    run.heralded = cfg.photons;
    run.postselection_prob = amp.probability();

    std::mt19937_64 rng(derive_seed(cfg.seed, 2 * index));
    std::binomial_distribution<int64_t> detect(cfg.photons, std::min(1.0, run.postselection_prob));
    int64_t detected = detect(rng);
    if (detected < 1) {
        throw InsufficientCounts(
            "post-selection " + std::string(post_selection_label(which)) + " recorded no photons");
    }
    run.frame.counts = sample_frame(pixels, detected, cfg.dark_rate, derive_seed(cfg.seed, 2 * index + 1));
    run.frame.meta.post_selection = std::string(post_selection_label(which));
    run.frame.meta.alpha_pi = cfg.alpha_pi;
    run.frame.meta.gamma_pi = cfg.gamma_pi;
    run.frame.meta.delta_pi = cfg.delta_pi;
    run.frame.meta.g_x = pointer.g_x;
    run.frame.meta.g_y = pointer.g_y;
    run.frame.meta.sigma = pointer.sigma;
    run.frame.meta.dark_rate = cfg.dark_rate;
    return run;
}

}  // namespace

void RunConfig::validate() const {
    auto fail = [](const std::string &msg) { throw std::invalid_argument(msg); };
    if (!std::isfinite(alpha_pi) || !std::isfinite(gamma_pi) || !std::isfinite(delta_pi)) {
        fail("angles must be finite");
    }
    if (photons < 1) {
        fail("photons must be at least 1");
    }
    if (!(g_over_sigma >= 0) || !std::isfinite(g_over_sigma)) {
        fail("g-over-sigma must be non-negative");
    }
    if (pixels < 1) {
        fail("pixels must be at least 1");
    }
    if (!(pitch_over_sigma > 0) || !std::isfinite(pitch_over_sigma)) {
        fail("pitch-over-sigma must be positive");
    }
    if (!(dark_rate >= 0) || !std::isfinite(dark_rate)) {
        fail("dark-rate must be non-negative");
    }
}

std::string RunConfig::to_ini() const {
    std::stringstream ss;
    ss.precision(17);
    ss << "alpha = " << alpha_pi << "\n"
       << "gamma = " << gamma_pi << "\n"
       << "delta = " << delta_pi << "\n"
       << "photons = " << photons << "\n"
       << "g-over-sigma = " << g_over_sigma << "\n"
       << "pixels = " << pixels << "\n"
       << "pitch-over-sigma = " << pitch_over_sigma << "\n"
       << "dark-rate = " << dark_rate << "\n"
       << "seed = " << seed << "\n";
    return ss.str();
}

RunConfig RunConfig::from_ini(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_config(in);
    } catch (const CLI::Error &e) {
        throw std::invalid_argument(std::string("cannot parse config: ") + e.what());
    }
    RunConfig cfg;
    for (const CLI::ConfigItem &item : items) {
        // Sections are accepted but flattened.
        std::string key = item.name;
        if (key == "++" || key == "--") {
            continue;
        }
        std::replace(key.begin(), key.end(), '_', '-');
        if (item.inputs.size() != 1) {
            throw std::invalid_argument("config key '" + key + "' needs exactly one value");
        }
        const std::string &v = item.inputs[0];
        if (key == "alpha") {
            cfg.alpha_pi = parse_value<double>(key, v);
        } else if (key == "gamma") {
            cfg.gamma_pi = parse_value<double>(key, v);
        } else if (key == "delta") {
            cfg.delta_pi = parse_value<double>(key, v);
        } else if (key == "photons") {
            cfg.photons = parse_value<int64_t>(key, v);
        } else if (key == "g-over-sigma") {
            cfg.g_over_sigma = parse_value<double>(key, v);
        } else if (key == "pixels") {
            cfg.pixels = parse_value<int>(key, v);
        } else if (key == "pitch-over-sigma") {
            cfg.pitch_over_sigma = parse_value<double>(key, v);
        } else if (key == "dark-rate") {
            cfg.dark_rate = parse_value<double>(key, v);
        } else if (key == "seed") {
            cfg.seed = parse_value<uint64_t>(key, v);
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
    return cfg;
}

std::string_view post_selection_label(PostSelection which) {
    switch (which) {
        case PostSelection::kD:
            return "D";
        case PostSelection::kDPerp:
            return "Dperp";
        case PostSelection::kA:
            break;
    }
    return "A";
}

std::array<SimulatedRun, 3> simulate_runs(const RunConfig &cfg) {
    cfg.validate();
    const std::array<PostSelection, 3> order = {PostSelection::kA, PostSelection::kD, PostSelection::kDPerp};
    std::array<std::future<SimulatedRun>, 3> jobs;
    for (size_t k = 0; k < 3; k++) {
        jobs[k] = std::async(std::launch::async, simulate_one, std::cref(cfg), order[k], static_cast<uint64_t>(k));
    }
    std::array<SimulatedRun, 3> runs;
    for (size_t k = 0; k < 3; k++) {
        runs[k] = jobs[k].get();
    }
    return runs;
}

B4Estimate estimate_b4(const Frame &run_a, const Frame &run_d, const Frame &run_dperp) {
    WeakAverageEstimate a = weak_averages(grid_moments(run_a.counts), run_a.meta.g_x, run_a.meta.g_y);
    PostSelectedValue d = postselected_weak_value(run_d.counts, run_d.meta.g_y);
    PostSelectedValue dp = postselected_weak_value(run_dperp.counts, run_dperp.meta.g_y);
    // Dark counts carry no information about the post-selection split.
    int64_t n_d = run_d.counts.photons;
    int64_t n_dp = run_dperp.counts.photons;
    return compose_b4(a, d, dp, estimate_p_plus(n_d, n_dp), n_d, n_dp);
}

ExperimentResult run_experiment(const RunConfig &cfg) {
    cfg.validate();
    ExperimentResult r;
    r.cfg = cfg;
    r.theory = correlators_b4(cfg.alpha_pi * kPi, cfg.gamma_pi * kPi, cfg.delta_pi * kPi);
    r.theory_verdict = b4_value(r.theory);
    r.runs = simulate_runs(cfg);
    r.estimate = estimate_b4(r.runs[0].frame, r.runs[1].frame, r.runs[2].frame);
    Bounds b = bn_bounds(4);
    r.verdict = classify(r.estimate.value, b.lower, b.upper);
    return r;
}

nlohmann::json correlators_json(const CorrelatorSet &s) {
    return {
        {"exp_b", s.exp_b},
        {"exp_c", s.exp_c},
        {"corr_bc", s.corr_bc},
        {"corr_cd", s.corr_cd()},
        {"exp_d", s.exp_d},
        {"p_d_plus", s.p_d_plus},
        {"p_d_minus", s.p_d_minus},
        {"wv_c_plus", s.wv_c_plus},
        {"wv_c_minus", s.wv_c_minus},
    };
}

nlohmann::json estimate_json(const B4Estimate &e) {
    return {
        {"run_a",
         {{"i_b", measured_json(e.run_a.i_b)},
          {"i_c", measured_json(e.run_a.i_c)},
          {"i_bc", measured_json(e.run_a.i_bc)}}},
        {"run_d", postselected_json(e.run_d)},
        {"run_dperp", postselected_json(e.run_dperp)},
        {"p_plus", measured_json(e.p_plus)},
        {"n_d", e.n_d},
        {"n_dperp", e.n_dperp},
        {"b4", {{"value", e.value}, {"se", e.se}}},
    };
}

nlohmann::json experiment_report(const ExperimentResult &r) {
    nlohmann::json runs = nlohmann::json::array();
    for (const SimulatedRun &run : r.runs) {
        runs.push_back({
            {"post_selection", post_selection_label(run.which)},
            {"heralded", run.heralded},
            {"detected", run.frame.counts.photons},
            {"dark_counts", run.frame.counts.dark_counts},
            {"postselection_probability", run.postselection_prob},
            {"frame_seed", run.frame.counts.seed},
        });
    }
    double excess = std::abs(r.estimate.value) - r.verdict.upper_bound;
    return {
        {"angles_pi", {{"alpha", r.cfg.alpha_pi}, {"gamma", r.cfg.gamma_pi}, {"delta", r.cfg.delta_pi}}},
        {"g", r.cfg.g_over_sigma},
        {"sigma", 1.0},
        {"config",
         {{"photons", r.cfg.photons},
          {"pixels", r.cfg.pixels},
          {"pitch_over_sigma", r.cfg.pitch_over_sigma},
          {"dark_rate", r.cfg.dark_rate},
          {"seed", r.cfg.seed}}},
        {"theory",
         {{"correlators", correlators_json(r.theory)},
          {"b4", r.theory_verdict.value},
          {"classification", violation_name(r.theory_verdict.classification)}}},
        {"runs", runs},
        {"estimates", estimate_json(r.estimate)},
        {"b4",
         {{"value", r.estimate.value},
          {"se", r.estimate.se},
          {"lower_bound", r.verdict.lower_bound},
          {"upper_bound", r.verdict.upper_bound},
          {"classification", violation_name(r.verdict.classification)},
          {"excess_over_bound_in_se", r.estimate.se > 0 ? excess / r.estimate.se : 0.0}}},
        {"anomaly_flags", {{"wv_c_plus", r.estimate.run_d.anomalous}, {"wv_c_minus", r.estimate.run_dperp.anomalous}}},
    };
}

}  // namespace lgweak
