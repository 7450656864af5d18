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

#ifndef LGWEAK_EXPERIMENT_H
#define LGWEAK_EXPERIMENT_H

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "lgweak/counts_io.h"
#include "lgweak/estimators.h"
#include "lgweak/lg_inequalities.h"

namespace lgweak {

/// One simulated four-measurement experiment. Angles are in units of pi;
/// lengths are in units of the pointer width (sigma = 1).
struct RunConfig {
    double alpha_pi = 0.233;
    double gamma_pi = 0.1;
    double delta_pi = 0.867;
    int64_t photons = 1'000'000;  ///< heralded photons per post-selection run
    double g_over_sigma = 0.1;
    int pixels = 32;
    double pitch_over_sigma = 12.0 / 32.0;
    double dark_rate = 0;  ///< expected dark counts per pixel per run
    uint64_t seed = 7;

    /// Throws std::invalid_argument on out-of-range fields.
    void validate() const;

    /// Flat `key = value` lines using the CLI flag names.
    std::string to_ini() const;

    /// Reads keys written by to_ini(); missing keys keep their defaults.
    /// Throws std::invalid_argument on unknown keys or unparsable values.
    static RunConfig from_ini(std::string_view text);

    bool operator==(const RunConfig &) const = default;
};

enum class PostSelection { kA, kD, kDPerp };

/// "A", "D" or "Dperp".
std::string_view post_selection_label(PostSelection which);

struct SimulatedRun {
    PostSelection which = PostSelection::kA;
    Frame frame;
    double postselection_prob = 0;  ///< including pointer-overlap corrections
    int64_t heralded = 0;
};

struct ExperimentResult {
    RunConfig cfg;
    CorrelatorSet theory;
    LGVerdict theory_verdict;
    std::array<SimulatedRun, 3> runs;  ///< A, D, Dperp
    B4Estimate estimate;
    LGVerdict verdict;
};

/// Simulates the three post-selection runs. Run k uses the seeds
/// derive_seed(cfg.seed, 2k) for the detected-photon count and
/// derive_seed(cfg.seed, 2k + 1) for the frame; runs execute concurrently
/// and are returned in A, D, Dperp order.
std::array<SimulatedRun, 3> simulate_runs(const RunConfig &cfg);

/// Estimates B4 from the three frames of one configuration.
B4Estimate estimate_b4(const Frame &run_a, const Frame &run_d, const Frame &run_dperp);

/// simulate_runs followed by estimate_b4, plus the exact theory values.
ExperimentResult run_experiment(const RunConfig &cfg);

nlohmann::json correlators_json(const CorrelatorSet &set);
nlohmann::json estimate_json(const B4Estimate &estimate);

/// Report emitted by the `simulate` command.
nlohmann::json experiment_report(const ExperimentResult &result);

}  // namespace lgweak

#endif
