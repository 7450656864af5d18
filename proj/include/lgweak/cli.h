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

#ifndef LGWEAK_CLI_H
#define LGWEAK_CLI_H

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lgweak/lg_inequalities.h"

namespace lgweak {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitNumericalGuard = 3;

/// Evenly spaced samples start, ..., stop (inclusive) in units of pi.
struct SweepRange {
    double start = 0;
    double stop = 1;
    int steps = 101;

    double at(int k) const;
};

struct SweepSpec {
    double gamma_pi = 0.1;
    SweepRange alpha;
    SweepRange delta;

    /// Throws std::invalid_argument unless steps >= 2 and both ranges lie in
    /// [0, 1].
    void validate() const;
};

struct SweepRow {
    double alpha_pi = 0;
    double delta_pi = 0;
    double b4 = 0;
    Violation classification = Violation::kNone;
};

struct SweepResult {
    std::vector<SweepRow> rows;  ///< alpha-major, delta-minor
    SweepRow max;
    SweepRow min;
};

/// B4 over the (alpha, delta) grid for one gamma.
SweepResult run_sweep(const SweepSpec &spec);

/// Header `alpha_pi,delta_pi,b4,class`, one row per grid point. Numbers use
/// the shortest representation that round-trips exactly.
std::string sweep_csv(const SweepResult &result);

/// Inverse of sweep_csv. Throws std::invalid_argument on malformed input.
std::vector<SweepRow> parse_sweep_csv(std::string_view csv);

nlohmann::json sweep_summary(const SweepSpec &spec, const SweepResult &result);

/// Exact evaluation at one configuration (angles in units of pi). Throws
/// PostSelectionSingular when either post-selection is empty.
nlohmann::json theory_report(double alpha_pi, double gamma_pi, double delta_pi);

/// Closed-form bounds and, with `brute`, the enumerated ones.
nlohmann::json bounds_report(int n, bool brute);

/// Entry point for the `lgweak` command line. Returns the process exit code:
/// 0 on success, 2 for invalid arguments or configuration, 3 when a
/// numerical guard trips.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace lgweak

#endif
