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

#ifndef LGWEAK_ESTIMATORS_H
#define LGWEAK_ESTIMATORS_H

#include <cstdint>
#include <functional>

#include "lgweak/lg_inequalities.h"
#include "lgweak/pointer.h"

namespace lgweak {

/// Frames with fewer recorded counts are rejected.
inline constexpr int64_t kMinCounts = 100;

/// Value with its standard error.
struct Measured {
    double value = 0;
    double se = 0;
};

/// Sample moments of photon positions at pixel centres, with the plug-in
/// covariance of the three sample means.
struct MomentEstimate {
    double mean_x = 0;
    double mean_y = 0;
    double mean_xy = 0;  ///< E[xy]
    double se_x = 0;
    double se_y = 0;
    double se_xy = 0;
    double cov_x_y = 0;
    double cov_x_xy = 0;
    double cov_y_xy = 0;
    int64_t n_effective = 0;
};

/// Weak averages of I_B, I_C and I_B I_C recovered from pointer moments.
struct WeakAverageEstimate {
    Measured i_b;
    Measured i_c;
    Measured i_bc;
    double cov_b_c = 0;
    double cov_b_bc = 0;
    double cov_c_bc = 0;
};

/// I_C weak value from a post-selected run.
struct PostSelectedValue {
    double value = 0;
    double se = 0;
    /// |value| exceeds 1 by more than kAnomalySigmas standard errors.
    bool anomalous = false;
};

inline constexpr double kAnomalySigmas = 2.0;

struct B4Estimate {
    double value = 0;
    double se = 0;
    WeakAverageEstimate run_a;
    PostSelectedValue run_d;
    PostSelectedValue run_dperp;
    Measured p_plus;
    int64_t n_d = 0;
    int64_t n_dperp = 0;

    /// Re-evaluates the four-measurement sum from the stored components.
    double recompute() const;
};

/// Throws InsufficientCounts below kMinCounts.
MomentEstimate grid_moments(const CountsGrid &counts);

/// Inverts <x> = g_x <I_B>, <y> = g_y <I_C> and
/// <xy> = (g_x g_y / 2)(<I_B I_C> + <I_B><I_C>), propagating the full moment
/// covariance to first order. Throws ZeroCoupling unless g_x, g_y > 0.
WeakAverageEstimate weak_averages(const MomentEstimate &m, double g_x, double g_y);

/// <y>/g_y on a post-selected run.
PostSelectedValue postselected_weak_value(const CountsGrid &counts_d, double g_y);

/// n_d / (n_d + n_dperp) with its binomial standard error.
Measured estimate_p_plus(int64_t n_d, int64_t n_dperp);

/// B4 = i_b + i_bc + [p wv+ - (1-p) wv-] - [p - (1-p)], treating the three
/// runs as independent experiments.
B4Estimate compose_b4(
    const WeakAverageEstimate &run_a,
    const PostSelectedValue &run_d,
    const PostSelectedValue &run_dperp,
    const Measured &p_plus,
    int64_t n_d,
    int64_t n_dperp);

enum class MomentStatistic { kMeanX, kMeanY, kMeanXY };

/// Nonparametric bootstrap over photon records: each resample redraws the
/// frame's total from its empirical pixel distribution, using
/// derive_seed(seed, r) for resample r. Returns the standard deviation of
/// the statistic across resamples. Throws std::invalid_argument for fewer
/// than 50 resamples and InsufficientCounts below kMinCounts.
double bootstrap_se(const CountsGrid &counts, MomentStatistic statistic, int resamples, uint64_t seed);

double bootstrap_se(
    const CountsGrid &counts,
    const std::function<double(const MomentEstimate &)> &statistic,
    int resamples,
    uint64_t seed);

}  // namespace lgweak

#endif
