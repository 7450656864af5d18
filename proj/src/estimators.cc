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

#include "lgweak/estimators.h"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lgweak/errors.h"

namespace lgweak {

namespace {

void require_counts(int64_t total) {
    if (total < kMinCounts) {
        std::stringstream ss;
        ss << "frame holds " << total << " counts, need at least " << kMinCounts;
        throw InsufficientCounts(ss.str());
    }
}

void require_coupling(double g, const char *name) {
    if (!(g > 0) || !std::isfinite(g)) {
        std::stringstream ss;
        ss << name << " = " << g << " cannot be inverted; weak averages need a positive coupling";
        throw ZeroCoupling(ss.str());
    }
}

}  // namespace

double B4Estimate::recompute() const {
    double p = p_plus.value;
    return run_a.i_b.value + run_a.i_bc.value + (p * run_d.value - (1 - p) * run_dperp.value) - (p - (1 - p));
}

MomentEstimate grid_moments(const CountsGrid &counts) {
    int64_t total = counts.total();
    require_counts(total);
    const DetectorGrid &g = counts.grid;
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0, sxxy = 0, sxyy = 0, sxxyy = 0;
    for (int j = 0; j < g.n_y; j++) {
        double y = g.y_center(j);
        for (int i = 0; i < g.n_x; i++) {
            int64_t c = counts.at(i, j);
            if (c == 0) {
                continue;
            }
            double x = g.x_center(i);
            double w = static_cast<double>(c);
            sx += w * x;
            sy += w * y;
            sxy += w * x * y;
            sxx += w * x * x;
            syy += w * y * y;
            sxxy += w * x * x * y;
            sxyy += w * x * y * y;
            sxxyy += w * x * x * y * y;
        }
    }
    double n = static_cast<double>(total);
    MomentEstimate m;
    m.mean_x = sx / n;
    m.mean_y = sy / n;
    m.mean_xy = sxy / n;
    // Covariances of the sample means: (E[ab] - E[a]E[b]) / n.
    double var_x = std::max(0.0, sxx / n - m.mean_x * m.mean_x);
    double var_y = std::max(0.0, syy / n - m.mean_y * m.mean_y);
    double var_xy = std::max(0.0, sxxyy / n - m.mean_xy * m.mean_xy);
    m.se_x = std::sqrt(var_x / n);
    m.se_y = std::sqrt(var_y / n);
    m.se_xy = std::sqrt(var_xy / n);
    m.cov_x_y = (m.mean_xy - m.mean_x * m.mean_y) / n;
    m.cov_x_xy = (sxxy / n - m.mean_x * m.mean_xy) / n;
    m.cov_y_xy = (sxyy / n - m.mean_y * m.mean_xy) / n;
    m.n_effective = total;
    return m;
}

WeakAverageEstimate weak_averages(const MomentEstimate &m, double g_x, double g_y) {
    require_coupling(g_x, "g_x");
    require_coupling(g_y, "g_y");
    double gg = g_x * g_y;
    double i_b = m.mean_x / g_x;
    double i_c = m.mean_y / g_y;
    double i_bc = 2 * m.mean_xy / gg - i_b * i_c;

    // Jacobian rows with respect to (mean_x, mean_y, mean_xy).
    const double jb[3] = {1 / g_x, 0, 0};
    const double jc[3] = {0, 1 / g_y, 0};
    const double jbc[3] = {-i_c / g_x, -i_b / g_y, 2 / gg};
    const double cov[3][3] = {
        {m.se_x * m.se_x, m.cov_x_y, m.cov_x_xy},
        {m.cov_x_y, m.se_y * m.se_y, m.cov_y_xy},
        {m.cov_x_xy, m.cov_y_xy, m.se_xy * m.se_xy},
    };
    auto quad = [&](const double *a, const double *b) {
        double s = 0;
        for (int r = 0; r < 3; r++) {
            for (int c = 0; c < 3; c++) {
                s += a[r] * cov[r][c] * b[c];
            }
        }
        return s;
    };

    WeakAverageEstimate w;
    w.i_b = {i_b, std::sqrt(std::max(0.0, quad(jb, jb)))};
    w.i_c = {i_c, std::sqrt(std::max(0.0, quad(jc, jc)))};
    w.i_bc = {i_bc, std::sqrt(std::max(0.0, quad(jbc, jbc)))};
    w.cov_b_c = quad(jb, jc);
    w.cov_b_bc = quad(jb, jbc);
    w.cov_c_bc = quad(jc, jbc);
    return w;
}

PostSelectedValue postselected_weak_value(const CountsGrid &counts_d, double g_y) {
    require_coupling(g_y, "g_y");
    MomentEstimate m = grid_moments(counts_d);
    PostSelectedValue v;
    v.value = m.mean_y / g_y;
    v.se = m.se_y / g_y;
    v.anomalous = std::abs(v.value) - 1 > kAnomalySigmas * v.se;
    return v;
}

Measured estimate_p_plus(int64_t n_d, int64_t n_dperp) {
    if (n_d < 0 || n_dperp < 0 || n_d + n_dperp == 0) {
        throw InsufficientCounts("post-selection probability needs counts in at least one run");
    }
    double n = static_cast<double>(n_d + n_dperp);
    double p = static_cast<double>(n_d) / n;
    return Measured{p, std::sqrt(p * (1 - p) / n)};
}

B4Estimate compose_b4(
    const WeakAverageEstimate &run_a,
    const PostSelectedValue &run_d,
    const PostSelectedValue &run_dperp,
    const Measured &p_plus,
    int64_t n_d,
    int64_t n_dperp) {
    B4Estimate e;
    e.run_a = run_a;
    e.run_d = run_d;
    e.run_dperp = run_dperp;
    e.p_plus = p_plus;
    e.n_d = n_d;
    e.n_dperp = n_dperp;
    e.value = e.recompute();

    double p = p_plus.value;
    double var_a = run_a.i_b.se * run_a.i_b.se + run_a.i_bc.se * run_a.i_bc.se + 2 * run_a.cov_b_bc;
    double dp = run_d.value + run_dperp.value - 2;
    double var = std::max(0.0, var_a) + p * p * run_d.se * run_d.se + (1 - p) * (1 - p) * run_dperp.se * run_dperp.se +
                 dp * dp * p_plus.se * p_plus.se;
    e.se = std::sqrt(var);
    return e;
}

double bootstrap_se(
    const CountsGrid &counts,
    const std::function<double(const MomentEstimate &)> &statistic,
    int resamples,
    uint64_t seed) {
    if (resamples < 50) {
        throw std::invalid_argument("bootstrap needs at least 50 resamples");
    }
    int64_t total = counts.total();
    require_counts(total);
    std::vector<double> weights(counts.counts.begin(), counts.counts.end());

    CountsGrid resample = counts;
    double mean = 0;
    double m2 = 0;
    for (int r = 0; r < resamples; r++) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<uint64_t>(r)));
        resample.counts = multinomial_counts(weights, total, rng);
        double v = statistic(grid_moments(resample));
        // Welford update.
        double delta = v - mean;
        mean += delta / (r + 1);
        m2 += delta * (v - mean);
    }
    return std::sqrt(m2 / (resamples - 1));
}

double bootstrap_se(const CountsGrid &counts, MomentStatistic statistic, int resamples, uint64_t seed) {
    return bootstrap_se(
        counts,
        [statistic](const MomentEstimate &m) {
            switch (statistic) {
                case MomentStatistic::kMeanX:
                    return m.mean_x;
                case MomentStatistic::kMeanY:
                    return m.mean_y;
                case MomentStatistic::kMeanXY:
                    break;
            }
            return m.mean_xy;
        },
        resamples,
        seed);
}

}  // namespace lgweak
