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

#include "lgweak/pointer.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lgweak/errors.h"

namespace lgweak {

namespace {

// Integrals of f(u - a) f(u - a') for displaced amplitude profiles. The
// product is a normalized Gaussian of variance sigma^2 centred on the
// midpoint, scaled by exp(-(a - a')^2 / (8 sigma^2)).
double overlap(double a, double a2, double sigma) {
    double d = a - a2;
    return std::exp(-d * d / (8 * sigma * sigma));
}

double midpoint(double a, double a2) {
    return 0.5 * (a + a2);
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

// Mass of a unit-normalized Gaussian (mean m, std sigma) inside [lo, hi].
double interval_mass(double lo, double hi, double m, double sigma) {
    double zl = (lo - m) / sigma;
    double zh = (hi - m) / sigma;
    // Subtract upper tails on the right so the difference keeps precision.
    if (zl > 0) {
        return 0.5 * (std::erfc(zl / std::numbers::sqrt2) - std::erfc(zh / std::numbers::sqrt2));
    }
    return normal_cdf(zh) - normal_cdf(zl);
}

}  // namespace

double PointerConfig::weakness() const {
    return std::max(g_x, g_y) / sigma;
}

void PointerConfig::validate() const {
    if (!(sigma > 0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("pointer width sigma must be positive");
    }
    if (!(g_x >= 0) || !(g_y >= 0) || !std::isfinite(g_x) || !std::isfinite(g_y)) {
        throw std::invalid_argument("pointer couplings g_x, g_y must be non-negative");
    }
}

double MixtureAmplitude::probability() const {
    double total = 0;
    for (int k = 0; k < 4; k++) {
        for (int k2 = 0; k2 < 4; k2++) {
            double w = (coeffs[k] * std::conj(coeffs[k2])).real();
            total += w * overlap(shift_x(k), shift_x(k2), sigma) * overlap(shift_y(k), shift_y(k2), sigma);
        }
    }
    return total;
}

MixtureAmplitude postselected_amplitude(
    const QubitState &pre,
    const DichotomicObservable &obs_b,
    const DichotomicObservable &obs_c,
    const QubitState &post,
    const PointerConfig &cfg) {
    cfg.validate();
    MixtureAmplitude amp;
    amp.g_x = cfg.g_x;
    amp.g_y = cfg.g_y;
    amp.sigma = cfg.sigma;
    for (int b : {1, -1}) {
        for (int c : {1, -1}) {
            Matrix2 pb = obs_b.projector(b);
            Matrix2 pc = obs_c.projector(c);
            Matrix2 op = cfg.order == CouplingOrder::kBFirst ? pc * pb : pb * pc;
            amp.coeffs[MixtureAmplitude::index(b, c)] = sandwich(post, op, pre);
        }
    }
    double p = amp.probability();
    if (!(p > kPostSelectionCutoff)) {
        std::stringstream ss;
        ss << "pointer post-selection probability " << p << " is at or below the cutoff " << kPostSelectionCutoff;
        throw PostSelectionSingular(ss.str());
    }
    return amp;
}

PointerMoments exact_moments(const MixtureAmplitude &amp) {
    double p = 0, sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    double var = amp.sigma * amp.sigma;
    for (int k = 0; k < 4; k++) {
        for (int k2 = 0; k2 < 4; k2++) {
            double w = (amp.coeffs[k] * std::conj(amp.coeffs[k2])).real();
            if (w == 0) {
                continue;
            }
            double ox = overlap(amp.shift_x(k), amp.shift_x(k2), amp.sigma);
            double oy = overlap(amp.shift_y(k), amp.shift_y(k2), amp.sigma);
            double mx = midpoint(amp.shift_x(k), amp.shift_x(k2));
            double my = midpoint(amp.shift_y(k), amp.shift_y(k2));
            double weight = w * ox * oy;
            p += weight;
            sx += weight * mx;
            sy += weight * my;
            sxy += weight * mx * my;
            sxx += weight * (var + mx * mx);
            syy += weight * (var + my * my);
        }
    }
    return PointerMoments{sx / p, sy / p, sxy / p, sxx / p, syy / p, p};
}

DetectorGrid DetectorGrid::centered(int pixels, double pitch) {
    DetectorGrid g;
    g.n_x = pixels;
    g.n_y = pixels;
    g.pitch = pitch;
    g.validate();
    return g;
}

bool DetectorGrid::covers(double sigma, double max_shift, double guard_sigmas) const {
    double reach = max_shift + guard_sigmas * sigma;
    return left() <= origin_x - reach && left() + n_x * pitch >= origin_x + reach && bottom() <= origin_y - reach &&
           bottom() + n_y * pitch >= origin_y + reach;
}

void DetectorGrid::validate() const {
    if (n_x < 1 || n_y < 1) {
        throw std::invalid_argument("detector grid needs at least one pixel per axis");
    }
    if (!(pitch > 0) || !std::isfinite(pitch)) {
        throw std::invalid_argument("detector pitch must be positive");
    }
}

ProbabilityMatrix pixel_probabilities(const MixtureAmplitude &amp, const DetectorGrid &grid) {
    grid.validate();
    double norm = amp.probability();

    // Per-axis pixel integrals, indexed by the sign pair of the two branches.
    // Pair index: 2*(s<0) + (s'<0).
    auto axis_table = [&](int n, double start, double g) {
        std::vector<double> table(4 * static_cast<size_t>(n));
        for (int s : {1, -1}) {
            for (int s2 : {1, -1}) {
                int pair = 2 * (s < 0) + (s2 < 0);
                double o = overlap(s * g, s2 * g, amp.sigma);
                double m = midpoint(s * g, s2 * g);
                for (int i = 0; i < n; i++) {
                    double lo = start + i * grid.pitch;
                    table[pair * n + i] = o * interval_mass(lo, lo + grid.pitch, m, amp.sigma);
                }
            }
        }
        return table;
    };
    std::vector<double> tx = axis_table(grid.n_x, grid.left(), amp.g_x);
    std::vector<double> ty = axis_table(grid.n_y, grid.bottom(), amp.g_y);

    std::array<double, 16> weights{};
    for (int k = 0; k < 4; k++) {
        for (int k2 = 0; k2 < 4; k2++) {
            weights[4 * k + k2] = (amp.coeffs[k] * std::conj(amp.coeffs[k2])).real() / norm;
        }
    }

    ProbabilityMatrix out;
    out.grid = grid;
    out.p.assign(grid.size(), 0.0);
    double inside = 0;
    for (int j = 0; j < grid.n_y; j++) {
        for (int i = 0; i < grid.n_x; i++) {
            double v = 0;
            for (int k = 0; k < 4; k++) {
                for (int k2 = 0; k2 < 4; k2++) {
                    double w = weights[4 * k + k2];
                    if (w == 0) {
                        continue;
                    }
                    int px = 2 * (MixtureAmplitude::b_sign(k) < 0) + (MixtureAmplitude::b_sign(k2) < 0);
                    int py = 2 * (MixtureAmplitude::c_sign(k) < 0) + (MixtureAmplitude::c_sign(k2) < 0);
                    v += w * tx[px * grid.n_x + i] * ty[py * grid.n_y + j];
                }
            }
            v = std::max(v, 0.0);
            out.p[static_cast<size_t>(j) * grid.n_x + i] = v;
            inside += v;
        }
    }
    out.outside_mass = std::max(0.0, 1.0 - inside);
    if (out.outside_mass > kMaxOutsideMass) {
        std::stringstream ss;
        ss << "detector grid misses " << out.outside_mass << " of the pointer intensity (limit " << kMaxOutsideMass
           << ")";
        throw GridTooSmall(ss.str());
    }
    return out;
}

PointerMoments pixel_moments(const ProbabilityMatrix &pixels) {
    const DetectorGrid &g = pixels.grid;
    double p = 0, sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (int j = 0; j < g.n_y; j++) {
        double y = g.y_center(j);
        for (int i = 0; i < g.n_x; i++) {
            double x = g.x_center(i);
            double w = pixels.at(i, j);
            p += w;
            sx += w * x;
            sy += w * y;
            sxy += w * x * y;
            sxx += w * x * x;
            syy += w * y * y;
        }
    }
    return PointerMoments{sx / p, sy / p, sxy / p, sxx / p, syy / p, p};
}

int64_t CountsGrid::total() const {
    int64_t t = 0;
    for (int64_t c : counts) {
        t += c;
    }
    return t;
}

CountsGrid sample_frame(const ProbabilityMatrix &pixels, int64_t n_photons, double dark_rate, uint64_t seed) {
    if (n_photons < 1) {
        throw std::invalid_argument("sample_frame needs at least one photon");
    }
    if (!(dark_rate >= 0) || !std::isfinite(dark_rate)) {
        throw std::invalid_argument("dark_rate must be non-negative");
    }
    std::mt19937_64 rng(seed);
    CountsGrid out;
    out.grid = pixels.grid;
    out.counts = multinomial_counts(pixels.p, n_photons, rng);
    out.photons = n_photons;
    out.seed = seed;

    if (dark_rate > 0) {
        std::poisson_distribution<int64_t> dark(dark_rate);
        for (size_t k = 0; k < out.counts.size(); k++) {
            int64_t d = dark(rng);
            out.counts[k] += d;
            out.dark_counts += d;
        }
    }
    return out;
}

std::vector<int64_t> multinomial_counts(std::span<const double> weights, int64_t n, std::mt19937_64 &rng) {
    size_t size = weights.size();
    // Suffix sums make the conditional probability of the last occupied
    // cell exactly 1, so every item is placed.
    std::vector<double> suffix(size + 1, 0.0);
    for (size_t k = size; k-- > 0;) {
        if (!(weights[k] >= 0)) {
            throw std::invalid_argument("multinomial weights must be non-negative");
        }
        suffix[k] = suffix[k + 1] + weights[k];
    }
    if (!(suffix[0] > 0)) {
        throw std::invalid_argument("multinomial weights sum to zero");
    }
    std::vector<int64_t> out(size, 0);
    int64_t remaining = n;
    for (size_t k = 0; k < size && remaining > 0; k++) {
        if (weights[k] <= 0) {
            continue;
        }
        double q = std::clamp(weights[k] / suffix[k], 0.0, 1.0);
        std::binomial_distribution<int64_t> draw(remaining, q);
        int64_t hits = draw(rng);
        out[k] = hits;
        remaining -= hits;
    }
    return out;
}

uint64_t derive_seed(uint64_t base, uint64_t index) {
    uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace lgweak
