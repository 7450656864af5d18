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

#ifndef LGWEAK_POINTER_H
#define LGWEAK_POINTER_H

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "lgweak/qubit.h"

namespace lgweak {

/// Which observable's walk-off coupling acts first on the photon.
enum class CouplingOrder { kBFirst, kCFirst };

/// Gaussian transverse pointer with two weak couplings: I_B shifts x by
/// +-g_x, I_C shifts y by +-g_y. sigma is the standard deviation of the
/// intensity profile, so the amplitude is
///   f(u) = (2 pi sigma^2)^(-1/4) exp(-u^2 / (4 sigma^2)).
struct PointerConfig {
    double sigma = 1.0;
    double g_x = 0.1;
    double g_y = 0.1;
    CouplingOrder order = CouplingOrder::kBFirst;

    /// max(g_x, g_y) / sigma
    double weakness() const;

    /// Throws std::invalid_argument unless sigma > 0 and g_x, g_y >= 0.
    void validate() const;
};

/// Post-selected joint pointer wavefunction
///   psi(x, y) = sum_{b,c} A_bc f(x - b g_x) f(y - c g_y)
/// with (b, c) in {+1, -1}^2, stored at index 2*(b<0) + (c<0).
struct MixtureAmplitude {
    std::array<Complex, 4> coeffs{};
    double g_x = 0;
    double g_y = 0;
    double sigma = 1;

    static int index(int b, int c) {
        return 2 * (b < 0 ? 1 : 0) + (c < 0 ? 1 : 0);
    }
    static int b_sign(int k) {
        return k < 2 ? 1 : -1;
    }
    static int c_sign(int k) {
        return (k % 2 == 0) ? 1 : -1;
    }
    double shift_x(int k) const {
        return b_sign(k) * g_x;
    }
    double shift_y(int k) const {
        return c_sign(k) * g_y;
    }

    Complex coeff(int b, int c) const {
        return coeffs[index(b, c)];
    }

    /// Post-selection probability: the squared norm of psi(x, y), including
    /// the Gaussian overlaps between displaced branches.
    double probability() const;
};

/// A_bc = <post| P_c(I_C) P_b(I_B) |pre> for CouplingOrder::kBFirst; the
/// first-coupled projector always acts first. Throws PostSelectionSingular
/// when the resulting probability is at or below kPostSelectionCutoff.
MixtureAmplitude postselected_amplitude(
    const QubitState &pre,
    const DichotomicObservable &obs_b,
    const DichotomicObservable &obs_c,
    const QubitState &post,
    const PointerConfig &cfg);

/// Moments of the normalized post-selected intensity |psi(x, y)|^2.
struct PointerMoments {
    double mean_x = 0;
    double mean_y = 0;
    double mean_xy = 0;  ///< E[xy], not the central covariance
    double mean_xx = 0;
    double mean_yy = 0;
    double prob = 0;     ///< post-selection probability
};

/// Closed-form Gaussian integrals over the four-term mixture.
PointerMoments exact_moments(const MixtureAmplitude &amp);

/// Square-pixel detector centred on (origin_x, origin_y). Pixel (i, j)
/// covers x in [left + i pitch, left + (i+1) pitch] and likewise for y, with
/// j indexing rows.
struct DetectorGrid {
    int n_x = 32;
    int n_y = 32;
    double pitch = 12.0 / 32.0;
    double origin_x = 0;
    double origin_y = 0;

    /// n x n pixels of the given pitch, centred at the origin.
    static DetectorGrid centered(int pixels, double pitch);

    double left() const {
        return origin_x - 0.5 * n_x * pitch;
    }
    double bottom() const {
        return origin_y - 0.5 * n_y * pitch;
    }
    double x_center(int i) const {
        return left() + (i + 0.5) * pitch;
    }
    double y_center(int j) const {
        return bottom() + (j + 0.5) * pitch;
    }
    size_t size() const {
        return static_cast<size_t>(n_x) * static_cast<size_t>(n_y);
    }

    /// True when the grid reaches at least guard_sigmas * sigma beyond each
    /// pointer shift in every direction.
    bool covers(double sigma, double max_shift, double guard_sigmas = 5.0) const;

    /// Throws std::invalid_argument for non-positive sizes or pitch.
    void validate() const;
};

/// Per-pixel detection probabilities, row-major with rows along y.
struct ProbabilityMatrix {
    DetectorGrid grid;
    std::vector<double> p;
    double outside_mass = 0;

    double at(int i, int j) const {
        return p[static_cast<size_t>(j) * grid.n_x + i];
    }
};

/// Out-of-grid mass above this raises GridTooSmall.
inline constexpr double kMaxOutsideMass = 1e-4;

/// Exact pixel integrals of the normalized intensity, via the Gaussian
/// cumulative function for every cross term of the mixture.
ProbabilityMatrix pixel_probabilities(const MixtureAmplitude &amp, const DetectorGrid &grid);

/// Moments of the pixel distribution evaluated at pixel centres. prob holds
/// the in-grid mass.
PointerMoments pixel_moments(const ProbabilityMatrix &pixels);

/// Photon counts recorded by the detector for one post-selection run.
/// counts includes dark counts; photons is the number of signal photons.
struct CountsGrid {
    DetectorGrid grid;
    std::vector<int64_t> counts;
    int64_t photons = 0;
    int64_t dark_counts = 0;
    uint64_t seed = 0;

    int64_t at(int i, int j) const {
        return counts[static_cast<size_t>(j) * grid.n_x + i];
    }
    int64_t total() const;
};

/// Multinomial draw of n_photons over the pixels (conditioned on landing in
/// the grid) plus independent Poisson dark counts with mean dark_rate per
/// pixel. Identical inputs and seed give identical grids.
CountsGrid sample_frame(const ProbabilityMatrix &pixels, int64_t n_photons, double dark_rate, uint64_t seed);

/// Multinomial draw of n items over non-negative weights (normalized
/// internally) using conditional binomials.
std::vector<int64_t> multinomial_counts(std::span<const double> weights, int64_t n, std::mt19937_64 &rng);

/// Seed for task `index` of a job seeded with `base`:
///   splitmix64(base + (index + 1) * 0x9E3779B97F4A7C15).
uint64_t derive_seed(uint64_t base, uint64_t index);

}  // namespace lgweak

#endif
