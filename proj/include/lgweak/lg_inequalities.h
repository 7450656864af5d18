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

#ifndef LGWEAK_LG_INEQUALITIES_H
#define LGWEAK_LG_INEQUALITIES_H

#include <span>
#include <string_view>
#include <vector>

namespace lgweak {

/// A value counts as a violation only when it leaves the bounds by more
/// than this.
inline constexpr double kViolationTolerance = 1e-9;

enum class Violation { kNegative, kNone, kPositive };

/// "neg", "none" or "pos".
std::string_view violation_name(Violation v);

struct LGVerdict {
    double value = 0;
    double lower_bound = 0;
    double upper_bound = 0;
    Violation classification = Violation::kNone;
};

LGVerdict classify(double value, double lower_bound, double upper_bound);

/// Everything needed to evaluate the four-measurement quantity. The
/// preparation I_A is fixed to +1, so two-time correlators with I_A are the
/// single-measurement averages.
struct CorrelatorSet {
    double exp_b = 0;       ///< <I_B>
    double exp_c = 0;       ///< <I_C>
    double corr_bc = 0;     ///< <I_B I_C>
    double exp_d = 0;       ///< <I_D>
    double p_d_plus = 0;    ///< p_D(+1)
    double p_d_minus = 0;   ///< p_D(-1)
    double wv_c_plus = 0;   ///< Re of I_C's weak value post-selected on I_D = +1
    double wv_c_minus = 0;  ///< same for I_D = -1

    /// <I_C I_D>, composed from the post-selected pieces.
    double corr_cd() const {
        return p_d_plus * wv_c_plus - p_d_minus * wv_c_minus;
    }

    /// Throws std::invalid_argument if the probability or aggregation
    /// identities are off by more than `tol`.
    void check_identities(double tol = 1e-10) const;
};

/// Quantum correlators for pre-selection angle alpha, I_B axis gamma and
/// post-selection axis delta (all radians; I_C is the H/V observable).
CorrelatorSet correlators_b4(double alpha, double gamma, double delta);

/// B3 = <I_B> + <I_B I_C> - <I_C>, bounded by [-3, 1].
LGVerdict b3_value(double exp_b, double exp_c, double corr_bc);

/// B3 = 1 + 2 p_C(1) (1<I_B> - 1).
double b3_postselected_form(double exp_b_ps_plus, double p_c_plus);

/// B4 = <I_B> + <I_B I_C> + <I_C I_D> - <I_D>, bounded by [-2, 2].
LGVerdict b4_value(const CorrelatorSet &set);

/// <I_B> + <I_B I_C> + p_D(1)[1<I_C> - 1] - p_D(-1)[-1<I_C> - 1]
double b4_postselected_form(const CorrelatorSet &set);

/// B4 from unconditioned two-time correlators, with <I_C I_D> taken as
/// Re <psi| I_D I_C |psi>. Needs no post-selection, so it is defined at
/// configurations where one outcome of I_D never occurs.
LGVerdict b4_from_correlators(double alpha, double gamma, double delta);

/// cos 2(a - g) + cos 2g + cos 2d - cos 2(d - a)
double b4_closed_form(double alpha, double gamma, double delta);

/// (3 - M) / (2 p_D(-1)) with M = <I_B> + <I_B I_C> + <I_C>.
///
/// The four-measurement quantity can be rewritten as
/// B4 = M - 1 + 2 p_D(-1) (1 - -1<I_C>), so this is the amount by which
/// -1<I_C> must fall below +1 for a positive violation. Exact conditions for
/// both signs and both branches are in violation_thresholds().
double anomaly_threshold(double exp_b, double corr_bc, double exp_c, double p_d_minus);

/// Exact weak-value thresholds for each violation sign. Each condition is an
/// equivalence with the corresponding sign of B4 - (+-2), given the set's
/// identities.
struct ViolationThresholds {
    /// B4 > 2  <=>  -1<I_C> < minus_branch_positive
    double minus_branch_positive = 0;
    /// B4 < -2 <=>  -1<I_C> > minus_branch_negative
    double minus_branch_negative = 0;
    /// B4 > 2  <=>  1<I_C> > plus_branch_positive
    double plus_branch_positive = 0;
    /// B4 < -2 <=>  1<I_C> < plus_branch_negative
    double plus_branch_negative = 0;
};

/// Throws PostSelectionSingular if either post-selection probability is at
/// or below the cutoff.
ViolationThresholds violation_thresholds(const CorrelatorSet &set);

/// Two-time correlators for an n-measurement sequence with I_1 = +1.
struct CorrelatorChain {
    int n = 0;
    std::vector<double> nearest;  ///< <I_m I_{m+1}>, m = 1 .. n-1
    double endpoint = 0;          ///< <I_1 I_n>
};

struct Bounds {
    double lower = 0;
    double upper = 0;

    bool operator==(const Bounds &) const = default;
};

/// Sum of nearest-neighbour correlators minus the endpoint correlator.
/// Throws ChainTooShort for n < 3, std::invalid_argument for a malformed chain.
LGVerdict bn_value(const CorrelatorChain &chain);

/// Macrorealist bounds: upper n-2; lower -n (n odd) or -(n-2) (n even).
Bounds bn_bounds(int n);

/// Exact extrema of B_n over all deterministic +-1 assignments. A linear
/// functional over mixtures of assignments attains its extrema at a single
/// assignment, so no stochastic strategies need to be enumerated.
/// With `fix_first` the first value is pinned to +1 (2^(n-1) cases),
/// otherwise all 2^n cases are enumerated.
/// Throws ChainTooShort for n < 3 and EnumerationTooLarge for n > 20.
Bounds macrorealist_bounds_bruteforce(int n, bool fix_first = true);

inline constexpr int kMaxEnumerationLength = 20;

/// Post-selected decomposition on the last measurement's outcome:
///   p+ (sum_m +<I_m I_m+1> + +<I_n-1> - 1) + p- (sum_m -<I_m I_m+1> - -<I_n-1> + 1)
/// Each branch list holds the n-2 conditional correlators followed by the
/// conditional value of I_{n-1}. Throws LengthMismatch on other lengths.
double bn_postselected_decomposition(
    const CorrelatorChain &chain,
    double p_plus,
    std::span<const double> ps_terms_plus,
    std::span<const double> ps_terms_minus);

/// Chain for a qubit prepared along axis_angles[0] and measured along the
/// remaining axes (radians). Correlators are real parts of the two-time
/// products, which for linear polarizations are cos 2(t_j - t_i).
CorrelatorChain qubit_chain(std::span<const double> axis_angles);

}  // namespace lgweak

#endif
