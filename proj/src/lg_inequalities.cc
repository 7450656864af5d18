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

#include "lgweak/lg_inequalities.h"

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lgweak/errors.h"
#include "lgweak/qubit.h"

namespace lgweak {

namespace {

void require_chain_length(int n) {
    if (n < 3) {
        std::stringstream ss;
        ss << "a Leggett-Garg chain needs at least 3 measurements, got n = " << n;
        throw ChainTooShort(ss.str());
    }
}

void require_post_selection(double p, const char *name) {
    if (!(p > kPostSelectionCutoff)) {
        std::stringstream ss;
        ss << name << " = " << p << " is at or below the post-selection cutoff " << kPostSelectionCutoff;
        throw PostSelectionSingular(ss.str());
    }
}

}  // namespace

std::string_view violation_name(Violation v) {
    switch (v) {
        case Violation::kNegative:
            return "neg";
        case Violation::kPositive:
            return "pos";
        case Violation::kNone:
            break;
    }
    return "none";
}

LGVerdict classify(double value, double lower_bound, double upper_bound) {
    Violation c = Violation::kNone;
    if (value > upper_bound + kViolationTolerance) {
        c = Violation::kPositive;
    } else if (value < lower_bound - kViolationTolerance) {
        c = Violation::kNegative;
    }
    return LGVerdict{value, lower_bound, upper_bound, c};
}

void CorrelatorSet::check_identities(double tol) const {
    std::stringstream ss;
    if (std::abs(p_d_plus + p_d_minus - 1) > tol) {
        ss << "p_d_plus + p_d_minus = " << p_d_plus + p_d_minus << " != 1";
    } else if (std::abs(exp_d - (p_d_plus - p_d_minus)) > tol) {
        ss << "exp_d = " << exp_d << " != p_d_plus - p_d_minus = " << p_d_plus - p_d_minus;
    } else if (std::abs(p_d_plus * wv_c_plus + p_d_minus * wv_c_minus - exp_c) > tol) {
        ss << "aggregated weak values " << p_d_plus * wv_c_plus + p_d_minus * wv_c_minus << " != exp_c = " << exp_c;
    } else {
        return;
    }
    throw std::invalid_argument(ss.str());
}

CorrelatorSet correlators_b4(double alpha, double gamma, double delta) {
    QubitState psi_a = state_from_angle(alpha);
    QubitState psi_d = state_from_angle(delta);
    QubitState psi_d_perp = orthogonal_state_from_angle(delta);
    DichotomicObservable obs_b = observable_from_angle(gamma);
    DichotomicObservable obs_c = observable_from_angle(0);

    CorrelatorSet s;
    s.exp_b = expectation(obs_b, psi_a);
    s.exp_c = expectation(obs_c, psi_a);
    s.corr_bc = sequential_weak_value(obs_c, obs_b, psi_a, psi_a).re;
    s.p_d_plus = transition_prob(psi_a, psi_d);
    s.p_d_minus = transition_prob(psi_a, psi_d_perp);
    s.exp_d = s.p_d_plus - s.p_d_minus;
    s.wv_c_plus = weak_value(obs_c, psi_a, psi_d).re;
    s.wv_c_minus = weak_value(obs_c, psi_a, psi_d_perp).re;
    return s;
}

LGVerdict b3_value(double exp_b, double exp_c, double corr_bc) {
    Bounds b = bn_bounds(3);
    return classify(exp_b + corr_bc - exp_c, b.lower, b.upper);
}

double b3_postselected_form(double exp_b_ps_plus, double p_c_plus) {
    return 1 + 2 * p_c_plus * (exp_b_ps_plus - 1);
}

LGVerdict b4_value(const CorrelatorSet &set) {
    Bounds b = bn_bounds(4);
    return classify(set.exp_b + set.corr_bc + set.corr_cd() - set.exp_d, b.lower, b.upper);
}

double b4_postselected_form(const CorrelatorSet &set) {
    return set.exp_b + set.corr_bc + set.p_d_plus * (set.wv_c_plus - 1) - set.p_d_minus * (set.wv_c_minus - 1);
}

LGVerdict b4_from_correlators(double alpha, double gamma, double delta) {
    QubitState psi = state_from_angle(alpha);
    DichotomicObservable obs_b = observable_from_angle(gamma);
    DichotomicObservable obs_c = observable_from_angle(0);
    DichotomicObservable obs_d = observable_from_angle(delta);
    double corr_bc = sandwich(psi, obs_c.matrix() * obs_b.matrix(), psi).real();
    double corr_cd = sandwich(psi, obs_d.matrix() * obs_c.matrix(), psi).real();
    Bounds b = bn_bounds(4);
    return classify(expectation(obs_b, psi) + corr_bc + corr_cd - expectation(obs_d, psi), b.lower, b.upper);
}

double b4_closed_form(double alpha, double gamma, double delta) {
    return std::cos(2 * (alpha - gamma)) + std::cos(2 * gamma) + std::cos(2 * delta) - std::cos(2 * (delta - alpha));
}

double anomaly_threshold(double exp_b, double corr_bc, double exp_c, double p_d_minus) {
    require_post_selection(p_d_minus, "p_d_minus");
    double m = exp_b + corr_bc + exp_c;
    return (3 - m) / (2 * p_d_minus);
}

ViolationThresholds violation_thresholds(const CorrelatorSet &set) {
    require_post_selection(set.p_d_plus, "p_d_plus");
    require_post_selection(set.p_d_minus, "p_d_minus");
    // B4 = M - 1 + 2 p- (1 - w-)   with M  = <B> + <BC> + <C>
    // B4 = B3 + 1 + 2 p+ (w+ - 1)  with B3 = <B> + <BC> - <C>
    double m = set.exp_b + set.corr_bc + set.exp_c;
    double b3 = set.exp_b + set.corr_bc - set.exp_c;
    ViolationThresholds t;
    t.minus_branch_positive = 1 - (3 - m) / (2 * set.p_d_minus);
    t.minus_branch_negative = 1 + (1 + m) / (2 * set.p_d_minus);
    t.plus_branch_positive = 1 + (1 - b3) / (2 * set.p_d_plus);
    t.plus_branch_negative = 1 - (3 + b3) / (2 * set.p_d_plus);
    return t;
}

LGVerdict bn_value(const CorrelatorChain &chain) {
    require_chain_length(chain.n);
    if (chain.nearest.size() != static_cast<size_t>(chain.n - 1)) {
        std::stringstream ss;
        ss << "chain with n = " << chain.n << " needs " << chain.n - 1 << " nearest-neighbour correlators, got "
           << chain.nearest.size();
        throw std::invalid_argument(ss.str());
    }
    double value = -chain.endpoint;
    for (double c : chain.nearest) {
        value += c;
    }
    Bounds b = bn_bounds(chain.n);
    return classify(value, b.lower, b.upper);
}

Bounds bn_bounds(int n) {
    require_chain_length(n);
    double upper = n - 2;
    double lower = (n % 2 == 1) ? -n : -(n - 2);
    return Bounds{lower, upper};
}

Bounds macrorealist_bounds_bruteforce(int n, bool fix_first) {
    require_chain_length(n);
    if (n > kMaxEnumerationLength) {
        std::stringstream ss;
        ss << "enumerating 2^" << n << " assignments exceeds the limit of n = " << kMaxEnumerationLength;
        throw EnumerationTooLarge(ss.str());
    }
    // Bit k of `mask` holds I_{k+1}: set means -1.
    int free_bits = fix_first ? n - 1 : n;
    uint64_t cases = uint64_t{1} << free_bits;
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
    for (uint64_t mask = 0; mask < cases; mask++) {
        uint64_t bits = fix_first ? (mask << 1) : mask;
        auto value = [&](int k) { return ((bits >> k) & 1) ? -1 : 1; };
        int b = 0;
        for (int k = 0; k + 1 < n; k++) {
            b += value(k) * value(k + 1);
        }
        b -= value(0) * value(n - 1);
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    return Bounds{static_cast<double>(lo), static_cast<double>(hi)};
}

double bn_postselected_decomposition(
    const CorrelatorChain &chain,
    double p_plus,
    std::span<const double> ps_terms_plus,
    std::span<const double> ps_terms_minus) {
    require_chain_length(chain.n);
    size_t expected = static_cast<size_t>(chain.n - 1);
    if (ps_terms_plus.size() != expected || ps_terms_minus.size() != expected) {
        std::stringstream ss;
        ss << "n = " << chain.n << " needs " << expected << " post-selected terms per branch, got "
           << ps_terms_plus.size() << " and " << ps_terms_minus.size();
        throw LengthMismatch(ss.str());
    }
    if (!(p_plus >= 0 && p_plus <= 1)) {
        throw std::invalid_argument("p_plus must lie in [0, 1]");
    }
    double sum_plus = 0;
    double sum_minus = 0;
    for (size_t k = 0; k + 1 < expected; k++) {
        sum_plus += ps_terms_plus[k];
        sum_minus += ps_terms_minus[k];
    }
    double last_plus = ps_terms_plus[expected - 1];
    double last_minus = ps_terms_minus[expected - 1];
    return p_plus * (sum_plus + last_plus - 1) + (1 - p_plus) * (sum_minus - last_minus + 1);
}

CorrelatorChain qubit_chain(std::span<const double> axis_angles) {
    int n = static_cast<int>(axis_angles.size());
    require_chain_length(n);
    QubitState psi = state_from_angle(axis_angles[0]);
    CorrelatorChain chain;
    chain.n = n;
    chain.nearest.reserve(n - 1);
    chain.nearest.push_back(expectation(observable_from_angle(axis_angles[1]), psi));
    for (int m = 1; m + 1 < n; m++) {
        DichotomicObservable early = observable_from_angle(axis_angles[m]);
        DichotomicObservable late = observable_from_angle(axis_angles[m + 1]);
        chain.nearest.push_back(sequential_weak_value(late, early, psi, psi).re);
    }
    chain.endpoint = expectation(observable_from_angle(axis_angles[n - 1]), psi);
    return chain;
}

}  // namespace lgweak
