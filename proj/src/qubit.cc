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

#include "lgweak/qubit.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lgweak/errors.h"

namespace lgweak {

namespace {

Complex checked_overlap(const QubitState &pre, const QubitState &post) {
    Complex overlap = post.inner(pre);
    double prob = std::norm(overlap);
    if (!(prob > kPostSelectionCutoff)) {
        std::stringstream ss;
        ss << "post-selection probability " << prob << " is at or below the cutoff " << kPostSelectionCutoff
           << " (pre = (" << pre.amp_h() << ", " << pre.amp_v() << "), post = (" << post.amp_h() << ", "
           << post.amp_v() << "))";
        throw PostSelectionSingular(ss.str());
    }
    return overlap;
}

WeakValue to_weak_value(Complex z) {
    return WeakValue{z.real(), z.imag()};
}

}  // namespace

QubitState::QubitState(Complex amp_h, Complex amp_v) : amp_h_(amp_h), amp_v_(amp_v) {
    double n = std::norm(amp_h) + std::norm(amp_v);
    if (!(std::abs(n - 1.0) <= 1e-12)) {
        std::stringstream ss;
        ss << "QubitState must be normalized, got |h|^2 + |v|^2 = " << n;
        throw std::invalid_argument(ss.str());
    }
}

Complex QubitState::inner(const QubitState &other) const {
    return std::conj(amp_h_) * other.amp_h_ + std::conj(amp_v_) * other.amp_v_;
}

Matrix2 Matrix2::identity() {
    return Matrix2{{1.0, 0.0, 0.0, 1.0}};
}

Matrix2 Matrix2::operator*(const Matrix2 &rhs) const {
    Matrix2 out;
    for (int r = 0; r < 2; r++) {
        for (int c = 0; c < 2; c++) {
            out(r, c) = (*this)(r, 0) * rhs(0, c) + (*this)(r, 1) * rhs(1, c);
        }
    }
    return out;
}

Matrix2 Matrix2::operator+(const Matrix2 &rhs) const {
    Matrix2 out;
    for (size_t k = 0; k < 4; k++) {
        out.m[k] = m[k] + rhs.m[k];
    }
    return out;
}

Matrix2 Matrix2::scaled(Complex factor) const {
    Matrix2 out;
    for (size_t k = 0; k < 4; k++) {
        out.m[k] = m[k] * factor;
    }
    return out;
}

Matrix2 Matrix2::adjoint() const {
    return Matrix2{{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
}

Complex sandwich(const QubitState &bra, const Matrix2 &op, const QubitState &ket) {
    Complex h = op(0, 0) * ket.amp_h() + op(0, 1) * ket.amp_v();
    Complex v = op(1, 0) * ket.amp_h() + op(1, 1) * ket.amp_v();
    return std::conj(bra.amp_h()) * h + std::conj(bra.amp_v()) * v;
}

DichotomicObservable::DichotomicObservable(double axis_angle) : axis_angle_(axis_angle) {
    double c = std::cos(2 * axis_angle);
    double s = std::sin(2 * axis_angle);
    matrix_ = Matrix2{{c, s, s, -c}};
}

Matrix2 DichotomicObservable::projector(int sign) const {
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("projector sign must be +1 or -1");
    }
    return (Matrix2::identity() + matrix_.scaled(static_cast<double>(sign))).scaled(0.5);
}

QubitState state_from_angle(double theta) {
    return QubitState(std::cos(theta), std::sin(theta));
}

QubitState orthogonal_state_from_angle(double theta) {
    return QubitState(std::sin(theta), -std::cos(theta));
}

DichotomicObservable observable_from_angle(double theta) {
    return DichotomicObservable(theta);
}

double expectation(const DichotomicObservable &obs, const QubitState &psi) {
    return sandwich(psi, obs.matrix(), psi).real();
}

double transition_prob(const QubitState &pre, const QubitState &post) {
    return std::norm(post.inner(pre));
}

WeakValue weak_value(const DichotomicObservable &obs, const QubitState &pre, const QubitState &post) {
    Complex overlap = checked_overlap(pre, post);
    return to_weak_value(sandwich(post, obs.matrix(), pre) / overlap);
}

WeakValue sequential_weak_value(
    const DichotomicObservable &late,
    const DichotomicObservable &early,
    const QubitState &pre,
    const QubitState &post) {
    Complex overlap = checked_overlap(pre, post);
    return to_weak_value(sandwich(post, late.matrix() * early.matrix(), pre) / overlap);
}

}  // namespace lgweak
