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

#ifndef LGWEAK_QUBIT_H
#define LGWEAK_QUBIT_H

#include <array>
#include <complex>

namespace lgweak {

using Complex = std::complex<double>;

/// Transition probabilities at or below this value are treated as singular
/// post-selections.
inline constexpr double kPostSelectionCutoff = 1e-10;

/// Normalized polarization state in the {H, V} basis.
class QubitState {
   public:
    /// Throws std::invalid_argument unless |h|^2 + |v|^2 = 1 within 1e-12.
    QubitState(Complex amp_h, Complex amp_v);

    Complex amp_h() const {
        return amp_h_;
    }
    Complex amp_v() const {
        return amp_v_;
    }

    /// <this|other>
    Complex inner(const QubitState &other) const;

   private:
    Complex amp_h_;
    Complex amp_v_;
};

/// Row-major 2x2 complex matrix in the {H, V} basis.
struct Matrix2 {
    std::array<Complex, 4> m{};

    Complex operator()(int row, int col) const {
        return m[2 * row + col];
    }
    Complex &operator()(int row, int col) {
        return m[2 * row + col];
    }

    static Matrix2 identity();
    Matrix2 operator*(const Matrix2 &rhs) const;
    Matrix2 operator+(const Matrix2 &rhs) const;
    Matrix2 scaled(Complex factor) const;
    Matrix2 adjoint() const;
};

/// <bra| M |ket>
Complex sandwich(const QubitState &bra, const Matrix2 &op, const QubitState &ket);

/// Observable with eigenvalues +1/-1 whose +1 eigenstate is the linear
/// polarization at `axis_angle`: cos(2t) Z + sin(2t) X.
class DichotomicObservable {
   public:
    explicit DichotomicObservable(double axis_angle);

    double axis_angle() const {
        return axis_angle_;
    }
    const Matrix2 &matrix() const {
        return matrix_;
    }

    /// Spectral projector onto the eigenvalue `sign` (+1 or -1).
    Matrix2 projector(int sign) const;

   private:
    double axis_angle_;
    Matrix2 matrix_;
};

/// Complex conditional average; "anomalous" when the real part leaves [-1, 1].
struct WeakValue {
    double re = 0;
    double im = 0;

    bool anomalous() const {
        return re < -1.0 || re > 1.0;
    }
};

/// cos(t)|H> + sin(t)|V>
QubitState state_from_angle(double theta);

/// sin(t)|H> - cos(t)|V>, the state orthogonal to state_from_angle(t).
QubitState orthogonal_state_from_angle(double theta);

DichotomicObservable observable_from_angle(double theta);

double expectation(const DichotomicObservable &obs, const QubitState &psi);

/// |<post|pre>|^2
double transition_prob(const QubitState &pre, const QubitState &post);

/// <post|O|pre> / <post|pre>. Throws PostSelectionSingular when the
/// transition probability is at or below kPostSelectionCutoff.
WeakValue weak_value(const DichotomicObservable &obs, const QubitState &pre, const QubitState &post);

/// <post| late * early |pre> / <post|pre>, the earlier measurement acting
/// first on the pre-selected state.
WeakValue sequential_weak_value(
    const DichotomicObservable &late,
    const DichotomicObservable &early,
    const QubitState &pre,
    const QubitState &post);

}  // namespace lgweak

#endif
