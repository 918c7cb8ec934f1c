// Copyright 2026 The jointbell Authors
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

#pragma once

// Independent reference computations built on Eigen. Nothing here calls
// into the library's linear algebra.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>

#include "jointbell/matrix.hpp"

namespace oracle {

using C = std::complex<double>;
using M2 = Eigen::Matrix2cd;
using M4 = Eigen::Matrix4cd;

inline constexpr double kPi = 3.14159265358979323846;

inline M4 kron(const M2 &a, const M2 &b) {
    M4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

inline M2 pauli_x() {
    M2 m;
    m << 0, 1, 1, 0;
    return m;
}

inline M2 pauli_z() {
    M2 m;
    m << 1, 0, 0, -1;
    return m;
}

/// |a><a| - |a+90><a+90| built from the polarization vectors directly.
inline M2 polarization_observable(double deg) {
    const double a = deg * kPi / 180.0;
    Eigen::Vector2cd plus(std::cos(a), std::sin(a));
    Eigen::Vector2cd minus(-std::sin(a), std::cos(a));
    return plus * plus.adjoint() - minus * minus.adjoint();
}

/// Side A: X at 0, Y at 45 degrees. Side B: X at 22.5, Y at 67.5 degrees.
inline M2 observable(bool side_a, bool x) {
    const double base = side_a ? 0.0 : 22.5;
    return polarization_observable(base + (x ? 0.0 : 45.0));
}

inline M4 singlet() {
    Eigen::Vector4cd psi(0, 1, -1, 0);
    psi /= std::sqrt(2.0);
    return psi * psi.adjoint();
}

inline M4 werner(double v) { return v * singlet() + (1.0 - v) * M4::Identity() / 4.0; }

/// Outcome probabilities in canonical order: index 4 * (2*[xa=-] + [ya=-]) + (2*[xb=-] + [yb=-]).
inline std::array<double, 16> joint_probabilities(const M4 &rho, double theta_a_deg, double theta_b_deg) {
    const double ta = theta_a_deg * kPi / 180.0, tb = theta_b_deg * kPi / 180.0;
    std::array<M2, 4> ea, eb;
    for (int k = 0; k < 4; ++k) {
        const double sx = (k & 2) ? -1.0 : 1.0, sy = (k & 1) ? -1.0 : 1.0;
        ea[k] = 0.25 * (M2::Identity() + sx * std::cos(ta) * observable(true, true) +
                        sy * std::sin(ta) * observable(true, false));
        eb[k] = 0.25 * (M2::Identity() + sx * std::cos(tb) * observable(false, true) +
                        sy * std::sin(tb) * observable(false, false));
    }
    std::array<double, 16> p{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) p[4 * i + j] = (rho * kron(ea[i], eb[j])).trace().real();
    return p;
}

inline M4 to_eigen(const jointbell::Matrix4 &m) {
    M4 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = m(i, j);
    return out;
}

inline M2 to_eigen(const jointbell::Matrix2 &m) {
    M2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = m(i, j);
    return out;
}

}  // namespace oracle
