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

#include <cmath>
#include <stdexcept>
#include <string>

#include "jointbell/matrix.hpp"
#include "jointbell/povm.hpp"
#include "jointbell/random.hpp"

namespace jointbell {

inline constexpr double kStateTolerance = 1e-10;

namespace detail {

template <std::size_t N>
void check_density_operator(const Matrix<N> &rho, const char *what) {
    for (const auto &v : rho.entries()) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
        }
    }
    const double herm = rho.hermiticity_error();
    if (herm > kStateTolerance) {
        throw std::invalid_argument(std::string(what) + ": not Hermitian (max |rho - rho^dagger| = " +
                                    std::to_string(herm) + ")");
    }
    const Complex tr = rho.trace();
    if (std::abs(tr - 1.0) > kStateTolerance) {
        throw std::invalid_argument(std::string(what) + ": trace " + std::to_string(tr.real()) + " != 1");
    }
    const double lo = min_eigenvalue(rho);
    if (lo < -kStateTolerance) {
        throw std::invalid_argument(std::string(what) + ": negative eigenvalue " + std::to_string(lo));
    }
}

}  // namespace detail

/// Density operator of one polarization qubit.
class QubitState {
   public:
    explicit QubitState(const Matrix2 &rho) : rho_(rho) { detail::check_density_operator(rho_, "qubit state"); }

    static QubitState maximally_mixed() { return QubitState(Matrix2::identity() * 0.5); }

    const Matrix2 &rho() const { return rho_; }

    double expectation(const Matrix2 &observable) const { return trace_product(rho_, observable); }

    double purity() const { return trace_product(rho_, rho_); }

   private:
    Matrix2 rho_;
};

/// Density operator of a photon pair in the (H,V) (x) (H,V) basis, A first.
class TwoQubitState {
   public:
    /// Throws std::invalid_argument unless rho is Hermitian, unit trace and
    /// positive semidefinite, each within 1e-10.
    explicit TwoQubitState(const Matrix4 &rho) : rho_(rho) { detail::check_density_operator(rho_, "two-qubit state"); }

    const Matrix4 &rho() const { return rho_; }

    double expectation(const Matrix4 &observable) const { return trace_product(rho_, observable); }

    double purity() const { return trace_product(rho_, rho_); }

    QubitState reduced(Side keep) const {
        return QubitState(keep == Side::A ? partial_trace_b(rho_) : partial_trace_a(rho_));
    }

   private:
    Matrix4 rho_;
};

inline Matrix4 maximally_mixed_matrix() { return Matrix4::identity() * 0.25; }

/// (|HV> - |VH>)/sqrt(2): anti-correlated in every parallel linear basis.
inline TwoQubitState singlet_state() {
    Matrix4 rho;
    // Basis order HH, HV, VH, VV.
    rho(1, 1) = 0.5;
    rho(2, 2) = 0.5;
    rho(1, 2) = -0.5;
    rho(2, 1) = -0.5;
    return TwoQubitState(rho);
}

inline TwoQubitState maximally_mixed_state() { return TwoQubitState(maximally_mixed_matrix()); }

/// v * singlet + (1 - v) * I/4.
inline TwoQubitState werner_state(double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::domain_error("werner visibility must lie in [0, 1], got " + std::to_string(v));
    }
    return TwoQubitState(singlet_state().rho() * v + maximally_mixed_matrix() * (1.0 - v));
}

/// X_A X_B - X_A Y_B + Y_A X_B + Y_A Y_B.
inline Matrix4 bell_operator() {
    const Matrix2 xa = x_observable(Side::A).op;
    const Matrix2 ya = y_observable(Side::A).op;
    const Matrix2 xb = x_observable(Side::B).op;
    const Matrix2 yb = y_observable(Side::B).op;
    return kron(xa, xb) - kron(xa, yb) + kron(ya, xb) + kron(ya, yb);
}

/// G G^dagger / Tr(G G^dagger) for a complex Gaussian G (Hilbert-Schmidt measure).
inline TwoQubitState random_two_qubit_state(Rng &rng) {
    Matrix4 g;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
    Matrix4 rho = g * g.adjoint();
    rho *= Complex(1.0 / rho.trace().real());
    return TwoQubitState((rho + rho.adjoint()) * 0.5);
}

inline double bell_expectation(const TwoQubitState &state) { return state.expectation(bell_operator()); }

}  // namespace jointbell
