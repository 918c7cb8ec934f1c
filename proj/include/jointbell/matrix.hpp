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

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>

namespace jointbell {

using Complex = std::complex<double>;

/// Dense square complex matrix of compile-time dimension, stored row-major.
///
/// Only dimensions 2 (one polarization qubit) and 4 (a photon pair, tensor
/// order A (x) B) are used; the template exists so both share one algebra.
template <std::size_t N>
class Matrix {
   public:
    static constexpr std::size_t dim = N;

    constexpr Matrix() = default;

    /// Row-major initializer, N*N entries.
    Matrix(std::initializer_list<Complex> entries) {
        if (entries.size() != N * N) {
            throw std::invalid_argument("Matrix initializer must have N*N entries");
        }
        std::copy(entries.begin(), entries.end(), data_.begin());
    }

    static Matrix identity() {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    Complex &operator()(std::size_t row, std::size_t col) { return data_[row * N + col]; }
    const Complex &operator()(std::size_t row, std::size_t col) const { return data_[row * N + col]; }

    Matrix &operator+=(const Matrix &other) {
        for (std::size_t k = 0; k < N * N; ++k) data_[k] += other.data_[k];
        return *this;
    }
    Matrix &operator-=(const Matrix &other) {
        for (std::size_t k = 0; k < N * N; ++k) data_[k] -= other.data_[k];
        return *this;
    }
    Matrix &operator*=(Complex scale) {
        for (auto &v : data_) v *= scale;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
    friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
    friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
    friend Matrix operator*(Matrix a, double s) { return a *= Complex(s); }
    friend Matrix operator*(double s, Matrix a) { return a *= Complex(s); }
    friend Matrix operator-(Matrix a) { return a *= Complex(-1.0); }

    friend Matrix operator*(const Matrix &a, const Matrix &b) {
        Matrix out;
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t k = 0; k < N; ++k) {
                const Complex aik = a(i, k);
                for (std::size_t j = 0; j < N; ++j) {
                    out(i, j) += aik * b(k, j);
                }
            }
        }
        return out;
    }

    friend bool operator==(const Matrix &a, const Matrix &b) { return a.data_ == b.data_; }

    Matrix adjoint() const {
        Matrix out;
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = 0; j < N; ++j) {
                out(i, j) = std::conj((*this)(j, i));
            }
        }
        return out;
    }

    Complex trace() const {
        Complex t = 0.0;
        for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    /// Largest entrywise modulus.
    double max_abs() const {
        double m = 0.0;
        for (const auto &v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    /// max |M - M^dagger| entrywise.
    double hermiticity_error() const { return (*this - adjoint()).max_abs(); }

    const std::array<Complex, N * N> &entries() const { return data_; }

   private:
    std::array<Complex, N * N> data_{};
};

using Matrix2 = Matrix<2>;
using Matrix4 = Matrix<4>;

/// Kronecker product, first factor is the most significant index.
inline Matrix4 kron(const Matrix2 &a, const Matrix2 &b) {
    Matrix4 out;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return out;
}

/// Real part of Tr(a b) for Hermitian arguments, without forming the product.
template <std::size_t N>
double trace_product(const Matrix<N> &a, const Matrix<N> &b) {
    Complex t = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k) t += a(i, k) * b(k, i);
    return t.real();
}

template <std::size_t N>
Matrix<N> commutator(const Matrix<N> &a, const Matrix<N> &b) {
    return a * b - b * a;
}

template <std::size_t N>
Matrix<N> anticommutator(const Matrix<N> &a, const Matrix<N> &b) {
    return a * b + b * a;
}

/// Partial trace over the second (B) factor of a 4x4 operator.
inline Matrix2 partial_trace_b(const Matrix4 &m) {
    Matrix2 out;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) out(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
    return out;
}

/// Partial trace over the first (A) factor of a 4x4 operator.
inline Matrix2 partial_trace_a(const Matrix4 &m) {
    Matrix2 out;
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) out(k, l) = m(k, l) + m(2 + k, 2 + l);
    return out;
}

/// Ascending eigenvalues of a Hermitian 2x2 matrix (closed form).
inline std::array<double, 2> hermitian_eigenvalues(const Matrix2 &m) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double mean = 0.5 * (a + d);
    const double half_gap = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
    return {mean - half_gap, mean + half_gap};
}

namespace detail {

/// Cyclic Jacobi sweeps on a real symmetric matrix; returns the diagonal.
template <std::size_t N>
std::array<double, N> jacobi_symmetric_eigenvalues(std::array<std::array<double, N>, N> a, double tolerance) {
    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        double scale = 0.0;
        for (std::size_t p = 0; p < N; ++p) {
            scale = std::max(scale, std::abs(a[p][p]));
            for (std::size_t q = p + 1; q < N; ++q) off = std::max(off, std::abs(a[p][q]));
        }
        if (off <= tolerance * std::max(1.0, scale)) break;

        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const double apq = a[p][q];
                if (apq == 0.0) continue;
                const double tau = (a[q][q] - a[p][p]) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < N; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::array<double, N> diag{};
    for (std::size_t i = 0; i < N; ++i) diag[i] = a[i][i];
    std::sort(diag.begin(), diag.end());
    return diag;
}

}  // namespace detail

/// Ascending eigenvalues of a Hermitian 4x4 matrix.
///
/// H = R + iI is mapped to the real symmetric [[R, -I], [I, R]], whose
/// spectrum is that of H with every eigenvalue doubled.
inline std::array<double, 4> hermitian_eigenvalues(const Matrix4 &m, double tolerance = 1e-12) {
    std::array<std::array<double, 8>, 8> embed{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            // Symmetrize so a slightly non-Hermitian input still gives a symmetric embedding.
            const Complex h = 0.5 * (m(i, j) + std::conj(m(j, i)));
            embed[i][j] = h.real();
            embed[i + 4][j + 4] = h.real();
            embed[i][j + 4] = -h.imag();
            embed[i + 4][j] = h.imag();
        }
    }
    const auto doubled = detail::jacobi_symmetric_eigenvalues<8>(embed, tolerance);
    return {doubled[0], doubled[2], doubled[4], doubled[6]};
}

template <std::size_t N>
double min_eigenvalue(const Matrix<N> &m) {
    return hermitian_eigenvalues(m).front();
}

}  // namespace jointbell
