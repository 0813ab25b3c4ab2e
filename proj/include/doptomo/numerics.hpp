// SPDX-License-Identifier: Apache-2.0
//
// doptomo: coherent Doppler tomography simulation and reconstruction
// Copyright (C) 2026 The doptomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef DOPTOMO_NUMERICS_HPP
#define DOPTOMO_NUMERICS_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace doptomo
{

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;
using RVector = std::vector<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double speed_of_light = 299792458.0; // m/s, exact

/// Dense row-major matrix. Used for the convolution matrix, the null steering
/// matrix and the small Gram systems; nothing here is performance critical.
template <typename T>
class Matrix
{
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    T &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<T> &data() noexcept { return data_; }
    const std::vector<T> &data() const noexcept { return data_; }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = T(1);
        return m;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using ComplexMatrix = Matrix<cplx>;
using RealMatrix = Matrix<double>;

/// y = A x
CVector multiply(const ComplexMatrix &a, std::span<const cplx> x);
RVector multiply(const RealMatrix &a, std::span<const double> x);

/// y = A^H x
CVector multiply_adjoint(const ComplexMatrix &a, std::span<const cplx> x);

double norm2(std::span<const cplx> x);

/// Least squares min ||A x - b||_2 (+ ridge ||x||^2 when ridge > 0) by
/// column-pivoted Householder QR. Requires rows >= cols unless ridge > 0.
/// A column whose pivot falls below rank_tol * |R(0,0)| is treated as
/// dependent; with ridge == 0 that throws SingularSystemError.
/// rank_tol <= 0 selects max(m, n) * machine epsilon.
CVector lstsq(const ComplexMatrix &a, std::span<const cplx> b, double ridge = 0.0,
              double rank_tol = 0.0);

/// Solves G x = b for a symmetric positive semi-definite G using Cholesky with
/// diagonal pivoting. A pivot below pivot_tol * max(diag(G)) means G is
/// singular and throws SingularSystemError naming the first dependent column.
RVector solve_spd(const RealMatrix &g, std::span<const double> b, double pivot_tol = 1e-12);

/// X[f] = sum_k x[k] exp(-j 2 pi f k / N). Radix-2 FFT for powers of two,
/// direct summation otherwise.
CVector dft(std::span<const cplx> x);

/// x[k] = (1/N) sum_f X[f] exp(+j 2 pi f k / N)
CVector idft(std::span<const cplx> spectrum);

} // namespace doptomo

#endif
