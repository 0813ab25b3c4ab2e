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

#include "doptomo/numerics.hpp"
#include "doptomo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace doptomo
{

CVector multiply(const ComplexMatrix &a, std::span<const cplx> x)
{
    if (x.size() != a.cols())
        throw InputError("multiply: vector length " + std::to_string(x.size()) +
                         " does not match matrix columns " + std::to_string(a.cols()));
    CVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        cplx acc = 0.0;
        auto r = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j)
            acc += r[j] * x[j];
        y[i] = acc;
    }
    return y;
}

RVector multiply(const RealMatrix &a, std::span<const double> x)
{
    if (x.size() != a.cols())
        throw InputError("multiply: vector length " + std::to_string(x.size()) +
                         " does not match matrix columns " + std::to_string(a.cols()));
    RVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        double acc = 0.0;
        auto r = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j)
            acc += r[j] * x[j];
        y[i] = acc;
    }
    return y;
}

CVector multiply_adjoint(const ComplexMatrix &a, std::span<const cplx> x)
{
    if (x.size() != a.rows())
        throw InputError("multiply_adjoint: vector length " + std::to_string(x.size()) +
                         " does not match matrix rows " + std::to_string(a.rows()));
    CVector y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        auto r = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j)
            y[j] += std::conj(r[j]) * x[i];
    }
    return y;
}

double norm2(std::span<const cplx> x)
{
    double s = 0.0;
    for (const auto &v : x)
        s += std::norm(v);
    return std::sqrt(s);
}

CVector lstsq(const ComplexMatrix &a, std::span<const cplx> b, double ridge, double rank_tol)
{
    const std::size_t n = a.cols();
    if (b.size() != a.rows())
        throw InputError("lstsq: right-hand side has " + std::to_string(b.size()) +
                         " entries, matrix has " + std::to_string(a.rows()) + " rows");
    if (ridge < 0.0 || !std::isfinite(ridge))
        throw InputError("lstsq: ridge must be finite and >= 0");
    if (n == 0)
        return {};

    // Tikhonov term as extra rows sqrt(ridge) * I.
    const std::size_t m = a.rows() + (ridge > 0.0 ? n : 0);
    if (m < n)
        throw InputError("lstsq: underdetermined system (" + std::to_string(a.rows()) + " x " +
                         std::to_string(n) + ") without regularization");

    ComplexMatrix r(m, n);
    CVector rhs(m, 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        std::copy(a.row(i).begin(), a.row(i).end(), r.row(i).begin());
        rhs[i] = b[i];
    }
    if (ridge > 0.0)
    {
        const double s = std::sqrt(ridge);
        for (std::size_t j = 0; j < n; ++j)
            r(a.rows() + j, j) = s;
    }

    if (rank_tol <= 0.0)
        rank_tol = static_cast<double>(std::max(m, n)) * std::numeric_limits<double>::epsilon();

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    CVector v(m);

    for (std::size_t k = 0; k < n; ++k)
    {
        // Pivot on the largest remaining column norm (recomputed, not downdated).
        std::size_t best = k;
        double best_norm = -1.0;
        for (std::size_t j = k; j < n; ++j)
        {
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i)
                s += std::norm(r(i, j));
            if (s > best_norm)
            {
                best_norm = s;
                best = j;
            }
        }
        if (best != k)
        {
            for (std::size_t i = 0; i < m; ++i)
                std::swap(r(i, k), r(i, best));
            std::swap(perm[k], perm[best]);
        }

        const double xnorm = std::sqrt(best_norm);
        if (xnorm == 0.0)
            continue;
        const cplx x0 = r(k, k);
        const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0, 0.0);
        const cplx alpha = -phase * xnorm;

        for (std::size_t i = k; i < m; ++i)
            v[i] = r(i, k);
        v[k] -= alpha;
        const double vnorm2 = 2.0 * xnorm * (xnorm + std::abs(x0));
        const double tau = 2.0 / vnorm2;

        for (std::size_t j = k + 1; j < n; ++j)
        {
            cplx s = 0.0;
            for (std::size_t i = k; i < m; ++i)
                s += std::conj(v[i]) * r(i, j);
            s *= tau;
            for (std::size_t i = k; i < m; ++i)
                r(i, j) -= v[i] * s;
        }
        cplx s = 0.0;
        for (std::size_t i = k; i < m; ++i)
            s += std::conj(v[i]) * rhs[i];
        s *= tau;
        for (std::size_t i = k; i < m; ++i)
            rhs[i] -= v[i] * s;

        r(k, k) = alpha;
        for (std::size_t i = k + 1; i < m; ++i)
            r(i, k) = 0.0;
    }

    const double r00 = std::abs(r(0, 0));
    for (std::size_t k = 0; k < n; ++k)
    {
        if (!(std::abs(r(k, k)) > rank_tol * r00))
            throw SingularSystemError("lstsq: matrix is rank deficient (column " +
                                          std::to_string(perm[k]) + " is dependent)",
                                      perm[k]);
    }

    CVector xp(n);
    for (std::size_t kk = n; kk-- > 0;)
    {
        cplx acc = rhs[kk];
        for (std::size_t j = kk + 1; j < n; ++j)
            acc -= r(kk, j) * xp[j];
        xp[kk] = acc / r(kk, kk);
    }
    CVector x(n);
    for (std::size_t k = 0; k < n; ++k)
        x[perm[k]] = xp[k];
    return x;
}

RVector solve_spd(const RealMatrix &g, std::span<const double> b, double pivot_tol)
{
    const std::size_t n = g.rows();
    if (g.cols() != n)
        throw InputError("solve_spd: matrix is not square");
    if (b.size() != n)
        throw InputError("solve_spd: right-hand side length mismatch");
    if (n == 0)
        return {};

    RealMatrix a = g;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        max_diag = std::max(max_diag, a(i, i));
    const double threshold = pivot_tol * max_diag;

    for (std::size_t k = 0; k < n; ++k)
    {
        std::size_t p = k;
        for (std::size_t j = k + 1; j < n; ++j)
            if (a(j, j) > a(p, p))
                p = j;
        if (!(a(p, p) > threshold))
            throw SingularSystemError("solve_spd: system is singular (column " +
                                          std::to_string(perm[p]) + " is dependent)",
                                      perm[p]);
        if (p != k)
        {
            for (std::size_t i = 0; i < n; ++i)
                std::swap(a(i, k), a(i, p));
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(k, j), a(p, j));
            std::swap(perm[k], perm[p]);
        }
        const double lkk = std::sqrt(a(k, k));
        a(k, k) = lkk;
        for (std::size_t i = k + 1; i < n; ++i)
            a(i, k) /= lkk;
        for (std::size_t j = k + 1; j < n; ++j)
            for (std::size_t i = j; i < n; ++i)
                a(i, j) -= a(i, k) * a(j, k);
        for (std::size_t j = k + 1; j < n; ++j)
            for (std::size_t i = j; i < n; ++i)
                a(j, i) = a(i, j);
    }

    // (P G P^T) (P x) = P b with P G P^T = L L^T
    RVector y(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        double acc = b[perm[i]];
        for (std::size_t j = 0; j < i; ++j)
            acc -= a(i, j) * y[j];
        y[i] = acc / a(i, i);
    }
    RVector z(n);
    for (std::size_t i = n; i-- > 0;)
    {
        double acc = y[i];
        for (std::size_t j = i + 1; j < n; ++j)
            acc -= a(j, i) * z[j];
        z[i] = acc / a(i, i);
    }
    RVector x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[perm[i]] = z[i];
    return x;
}

namespace
{

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

CVector fft_radix2(std::span<const cplx> x)
{
    const std::size_t n = x.size();
    CVector a(x.begin(), x.end());
    for (std::size_t i = 1, j = 0; i < n; ++i)
    {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1)
    {
        const std::size_t half = len / 2;
        CVector tw(half);
        for (std::size_t k = 0; k < half; ++k)
            tw[k] = std::polar(1.0, -2.0 * pi * static_cast<double>(k) / static_cast<double>(len));
        for (std::size_t i = 0; i < n; i += len)
            for (std::size_t k = 0; k < half; ++k)
            {
                const cplx u = a[i + k];
                const cplx t = a[i + k + half] * tw[k];
                a[i + k] = u + t;
                a[i + k + half] = u - t;
            }
    }
    return a;
}

CVector dft_direct(std::span<const cplx> x)
{
    const std::size_t n = x.size();
    CVector out(n);
    for (std::size_t f = 0; f < n; ++f)
    {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < n; ++k)
        {
            const std::size_t idx = (f * k) % n;
            acc += x[k] * std::polar(1.0, -2.0 * pi * static_cast<double>(idx) / static_cast<double>(n));
        }
        out[f] = acc;
    }
    return out;
}

} // namespace

CVector dft(std::span<const cplx> x)
{
    if (x.empty())
        throw InputError("dft: empty input");
    return is_power_of_two(x.size()) ? fft_radix2(x) : dft_direct(x);
}

CVector idft(std::span<const cplx> spectrum)
{
    if (spectrum.empty())
        throw InputError("idft: empty input");
    CVector c(spectrum.size());
    std::transform(spectrum.begin(), spectrum.end(), c.begin(), [](cplx v) { return std::conj(v); });
    CVector out = dft(c);
    const double scale = 1.0 / static_cast<double>(out.size());
    for (auto &v : out)
        v = std::conj(v) * scale;
    return out;
}

} // namespace doptomo
