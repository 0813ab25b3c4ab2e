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

#include "doptomo/deblur.hpp"
#include "doptomo/errors.hpp"

#include <algorithm>
#include <cmath>

namespace doptomo
{

BlurKernel::BlurKernel(CVector taps) : taps_(std::move(taps))
{
    if (taps_.empty())
        throw InputError("blur kernel: at least one tap required");
    bool nonzero = false;
    for (const auto &t : taps_)
    {
        if (!std::isfinite(t.real()) || !std::isfinite(t.imag()))
            throw InputError("blur kernel: taps must be finite");
        nonzero = nonzero || t != cplx(0.0, 0.0);
    }
    if (!nonzero)
        throw InputError("blur kernel: all taps are zero");
}

BlurKernel gaussian_kernel(std::size_t length, double sigma, double gain)
{
    if (length < 1)
        throw InputError("gaussian_kernel: length must be >= 1");
    if (!(sigma > 0.0))
        throw InputError("gaussian_kernel: sigma must be > 0");
    CVector taps(length);
    const double center = 0.5 * static_cast<double>(length - 1);
    for (std::size_t i = 0; i < length; ++i)
    {
        const double u = static_cast<double>(i) - center;
        taps[i] = gain * std::exp(-u * u / (2.0 * sigma * sigma));
    }
    return BlurKernel(std::move(taps));
}

SignalTrace BlurredTrace::aligned(const SignalTrace &reference) const
{
    if (reference.size() != source_length)
        throw InputError("blurred trace: reference length does not match the source length");
    const std::size_t off = center_offset();
    return reference.with_samples(CVector(samples.begin() + static_cast<std::ptrdiff_t>(off),
                                          samples.begin() + static_cast<std::ptrdiff_t>(off + source_length)));
}

BlurredTrace blur(const SignalTrace &trace, const BlurKernel &kernel, double noise_sigma, std::mt19937_64 *rng)
{
    if (trace.empty())
        throw InputError("blur: empty trace");
    if (noise_sigma < 0.0 || !std::isfinite(noise_sigma))
        throw InputError("blur: noise sigma must be finite and >= 0");
    if (noise_sigma > 0.0 && rng == nullptr)
        throw InputError("blur: noise requested without a random generator");

    const std::size_t p = trace.size();
    const std::size_t l = kernel.size();
    BlurredTrace out;
    out.source_length = p;
    out.kernel_length = l;
    out.samples.assign(l + p - 1, 0.0);
    const auto &z = kernel.taps();
    for (std::size_t n = 0; n < l + p - 1; ++n)
    {
        const std::size_t lo = n + 1 > p ? n + 1 - p : 0;
        const std::size_t hi = std::min(n, l - 1);
        cplx acc = 0.0;
        for (std::size_t i = lo; i <= hi; ++i)
            acc += z[i] * trace[n - i];
        out.samples[n] = acc;
    }
    if (noise_sigma > 0.0)
        add_complex_noise(out.samples, noise_sigma, *rng);
    return out;
}

ComplexMatrix build_convolution_matrix_serial(const BlurKernel &kernel, std::size_t p)
{
    if (p < 1)
        throw InputError("build_convolution_matrix: P must be >= 1");
    const std::size_t l = kernel.size();
    ComplexMatrix z(l + p - 1, p);
    for (std::size_t col = 0; col < p; ++col)
        for (std::size_t i = 0; i < l; ++i)
            z(col + i, col) = kernel.taps()[i];
    return z;
}

ComplexMatrix build_convolution_matrix(const BlurKernel &kernel, std::size_t p)
{
    if (p < 1)
        throw InputError("build_convolution_matrix: P must be >= 1");
    const std::size_t l = kernel.size();
    ComplexMatrix z(l + p - 1, p);
    const auto cols = static_cast<std::ptrdiff_t>(p);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < cols; ++c)
    {
        const auto col = static_cast<std::size_t>(c);
        for (std::size_t i = 0; i < l; ++i)
            z(col + i, col) = kernel.taps()[i];
    }
    return z;
}

CVector deblur_ls(std::span<const cplx> blurred, const BlurKernel &kernel, std::size_t source_length,
                  double ridge)
{
    if (source_length < 1)
        throw InputError("deblur_ls: source length must be >= 1");
    if (blurred.size() != kernel.size() + source_length - 1)
        throw InputError("deblur_ls: blurred length " + std::to_string(blurred.size()) + " != L + P - 1 = " +
                         std::to_string(kernel.size() + source_length - 1));
    const ComplexMatrix z = build_convolution_matrix(kernel, source_length);
    // transient rows stay in the system
    return lstsq(z, blurred, ridge);
}

SignalTrace deblur_ls(const BlurredTrace &blurred, const BlurKernel &kernel, const SignalTrace &reference,
                      double ridge)
{
    if (blurred.kernel_length != kernel.size())
        throw InputError("deblur_ls: kernel length differs from the one used to blur");
    if (reference.size() != blurred.source_length)
        throw InputError("deblur_ls: reference trace length differs from the blurred source length");
    return reference.with_samples(deblur_ls(blurred.samples, kernel, blurred.source_length, ridge));
}

} // namespace doptomo
