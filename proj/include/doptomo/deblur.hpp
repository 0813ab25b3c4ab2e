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

#ifndef DOPTOMO_DEBLUR_HPP
#define DOPTOMO_DEBLUR_HPP

#include "doptomo/numerics.hpp"
#include "doptomo/scene.hpp"

#include <random>

namespace doptomo
{

// Known linear sensor response z_0 .. z_{L-1}.
class BlurKernel
{
public:
    explicit BlurKernel(CVector taps);

    std::size_t size() const noexcept { return taps_.size(); }
    const CVector &taps() const noexcept { return taps_; }

private:
    CVector taps_;
};

BlurKernel gaussian_kernel(std::size_t length, double sigma, double gain = 1.0);

// Full linear convolution output, L + P - 1 samples.
struct BlurredTrace
{
    CVector samples;
    std::size_t source_length = 0;
    std::size_t kernel_length = 0;

    /// Index of the blurred sample aligned with source sample 0 when the
    /// kernel is read as centered: (L - 1) / 2.
    std::size_t center_offset() const noexcept { return (kernel_length - 1) / 2; }

    /// The source-length window starting at center_offset(), on the grid of
    /// `reference`; used to image the distorted signal.
    SignalTrace aligned(const SignalTrace &reference) const;
};

/// Direct-form convolution plus circular complex Gaussian noise
/// (E|n|^2 = noise_sigma^2). rng is only touched when noise_sigma > 0.
BlurredTrace blur(const SignalTrace &trace, const BlurKernel &kernel, double noise_sigma = 0.0,
                  std::mt19937_64 *rng = nullptr);

/// (L + P - 1) x P Toeplitz matrix; column p holds the taps shifted down by p.
ComplexMatrix build_convolution_matrix(const BlurKernel &kernel, std::size_t p);
ComplexMatrix build_convolution_matrix_serial(const BlurKernel &kernel, std::size_t p);

/// argmin ||Z s - blurred||^2 + ridge ||s||^2 via orthogonal factorization.
/// The result inherits the sampling plan of `reference`.
SignalTrace deblur_ls(const BlurredTrace &blurred, const BlurKernel &kernel, const SignalTrace &reference,
                      double ridge = 0.0);

/// Same solve on raw vectors.
CVector deblur_ls(std::span<const cplx> blurred, const BlurKernel &kernel, std::size_t source_length,
                  double ridge = 0.0);

} // namespace doptomo

#endif
