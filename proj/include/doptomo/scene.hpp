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

#ifndef DOPTOMO_SCENE_HPP
#define DOPTOMO_SCENE_HPP

#include "doptomo/numerics.hpp"

#include <cstddef>
#include <random>
#include <string>
#include <vector>

namespace doptomo
{

// One point reflector on the rotating object. Angles in radians, lengths in
// meters. theta0 is measured from the x axis: (x0, y0) = r0 (cos, sin) theta0.
class Scatterer
{
public:
    Scatterer(double r0, double theta0, double z0, double amplitude);

    double r0() const noexcept { return r0_; }
    double theta0() const noexcept { return theta0_; } // in [0, 2 pi)
    double z0() const noexcept { return z0_; }
    double amplitude() const noexcept { return amplitude_; }

    double x0() const noexcept;
    double y0() const noexcept;

private:
    double r0_;
    double theta0_;
    double z0_;
    double amplitude_;
};

enum class RangeModel
{
    exact,
    approx
};

RangeModel parse_range_model(const std::string &name);
const char *to_string(RangeModel model);

struct SceneConfig
{
    double carrier_hz = 0.0;
    double omega_r = 0.0;       // rad/s
    double standoff_m = 0.0;    // antenna to rotation axis
    std::vector<Scatterer> scatterers;
    std::size_t sample_count = 0;
    double revolutions = 1.0;

    double wavelength() const { return speed_of_light / carrier_hz; }
    double delta_theta() const;
    RVector thetas() const;

    /// Throws InputError on hard violations; returns soft warnings (far-field).
    std::vector<std::string> validate() const;
};

/// Complex baseband samples on a uniform rotation-angle grid starting at 0.
class SignalTrace
{
public:
    SignalTrace() = default;
    SignalTrace(CVector samples, double delta_theta, double wavelength, double omega_r);

    /// All-zero trace with the sampling plan of cfg.
    static SignalTrace zeros(const SceneConfig &cfg);

    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    double delta_theta() const noexcept { return delta_theta_; }
    double wavelength() const noexcept { return wavelength_; }
    double omega_r() const noexcept { return omega_r_; }
    double theta(std::size_t k) const noexcept { return static_cast<double>(k) * delta_theta_; }
    RVector thetas() const;
    double sample_rate_hz() const noexcept { return omega_r_ / delta_theta_; }

    CVector &samples() noexcept { return samples_; }
    const CVector &samples() const noexcept { return samples_; }
    cplx operator[](std::size_t k) const noexcept { return samples_[k]; }

    /// Same sampling plan, different samples.
    SignalTrace with_samples(CVector samples) const;

private:
    CVector samples_;
    double delta_theta_ = 0.0;
    double wavelength_ = 0.0;
    double omega_r_ = 0.0;
};

double exact_range(const Scatterer &s, const SceneConfig &cfg, double t);
double approx_range(const Scatterer &s, const SceneConfig &cfg, double t);
double range(RangeModel model, const Scatterer &s, const SceneConfig &cfg, double t);

/// Doppler shift in Hz under the far-field range model.
double doppler_shift(const Scatterer &s, const SceneConfig &cfg, double t);

/// Coherent sum over scatterers of a exp(-j 4 pi R(t_k) / lambda), plus
/// circular complex Gaussian noise with E|n|^2 = noise_sigma^2 when
/// noise_sigma > 0 (rng required then).
SignalTrace synthesize_trace(const SceneConfig &cfg, RangeModel model = RangeModel::approx,
                             double noise_sigma = 0.0, std::mt19937_64 *rng = nullptr);

/// Adds i.i.d. circular complex Gaussian noise, E|n|^2 = sigma^2.
void add_complex_noise(std::span<cplx> samples, double sigma, std::mt19937_64 &rng);

struct Spectrogram
{
    RVector times_s;   // frame centers
    RVector freqs_hz;  // ascending, zero frequency in the middle
    RealMatrix power_db; // frames x bins
    double bin_hz = 0.0;
};

inline constexpr double spectrogram_floor_db = -120.0;

/// Hann-windowed short-time power spectra, 10 log10(|X|^2 / (sum w)^2), so a
/// unit-modulus tone reads 0 dB. hop == 0 selects window_len / 2.
Spectrogram spectrogram(const SignalTrace &trace, std::size_t window_len, std::size_t hop = 0);

} // namespace doptomo

#endif
