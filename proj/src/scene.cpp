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

#include "doptomo/scene.hpp"
#include "doptomo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace doptomo
{

namespace
{

double wrap_two_pi(double a)
{
    double w = std::fmod(a, 2.0 * pi);
    if (w < 0.0)
        w += 2.0 * pi;
    if (w >= 2.0 * pi)
        w = 0.0;
    return w;
}

bool finite(double v) { return std::isfinite(v); }

} // namespace

Scatterer::Scatterer(double r0, double theta0, double z0, double amplitude)
    : r0_(r0), theta0_(wrap_two_pi(theta0)), z0_(z0), amplitude_(amplitude)
{
    if (!finite(r0) || !finite(theta0) || !finite(z0) || !finite(amplitude))
        throw InputError("scatterer: all fields must be finite");
    if (r0 < 0.0)
        throw InputError("scatterer: r0 must be >= 0");
    if (amplitude < 0.0)
        throw InputError("scatterer: amplitude must be >= 0");
}

double Scatterer::x0() const noexcept { return r0_ * std::cos(theta0_); }
double Scatterer::y0() const noexcept { return r0_ * std::sin(theta0_); }

RangeModel parse_range_model(const std::string &name)
{
    if (name == "exact")
        return RangeModel::exact;
    if (name == "approx")
        return RangeModel::approx;
    throw InputError("unknown range model '" + name + "' (expected exact|approx)");
}

const char *to_string(RangeModel model)
{
    return model == RangeModel::exact ? "exact" : "approx";
}

double SceneConfig::delta_theta() const
{
    return 2.0 * pi * revolutions / static_cast<double>(sample_count);
}

RVector SceneConfig::thetas() const
{
    RVector th(sample_count);
    const double d = delta_theta();
    for (std::size_t k = 0; k < sample_count; ++k)
        th[k] = static_cast<double>(k) * d;
    return th;
}

std::vector<std::string> SceneConfig::validate() const
{
    if (!(carrier_hz > 0.0) || !finite(carrier_hz))
        throw InputError("scene: carrier_hz must be > 0");
    if (!(omega_r > 0.0) || !finite(omega_r))
        throw InputError("scene: omega_r must be > 0");
    if (!(standoff_m > 0.0) || !finite(standoff_m))
        throw InputError("scene: standoff (R_a) must be > 0");
    if (sample_count < 2)
        throw InputError("scene: sample_count must be >= 2");
    if (!(revolutions > 0.0) || !finite(revolutions))
        throw InputError("scene: revolutions must be > 0");

    std::vector<std::string> warnings;
    double extent = 0.0;
    for (const auto &s : scatterers)
        extent = std::max({extent, s.r0(), std::abs(s.z0())});
    if (standoff_m < 10.0 * extent)
    {
        std::ostringstream os;
        os << "far-field assumption weak: R_a = " << standoff_m << " m < 10 x max(r0, z0) = "
           << 10.0 * extent << " m";
        warnings.push_back(os.str());
    }
    return warnings;
}

SignalTrace::SignalTrace(CVector samples, double delta_theta, double wavelength, double omega_r)
    : samples_(std::move(samples)), delta_theta_(delta_theta), wavelength_(wavelength), omega_r_(omega_r)
{
    if (!(delta_theta > 0.0) || !(wavelength > 0.0) || !(omega_r > 0.0))
        throw InputError("signal trace: delta_theta, wavelength and omega_r must be > 0");
}

SignalTrace SignalTrace::zeros(const SceneConfig &cfg)
{
    return SignalTrace(CVector(cfg.sample_count, 0.0), cfg.delta_theta(), cfg.wavelength(), cfg.omega_r);
}

RVector SignalTrace::thetas() const
{
    RVector th(size());
    for (std::size_t k = 0; k < size(); ++k)
        th[k] = theta(k);
    return th;
}

SignalTrace SignalTrace::with_samples(CVector samples) const
{
    return SignalTrace(std::move(samples), delta_theta_, wavelength_, omega_r_);
}

double exact_range(const Scatterer &s, const SceneConfig &cfg, double t)
{
    const double ra = cfg.standoff_m;
    const double r0 = s.r0();
    return std::sqrt(r0 * r0 + ra * ra + 2.0 * ra * r0 * std::sin(s.theta0() + cfg.omega_r * t) +
                     s.z0() * s.z0());
}

double approx_range(const Scatterer &s, const SceneConfig &cfg, double t)
{
    const double th = cfg.omega_r * t;
    return cfg.standoff_m + s.x0() * std::sin(th) + s.y0() * std::cos(th);
}

double range(RangeModel model, const Scatterer &s, const SceneConfig &cfg, double t)
{
    return model == RangeModel::exact ? exact_range(s, cfg, t) : approx_range(s, cfg, t);
}

double doppler_shift(const Scatterer &s, const SceneConfig &cfg, double t)
{
    const double lambda = cfg.wavelength();
    const double th = cfg.omega_r * t;
    return (2.0 * s.x0() * cfg.omega_r / lambda) * std::cos(th) -
           (2.0 * s.y0() * cfg.omega_r / lambda) * std::sin(th);
}

void add_complex_noise(std::span<cplx> samples, double sigma, std::mt19937_64 &rng)
{
    if (sigma < 0.0 || !finite(sigma))
        throw InputError("noise sigma must be finite and >= 0");
    if (sigma == 0.0)
        return;
    std::normal_distribution<double> normal(0.0, sigma / std::sqrt(2.0));
    for (auto &v : samples)
    {
        const double re = normal(rng);
        const double im = normal(rng);
        v += cplx(re, im);
    }
}

SignalTrace synthesize_trace(const SceneConfig &cfg, RangeModel model, double noise_sigma,
                             std::mt19937_64 *rng)
{
    cfg.validate();
    if (noise_sigma > 0.0 && rng == nullptr)
        throw InputError("synthesize_trace: noise requested without a random generator");

    SignalTrace trace = SignalTrace::zeros(cfg);
    const double lambda = cfg.wavelength();
    const double dtheta = cfg.delta_theta();
    const auto count = static_cast<std::ptrdiff_t>(cfg.sample_count);
    CVector &out = trace.samples();

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k)
    {
        const double t = static_cast<double>(k) * dtheta / cfg.omega_r;
        cplx acc = 0.0;
        for (const auto &s : cfg.scatterers)
            acc += std::polar(s.amplitude(), -4.0 * pi * range(model, s, cfg, t) / lambda);
        out[static_cast<std::size_t>(k)] = acc;
    }

    if (noise_sigma > 0.0)
        add_complex_noise(out, noise_sigma, *rng);
    return trace;
}

Spectrogram spectrogram(const SignalTrace &trace, std::size_t window_len, std::size_t hop)
{
    if (window_len < 2)
        throw InputError("spectrogram: window length must be >= 2");
    if (window_len > trace.size())
        throw InputError("spectrogram: window length " + std::to_string(window_len) +
                         " exceeds trace length " + std::to_string(trace.size()));
    if (hop == 0)
        hop = std::max<std::size_t>(1, window_len / 2);

    RVector window(window_len);
    double wsum = 0.0;
    for (std::size_t i = 0; i < window_len; ++i)
    {
        // periodic Hann
        window[i] = 0.5 - 0.5 * std::cos(2.0 * pi * static_cast<double>(i) / static_cast<double>(window_len));
        wsum += window[i];
    }

    const std::size_t frames = 1 + (trace.size() - window_len) / hop;
    const double fs = trace.sample_rate_hz();
    const double bin = fs / static_cast<double>(window_len);

    Spectrogram out;
    out.bin_hz = bin;
    out.power_db = RealMatrix(frames, window_len, spectrogram_floor_db);
    out.times_s.resize(frames);
    out.freqs_hz.resize(window_len);

    // fftshift ordering: column c holds bin (c + ceil(N/2)) mod N
    const std::size_t half = (window_len + 1) / 2;
    for (std::size_t c = 0; c < window_len; ++c)
    {
        const std::size_t b = (c + half) % window_len;
        const auto signed_bin = b < half ? static_cast<double>(b)
                                                        : static_cast<double>(b) - static_cast<double>(window_len);
        out.freqs_hz[c] = signed_bin * bin;
    }
    const double norm = 1.0 / (wsum * wsum);
    CVector seg(window_len);
    for (std::size_t f = 0; f < frames; ++f)
    {
        const std::size_t start = f * hop;
        for (std::size_t i = 0; i < window_len; ++i)
            seg[i] = trace[start + i] * window[i];
        const CVector spec = dft(seg);
        for (std::size_t c = 0; c < window_len; ++c)
        {
            const double p = std::norm(spec[(c + half) % window_len]) * norm;
            out.power_db(f, c) = p > 0.0 ? std::max(spectrogram_floor_db, 10.0 * std::log10(p))
                                         : spectrogram_floor_db;
        }
        const double center = static_cast<double>(start) + 0.5 * static_cast<double>(window_len - 1);
        out.times_s[f] = center / fs;
    }
    return out;
}

} // namespace doptomo
