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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "doptomo/errors.hpp"
#include "doptomo/scene.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace doptomo;

namespace
{

double deg(double d) { return d * pi / 180.0; }

SceneConfig base_config(double carrier, std::vector<Scatterer> s, std::size_t p = 256)
{
    SceneConfig cfg;
    cfg.carrier_hz = carrier;
    cfg.omega_r = pi;
    cfg.standoff_m = 60.0;
    cfg.scatterers = std::move(s);
    cfg.sample_count = p;
    return cfg;
}

long double exact_oracle(long double r0, long double th0, long double z0, long double ra, long double wt)
{
    return std::sqrt(r0 * r0 + ra * ra + 2.0L * ra * r0 * std::sin(th0 + wt) + z0 * z0);
}

} // namespace

TEST_CASE("scatterer position uses the from-x-axis convention")
{
    const Scatterer s(3.0, deg(130.0), 0.0, 2.0);
    CHECK(s.x0() == doctest::Approx(-1.9284).epsilon(1e-4));
    CHECK(s.y0() == doctest::Approx(2.2981).epsilon(1e-4));
    const Scatterer w(1.0, -pi / 2.0, 0.0, 1.0);
    CHECK(w.theta0() == doctest::Approx(1.5 * pi));
    CHECK_THROWS_AS(Scatterer(-1.0, 0.0, 0.0, 1.0), InputError);
    CHECK_THROWS_AS(Scatterer(1.0, NAN, 0.0, 1.0), InputError);
}

TEST_CASE("exact_range examples")
{
    const SceneConfig cfg = base_config(6e9, {});
    const Scatterer s(1.5, deg(300.0), 0.0, 3.0);
    const double oracle = static_cast<double>(exact_oracle(1.5L, deg(300.0), 0.0L, 60.0L, 0.0L));
    CHECK(exact_range(s, cfg, 0.0) == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(exact_range(s, cfg, 0.0) == doctest::Approx(58.7058).epsilon(1e-6));

    for (double t : {0.0, 0.3, 1.7})
        CHECK(exact_range(Scatterer(0.0, 0.0, 0.0, 1.0), cfg, t) == 60.0);
    CHECK(exact_range(Scatterer(3.0, deg(90.0), 0.0, 1.0), cfg, 0.0) == doctest::Approx(63.0).epsilon(1e-15));
    CHECK(exact_range(Scatterer(0.0, 0.0, 11.0, 1.0), cfg, 0.4) == doctest::Approx(std::hypot(60.0, 11.0)));
}

TEST_CASE("approx_range examples")
{
    const SceneConfig cfg = base_config(6e9, {});
    const Scatterer s(1.5, deg(300.0), 0.0, 3.0);
    CHECK(approx_range(s, cfg, 0.0) == doctest::Approx(60.0 + 1.5 * std::sin(deg(300.0))).epsilon(1e-15));
    CHECK(approx_range(s, cfg, 0.0) == doctest::Approx(58.7010).epsilon(1e-6));
    CHECK(std::abs(approx_range(s, cfg, 0.0) - exact_range(s, cfg, 0.0)) <= 1.5 * 1.5 / 60.0);
    const double quarter = pi / (2.0 * cfg.omega_r);
    CHECK(approx_range(s, cfg, quarter) == doctest::Approx(60.0 + s.x0()).epsilon(1e-14));
    for (double t : {0.0, 0.3, 1.7})
        CHECK(approx_range(Scatterer(0.0, 1.0, 0.0, 1.0), cfg, t) == 60.0);
}

TEST_CASE("exact and approximate ranges agree within the far-field bound")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ut(0.0, 10.0);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * pi);
    std::uniform_real_distribution<double> ur(0.1, 3.0);
    std::uniform_real_distribution<double> uz(-1.0, 1.0);
    const SceneConfig cfg = base_config(6e9, {});
    for (int i = 0; i < 1000; ++i)
    {
        const Scatterer s(ur(rng), ua(rng), uz(rng), 1.0);
        const double r = std::hypot(s.r0(), s.z0());
        const double bound = r * r / (2.0 * cfg.standoff_m) + std::pow(r / cfg.standoff_m, 3) * cfg.standoff_m;
        const double t = ut(rng);
        CHECK(std::abs(exact_range(s, cfg, t) - approx_range(s, cfg, t)) <= bound);
    }
}

TEST_CASE("doppler_shift examples and finite-difference consistency")
{
    const SceneConfig cfg = base_config(6e9, {});
    const Scatterer s(1.5, deg(300.0), 0.0, 3.0);
    const double lambda = speed_of_light / 6e9;
    CHECK(doppler_shift(s, cfg, 0.0) == doctest::Approx(2.0 * 0.75 * pi / lambda).epsilon(1e-12));
    CHECK(doppler_shift(s, cfg, 0.0) == doctest::Approx(94.3).epsilon(1e-3));
    CHECK(doppler_shift(Scatterer(0.0, 2.0, 0.0, 1.0), cfg, 0.7) == 0.0);

    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> ut(0.0, 4.0);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * pi);
    const double h = 1e-5;
    int checked = 0;
    for (int i = 0; i < 500; ++i)
    {
        const Scatterer q(2.0, ua(rng), 0.0, 1.0);
        const double t = ut(rng);
        const double fd = doppler_shift(q, cfg, t);
        if (std::abs(fd) < 0.1)
            continue;
        const double dphase = 4.0 * pi / lambda * (approx_range(q, cfg, t + h) - approx_range(q, cfg, t - h)) / (2.0 * h);
        CHECK(std::abs(dphase / (2.0 * pi) - fd) <= 1e-6 * std::abs(fd));
        ++checked;
    }
    CHECK(checked > 400);
}

TEST_CASE("scene validation")
{
    SceneConfig cfg = base_config(6e9, {Scatterer(1.0, 0.0, 0.0, 1.0)});
    CHECK(cfg.validate().empty());
    CHECK(cfg.delta_theta() == doctest::Approx(2.0 * pi / 256.0));
    cfg.standoff_m = 5.0;
    CHECK(cfg.validate().size() == 1);
    cfg.carrier_hz = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg = base_config(6e9, {});
    cfg.sample_count = 1;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    CHECK_THROWS_AS(parse_range_model("nearfield"), InputError);
    CHECK(parse_range_model("exact") == RangeModel::exact);
}

TEST_CASE("synthesize_trace: trivial scenes and the signal formula")
{
    const SceneConfig empty = base_config(6e9, {});
    const SignalTrace zero = synthesize_trace(empty);
    for (const auto &v : zero.samples())
        CHECK(v == cplx(0.0));

    const Scatterer s(1.5, deg(300.0), 0.2, 3.0);
    const SceneConfig one = base_config(6e8, {s});
    for (RangeModel m : {RangeModel::approx, RangeModel::exact})
    {
        const SignalTrace tr = synthesize_trace(one, m);
        REQUIRE(tr.size() == 256);
        for (std::size_t k = 0; k < tr.size(); ++k)
        {
            CHECK(std::abs(tr[k]) == doctest::Approx(3.0).epsilon(1e-14));
            const double t = tr.theta(k) / one.omega_r;
            const cplx expect = 3.0 * std::exp(cplx(0.0, -4.0 * pi * range(m, s, one, t) / one.wavelength()));
            CHECK(std::abs(tr[k] - expect) < 1e-9);
        }
    }
}

TEST_CASE("synthesize_trace: linearity and triangle inequality")
{
    const std::vector<Scatterer> a{Scatterer(3.0, deg(130.0), 0.0, 2.0), Scatterer(2.0, deg(60.0), 0.0, 1.0)};
    const std::vector<Scatterer> b{Scatterer(1.5, deg(300.0), 0.0, 3.0)};
    std::vector<Scatterer> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    for (RangeModel m : {RangeModel::approx, RangeModel::exact})
    {
        const SignalTrace ta = synthesize_trace(base_config(6e9, a, 1024), m);
        const SignalTrace tb = synthesize_trace(base_config(6e9, b, 1024), m);
        const SignalTrace tab = synthesize_trace(base_config(6e9, ab, 1024), m);
        for (std::size_t k = 0; k < tab.size(); ++k)
        {
            CHECK(std::abs(tab[k] - (ta[k] + tb[k])) <= 1e-13);
            CHECK(std::abs(tab[k]) <= 6.0 + 1e-12);
        }
    }
}

TEST_CASE("noise: seeded, reproducible, unit-power calibration")
{
    const SceneConfig empty = base_config(6e9, {}, 65536);
    std::mt19937_64 r1(99);
    std::mt19937_64 r2(99);
    const SignalTrace a = synthesize_trace(empty, RangeModel::approx, 0.5, &r1);
    const SignalTrace b = synthesize_trace(empty, RangeModel::approx, 0.5, &r2);
    CHECK(a.samples() == b.samples());
    double power = 0.0;
    for (const auto &v : a.samples())
        power += std::norm(v);
    power /= static_cast<double>(a.size());
    CHECK(power == doctest::Approx(0.25).epsilon(0.03));
    CHECK_THROWS_AS(synthesize_trace(empty, RangeModel::approx, 0.5, nullptr), InputError);
}

TEST_CASE("spectrogram: zero trace reads the floor")
{
    const SignalTrace z = SignalTrace::zeros(base_config(6e9, {}, 256));
    const Spectrogram sp = spectrogram(z, 64);
    CHECK(sp.power_db.rows() == 7);
    CHECK(sp.power_db.cols() == 64);
    for (double v : sp.power_db.data())
        CHECK(v == spectrogram_floor_db);
}

TEST_CASE("spectrogram: a single tone ridges at the nearest bin")
{
    const SceneConfig cfg = base_config(6e9, {}, 512);
    const SignalTrace z = SignalTrace::zeros(cfg);
    const double fs = z.sample_rate_hz();
    for (double f0 : {37.3, -81.0, 0.0, 100.6, -128.0})
    {
        CVector s(z.size());
        for (std::size_t k = 0; k < s.size(); ++k)
            s[k] = std::exp(cplx(0.0, 2.0 * pi * f0 * static_cast<double>(k) / fs));
        const Spectrogram sp = spectrogram(z.with_samples(s), 64, 16);
        CHECK(sp.bin_hz == doctest::Approx(fs / 64.0));
        std::size_t nearest = 0;
        for (std::size_t i = 1; i < sp.freqs_hz.size(); ++i)
            if (std::abs(sp.freqs_hz[i] - f0) < std::abs(sp.freqs_hz[nearest] - f0))
                nearest = i;
        for (std::size_t r = 0; r < sp.power_db.rows(); ++r)
        {
            std::size_t best = 0;
            for (std::size_t c = 1; c < sp.power_db.cols(); ++c)
                if (sp.power_db(r, c) > sp.power_db(r, best))
                    best = c;
            CHECK(best == nearest);
            if (std::abs(sp.freqs_hz[nearest] - f0) < 1e-9)
                CHECK(sp.power_db(r, best) == doctest::Approx(0.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("spectrogram: frequency axis ascending with zero in the middle")
{
    const SignalTrace z = SignalTrace::zeros(base_config(6e9, {}, 256));
    for (std::size_t n : {64u, 65u})
    {
        const Spectrogram sp = spectrogram(z, n);
        for (std::size_t i = 1; i < sp.freqs_hz.size(); ++i)
            CHECK(sp.freqs_hz[i] > sp.freqs_hz[i - 1]);
        CHECK(sp.freqs_hz[n / 2] == doctest::Approx(0.0));
    }
    CHECK_THROWS_AS(spectrogram(z, 512), InputError);
}
