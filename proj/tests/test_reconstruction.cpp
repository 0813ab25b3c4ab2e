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
#include "doptomo/reconstruction.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace doptomo;
using doptomo::test::max_abs_diff;
using doptomo::test::random_cvector;

namespace
{

double deg(double d) { return d * pi / 180.0; }

SceneConfig scene(double carrier, std::vector<Scatterer> s, std::size_t p)
{
    SceneConfig cfg;
    cfg.carrier_hz = carrier;
    cfg.omega_r = pi;
    cfg.standoff_m = 60.0;
    cfg.scatterers = std::move(s);
    cfg.sample_count = p;
    return cfg;
}

// Direct evaluation of the imaging sum in long double.
cplx image_oracle(const SignalTrace &tr, double r, double nu, double sign = 1.0)
{
    using ld = long double;
    const ld lambda = tr.wavelength();
    const ld scale = 4.0L * 3.141592653589793238462643383279L * r / lambda;
    std::complex<ld> acc = 0;
    for (std::size_t k = 0; k < tr.size(); ++k)
    {
        const ld arg = sign * scale * std::sin(static_cast<ld>(tr.theta(k)) + static_cast<ld>(nu));
        acc += std::complex<ld>(tr[k]) * std::complex<ld>(std::cos(arg), std::sin(arg));
    }
    acc *= 2.0L / lambda * static_cast<ld>(tr.delta_theta());
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

SignalTrace scenario2_trace(std::size_t p = 1024)
{
    return synthesize_trace(scene(6e8, {Scatterer(1.5, deg(300.0), 0.0, 3.0)}, p));
}

} // namespace

TEST_CASE("theta_to_kspace examples")
{
    const double lambda = speed_of_light / 6e9;
    const KPoint k0 = theta_to_kspace(0.0, lambda);
    CHECK(k0.u == doctest::Approx(0.0));
    CHECK(k0.v == doctest::Approx(-2.0 / lambda));
    const KPoint k1 = theta_to_kspace(pi / 2.0, lambda);
    CHECK(k1.u == doctest::Approx(2.0 / lambda));
    CHECK(std::abs(k1.v) < 1e-12);
    const KPoint k2 = theta_to_kspace(pi, lambda);
    CHECK(std::abs(k2.u) < 1e-12);
    CHECK(k2.v == doctest::Approx(40.03).epsilon(1e-4));
    for (double th = 0.0; th < 2.0 * pi; th += 0.1)
    {
        const KPoint k = theta_to_kspace(th, lambda);
        CHECK(k.u * k.u + k.v * k.v == doctest::Approx(4.0 / (lambda * lambda)).epsilon(1e-14));
    }
}

TEST_CASE("polar and Cartesian coordinates round trip")
{
    const PolarPoint o = to_polar({0.0, 0.0});
    CHECK(o.r == 0.0);
    CHECK(o.nu == 0.0);
    const PolarPoint q = to_polar({0.75, -1.3});
    CHECK(q.nu >= 0.0);
    CHECK(q.nu < 2.0 * pi);
    const Point2 back = to_cartesian(q);
    CHECK(back.x == doctest::Approx(0.75));
    CHECK(back.y == doctest::Approx(-1.3));
}

TEST_CASE("grids validate and build")
{
    const CartesianGrid g = CartesianGrid::uniform(-1.0, 1.0, 0.0, 0.5, 0.1);
    CHECK(g.xs.size() == 21);
    CHECK(g.ys.size() == 6);
    CHECK(g.spacing() == doctest::Approx(0.1));
    CHECK_NOTHROW(g.validate());
    const PolarGrid p = PolarGrid::uniform(2.0, 16, 32);
    CHECK_NOTHROW(p.validate());
    CHECK(p.angles.back() < 2.0 * pi);
    PolarGrid bad = p;
    bad.angles.push_back(2.0 * pi);
    CHECK_THROWS_AS(bad.validate(), InputError);
    CartesianGrid unsorted{{0.0, 1.0, 0.5}, {0.0}};
    CHECK_THROWS_AS(unsorted.validate(), InputError);
}

TEST_CASE("backprojection matches the direct-sum oracle")
{
    const SignalTrace tr = scenario2_trace(512);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ur(0.0, 3.0);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * pi);
    std::vector<PolarPoint> pts;
    for (int i = 0; i < 40; ++i)
        pts.push_back({ur(rng), ua(rng)});
    const CVector pos = backproject_points(tr, pts);
    const CVector neg = backproject_points(tr, pts, KernelSign::negative);
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        CHECK(std::abs(pos[i] - image_oracle(tr, pts[i].r, pts[i].nu)) < 1e-11);
        CHECK(std::abs(neg[i] - image_oracle(tr, pts[i].r, pts[i].nu, -1.0)) < 1e-11);
    }
}

TEST_CASE("zero trace gives a zero image; origin pixel is the scaled sample sum")
{
    const SceneConfig cfg = scene(6e8, {}, 256);
    const ComplexImage z = backproject_polar(SignalTrace::zeros(cfg), PolarGrid::uniform(2.0, 8, 16));
    for (const auto &v : z.values.data())
        CHECK(v == cplx(0.0));

    const SignalTrace tr = scenario2_trace(256);
    cplx sum = 0.0;
    for (const auto &v : tr.samples())
        sum += v;
    const RVector xs{-0.5, 0.0, 0.5};
    const RVector ys{0.0};
    const ComplexImage img = backproject_cartesian(tr, xs, ys);
    CHECK(std::abs(img.values(0, 1) - 2.0 / tr.wavelength() * tr.delta_theta() * sum) < 1e-12);
}

TEST_CASE("polar and Cartesian paths agree at the same points")
{
    const SignalTrace tr = scenario2_trace(512);
    const PolarGrid pg = PolarGrid::uniform(2.5, 12, 24);
    const ComplexImage pol = backproject_polar(tr, pg);
    for (std::size_t i = 0; i < pg.radii.size(); i += 3)
        for (std::size_t j = 0; j < pg.angles.size(); j += 5)
        {
            const Point2 p = pol.position(i, j);
            const RVector xs{p.x};
            const RVector ys{p.y};
            const ComplexImage c = backproject_cartesian(tr, xs, ys);
            CHECK(std::abs(c.values(0, 0) - pol.values(i, j)) < 1e-10);
        }
}

TEST_CASE("parallel and serial backprojection are bit identical")
{
    const SignalTrace tr = scenario2_trace(512);
    const PolarGrid pg = PolarGrid::uniform(2.5, 40, 64);
    CHECK(backproject_polar(tr, pg).values.data() == backproject_polar_serial(tr, pg).values.data());
    const CartesianGrid cg = CartesianGrid::uniform(-2.0, 2.0, -2.0, 2.0, 0.1);
    CHECK(backproject_cartesian(tr, cg.xs, cg.ys).values.data() ==
          backproject_cartesian_serial(tr, cg.xs, cg.ys).values.data());
}

TEST_CASE("backprojection is linear")
{
    std::mt19937_64 rng(22);
    const SignalTrace base = scenario2_trace(256);
    const SignalTrace a = base.with_samples(random_cvector(256, rng));
    const SignalTrace b = base.with_samples(random_cvector(256, rng));
    const cplx alpha(0.3, -1.7);
    CVector combo(256);
    for (std::size_t k = 0; k < 256; ++k)
        combo[k] = alpha * a[k] + b[k];
    const PolarGrid pg = PolarGrid::uniform(2.0, 20, 30);
    const ComplexImage ia = backproject_polar(a, pg);
    const ComplexImage ib = backproject_polar(b, pg);
    const ComplexImage ic = backproject_polar(base.with_samples(combo), pg);
    CVector expect(ia.values.data().size());
    for (std::size_t i = 0; i < expect.size(); ++i)
        expect[i] = alpha * ia.values.data()[i] + ib.values.data()[i];
    CHECK(max_abs_diff(ic.values.data(), expect) <= 1e-12 * ic.max_magnitude());
}

TEST_CASE("rotating the scene and the image angles together leaves the image unchanged")
{
    const std::size_t p = 1200;
    const std::vector<Scatterer> s{Scatterer(3.0, deg(130.0), 0.0, 2.0), Scatterer(1.5, deg(300.0), 0.0, 3.0)};
    const SignalTrace tr = synthesize_trace(scene(6e8, s, p));
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ur(0.0, 3.5);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * pi);
    std::vector<PolarPoint> pts;
    for (int i = 0; i < 200; ++i)
        pts.push_back({ur(rng), ua(rng)});
    const CVector g0 = backproject_points(tr, pts);
    double gmax = 0.0;
    for (const auto &v : g0)
        gmax = std::max(gmax, std::abs(v));
    for (double d : {30.0, 90.0})
    {
        std::vector<Scatterer> rs;
        for (const auto &q : s)
            rs.emplace_back(q.r0(), q.theta0() + deg(d), q.z0(), q.amplitude());
        const SignalTrace rt = synthesize_trace(scene(6e8, rs, p));
        std::vector<PolarPoint> rp;
        for (const auto &q : pts)
            rp.push_back({q.r, std::fmod(q.nu + deg(d), 2.0 * pi)});
        const CVector g1 = backproject_points(rt, rp);
        CHECK(max_abs_diff(g0, g1) <= 1e-9 * gmax);
    }
}

TEST_CASE("conjugate trace with positive kernel is the conjugate of the negative-kernel image")
{
    const SignalTrace tr = synthesize_trace(
        scene(6e8, {Scatterer(3.0, deg(130.0), 0.0, 2.0), Scatterer(2.0, deg(60.0), 0.0, 1.0)}, 512));
    CVector conj_s(tr.size());
    for (std::size_t k = 0; k < tr.size(); ++k)
        conj_s[k] = std::conj(tr[k]);
    const PolarGrid pg = PolarGrid::uniform(3.5, 30, 40);
    const ComplexImage a = backproject_polar(tr.with_samples(conj_s), pg);
    const ComplexImage b = backproject_polar(tr, pg, KernelSign::negative);
    for (std::size_t i = 0; i < a.values.data().size(); ++i)
        CHECK(std::abs(a.values.data()[i] - std::conj(b.values.data()[i])) <= 1e-12 * a.max_magnitude());
}

TEST_CASE("single-scatterer peak localization on a fine grid")
{
    std::mt19937_64 rng(24);
    const double lambda = speed_of_light / 6e8;
    std::uniform_real_distribution<double> ur(2.0 * lambda, 2.0);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * pi);
    const double step = lambda / 4.0;
    const CartesianGrid g = CartesianGrid::uniform(-2.5, 2.5, -2.5, 2.5, step);
    for (int trial = 0; trial < 6; ++trial)
    {
        const Scatterer s(ur(rng), ua(rng), 0.0, 1.0);
        const SignalTrace tr = synthesize_trace(scene(6e8, {s}, 512));
        const ComplexImage img = backproject_cartesian(tr, g.xs, g.ys);
        const GridIndex m = argmax(img);
        const Point2 p = img.position(m.row, m.col);
        CHECK(std::abs(p.x - s.x0()) <= step + 1e-9);
        CHECK(std::abs(p.y - s.y0()) <= step + 1e-9);
    }
}

TEST_CASE("scenario-2 scatterer lands at (0.75, -1.3) as a single peak")
{
    const SignalTrace tr = scenario2_trace(1024);
    const SceneConfig cfg = scene(6e8, {Scatterer(1.5, deg(300.0), 0.0, 3.0)}, 1024);
    const CartesianGrid g = default_cartesian_grid(cfg);
    CHECK(g.spacing() <= cfg.wavelength() / 4.0 + 1e-12);
    const ComplexImage img = backproject(tr, g);
    const std::vector<Peak> peaks = find_peaks(img);
    REQUIRE(peaks.size() == 1);
    CHECK(std::abs(peaks[0].position.x - 0.75) <= g.spacing());
    CHECK(std::abs(peaks[0].position.y + 1.299) <= g.spacing());
    CHECK(peaks[0].db == 0.0);
    // unit-quadrature normalization: |g| at the scatterer is about 2 pi a (2 / lambda)
    CHECK(std::abs(image_value_at(tr, {0.75, -1.5 * std::sqrt(3.0) / 2.0})) ==
          doctest::Approx(2.0 * pi * 3.0 * 2.0 / cfg.wavelength()).epsilon(1e-9));
}

TEST_CASE("find_peaks: empty for a zero image, three for the three-scatterer scene")
{
    const SceneConfig z = scene(6e8, {}, 256);
    const ComplexImage zi = backproject(SignalTrace::zeros(z), CartesianGrid::uniform(-1.0, 1.0, -1.0, 1.0, 0.1));
    CHECK(find_peaks(zi).empty());

    const SceneConfig cfg = scene(6e8,
                                  {Scatterer(3.0, deg(130.0), 0.0, 2.0), Scatterer(2.0, deg(60.0), 0.0, 1.0),
                                   Scatterer(1.5, deg(300.0), 0.0, 3.0)},
                                  1024);
    const ComplexImage img = backproject(synthesize_trace(cfg), default_cartesian_grid(cfg));
    const std::vector<Peak> peaks = find_peaks(img);
    REQUIRE(peaks.size() == 3);
    CHECK(peaks[0].magnitude > peaks[1].magnitude);
    CHECK(peaks[1].magnitude > peaks[2].magnitude);
}

TEST_CASE("radial_cut: peak at r0 through the scatterer, flat for a constant column")
{
    const SignalTrace tr = scenario2_trace(1024);
    const PolarGrid pg = PolarGrid::uniform(3.0, 121, 360);
    const ComplexImage img = backproject_polar(tr, pg);
    const RadialCut cut = radial_cut(img, deg(300.0));
    CHECK(std::abs(cut.nu - deg(300.0)) <= pi / 360.0 + 1e-12);
    std::size_t best = 0;
    for (std::size_t i = 1; i < cut.db.size(); ++i)
        if (cut.db[i] > cut.db[best])
            best = i;
    CHECK(cut.db[best] == 0.0);
    CHECK(std::abs(cut.radii[best] - 1.5) <= 0.025 + 1e-12);

    ComplexImage flat;
    flat.grid = PolarGrid::uniform(1.0, 5, 4);
    flat.values = ComplexMatrix(5, 4, cplx(0.0, 2.0));
    for (double v : radial_cut(flat, 0.1).db)
        CHECK(v == 0.0);

    ComplexImage cart;
    cart.grid = CartesianGrid::uniform(0.0, 1.0, 0.0, 1.0, 0.5);
    cart.values = ComplexMatrix(3, 3, 1.0);
    CHECK_THROWS_AS(radial_cut(cart, 0.0), InputError);
}

TEST_CASE("line_profile evaluates the image along the anchor-to-target line")
{
    const SignalTrace tr = scenario2_trace(512);
    const Point2 a{0.75, -1.3};
    const Point2 b{-1.85, 0.29};
    const RVector offsets{-1.0, 0.0, 0.4, 2.5};
    const CVector prof = line_profile(tr, a, b, offsets);
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    for (std::size_t i = 0; i < offsets.size(); ++i)
    {
        const Point2 p{a.x + offsets[i] * (b.x - a.x) / len, a.y + offsets[i] * (b.y - a.y) / len};
        CHECK(std::abs(prof[i] - image_value_at(tr, p)) < 1e-10);
    }
    CHECK_THROWS_AS(line_profile(tr, a, a, offsets), InputError);
}

TEST_CASE("magnitude_db clamps at the floor")
{
    CHECK(magnitude_db(0.0, 1.0) == profile_floor_db);
    CHECK(magnitude_db(cplx(0.0, 0.1), 1.0) == doctest::Approx(-20.0));
}
