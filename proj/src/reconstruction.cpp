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

#include "doptomo/reconstruction.hpp"
#include "doptomo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace doptomo
{

KPoint theta_to_kspace(double theta, double lambda)
{
    if (!(lambda > 0.0))
        throw InputError("theta_to_kspace: wavelength must be > 0");
    return {(2.0 / lambda) * std::sin(theta), -(2.0 / lambda) * std::cos(theta)};
}

PolarPoint to_polar(Point2 p)
{
    const double r = std::hypot(p.x, p.y);
    if (r == 0.0)
        return {0.0, 0.0};
    double nu = std::atan2(p.y, p.x);
    if (nu < 0.0)
        nu += 2.0 * pi;
    if (nu >= 2.0 * pi)
        nu = 0.0;
    return {r, nu};
}

Point2 to_cartesian(PolarPoint p) { return {p.r * std::cos(p.nu), p.r * std::sin(p.nu)}; }

namespace
{

void require_sorted_unique(const RVector &v, const char *what)
{
    if (v.empty())
        throw InputError(std::string(what) + " must be non-empty");
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        if (!std::isfinite(v[i]))
            throw InputError(std::string(what) + " must be finite");
        if (i > 0 && !(v[i] > v[i - 1]))
            throw InputError(std::string(what) + " must be strictly increasing");
    }
}

RVector linspace_step(double lo, double hi, double step)
{
    if (!(step > 0.0) || !(hi >= lo))
        throw InputError("grid axis: need step > 0 and max >= min");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    RVector v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo + static_cast<double>(i) * step;
    return v;
}

double scene_extent(const SceneConfig &cfg)
{
    double e = 0.0;
    for (const auto &s : cfg.scatterers)
        e = std::max(e, s.r0());
    return e > 0.0 ? 1.2 * e : cfg.wavelength();
}

// Everything a pixel needs, computed once per trace.
struct Plan
{
    RVector sin_theta;
    RVector cos_theta;
    double phase_scale; // 4 pi / lambda, signed
    double weight;      // (2 / lambda) dTheta
};

Plan make_plan(const SignalTrace &trace, KernelSign sign)
{
    if (trace.empty())
        throw InputError("backprojection: empty trace");
    Plan p;
    p.sin_theta.resize(trace.size());
    p.cos_theta.resize(trace.size());
    for (std::size_t k = 0; k < trace.size(); ++k)
    {
        const double th = trace.theta(k);
        p.sin_theta[k] = std::sin(th);
        p.cos_theta[k] = std::cos(th);
    }
    const double s = sign == KernelSign::positive ? 1.0 : -1.0;
    p.phase_scale = s * 4.0 * pi / trace.wavelength();
    p.weight = (2.0 / trace.wavelength()) * trace.delta_theta();
    return p;
}

// sin(Theta + nu) = sin Theta cos nu + cos Theta sin nu
inline cplx pixel_sum(const Plan &plan, const CVector &s, PolarPoint pt)
{
    const double scale = plan.phase_scale * pt.r;
    const double cn = std::cos(pt.nu);
    const double sn = std::sin(pt.nu);
    const std::size_t n = s.size();
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < n; ++k)
    {
        const double phase = scale * (plan.sin_theta[k] * cn + plan.cos_theta[k] * sn);
        const double c = std::cos(phase);
        const double si = std::sin(phase);
        re += s[k].real() * c - s[k].imag() * si;
        im += s[k].real() * si + s[k].imag() * c;
    }
    return {re * plan.weight, im * plan.weight};
}

std::vector<PolarPoint> polar_grid_points(const PolarGrid &grid)
{
    std::vector<PolarPoint> pts;
    pts.reserve(grid.radii.size() * grid.angles.size());
    for (double r : grid.radii)
        for (double nu : grid.angles)
            pts.push_back({r, r == 0.0 ? 0.0 : nu});
    return pts;
}

// On a Cartesian grid the kernel factors as
//   exp(j c (x sin Theta + y cos Theta)) = exp(j c x sin Theta) exp(j c y cos Theta),
// so the image is the product A B with A(y, k) = s_k exp(j c y cos Theta_k) and
// B(k, x) = exp(j c x sin Theta_k), accumulated over k in ascending blocks.
CVector cartesian_sum(const SignalTrace &trace, std::span<const double> xs, std::span<const double> ys,
                      KernelSign sign, bool parallel)
{
    const Plan plan = make_plan(trace, sign);
    const std::size_t nx = xs.size();
    const std::size_t ny = ys.size();
    const std::size_t p = trace.size();
    constexpr std::size_t block = 64;
    RVector acc_re(nx * ny, 0.0);
    RVector acc_im(nx * ny, 0.0);
    RVector a_re(ny * block);
    RVector a_im(ny * block);
    RVector b_re(block * nx);
    RVector b_im(block * nx);
    const CVector &s = trace.samples();

    for (std::size_t k0 = 0; k0 < p; k0 += block)
    {
        const std::size_t kb = std::min(block, p - k0);
        for (std::size_t k = 0; k < kb; ++k)
        {
            const double c = plan.phase_scale * plan.sin_theta[k0 + k];
            for (std::size_t j = 0; j < nx; ++j)
            {
                const double ph = c * xs[j];
                b_re[k * nx + j] = std::cos(ph);
                b_im[k * nx + j] = std::sin(ph);
            }
        }
        for (std::size_t i = 0; i < ny; ++i)
            for (std::size_t k = 0; k < kb; ++k)
            {
                const cplx v = s[k0 + k] * std::polar(1.0, plan.phase_scale * plan.cos_theta[k0 + k] * ys[i]);
                a_re[i * block + k] = v.real();
                a_im[i * block + k] = v.imag();
            }

#pragma omp parallel for schedule(static) if (parallel)
        for (std::size_t i = 0; i < ny; ++i)
        {
            double *gr = acc_re.data() + i * nx;
            double *gi = acc_im.data() + i * nx;
            for (std::size_t k = 0; k < kb; ++k)
            {
                const double ar = a_re[i * block + k];
                const double ai = a_im[i * block + k];
                const double *br = b_re.data() + k * nx;
                const double *bi = b_im.data() + k * nx;
                for (std::size_t j = 0; j < nx; ++j)
                {
                    gr[j] += ar * br[j] - ai * bi[j];
                    gi[j] += ar * bi[j] + ai * br[j];
                }
            }
        }
    }

    CVector out(nx * ny);
    for (std::size_t q = 0; q < out.size(); ++q)
        out[q] = {acc_re[q] * plan.weight, acc_im[q] * plan.weight};
    return out;
}

ComplexImage make_image(ImageGrid grid, std::size_t rows, std::size_t cols, CVector values,
                        const SignalTrace &trace)
{
    ComplexImage img;
    img.grid = std::move(grid);
    img.values = ComplexMatrix(rows, cols);
    img.values.data() = std::move(values);
    img.wavelength = trace.wavelength();
    img.delta_theta = trace.delta_theta();
    return img;
}

} // namespace

void PolarGrid::validate() const
{
    require_sorted_unique(radii, "polar grid radii");
    require_sorted_unique(angles, "polar grid angles");
    if (radii.front() < 0.0)
        throw InputError("polar grid radii must be >= 0");
    if (angles.front() < 0.0 || angles.back() >= 2.0 * pi)
        throw InputError("polar grid angles must lie in [0, 2 pi)");
}

PolarGrid PolarGrid::uniform(double r_max, std::size_t radii, std::size_t angles)
{
    if (!(r_max > 0.0) || radii < 1 || angles < 1)
        throw InputError("polar grid: need r_max > 0 and at least one radius and angle");
    PolarGrid g;
    g.radii.resize(radii);
    for (std::size_t m = 0; m < radii; ++m)
        g.radii[m] = radii == 1 ? 0.0 : r_max * static_cast<double>(m) / static_cast<double>(radii - 1);
    g.angles.resize(angles);
    for (std::size_t n = 0; n < angles; ++n)
        g.angles[n] = 2.0 * pi * static_cast<double>(n) / static_cast<double>(angles);
    return g;
}

void CartesianGrid::validate() const
{
    require_sorted_unique(xs, "x axis");
    require_sorted_unique(ys, "y axis");
}

double CartesianGrid::spacing() const
{
    if (xs.size() > 1)
        return xs[1] - xs[0];
    if (ys.size() > 1)
        return ys[1] - ys[0];
    return 0.0;
}

CartesianGrid CartesianGrid::uniform(double x_min, double x_max, double y_min, double y_max, double step)
{
    return {linspace_step(x_min, x_max, step), linspace_step(y_min, y_max, step)};
}

CartesianGrid default_cartesian_grid(const SceneConfig &cfg)
{
    const double e = scene_extent(cfg);
    const double step = cfg.wavelength() / 4.0;
    // symmetric about the origin, origin on the grid
    const double half = std::floor(e / step) * step;
    return CartesianGrid::uniform(-half, half, -half, half, step);
}

PolarGrid default_polar_grid(const SceneConfig &cfg)
{
    return PolarGrid::uniform(scene_extent(cfg), 256, 512);
}

Point2 ComplexImage::position(std::size_t row, std::size_t col) const
{
    if (const auto *p = std::get_if<PolarGrid>(&grid))
        return to_cartesian({p->radii[row], p->angles[col]});
    const auto &c = std::get<CartesianGrid>(grid);
    return {c.xs[col], c.ys[row]};
}

std::pair<double, double> ComplexImage::axes(std::size_t row, std::size_t col) const
{
    if (const auto *p = std::get_if<PolarGrid>(&grid))
        return {p->radii[row], p->angles[col]};
    const auto &c = std::get<CartesianGrid>(grid);
    return {c.xs[col], c.ys[row]};
}

double ComplexImage::max_magnitude() const
{
    double m = 0.0;
    for (const auto &v : values.data())
        m = std::max(m, std::abs(v));
    return m;
}

CVector backproject_points_serial(const SignalTrace &trace, std::span<const PolarPoint> points,
                                  KernelSign sign)
{
    const Plan plan = make_plan(trace, sign);
    CVector out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        out[i] = pixel_sum(plan, trace.samples(), points[i]);
    return out;
}

CVector backproject_points(const SignalTrace &trace, std::span<const PolarPoint> points, KernelSign sign)
{
    const Plan plan = make_plan(trace, sign);
    CVector out(points.size());
    const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < n; ++i)
    {
        const auto idx = static_cast<std::size_t>(i);
        out[idx] = pixel_sum(plan, trace.samples(), points[idx]);
    }
    return out;
}

cplx image_value_at(const SignalTrace &trace, Point2 p, KernelSign sign)
{
    const PolarPoint pt = to_polar(p);
    return backproject_points_serial(trace, std::span<const PolarPoint>(&pt, 1), sign)[0];
}

ComplexImage backproject_polar(const SignalTrace &trace, const PolarGrid &grid, KernelSign sign)
{
    grid.validate();
    const auto pts = polar_grid_points(grid);
    return make_image(grid, grid.radii.size(), grid.angles.size(), backproject_points(trace, pts, sign), trace);
}

ComplexImage backproject_polar_serial(const SignalTrace &trace, const PolarGrid &grid, KernelSign sign)
{
    grid.validate();
    const auto pts = polar_grid_points(grid);
    return make_image(grid, grid.radii.size(), grid.angles.size(),
                      backproject_points_serial(trace, pts, sign), trace);
}

ComplexImage backproject_cartesian(const SignalTrace &trace, std::span<const double> xs,
                                   std::span<const double> ys, KernelSign sign)
{
    CartesianGrid grid{RVector(xs.begin(), xs.end()), RVector(ys.begin(), ys.end())};
    grid.validate();
    return make_image(std::move(grid), ys.size(), xs.size(), cartesian_sum(trace, xs, ys, sign, true), trace);
}

ComplexImage backproject_cartesian_serial(const SignalTrace &trace, std::span<const double> xs,
                                          std::span<const double> ys, KernelSign sign)
{
    CartesianGrid grid{RVector(xs.begin(), xs.end()), RVector(ys.begin(), ys.end())};
    grid.validate();
    return make_image(std::move(grid), ys.size(), xs.size(), cartesian_sum(trace, xs, ys, sign, false), trace);
}

ComplexImage backproject(const SignalTrace &trace, const ImageGrid &grid, KernelSign sign)
{
    if (const auto *p = std::get_if<PolarGrid>(&grid))
        return backproject_polar(trace, *p, sign);
    const auto &c = std::get<CartesianGrid>(grid);
    return backproject_cartesian(trace, c.xs, c.ys, sign);
}

double magnitude_db(cplx v, double reference)
{
    const double a = std::abs(v);
    if (!(reference > 0.0) || !(a > 0.0))
        return profile_floor_db;
    return std::max(profile_floor_db, 20.0 * std::log10(a / reference));
}

RadialCut radial_cut(const ComplexImage &image, double nu)
{
    const auto *grid = std::get_if<PolarGrid>(&image.grid);
    if (grid == nullptr)
        throw InputError("radial_cut: image is not on a polar grid");
    if (image.values.empty())
        throw InputError("radial_cut: empty image");

    double target = std::fmod(nu, 2.0 * pi);
    if (target < 0.0)
        target += 2.0 * pi;
    std::size_t best = 0;
    double best_dist = 10.0;
    for (std::size_t n = 0; n < grid->angles.size(); ++n)
    {
        double d = std::abs(grid->angles[n] - target);
        d = std::min(d, 2.0 * pi - d);
        if (d < best_dist)
        {
            best_dist = d;
            best = n;
        }
    }

    RadialCut cut;
    cut.nu = grid->angles[best];
    cut.radii = grid->radii;
    double peak = 0.0;
    for (std::size_t m = 0; m < grid->radii.size(); ++m)
        peak = std::max(peak, std::abs(image.values(m, best)));
    cut.db.resize(grid->radii.size());
    for (std::size_t m = 0; m < grid->radii.size(); ++m)
        cut.db[m] = peak > 0.0 ? magnitude_db(image.values(m, best), peak) : profile_floor_db;
    return cut;
}

GridIndex argmax(const ComplexImage &image)
{
    if (image.values.empty())
        throw InputError("argmax: empty image");
    GridIndex best;
    double best_mag = -1.0;
    for (std::size_t r = 0; r < image.values.rows(); ++r)
        for (std::size_t c = 0; c < image.values.cols(); ++c)
        {
            const double m = std::abs(image.values(r, c));
            if (m > best_mag)
            {
                best_mag = m;
                best = {r, c};
            }
        }
    return best;
}

namespace
{

std::vector<Peak> local_maxima(const ComplexImage &image, double threshold_db)
{
    std::vector<Peak> candidates;
    const double gmax = image.max_magnitude();
    if (!(gmax > 0.0))
        return candidates;

    const std::size_t rows = image.values.rows();
    const std::size_t cols = image.values.cols();
    const bool polar = image.is_polar();
    const double floor_mag = gmax * std::pow(10.0, threshold_db / 20.0);

    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
        {
            const double m = std::abs(image.values(r, c));
            if (m < floor_mag)
                continue;
            bool is_max = true;
            for (int dr = -1; dr <= 1 && is_max; ++dr)
                for (int dc = -1; dc <= 1; ++dc)
                {
                    if (dr == 0 && dc == 0)
                        continue;
                    const auto rr = static_cast<std::ptrdiff_t>(r) + dr;
                    auto cc = static_cast<std::ptrdiff_t>(c) + dc;
                    if (rr < 0 || rr >= static_cast<std::ptrdiff_t>(rows))
                        continue;
                    if (polar)
                        cc = (cc + static_cast<std::ptrdiff_t>(cols)) % static_cast<std::ptrdiff_t>(cols);
                    else if (cc < 0 || cc >= static_cast<std::ptrdiff_t>(cols))
                        continue;
                    const double mn = std::abs(image.values(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)));
                    // ties broken toward the lower linear index
                    const bool earlier = (rr < static_cast<std::ptrdiff_t>(r)) ||
                                         (rr == static_cast<std::ptrdiff_t>(r) && cc < static_cast<std::ptrdiff_t>(c));
                    if (mn > m || (mn == m && earlier))
                    {
                        is_max = false;
                        break;
                    }
                }
            if (is_max)
                candidates.push_back({{r, c}, image.position(r, c), m, magnitude_db(image.values(r, c), gmax)});
        }

    return candidates;
}

std::vector<Peak> envelope_filter(std::vector<Peak> candidates, double wavelength, double sidelobe_margin_db)
{
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Peak &a, const Peak &b) { return a.magnitude > b.magnitude; });
    const double top = candidates.empty() ? 0.0 : candidates.front().magnitude;
    for (auto &c : candidates)
        c.db = magnitude_db(c.magnitude, top);

    std::vector<Peak> peaks;
    const double margin = std::pow(10.0, sidelobe_margin_db / 20.0);
    const double k = 4.0 * pi / wavelength;
    for (const auto &cand : candidates)
    {
        double envelope = 0.0;
        for (const auto &p : peaks)
        {
            const double d = std::hypot(cand.position.x - p.position.x, cand.position.y - p.position.y);
            const double arg = k * d;
            const double bound = arg > 0.0 ? std::min(1.0, std::sqrt(2.0 / (pi * arg))) : 1.0;
            envelope += p.magnitude * bound;
        }
        if (cand.magnitude > margin * envelope)
            peaks.push_back(cand);
    }
    return peaks;
}

} // namespace

std::vector<Peak> find_peaks(const ComplexImage &image, double threshold_db, double sidelobe_margin_db)
{
    return envelope_filter(local_maxima(image, threshold_db), image.wavelength, sidelobe_margin_db);
}

CVector line_profile(const SignalTrace &trace, Point2 anchor, Point2 toward, std::span<const double> offsets,
                     KernelSign sign)
{
    const double dx = toward.x - anchor.x;
    const double dy = toward.y - anchor.y;
    const double len = std::hypot(dx, dy);
    if (!(len > 0.0))
        throw InputError("line_profile: anchor and direction point coincide");
    std::vector<PolarPoint> pts;
    pts.reserve(offsets.size());
    for (double t : offsets)
        pts.push_back(to_polar({anchor.x + t * dx / len, anchor.y + t * dy / len}));
    return backproject_points(trace, pts, sign);
}

} // namespace doptomo
