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

#ifndef DOPTOMO_RECONSTRUCTION_HPP
#define DOPTOMO_RECONSTRUCTION_HPP

#include "doptomo/numerics.hpp"
#include "doptomo/scene.hpp"

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace doptomo
{

struct KPoint
{
    double u; // cycles/m
    double v;
};

KPoint theta_to_kspace(double theta, double lambda);

struct Point2
{
    double x;
    double y;
};

struct PolarPoint
{
    double r;
    double nu; // [0, 2 pi); 0 when r == 0
};

PolarPoint to_polar(Point2 p);
Point2 to_cartesian(PolarPoint p);

struct PolarGrid
{
    RVector radii;  // increasing, >= 0
    RVector angles; // increasing, in [0, 2 pi)

    void validate() const;
    static PolarGrid uniform(double r_max, std::size_t radii, std::size_t angles);
};

struct CartesianGrid
{
    RVector xs; // increasing
    RVector ys; // increasing

    void validate() const;
    double spacing() const;
    /// Axis min, min + step, ... up to and including max (within 1e-9 step).
    static CartesianGrid uniform(double x_min, double x_max, double y_min, double y_max, double step);
};

using ImageGrid = std::variant<PolarGrid, CartesianGrid>;

/// Defaults: lambda/4 Cartesian spacing over +-1.2 max r0, polar 256 x 512.
CartesianGrid default_cartesian_grid(const SceneConfig &cfg);
PolarGrid default_polar_grid(const SceneConfig &cfg);

/// Sign of the imaging kernel exponent. positive is the matched filter for
/// exp(-j 4 pi R / lambda) traces; negative exists for symmetry checks.
enum class KernelSign
{
    positive,
    negative
};

/// Reflectivity samples. Polar: rows are radii, columns angles.
/// Cartesian: rows are y, columns x.
struct ComplexImage
{
    ImageGrid grid;
    ComplexMatrix values;
    double wavelength = 0.0;
    double delta_theta = 0.0;

    bool is_polar() const noexcept { return std::holds_alternative<PolarGrid>(grid); }
    Point2 position(std::size_t row, std::size_t col) const;
    /// Coordinates as stored: (r, nu) for polar, (x, y) for Cartesian.
    std::pair<double, double> axes(std::size_t row, std::size_t col) const;
    double max_magnitude() const;
};

/// Image value at arbitrary points:
///   g(r, nu) = (2/lambda) dTheta sum_k s_k exp(+-j (4 pi r / lambda) sin(Theta_k + nu))
/// Summation over k is in ascending order for every point; serial and
/// parallel versions agree bit for bit.
CVector backproject_points(const SignalTrace &trace, std::span<const PolarPoint> points,
                           KernelSign sign = KernelSign::positive);
CVector backproject_points_serial(const SignalTrace &trace, std::span<const PolarPoint> points,
                                  KernelSign sign = KernelSign::positive);

cplx image_value_at(const SignalTrace &trace, Point2 p, KernelSign sign = KernelSign::positive);

ComplexImage backproject_polar(const SignalTrace &trace, const PolarGrid &grid,
                               KernelSign sign = KernelSign::positive);
ComplexImage backproject_polar_serial(const SignalTrace &trace, const PolarGrid &grid,
                                      KernelSign sign = KernelSign::positive);

ComplexImage backproject_cartesian(const SignalTrace &trace, std::span<const double> xs,
                                   std::span<const double> ys, KernelSign sign = KernelSign::positive);
ComplexImage backproject_cartesian_serial(const SignalTrace &trace, std::span<const double> xs,
                                          std::span<const double> ys,
                                          KernelSign sign = KernelSign::positive);

ComplexImage backproject(const SignalTrace &trace, const ImageGrid &grid,
                         KernelSign sign = KernelSign::positive);

inline constexpr double profile_floor_db = -100.0;

/// 20 log10(|v| / reference), clamped at profile_floor_db.
double magnitude_db(cplx v, double reference);

struct RadialCut
{
    double nu = 0.0; // selected column angle
    RVector radii;
    RVector db;      // relative to the column maximum
};

RadialCut radial_cut(const ComplexImage &image, double nu);

struct GridIndex
{
    std::size_t row = 0;
    std::size_t col = 0;
};

GridIndex argmax(const ComplexImage &image);

struct Peak
{
    GridIndex index;
    Point2 position;
    double magnitude = 0.0;
    double db = 0.0; // relative to the image maximum
};

/// Local maxima (8-neighbourhood) above threshold_db relative to the image
/// maximum, strongest first. A candidate is dropped when its magnitude is
/// within the point-response sidelobe envelope of stronger accepted peaks,
/// i.e. |g| <= margin * sum_i |g_i| min(1, sqrt(2 / (pi * 4 pi d_i / lambda))).
std::vector<Peak> find_peaks(const ComplexImage &image, double threshold_db = -20.0,
                             double sidelobe_margin_db = 6.0);

/// Image values along the line through `anchor` and `toward`, at signed
/// distances `offsets` from anchor (positive toward `toward`).
CVector line_profile(const SignalTrace &trace, Point2 anchor, Point2 toward, std::span<const double> offsets,
                     KernelSign sign = KernelSign::positive);

} // namespace doptomo

#endif
