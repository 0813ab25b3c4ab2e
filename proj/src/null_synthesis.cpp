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

#include "doptomo/null_synthesis.hpp"
#include "doptomo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace doptomo
{

NullSpec::NullSpec(std::vector<Point2> targets) : targets_(std::move(targets))
{
    if (targets_.empty())
        throw InputError("null spec: at least one target required");
    for (std::size_t i = 0; i < targets_.size(); ++i)
    {
        if (!std::isfinite(targets_[i].x) || !std::isfinite(targets_[i].y))
            throw InputError("null spec: target " + std::to_string(i) + " is not finite");
        for (std::size_t j = 0; j < i; ++j)
            if (targets_[i].x == targets_[j].x && targets_[i].y == targets_[j].y)
                throw InputError("null spec: targets " + std::to_string(j) + " and " + std::to_string(i) +
                                 " coincide");
    }
}

NullSpec NullSpec::from_polar(const std::vector<PolarPoint> &targets)
{
    std::vector<Point2> pts;
    pts.reserve(targets.size());
    for (const auto &t : targets)
    {
        if (t.r < 0.0)
            throw InputError("null spec: radius must be >= 0");
        pts.push_back(to_cartesian(t));
    }
    return NullSpec(std::move(pts));
}

double PhaseOffset::peak_to_peak() const
{
    if (phi.empty())
        return 0.0;
    const auto [lo, hi] = std::minmax_element(phi.begin(), phi.end());
    return *hi - *lo;
}

SteeringMatrix build_steering(const SignalTrace &trace, const NullSpec &nulls)
{
    if (nulls.size() == 0)
        throw InputError("build_steering: no nulls requested");
    if (trace.empty())
        throw InputError("build_steering: empty trace");

    const std::size_t p = trace.size();
    const std::size_t k = nulls.size();
    SteeringMatrix sm{ComplexMatrix(p, k), RealMatrix(p, k), RealMatrix(p, k)};

    std::vector<PolarPoint> pol(k);
    for (std::size_t q = 0; q < k; ++q)
        pol[q] = nulls.polar(q);
    const double scale = 4.0 * pi / trace.wavelength();

    const auto rows = static_cast<std::ptrdiff_t>(p);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < rows; ++i)
    {
        const auto row = static_cast<std::size_t>(i);
        const double th = trace.theta(row);
        const double st = std::sin(th);
        const double ct = std::cos(th);
        for (std::size_t q = 0; q < k; ++q)
        {
            // same kernel as backproject_points
            const double phase =
                scale * pol[q].r * (st * std::cos(pol[q].nu) + ct * std::sin(pol[q].nu));
            const cplx v = trace[row] * cplx(std::cos(phase), std::sin(phase));
            sm.w(row, q) = v;
            sm.c(row, q) = v.real();
            sm.d(row, q) = v.imag();
        }
    }
    return sm;
}

PhaseOffset solve_phase_offset(const SteeringMatrix &sm, double delta_theta, double pivot_tol)
{
    if (!(delta_theta > 0.0))
        throw InputError("solve_phase_offset: delta_theta must be > 0");
    const std::size_t p = sm.w.rows();
    const std::size_t k = sm.w.cols();
    if (k == 0 || p == 0)
        throw InputError("solve_phase_offset: empty steering matrix");
    const std::size_t n = 2 * k;

    auto column = [&](std::size_t row, std::size_t j) { return j < k ? sm.c(row, j) : sm.d(row, j - k); };

    RealMatrix gram(n, n);
    RVector b(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j)
        {
            double acc = 0.0;
            for (std::size_t row = 0; row < p; ++row)
                acc += column(row, i) * column(row, j);
            gram(i, j) = gram(j, i) = delta_theta * acc;
        }
    for (std::size_t q = 0; q < k; ++q)
    {
        double sc = 0.0;
        double sd = 0.0;
        for (std::size_t row = 0; row < p; ++row)
        {
            sc += sm.c(row, q);
            sd += sm.d(row, q);
        }
        b[q] = -delta_theta * sd;
        b[k + q] = delta_theta * sc;
    }

    RVector coeff;
    try
    {
        coeff = solve_spd(gram, b, pivot_tol);
    }
    catch (const SingularSystemError &e)
    {
        const std::size_t q = e.column() % k;
        std::ostringstream os;
        os << "null synthesis: degenerate null set, null " << q << " ("
           << (e.column() < k ? "real" : "imaginary")
           << " part) is linearly dependent on the others or carries no signal";
        throw SingularSystemError(os.str(), q);
    }

    PhaseOffset out;
    out.phi.assign(p, 0.0);
    for (std::size_t row = 0; row < p; ++row)
    {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            acc += column(row, j) * coeff[j];
        out.phi[row] = acc;
    }
    return out;
}

PhaseOffset synthesize_null_phase(const SignalTrace &trace, const NullSpec &nulls)
{
    return solve_phase_offset(build_steering(trace, nulls), trace.delta_theta());
}

SignalTrace apply_phase_offset(const SignalTrace &trace, const PhaseOffset &phi)
{
    if (phi.phi.size() != trace.size())
        throw InputError("apply_phase_offset: phase has " + std::to_string(phi.phi.size()) +
                         " samples, trace has " + std::to_string(trace.size()));
    CVector out(trace.size());
    for (std::size_t k = 0; k < trace.size(); ++k)
    {
        if (!std::isfinite(phi.phi[k]))
            throw InputError("apply_phase_offset: non-finite phase at sample " + std::to_string(k));
        out[k] = trace[k] * std::polar(1.0, phi.phi[k]);
    }
    return trace.with_samples(std::move(out));
}

RVector linearized_null_residual(const SteeringMatrix &sm, const PhaseOffset &phi, double delta_theta)
{
    if (phi.phi.size() != sm.w.rows())
        throw InputError("linearized_null_residual: length mismatch");
    RVector out(sm.w.cols());
    for (std::size_t q = 0; q < sm.w.cols(); ++q)
    {
        cplx ones = 0.0;
        cplx weighted = 0.0;
        double scale = 0.0;
        for (std::size_t k = 0; k < sm.w.rows(); ++k)
        {
            const cplx w = sm.w(k, q);
            ones += w;
            weighted += w * phi.phi[k];
            scale += std::abs(w) * (1.0 + std::abs(phi.phi[k]));
        }
        const cplx res = delta_theta * (cplx(0.0, 1.0) * ones - weighted);
        scale *= delta_theta;
        out[q] = scale > 0.0 ? std::abs(res) / scale : std::abs(res);
    }
    return out;
}

NullVerification verify_null(const SignalTrace &trace, const PhaseOffset &phi, const NullSpec &nulls,
                             const ImageGrid &grid)
{
    const SignalTrace adapted = apply_phase_offset(trace, phi);
    const ComplexImage before = backproject(trace, grid);
    const ComplexImage after = backproject(adapted, grid);

    NullVerification v;
    v.peak_before = argmax(before);
    v.peak_after = argmax(after);
    const double peak0 = std::abs(before.values(v.peak_before.row, v.peak_before.col));
    const double peak1 = std::abs(after.values(v.peak_after.row, v.peak_after.col));
    v.peak_change_db = magnitude_db(peak1, peak0);

    const auto drow = static_cast<std::ptrdiff_t>(v.peak_after.row) - static_cast<std::ptrdiff_t>(v.peak_before.row);
    auto dcol = static_cast<std::ptrdiff_t>(v.peak_after.col) - static_cast<std::ptrdiff_t>(v.peak_before.col);
    if (before.is_polar())
    {
        const auto n = static_cast<std::ptrdiff_t>(before.values.cols());
        dcol = std::min(std::abs(dcol), n - std::abs(dcol));
    }
    const auto shift = static_cast<std::size_t>(std::max(std::abs(drow), std::abs(dcol)));

    for (const auto &t : nulls.targets())
    {
        NullReport r;
        r.target = t;
        r.pre_db = magnitude_db(image_value_at(trace, t), peak0);
        r.post_db = magnitude_db(image_value_at(adapted, t), peak1);
        r.peak_shift_cells = shift;
        v.nulls.push_back(r);
    }
    return v;
}

} // namespace doptomo
