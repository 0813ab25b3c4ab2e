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

#ifndef DOPTOMO_NULL_SYNTHESIS_HPP
#define DOPTOMO_NULL_SYNTHESIS_HPP

#include "doptomo/numerics.hpp"
#include "doptomo/reconstruction.hpp"
#include "doptomo/scene.hpp"

#include <vector>

namespace doptomo
{

/*
 * Phase-only image nulling.
 *
 * Multiplying the trace by exp(j phi) changes the image at a target point by
 * (2/lambda) <w_q, exp(j phi) - 1>, with w_q(Theta) = s(Theta) K_q(Theta) and
 * K_q the imaging kernel of target q. To first order the target value vanishes
 * when
 *
 *     <w_q, phi> = j <w_q, 1>,   q = 1..K,
 *
 * i.e. with c = Re w, d = Im w:  <c_q, phi> = -<d_q, 1>,  <d_q, phi> = <c_q, 1>.
 * These are 2K real linear constraints on phi; the minimum-norm solution lies
 * in span[c d] and is phi = M (M^T M)^-1 b with M = [c d], b = <[-d c], 1>.
 */

class NullSpec
{
public:
    NullSpec() = default;
    explicit NullSpec(std::vector<Point2> targets);

    static NullSpec from_polar(const std::vector<PolarPoint> &targets);

    std::size_t size() const noexcept { return targets_.size(); }
    const std::vector<Point2> &targets() const noexcept { return targets_; }
    PolarPoint polar(std::size_t q) const { return to_polar(targets_[q]); }

private:
    std::vector<Point2> targets_;
};

/// phi in radians, sample-aligned with a trace.
struct PhaseOffset
{
    RVector phi;

    double peak_to_peak() const;
};

struct SteeringMatrix
{
    ComplexMatrix w; // P x K
    RealMatrix c;    // Re w
    RealMatrix d;    // Im w
};

SteeringMatrix build_steering(const SignalTrace &trace, const NullSpec &nulls);

/// Minimum-norm first-order null solution. The quadrature weight delta_theta
/// cancels from the result. Throws SingularSystemError naming the degenerate null.
PhaseOffset solve_phase_offset(const SteeringMatrix &sm, double delta_theta, double pivot_tol = 1e-12);

/// Convenience: steering + solve for a trace.
PhaseOffset synthesize_null_phase(const SignalTrace &trace, const NullSpec &nulls);

SignalTrace apply_phase_offset(const SignalTrace &trace, const PhaseOffset &phi);

/// Per-null residual |j<w_q,1> - <w_q,phi>| of the linearized conditions,
/// relative to dTheta sum_k |w_kq| (1 + |phi_k|).
RVector linearized_null_residual(const SteeringMatrix &sm, const PhaseOffset &phi, double delta_theta);

struct NullReport
{
    Point2 target;
    double pre_db = 0.0;  // relative to the un-adapted image peak
    double post_db = 0.0; // relative to the adapted image peak
    std::size_t peak_shift_cells = 0;
};

struct NullVerification
{
    std::vector<NullReport> nulls;
    GridIndex peak_before;
    GridIndex peak_after;
    double peak_change_db = 0.0; // adapted peak relative to original peak
};

/// Images the trace before and after the phase offset on `grid`, reports the
/// value at every null (evaluated exactly at the target point, dB relative to
/// the respective image peak) and the peak displacement in grid cells.
NullVerification verify_null(const SignalTrace &trace, const PhaseOffset &phi, const NullSpec &nulls,
                             const ImageGrid &grid);

} // namespace doptomo

#endif
