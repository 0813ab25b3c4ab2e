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

// OpenMP kernels against their serial references.

#include "doptomo/deblur.hpp"
#include "doptomo/null_synthesis.hpp"
#include "doptomo/reconstruction.hpp"
#include "doptomo/scene.hpp"

#include <benchmark/benchmark.h>

using namespace doptomo;

namespace
{

SignalTrace scenario_trace(std::size_t p)
{
    SceneConfig cfg;
    cfg.carrier_hz = 6e8;
    cfg.omega_r = pi;
    cfg.standoff_m = 60.0;
    cfg.sample_count = p;
    cfg.scatterers = {Scatterer(3.0, 130.0 * pi / 180.0, 0.0, 2.0), Scatterer(2.0, pi / 3.0, 0.0, 1.0),
                      Scatterer(1.5, 300.0 * pi / 180.0, 0.0, 3.0)};
    return synthesize_trace(cfg);
}

void polar(benchmark::State &state, bool parallel)
{
    const SignalTrace tr = scenario_trace(1024);
    const auto n = static_cast<std::size_t>(state.range(0));
    const PolarGrid grid = PolarGrid::uniform(3.6, n, 2 * n);
    for (auto _ : state)
        benchmark::DoNotOptimize(parallel ? backproject_polar(tr, grid) : backproject_polar_serial(tr, grid));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.radii.size() * grid.angles.size()));
}

void cartesian(benchmark::State &state, bool parallel)
{
    const SignalTrace tr = scenario_trace(1024);
    const double step = 7.2 / static_cast<double>(state.range(0));
    const CartesianGrid g = CartesianGrid::uniform(-3.6, 3.6, -3.6, 3.6, step);
    for (auto _ : state)
        benchmark::DoNotOptimize(parallel ? backproject_cartesian(tr, g.xs, g.ys)
                                          : backproject_cartesian_serial(tr, g.xs, g.ys));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(g.xs.size() * g.ys.size()));
}

void points(benchmark::State &state, bool parallel)
{
    const SignalTrace tr = scenario_trace(1024);
    std::vector<PolarPoint> pts;
    for (long i = 0; i < state.range(0); ++i)
        pts.push_back({3.0 * static_cast<double>(i) / static_cast<double>(state.range(0)), 0.37 * static_cast<double>(i)});
    for (auto _ : state)
        benchmark::DoNotOptimize(parallel ? backproject_points(tr, pts) : backproject_points_serial(tr, pts));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void convolution_matrix(benchmark::State &state, bool parallel)
{
    const BlurKernel k = gaussian_kernel(31, 5.0);
    const auto p = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(parallel ? build_convolution_matrix(k, p) : build_convolution_matrix_serial(k, p));
}

} // namespace

BENCHMARK_CAPTURE(polar, parallel, true)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(polar, serial, false)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(cartesian, parallel, true)->Arg(144)->Arg(288)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(cartesian, serial, false)->Arg(144)->Arg(288)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(points, parallel, true)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(points, serial, false)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(convolution_matrix, parallel, true)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(convolution_matrix, serial, false)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
