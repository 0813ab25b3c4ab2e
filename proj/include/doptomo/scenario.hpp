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

#ifndef DOPTOMO_SCENARIO_HPP
#define DOPTOMO_SCENARIO_HPP

#include "doptomo/deblur.hpp"
#include "doptomo/null_synthesis.hpp"
#include "doptomo/reconstruction.hpp"
#include "doptomo/scene.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace doptomo
{

struct NullCase
{
    std::string name;
    NullSpec nulls;
};

struct BlurSpec
{
    BlurKernel kernel{CVector{1.0}};
    double noise_sigma = 0.0;
    double ridge = 0.0;
};

struct OutputSpec
{
    std::filesystem::path dir;
    std::size_t spectrogram_window = 256;
    std::size_t spectrogram_hop = 0; // 0: half the window
    double pgm_dynamic_range_db = 60.0;
    double peak_threshold_db = -20.0;
};

/// One experiment. Angles in the file are degrees; everything here is SI/radians.
struct Scenario
{
    std::string name;
    SceneConfig scene;
    RangeModel range_model = RangeModel::approx;
    double noise_sigma = 0.0;
    ImageGrid grid;
    std::vector<NullCase> nulls;
    std::optional<BlurSpec> blur;
    OutputSpec output;
    std::vector<std::string> warnings;
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw
/// InputError with a "<source>: <json path>: <problem>" message.
Scenario parse_scenario(const std::string &text, const std::string &source = "<scenario>",
                        const std::filesystem::path &base_dir = {});
Scenario load_scenario(const std::filesystem::path &path);

} // namespace doptomo

#endif
