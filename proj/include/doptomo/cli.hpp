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

#ifndef DOPTOMO_CLI_HPP
#define DOPTOMO_CLI_HPP

#include "doptomo/scenario.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace doptomo::cli
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_runtime_error = 1;
inline constexpr int exit_input_error = 2;

/// One run: a scenario, an output directory and a single seeded generator.
/// The trace is synthesized (or loaded) once and shared by every command.
class Pipeline
{
public:
    Pipeline(Scenario scenario, std::filesystem::path out_dir, std::uint64_t seed,
             std::optional<std::filesystem::path> trace_file, std::ostream &log);

    const Scenario &scenario() const noexcept { return scenario_; }
    const std::filesystem::path &out_dir() const noexcept { return out_; }

    const SignalTrace &trace();

    nlohmann::json simulate();
    nlohmann::json image();
    nlohmann::json null();
    nlohmann::json deblur();

private:
    Scenario scenario_;
    std::filesystem::path out_;
    std::mt19937_64 rng_;
    std::optional<std::filesystem::path> trace_file_;
    std::optional<SignalTrace> trace_;
    std::ostream &log_;
};

/// Full command line: `doptomo <simulate|image|null|deblur|all> --scenario F
/// [--seed N] [--out DIR] [--trace CSV]`. Returns the process exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace doptomo::cli

#endif
