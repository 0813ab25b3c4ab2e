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

#ifndef DOPTOMO_ERRORS_HPP
#define DOPTOMO_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace doptomo
{

// Bad user input: malformed scenario, violated preconditions. CLI exit code 2.
class InputError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// A linear system that should have full rank does not. CLI exit code 1.
class SingularSystemError : public std::runtime_error
{
public:
    SingularSystemError(const std::string &what, std::size_t column)
        : std::runtime_error(what), column_(column) {}

    // Index (in the original, unpivoted ordering) of the first dependent column.
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

} // namespace doptomo

#endif
