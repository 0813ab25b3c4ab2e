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

#ifndef DOPTOMO_IO_HPP
#define DOPTOMO_IO_HPP

#include "doptomo/deblur.hpp"
#include "doptomo/null_synthesis.hpp"
#include "doptomo/reconstruction.hpp"
#include "doptomo/scene.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace doptomo::io
{

/// 17 significant digits, locale independent.
std::string format_double(double v);

// theta,re,im
void write_trace_csv(std::ostream &os, const SignalTrace &trace);
void write_trace_csv(const std::filesystem::path &path, const SignalTrace &trace);
// Blurred samples continue the source theta grid, starting at -center_offset.
void write_blurred_csv(const std::filesystem::path &path, const BlurredTrace &blurred, const SignalTrace &reference);

/// Reads theta,re,im. Theta must be uniform and start at 0; the wavelength and
/// rotation rate are not part of the file and must be supplied.
SignalTrace read_trace_csv(const std::filesystem::path &path, double wavelength, double omega_r);

// x_or_r,y_or_nu,re,im,mag_db (mag_db relative to the image maximum)
void write_image_csv(std::ostream &os, const ComplexImage &image);
void write_image_csv(const std::filesystem::path &path, const ComplexImage &image);

/// 8-bit binary PGM of 20 log10(|g| / max|g|) mapped from [-dynamic_range_db, 0]
/// onto [0, 255]; top row is max y (or max r).
void write_image_pgm(const std::filesystem::path &path, const ComplexImage &image, double dynamic_range_db);
nlohmann::json image_sidecar(const ComplexImage &image, double dynamic_range_db);

// time_s,freq_hz,power_db
void write_spectrogram_csv(const std::filesystem::path &path, const Spectrogram &spec);
/// Rows are frequency (top = highest), columns are frames.
void write_spectrogram_pgm(const std::filesystem::path &path, const Spectrogram &spec, double dynamic_range_db);

// theta,phi_radians
void write_phase_csv(const std::filesystem::path &path, const SignalTrace &trace, const PhaseOffset &phi);

// index,re,im
void write_kernel_csv(const std::filesystem::path &path, const BlurKernel &kernel);
BlurKernel read_kernel_csv(const std::filesystem::path &path);

// r_m,mag_db
void write_radial_cut_csv(const std::filesystem::path &path, const RadialCut &cut);

void write_json(const std::filesystem::path &path, const nlohmann::json &doc);

} // namespace doptomo::io

#endif
