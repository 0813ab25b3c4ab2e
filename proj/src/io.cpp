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

#include "doptomo/io.hpp"
#include "doptomo/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace doptomo::io
{

namespace
{

std::ofstream open_out(const std::filesystem::path &path, bool binary = false)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return os;
}

std::ifstream open_in(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw InputError("cannot open '" + path.string() + "'");
    return is;
}

std::vector<std::string> split(const std::string &line)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ','))
        out.push_back(cur);
    return out;
}

double parse_double(const std::string &s, const std::filesystem::path &path, std::size_t line)
{
    double v = 0.0;
    const char *b = s.data();
    const char *e = s.data() + s.size();
    while (b < e && *b == ' ')
        ++b;
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e)
        throw InputError(path.string() + ":" + std::to_string(line) + ": not a number: '" + s + "'");
    return v;
}

std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path &path, const std::string &header)
{
    auto is = open_in(path);
    std::string line;
    if (!std::getline(is, line))
        throw InputError(path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != header)
        throw InputError(path.string() + ":1: expected header '" + header + "', got '" + line + "'");
    const std::size_t ncol = split(header).size();
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line))
    {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto fields = split(line);
        if (fields.size() != ncol)
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(ncol) +
                             " fields");
        std::vector<double> row;
        for (const auto &f : fields)
            row.push_back(parse_double(f, path, lineno));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::uint8_t to_gray(double db, double range)
{
    const double t = std::clamp((db + range) / range, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(255.0 * t));
}

} // namespace

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream &os, const SignalTrace &trace)
{
    os << "theta,re,im\n";
    for (std::size_t k = 0; k < trace.size(); ++k)
        os << format_double(trace.theta(k)) << ',' << format_double(trace[k].real()) << ','
           << format_double(trace[k].imag()) << '\n';
}

void write_trace_csv(const std::filesystem::path &path, const SignalTrace &trace)
{
    auto os = open_out(path);
    write_trace_csv(os, trace);
}

void write_blurred_csv(const std::filesystem::path &path, const BlurredTrace &blurred, const SignalTrace &reference)
{
    auto os = open_out(path);
    os << "theta,re,im\n";
    const auto off = static_cast<double>(blurred.center_offset());
    for (std::size_t n = 0; n < blurred.samples.size(); ++n)
    {
        const double theta = (static_cast<double>(n) - off) * reference.delta_theta();
        os << format_double(theta) << ',' << format_double(blurred.samples[n].real()) << ','
           << format_double(blurred.samples[n].imag()) << '\n';
    }
}

SignalTrace read_trace_csv(const std::filesystem::path &path, double wavelength, double omega_r)
{
    const auto rows = read_numeric_csv(path, "theta,re,im");
    if (rows.size() < 2)
        throw InputError(path.string() + ": need at least two samples");
    const double dtheta = rows[1][0] - rows[0][0];
    if (!(dtheta > 0.0) || std::abs(rows[0][0]) > 1e-12)
        throw InputError(path.string() + ": theta must start at 0 and increase");
    CVector samples;
    samples.reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k)
    {
        const double expect = static_cast<double>(k) * dtheta;
        if (std::abs(rows[k][0] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
            throw InputError(path.string() + ":" + std::to_string(k + 2) + ": theta grid is not uniform");
        samples.emplace_back(rows[k][1], rows[k][2]);
    }
    return SignalTrace(std::move(samples), dtheta, wavelength, omega_r);
}

void write_image_csv(std::ostream &os, const ComplexImage &image)
{
    const double peak = image.max_magnitude();
    os << "x_or_r,y_or_nu,re,im,mag_db\n";
    for (std::size_t r = 0; r < image.values.rows(); ++r)
        for (std::size_t c = 0; c < image.values.cols(); ++c)
        {
            const auto [a, b] = image.axes(r, c);
            const cplx v = image.values(r, c);
            os << format_double(a) << ',' << format_double(b) << ',' << format_double(v.real()) << ','
               << format_double(v.imag()) << ',' << format_double(magnitude_db(v, peak)) << '\n';
        }
}

void write_image_csv(const std::filesystem::path &path, const ComplexImage &image)
{
    auto os = open_out(path);
    write_image_csv(os, image);
}

void write_image_pgm(const std::filesystem::path &path, const ComplexImage &image, double dynamic_range_db)
{
    if (!(dynamic_range_db > 0.0))
        throw InputError("pgm dynamic range must be > 0 dB");
    const std::size_t rows = image.values.rows();
    const std::size_t cols = image.values.cols();
    const double peak = image.max_magnitude();
    auto os = open_out(path, true);
    os << "P5\n" << cols << ' ' << rows << "\n255\n";
    std::vector<char> line(cols);
    for (std::size_t i = 0; i < rows; ++i)
    {
        const std::size_t r = rows - 1 - i; // top row is the largest y / r
        for (std::size_t c = 0; c < cols; ++c)
            line[c] = static_cast<char>(to_gray(magnitude_db(image.values(r, c), peak), dynamic_range_db));
        os.write(line.data(), static_cast<std::streamsize>(cols));
    }
}

nlohmann::json image_sidecar(const ComplexImage &image, double dynamic_range_db)
{
    nlohmann::json j;
    if (const auto *p = std::get_if<PolarGrid>(&image.grid))
    {
        j["grid"] = "polar";
        j["rows"] = {{"axis", "r_m"}, {"values", p->radii}, {"order", "top row is largest"}};
        j["cols"] = {{"axis", "nu_rad"}, {"values", p->angles}};
    }
    else
    {
        const auto &c = std::get<CartesianGrid>(image.grid);
        j["grid"] = "cartesian";
        j["rows"] = {{"axis", "y_m"}, {"values", c.ys}, {"order", "top row is largest"}};
        j["cols"] = {{"axis", "x_m"}, {"values", c.xs}};
    }
    j["normalization"] = {{"quantity", "20*log10(|g|/max|g|)"},
                          {"max_magnitude", image.max_magnitude()},
                          {"black_db", -dynamic_range_db},
                          {"white_db", 0.0}};
    j["wavelength_m"] = image.wavelength;
    j["delta_theta_rad"] = image.delta_theta;
    return j;
}

void write_spectrogram_csv(const std::filesystem::path &path, const Spectrogram &spec)
{
    auto os = open_out(path);
    os << "time_s,freq_hz,power_db\n";
    for (std::size_t f = 0; f < spec.times_s.size(); ++f)
        for (std::size_t b = 0; b < spec.freqs_hz.size(); ++b)
            os << format_double(spec.times_s[f]) << ',' << format_double(spec.freqs_hz[b]) << ','
               << format_double(spec.power_db(f, b)) << '\n';
}

void write_spectrogram_pgm(const std::filesystem::path &path, const Spectrogram &spec, double dynamic_range_db)
{
    const std::size_t frames = spec.times_s.size();
    const std::size_t bins = spec.freqs_hz.size();
    double top = spectrogram_floor_db;
    for (double v : spec.power_db.data())
        top = std::max(top, v);
    auto os = open_out(path, true);
    os << "P5\n" << frames << ' ' << bins << "\n255\n";
    std::vector<char> line(frames);
    for (std::size_t i = 0; i < bins; ++i)
    {
        const std::size_t b = bins - 1 - i;
        for (std::size_t f = 0; f < frames; ++f)
            line[f] = static_cast<char>(to_gray(spec.power_db(f, b) - top, dynamic_range_db));
        os.write(line.data(), static_cast<std::streamsize>(frames));
    }
}

void write_phase_csv(const std::filesystem::path &path, const SignalTrace &trace, const PhaseOffset &phi)
{
    if (phi.phi.size() != trace.size())
        throw InputError("write_phase_csv: length mismatch");
    auto os = open_out(path);
    os << "theta,phi_radians\n";
    for (std::size_t k = 0; k < trace.size(); ++k)
        os << format_double(trace.theta(k)) << ',' << format_double(phi.phi[k]) << '\n';
}

void write_kernel_csv(const std::filesystem::path &path, const BlurKernel &kernel)
{
    auto os = open_out(path);
    os << "index,re,im\n";
    for (std::size_t i = 0; i < kernel.size(); ++i)
        os << i << ',' << format_double(kernel.taps()[i].real()) << ','
           << format_double(kernel.taps()[i].imag()) << '\n';
}

BlurKernel read_kernel_csv(const std::filesystem::path &path)
{
    const auto rows = read_numeric_csv(path, "index,re,im");
    CVector taps;
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        if (rows[i][0] != static_cast<double>(i))
            throw InputError(path.string() + ":" + std::to_string(i + 2) + ": kernel indices must be 0,1,2,...");
        taps.emplace_back(rows[i][1], rows[i][2]);
    }
    return BlurKernel(std::move(taps));
}

void write_radial_cut_csv(const std::filesystem::path &path, const RadialCut &cut)
{
    auto os = open_out(path);
    os << "r_m,mag_db\n";
    for (std::size_t m = 0; m < cut.radii.size(); ++m)
        os << format_double(cut.radii[m]) << ',' << format_double(cut.db[m]) << '\n';
}

void write_json(const std::filesystem::path &path, const nlohmann::json &doc)
{
    auto os = open_out(path);
    os << doc.dump(2) << '\n';
}

} // namespace doptomo::io
