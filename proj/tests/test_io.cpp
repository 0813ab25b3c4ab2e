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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "doptomo/errors.hpp"
#include "doptomo/io.hpp"
#include "test_support.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace doptomo;
namespace fs = std::filesystem;

namespace
{

struct TempDir
{
    fs::path path;
    explicit TempDir(const std::string &tag)
        : path(fs::temp_directory_path() / ("doptomo_test_io_" + tag))
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path &p)
{
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void spit(const fs::path &p, const std::string &text)
{
    std::ofstream os(p, std::ios::binary);
    os << text;
}

SignalTrace random_trace(std::size_t p, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return SignalTrace(doptomo::test::random_cvector(p, rng), 2.0 * pi / static_cast<double>(p), 0.5, pi);
}

} // namespace

TEST_CASE("format_double round trips exactly")
{
    std::mt19937_64 rng(51);
    std::normal_distribution<double> nd(0.0, 1e3);
    for (int i = 0; i < 1000; ++i)
    {
        const double v = nd(rng) * std::pow(10.0, static_cast<double>(i % 20) - 10.0);
        const std::string s = io::format_double(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
    CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("trace CSV round trip")
{
    TempDir tmp("trace");
    const SignalTrace tr = random_trace(64, 52);
    io::write_trace_csv(tmp.path / "t.csv", tr);
    const std::string text = slurp(tmp.path / "t.csv");
    CHECK(text.rfind("theta,re,im\n", 0) == 0);
    const SignalTrace back = io::read_trace_csv(tmp.path / "t.csv", 0.5, pi);
    CHECK(back.samples() == tr.samples());
    CHECK(back.delta_theta() == doctest::Approx(tr.delta_theta()).epsilon(1e-14));
}

TEST_CASE("trace CSV reader rejects bad files")
{
    TempDir tmp("bad");
    spit(tmp.path / "hdr.csv", "t,re,im\n0,1,0\n0.1,1,0\n");
    CHECK_THROWS_AS(io::read_trace_csv(tmp.path / "hdr.csv", 0.5, pi), InputError);
    spit(tmp.path / "nonuni.csv", "theta,re,im\n0,1,0\n0.1,1,0\n0.3,1,0\n");
    CHECK_THROWS_AS(io::read_trace_csv(tmp.path / "nonuni.csv", 0.5, pi), InputError);
    spit(tmp.path / "nan.csv", "theta,re,im\n0,1,0\n0.1,abc,0\n");
    CHECK_THROWS_AS(io::read_trace_csv(tmp.path / "nan.csv", 0.5, pi), InputError);
    spit(tmp.path / "cols.csv", "theta,re,im\n0,1\n0.1,1,0\n");
    CHECK_THROWS_AS(io::read_trace_csv(tmp.path / "cols.csv", 0.5, pi), InputError);
    CHECK_THROWS_AS(io::read_trace_csv(tmp.path / "missing.csv", 0.5, pi), InputError);
}

TEST_CASE("image CSV and PGM layout")
{
    TempDir tmp("image");
    ComplexImage img;
    img.grid = CartesianGrid::uniform(0.0, 0.2, 0.0, 0.1, 0.1);
    img.values = ComplexMatrix(2, 3, 0.0);
    img.values(1, 2) = 4.0; // top row (max y), right column
    img.values(0, 0) = 0.4;
    io::write_image_csv(tmp.path / "i.csv", img);
    std::istringstream lines(slurp(tmp.path / "i.csv"));
    std::string line;
    std::getline(lines, line);
    CHECK(line == "x_or_r,y_or_nu,re,im,mag_db");
    int rows = 0;
    while (std::getline(lines, line))
        ++rows;
    CHECK(rows == 6);

    io::write_image_pgm(tmp.path / "i.pgm", img, 40.0);
    const std::string pgm = slurp(tmp.path / "i.pgm");
    const std::string head = "P5\n3 2\n255\n";
    REQUIRE(pgm.size() == head.size() + 6);
    CHECK(pgm.substr(0, head.size()) == head);
    const auto px = [&](std::size_t r, std::size_t c) {
        return static_cast<unsigned char>(pgm[head.size() + r * 3 + c]);
    };
    CHECK(px(0, 2) == 255);
    CHECK(px(1, 0) > 120);
    CHECK(px(1, 0) < 135);
    CHECK(px(0, 0) == 0);

    const nlohmann::json side = io::image_sidecar(img, 40.0);
    CHECK(side.is_object());
}

TEST_CASE("kernel CSV round trip and spectrogram CSV size")
{
    TempDir tmp("kernel");
    const BlurKernel k(CVector{cplx(0.25, -1.0), 1.0, cplx(0.0, 3.5)});
    io::write_kernel_csv(tmp.path / "k.csv", k);
    CHECK(io::read_kernel_csv(tmp.path / "k.csv").taps() == k.taps());
    spit(tmp.path / "bad.csv", "index,re,im\n0,1,0\n2,1,0\n");
    CHECK_THROWS_AS(io::read_kernel_csv(tmp.path / "bad.csv"), InputError);

    const SignalTrace tr = random_trace(128, 53);
    const Spectrogram sp = spectrogram(tr, 32);
    io::write_spectrogram_csv(tmp.path / "s.csv", sp);
    std::istringstream lines(slurp(tmp.path / "s.csv"));
    std::string line;
    std::size_t n = 0;
    while (std::getline(lines, line))
        ++n;
    CHECK(n == 1 + sp.power_db.rows() * sp.power_db.cols());
    io::write_spectrogram_pgm(tmp.path / "s.pgm", sp, 60.0);
    const std::string pgm = slurp(tmp.path / "s.pgm");
    const std::string head = "P5\n" + std::to_string(sp.power_db.rows()) + " " +
                             std::to_string(sp.power_db.cols()) + "\n255\n";
    CHECK(pgm.substr(0, head.size()) == head);
    CHECK(pgm.size() == head.size() + sp.power_db.rows() * sp.power_db.cols());
}

TEST_CASE("phase CSV checks its length")
{
    TempDir tmp("phase");
    const SignalTrace tr = random_trace(16, 54);
    CHECK_THROWS_AS(io::write_phase_csv(tmp.path / "p.csv", tr, PhaseOffset{RVector(15, 0.0)}), InputError);
    io::write_phase_csv(tmp.path / "p.csv", tr, PhaseOffset{RVector(16, 0.5)});
    CHECK(slurp(tmp.path / "p.csv").rfind("theta,phi_radians\n0,0.5\n", 0) == 0);
}
