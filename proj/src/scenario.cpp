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

#include "doptomo/scenario.hpp"
#include "doptomo/errors.hpp"
#include "doptomo/io.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace doptomo
{

namespace
{

using nlohmann::json;

constexpr double deg = pi / 180.0;

// Strict view of one JSON object: every key must be in the allowed set.
class Fields
{
public:
    Fields(const json &j, std::string path, const std::string &source, std::initializer_list<const char *> allowed)
        : j_(j), path_(std::move(path)), source_(source)
    {
        if (!j.is_object())
            fail(path_, "expected an object");
        for (const auto &item : j.items())
        {
            bool ok = false;
            for (const char *a : allowed)
                ok = ok || item.key() == a;
            if (!ok)
                fail(path_ + "." + item.key(), "unknown key");
        }
    }

    [[noreturn]] void fail(const std::string &where, const std::string &what) const
    {
        throw InputError(source_ + ": " + where + ": " + what);
    }

    std::string at(const char *key) const { return path_ + "." + key; }
    bool has(const char *key) const { return j_.contains(key); }
    const json &raw(const char *key) const
    {
        if (!has(key))
            fail(at(key), "required key missing");
        return j_.at(key);
    }

    double number(const char *key) const
    {
        const json &v = raw(key);
        if (!v.is_number())
            fail(at(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d))
            fail(at(key), "must be finite");
        return d;
    }
    double number(const char *key, double fallback) const { return has(key) ? number(key) : fallback; }

    double positive(const char *key) const
    {
        const double d = number(key);
        if (!(d > 0.0))
            fail(at(key), "must be > 0");
        return d;
    }

    double non_negative(const char *key) const
    {
        const double d = number(key);
        if (d < 0.0)
            fail(at(key), "must be >= 0");
        return d;
    }
    double non_negative(const char *key, double fallback) const
    {
        const double d = number(key, fallback);
        if (d < 0.0)
            fail(at(key), "must be >= 0");
        return d;
    }

    std::size_t count(const char *key) const
    {
        const json &v = raw(key);
        if (!v.is_number_integer() || v.get<long long>() < 0)
            fail(at(key), "expected a non-negative integer");
        return v.get<std::size_t>();
    }
    std::size_t count(const char *key, std::size_t fallback) const { return has(key) ? count(key) : fallback; }

    std::string text(const char *key) const
    {
        const json &v = raw(key);
        if (!v.is_string())
            fail(at(key), "expected a string");
        return v.get<std::string>();
    }
    std::string text(const char *key, const std::string &fallback) const { return has(key) ? text(key) : fallback; }

    const json &array(const char *key) const
    {
        const json &v = raw(key);
        if (!v.is_array())
            fail(at(key), "expected an array");
        return v;
    }

private:
    const json &j_;
    std::string path_;
    const std::string &source_;
};

Scatterer parse_scatterer(const json &j, const std::string &path, const std::string &src)
{
    Fields f(j, path, src, {"r0_m", "theta0_deg", "z0_m", "amplitude_v"});
    return Scatterer(f.non_negative("r0_m"), f.number("theta0_deg") * deg, f.number("z0_m", 0.0),
                     f.non_negative("amplitude_v"));
}

void parse_scene(const json &j, const std::string &src, Scenario &sc)
{
    Fields f(j, "scene", src,
             {"carrier_hz", "omega_r_rad_s", "standoff_m", "sample_count", "revolutions", "range_model",
              "noise_sigma", "scatterers"});
    sc.scene.carrier_hz = f.positive("carrier_hz");
    sc.scene.omega_r = f.positive("omega_r_rad_s");
    sc.scene.standoff_m = f.positive("standoff_m");
    sc.scene.sample_count = f.count("sample_count");
    if (sc.scene.sample_count < 2)
        f.fail(f.at("sample_count"), "must be >= 2");
    sc.scene.revolutions = f.has("revolutions") ? f.positive("revolutions") : 1.0;
    try
    {
        sc.range_model = parse_range_model(f.text("range_model", "approx"));
    }
    catch (const InputError &e)
    {
        f.fail(f.at("range_model"), e.what());
    }
    sc.noise_sigma = f.non_negative("noise_sigma", 0.0);
    const json &arr = f.array("scatterers");
    for (std::size_t i = 0; i < arr.size(); ++i)
        sc.scene.scatterers.push_back(parse_scatterer(arr[i], "scene.scatterers[" + std::to_string(i) + "]", src));
    sc.warnings = sc.scene.validate();
}

ImageGrid parse_grid(const json &j, const std::string &src, const SceneConfig &scene)
{
    if (!j.is_object())
        throw InputError(src + ": grid: expected an object");
    const std::string type = j.contains("type") && j["type"].is_string() ? j["type"].get<std::string>() : "";
    if (type == "polar")
    {
        Fields f(j, "grid", src, {"type", "r_max_m", "radii", "angles"});
        const PolarGrid def = default_polar_grid(scene);
        const double r_max = f.has("r_max_m") ? f.positive("r_max_m") : def.radii.back();
        const std::size_t m = f.count("radii", def.radii.size());
        const std::size_t n = f.count("angles", def.angles.size());
        if (m < 1 || n < 1)
            f.fail("grid", "radii and angles must be >= 1");
        return PolarGrid::uniform(r_max, m, n);
    }
    if (type == "cartesian")
    {
        Fields f(j, "grid", src, {"type", "x_min_m", "x_max_m", "y_min_m", "y_max_m", "spacing_m"});
        const CartesianGrid def = default_cartesian_grid(scene);
        const double step = f.has("spacing_m") ? f.positive("spacing_m") : def.spacing();
        const double x0 = f.number("x_min_m", def.xs.front());
        const double x1 = f.number("x_max_m", def.xs.back());
        const double y0 = f.number("y_min_m", def.ys.front());
        const double y1 = f.number("y_max_m", def.ys.back());
        if (!(x1 >= x0) || !(y1 >= y0))
            f.fail("grid", "max must be >= min on both axes");
        return CartesianGrid::uniform(x0, x1, y0, y1, step);
    }
    throw InputError(src + ": grid.type: expected \"cartesian\" or \"polar\"");
}

std::vector<NullCase> parse_nulls(const json &j, const std::string &src)
{
    if (!j.is_array())
        throw InputError(src + ": nulls: expected an array of null cases");
    std::vector<NullCase> out;
    for (std::size_t i = 0; i < j.size(); ++i)
    {
        const std::string path = "nulls[" + std::to_string(i) + "]";
        Fields f(j[i], path, src, {"name", "targets"});
        NullCase nc;
        nc.name = f.text("name", "null" + std::to_string(i));
        for (char ch : nc.name)
            if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-'))
                f.fail(f.at("name"), "use only letters, digits, '_' and '-'");
        const json &targets = f.array("targets");
        if (targets.empty())
            f.fail(f.at("targets"), "at least one target required");
        std::vector<Point2> pts;
        for (std::size_t t = 0; t < targets.size(); ++t)
        {
            const std::string tpath = path + ".targets[" + std::to_string(t) + "]";
            if (targets[t].is_object() && targets[t].contains("r_m"))
            {
                Fields tf(targets[t], tpath, src, {"r_m", "nu_deg"});
                pts.push_back(to_cartesian({tf.non_negative("r_m"), tf.number("nu_deg") * deg}));
            }
            else
            {
                Fields tf(targets[t], tpath, src, {"x_m", "y_m"});
                pts.push_back({tf.number("x_m"), tf.number("y_m")});
            }
        }
        try
        {
            nc.nulls = NullSpec(std::move(pts));
        }
        catch (const InputError &e)
        {
            f.fail(f.at("targets"), e.what());
        }
        for (const auto &prev : out)
            if (prev.name == nc.name)
                f.fail(f.at("name"), "duplicate null case name '" + nc.name + "'");
        out.push_back(std::move(nc));
    }
    return out;
}

BlurSpec parse_blur(const json &j, const std::string &src, const std::filesystem::path &base_dir)
{
    Fields f(j, "blur", src, {"kernel", "noise_sigma", "ridge"});
    BlurSpec spec;
    spec.noise_sigma = f.non_negative("noise_sigma", 0.0);
    spec.ridge = f.non_negative("ridge", 0.0);

    const json &k = f.raw("kernel");
    const std::string type = k.is_object() && k.contains("type") && k["type"].is_string()
                                 ? k["type"].get<std::string>()
                                 : "";
    if (type == "gaussian")
    {
        Fields kf(k, "blur.kernel", src, {"type", "length", "sigma_samples", "gain"});
        const std::size_t len = kf.count("length", 31);
        if (len < 1)
            kf.fail(kf.at("length"), "must be >= 1");
        const double sigma = kf.has("sigma_samples") ? kf.positive("sigma_samples") : 5.0;
        spec.kernel = gaussian_kernel(len, sigma, kf.number("gain", 1.0));
    }
    else if (type == "taps")
    {
        Fields kf(k, "blur.kernel", src, {"type", "taps"});
        const json &taps = kf.array("taps");
        CVector z;
        for (std::size_t i = 0; i < taps.size(); ++i)
        {
            const json &t = taps[i];
            if (t.is_number())
                z.emplace_back(t.get<double>(), 0.0);
            else if (t.is_array() && t.size() == 2 && t[0].is_number() && t[1].is_number())
                z.emplace_back(t[0].get<double>(), t[1].get<double>());
            else
                kf.fail(kf.at("taps") + "[" + std::to_string(i) + "]", "expected a number or [re, im]");
        }
        try
        {
            spec.kernel = BlurKernel(std::move(z));
        }
        catch (const InputError &e)
        {
            kf.fail(kf.at("taps"), e.what());
        }
    }
    else if (type == "csv")
    {
        Fields kf(k, "blur.kernel", src, {"type", "path"});
        std::filesystem::path p = kf.text("path");
        if (p.is_relative())
            p = base_dir / p;
        spec.kernel = io::read_kernel_csv(p);
    }
    else
    {
        f.fail("blur.kernel.type", "expected \"gaussian\", \"taps\" or \"csv\"");
    }
    return spec;
}

OutputSpec parse_output(const json &j, const std::string &src)
{
    Fields f(j, "output", src,
             {"dir", "spectrogram_window", "spectrogram_hop", "pgm_dynamic_range_db", "peak_threshold_db"});
    OutputSpec out;
    out.dir = f.text("dir", "");
    out.spectrogram_window = f.count("spectrogram_window", out.spectrogram_window);
    if (out.spectrogram_window < 2)
        f.fail(f.at("spectrogram_window"), "must be >= 2");
    out.spectrogram_hop = f.count("spectrogram_hop", 0);
    if (f.has("pgm_dynamic_range_db"))
        out.pgm_dynamic_range_db = f.positive("pgm_dynamic_range_db");
    out.peak_threshold_db = f.number("peak_threshold_db", out.peak_threshold_db);
    if (out.peak_threshold_db > 0.0)
        f.fail(f.at("peak_threshold_db"), "must be <= 0");
    return out;
}

} // namespace

Scenario parse_scenario(const std::string &text, const std::string &source, const std::filesystem::path &base_dir)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        // e.what() carries "line L, column C"
        throw InputError(source + ": malformed JSON: " + e.what());
    }

    Fields top(doc, "$", source, {"name", "scene", "grid", "nulls", "blur", "output"});
    Scenario sc;
    sc.name = top.text("name", "scenario");
    parse_scene(top.raw("scene"), source, sc);
    sc.grid = top.has("grid") ? parse_grid(doc["grid"], source, sc.scene) : ImageGrid(default_cartesian_grid(sc.scene));
    if (top.has("nulls"))
        sc.nulls = parse_nulls(doc["nulls"], source);
    if (top.has("blur"))
        sc.blur = parse_blur(doc["blur"], source, base_dir);
    if (top.has("output"))
        sc.output = parse_output(doc["output"], source);
    if (sc.output.spectrogram_window > sc.scene.sample_count)
        throw InputError(source + ": output.spectrogram_window: exceeds scene.sample_count");
    return sc;
}

Scenario load_scenario(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw InputError("cannot open scenario '" + path.string() + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_scenario(ss.str(), path.string(), path.parent_path());
}

} // namespace doptomo
