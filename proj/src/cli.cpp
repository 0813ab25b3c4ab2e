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

#include "doptomo/cli.hpp"
#include "doptomo/errors.hpp"
#include "doptomo/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

namespace doptomo::cli
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

json point_json(Point2 p) { return {{"x_m", p.x}, {"y_m", p.y}}; }

json peaks_json(const std::vector<Peak> &peaks)
{
    json arr = json::array();
    for (const auto &p : peaks)
        arr.push_back({{"x_m", p.position.x},
                       {"y_m", p.position.y},
                       {"mag_db", p.db},
                       {"magnitude", p.magnitude},
                       {"row", p.index.row},
                       {"col", p.index.col}});
    return arr;
}

void write_image_set(const fs::path &dir, const std::string &stem, const ComplexImage &img, double range_db)
{
    io::write_image_csv(dir / (stem + ".csv"), img);
    io::write_image_pgm(dir / (stem + ".pgm"), img, range_db);
    io::write_json(dir / (stem + ".json"), io::image_sidecar(img, range_db));
}

double grid_step(const ImageGrid &grid)
{
    if (const auto *c = std::get_if<CartesianGrid>(&grid))
        return c->spacing();
    const auto &p = std::get<PolarGrid>(grid);
    return p.radii.size() > 1 ? p.radii[1] - p.radii[0] : 0.0;
}

std::size_t cell_distance(GridIndex a, GridIndex b, const ComplexImage &img)
{
    const auto dr = std::abs(static_cast<std::ptrdiff_t>(a.row) - static_cast<std::ptrdiff_t>(b.row));
    auto dc = std::abs(static_cast<std::ptrdiff_t>(a.col) - static_cast<std::ptrdiff_t>(b.col));
    if (img.is_polar())
        dc = std::min(dc, static_cast<std::ptrdiff_t>(img.values.cols()) - dc);
    return static_cast<std::size_t>(std::max(dr, dc));
}

} // namespace

Pipeline::Pipeline(Scenario scenario, fs::path out_dir, std::uint64_t seed,
                   std::optional<fs::path> trace_file, std::ostream &log)
    : scenario_(std::move(scenario)), out_(std::move(out_dir)), rng_(seed), trace_file_(std::move(trace_file)),
      log_(log)
{
    fs::create_directories(out_);
}

const SignalTrace &Pipeline::trace()
{
    if (!trace_)
    {
        if (trace_file_)
        {
            trace_ = io::read_trace_csv(*trace_file_, scenario_.scene.wavelength(), scenario_.scene.omega_r);
        }
        else
        {
            trace_ = synthesize_trace(scenario_.scene, scenario_.range_model, scenario_.noise_sigma,
                                      scenario_.noise_sigma > 0.0 ? &rng_ : nullptr);
        }
    }
    return *trace_;
}

json Pipeline::simulate()
{
    const SignalTrace &s = trace();
    const SceneConfig &cfg = scenario_.scene;
    io::write_trace_csv(out_ / "trace.csv", s);

    const Spectrogram spec = spectrogram(s, scenario_.output.spectrogram_window, scenario_.output.spectrogram_hop);
    io::write_spectrogram_csv(out_ / "spectrogram.csv", spec);
    io::write_spectrogram_pgm(out_ / "spectrogram.pgm", spec, scenario_.output.pgm_dynamic_range_db);
    io::write_json(out_ / "spectrogram.json",
                   {{"frames", spec.times_s.size()},
                    {"bins", spec.freqs_hz.size()},
                    {"bin_hz", spec.bin_hz},
                    {"window", "hann"},
                    {"window_len", scenario_.output.spectrogram_window},
                    {"floor_db", spectrogram_floor_db},
                    {"pgm", {{"rows", "frequency, top = highest"}, {"cols", "time"},
                             {"dynamic_range_db", scenario_.output.pgm_dynamic_range_db}}}});

    // range and Doppler history per scatterer
    {
        std::ofstream os(out_ / "tracks.csv");
        os << "time_s";
        for (std::size_t i = 0; i < cfg.scatterers.size(); ++i)
            os << ",range_m_" << i << ",doppler_hz_" << i;
        os << '\n';
        for (std::size_t k = 0; k < s.size(); ++k)
        {
            const double t = s.theta(k) / cfg.omega_r;
            os << io::format_double(t);
            for (const auto &sc : cfg.scatterers)
                os << ',' << io::format_double(range(scenario_.range_model, sc, cfg, t)) << ','
                   << io::format_double(doppler_shift(sc, cfg, t));
            os << '\n';
        }
    }

    json summary = {{"samples", s.size()},
                    {"sample_rate_hz", s.sample_rate_hz()},
                    {"wavelength_m", cfg.wavelength()},
                    {"range_model", to_string(scenario_.range_model)}};
    json peaks = json::array();
    for (const auto &sc : cfg.scatterers)
        peaks.push_back(2.0 * sc.r0() * cfg.omega_r / cfg.wavelength());
    summary["max_doppler_hz"] = peaks;
    io::write_json(out_ / "simulate_report.json", summary);
    log_ << "simulate: " << s.size() << " samples -> " << out_.string() << '\n';
    return summary;
}

json Pipeline::image()
{
    const ComplexImage img = backproject(trace(), scenario_.grid);
    write_image_set(out_, "image", img, scenario_.output.pgm_dynamic_range_db);
    const auto peaks = find_peaks(img, scenario_.output.peak_threshold_db);
    json doc = {{"threshold_db", scenario_.output.peak_threshold_db},
                {"peaks", peaks_json(peaks)}};
    io::write_json(out_ / "peaks.json", doc);
    log_ << "image: " << peaks.size() << " peak(s) above " << scenario_.output.peak_threshold_db << " dB\n";
    return doc;
}

json Pipeline::null()
{
    if (scenario_.nulls.empty())
        throw InputError("null: scenario has no 'nulls' section");
    const SignalTrace &s = trace();
    const ComplexImage original = backproject(s, scenario_.grid);
    const GridIndex pk = argmax(original);
    const Point2 peak_pos = original.position(pk.row, pk.col);
    const double peak_mag = std::abs(original.values(pk.row, pk.col));

    json cases = json::array();
    for (const auto &nc : scenario_.nulls)
    {
        const PhaseOffset phi = synthesize_null_phase(s, nc.nulls);
        const NullVerification ver = verify_null(s, phi, nc.nulls, scenario_.grid);
        const SignalTrace adapted = apply_phase_offset(s, phi);
        const ComplexImage adapted_img = backproject(adapted, scenario_.grid);

        io::write_phase_csv(out_ / ("phi_" + nc.name + ".csv"), s, phi);
        write_image_set(out_, "image_" + nc.name, adapted_img, scenario_.output.pgm_dynamic_range_db);

        json nulls = json::array();
        for (const auto &r : ver.nulls)
            nulls.push_back({{"target", point_json(r.target)},
                             {"pre_db", r.pre_db},
                             {"post_db", r.post_db},
                             {"peak_shift_cells", r.peak_shift_cells}});

        json entry = {{"name", nc.name},
                      {"nulls", nulls},
                      {"phi_peak_to_peak_rad", phi.peak_to_peak()},
                      {"peak_change_db", ver.peak_change_db},
                      {"peak_shift_cells", cell_distance(ver.peak_before, ver.peak_after, original)}};

        // cut along the line through the image peak and the first null
        const Point2 target = nc.nulls.targets().front();
        const double dist = std::hypot(target.x - peak_pos.x, target.y - peak_pos.y);
        if (dist > 0.0)
        {
            constexpr std::size_t samples = 401;
            RVector offsets(samples);
            for (std::size_t i = 0; i < samples; ++i)
                offsets[i] = -2.0 * dist + 4.0 * dist * static_cast<double>(i) / static_cast<double>(samples - 1);
            const CVector before = line_profile(s, peak_pos, target, offsets);
            const CVector after = line_profile(adapted, peak_pos, target, offsets);

            std::ofstream os(out_ / ("cut_" + nc.name + ".csv"));
            os << "offset_m,x_m,y_m,original_db,adapted_db\n";
            std::size_t best = 0;
            double best_gain = -1.0;
            for (std::size_t i = 0; i < samples; ++i)
            {
                const double t = offsets[i];
                const double x = peak_pos.x + t * (target.x - peak_pos.x) / dist;
                const double y = peak_pos.y + t * (target.y - peak_pos.y) / dist;
                os << io::format_double(t) << ',' << io::format_double(x) << ',' << io::format_double(y) << ','
                   << io::format_double(magnitude_db(before[i], peak_mag)) << ','
                   << io::format_double(magnitude_db(after[i], peak_mag)) << '\n';
                const double gain = std::abs(after[i]) - std::abs(before[i]);
                if (gain > best_gain)
                {
                    best_gain = gain;
                    best = i;
                }
            }
            const double step = offsets[1] - offsets[0];
            entry["cut"] = {{"file", "cut_" + nc.name + ".csv"},
                            {"null_offset_m", dist},
                            {"mirror_offset_m", -dist},
                            {"max_increase_offset_m", offsets[best]},
                            {"max_increase_samples_from_mirror", std::lround((offsets[best] + dist) / step)}};
        }

        if (std::holds_alternative<PolarGrid>(scenario_.grid))
        {
            const double nu = to_polar(target).nu;
            const RadialCut before = radial_cut(original, nu);
            const RadialCut after = radial_cut(adapted_img, nu);
            std::ofstream os(out_ / ("radial_" + nc.name + ".csv"));
            os << "r_m,original_db,adapted_db\n";
            for (std::size_t m = 0; m < before.radii.size(); ++m)
                os << io::format_double(before.radii[m]) << ',' << io::format_double(before.db[m]) << ','
                   << io::format_double(after.db[m]) << '\n';
        }

        log_ << "null " << nc.name << ": ";
        for (const auto &r : ver.nulls)
            log_ << r.pre_db << " dB -> " << r.post_db << " dB; ";
        log_ << "phi p-p " << phi.peak_to_peak() << " rad\n";
        cases.push_back(std::move(entry));
    }
    json doc = {{"peak", point_json(peak_pos)}, {"grid_step_m", grid_step(scenario_.grid)}, {"cases", cases}};
    io::write_json(out_ / "null_report.json", doc);
    return doc;
}

json Pipeline::deblur()
{
    if (!scenario_.blur)
        throw InputError("deblur: scenario has no 'blur' section");
    const BlurSpec &spec = *scenario_.blur;
    const SignalTrace &clean = trace();

    const BlurredTrace blurred = doptomo::blur(clean, spec.kernel, spec.noise_sigma,
                                               spec.noise_sigma > 0.0 ? &rng_ : nullptr);
    const SignalTrace restored = deblur_ls(blurred, spec.kernel, clean, spec.ridge);
    const SignalTrace distorted = blurred.aligned(clean);

    io::write_kernel_csv(out_ / "kernel.csv", spec.kernel);
    io::write_blurred_csv(out_ / "blurred_trace.csv", blurred, clean);
    io::write_json(out_ / "blurred_trace.json", {{"blurred", true},
                                                 {"source_length", blurred.source_length},
                                                 {"kernel_length", blurred.kernel_length},
                                                 {"center_offset", blurred.center_offset()},
                                                 {"delta_theta_rad", clean.delta_theta()}});
    io::write_trace_csv(out_ / "deblurred_trace.csv", restored);

    const ComplexImage img_clean = backproject(clean, scenario_.grid);
    const ComplexImage img_blurred = backproject(distorted, scenario_.grid);
    const ComplexImage img_restored = backproject(restored, scenario_.grid);
    const double range_db = scenario_.output.pgm_dynamic_range_db;
    write_image_set(out_, "image_clean", img_clean, range_db);
    write_image_set(out_, "image_blurred", img_blurred, range_db);
    write_image_set(out_, "image_deblurred", img_restored, range_db);

    // radial line from the origin through the clean image peak
    const GridIndex pk = argmax(img_clean);
    Point2 dir = img_clean.position(pk.row, pk.col);
    if (std::hypot(dir.x, dir.y) == 0.0)
        dir = {1.0, 0.0};
    double extent = 0.0;
    if (const auto *c = std::get_if<CartesianGrid>(&scenario_.grid))
        extent = std::max({std::abs(c->xs.front()), std::abs(c->xs.back()), std::abs(c->ys.front()),
                           std::abs(c->ys.back())});
    else
        extent = std::get<PolarGrid>(scenario_.grid).radii.back();
    constexpr std::size_t samples = 401;
    RVector radii(samples);
    for (std::size_t i = 0; i < samples; ++i)
        radii[i] = extent * static_cast<double>(i) / static_cast<double>(samples - 1);
    const CVector cut_clean = line_profile(clean, {0.0, 0.0}, dir, radii);
    const CVector cut_blur = line_profile(distorted, {0.0, 0.0}, dir, radii);
    const CVector cut_rest = line_profile(restored, {0.0, 0.0}, dir, radii);
    auto peak_of = [](const CVector &v) {
        double m = 0.0;
        for (const auto &x : v)
            m = std::max(m, std::abs(x));
        return m;
    };
    {
        std::ofstream os(out_ / "radial_cuts.csv");
        os << "r_m,clean_db,blurred_db,deblurred_db\n";
        const double a = peak_of(cut_clean), b = peak_of(cut_blur), c = peak_of(cut_rest);
        for (std::size_t i = 0; i < samples; ++i)
            os << io::format_double(radii[i]) << ',' << io::format_double(magnitude_db(cut_clean[i], a)) << ','
               << io::format_double(magnitude_db(cut_blur[i], b)) << ','
               << io::format_double(magnitude_db(cut_rest[i], c)) << '\n';
    }

    CVector diff(clean.size());
    for (std::size_t k = 0; k < clean.size(); ++k)
        diff[k] = restored[k] - clean[k];
    const double clean_norm = norm2(clean.samples());
    const double rel_err = clean_norm > 0.0 ? norm2(diff) / clean_norm : norm2(diff);

    const CVector fitted = multiply(build_convolution_matrix(spec.kernel, clean.size()), restored.samples());
    CVector resid(fitted.size());
    for (std::size_t i = 0; i < fitted.size(); ++i)
        resid[i] = fitted[i] - blurred.samples[i];
    const double bnorm = norm2(blurred.samples);

    const auto clean_peaks = find_peaks(img_clean, scenario_.output.peak_threshold_db);
    const auto restored_peaks = find_peaks(img_restored, scenario_.output.peak_threshold_db);
    const GridIndex pr = argmax(img_restored);

    json doc = {{"noise_sigma", spec.noise_sigma},
                {"ridge", spec.ridge},
                {"kernel_length", spec.kernel.size()},
                {"relative_error", rel_err},
                {"residual_norm", norm2(resid)},
                {"relative_residual", bnorm > 0.0 ? norm2(resid) / bnorm : 0.0},
                {"clean_peaks", peaks_json(clean_peaks)},
                {"deblurred_peaks", peaks_json(restored_peaks)},
                {"peak_offset_cells", cell_distance(pk, pr, img_clean)}};
    io::write_json(out_ / "deblur_report.json", doc);
    log_ << "deblur: relative error " << rel_err << ", residual " << norm2(resid) << '\n';
    return doc;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Doppler tomography simulation, imaging, null synthesis and deblurring"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string trace_path;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"simulate", "synthesize the received trace and its spectrogram"},
        {"image", "backproject the trace into a reflectivity image"},
        {"null", "synthesize LO phase offsets for the scenario's null cases"},
        {"deblur", "blur with the sensor kernel and recover by least squares"},
        {"all", "run every command the scenario supports"}};
    for (const auto &[name, help] : commands)
    {
        auto *sub = app.add_subcommand(name, help);
        sub->add_option("--scenario", scenario_path, "scenario JSON file")->required();
        sub->add_option("--seed", seed, "random seed (noise only)")->capture_default_str();
        sub->add_option("--out", out_dir, "output directory (overrides the scenario)");
        if (name == "image" || name == "null")
            sub->add_option("--trace", trace_path, "use a recorded trace CSV instead of simulating");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e, out, err);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e, out, err);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e, out, err);
        return exit_input_error;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try
    {
        Scenario sc = load_scenario(scenario_path);
        for (const auto &w : sc.warnings)
            err << "warning: " << w << '\n';
        fs::path dir = !out_dir.empty() ? fs::path(out_dir)
                       : !sc.output.dir.empty() ? sc.output.dir
                                                : fs::path("out") / sc.name;
        std::optional<fs::path> trace_file;
        if (!trace_path.empty())
            trace_file = trace_path;

        Pipeline p(std::move(sc), dir, seed, trace_file, out);
        if (command == "simulate")
            p.simulate();
        else if (command == "image")
            p.image();
        else if (command == "null")
            p.null();
        else if (command == "deblur")
            p.deblur();
        else
        {
            p.simulate();
            p.image();
            if (!p.scenario().nulls.empty())
                p.null();
            if (p.scenario().blur)
                p.deblur();
        }
    }
    catch (const InputError &e)
    {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }
    catch (const nlohmann::json::exception &e)
    {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << '\n';
        return exit_runtime_error;
    }
    return exit_ok;
}

} // namespace doptomo::cli
