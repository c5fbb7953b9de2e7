// SPDX-License-Identifier: Apache-2.0
//
// nfdist -- simulation toolkit for nonlinear amplifier distortion radiated
// from large planar antenna arrays and active reflecting surfaces.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "nfdist/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace nfdist;

constexpr const char* kVersion = "0.1.0";

struct CliOptions {
    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
    int workers = 1;
    std::optional<double> grid_deg;
};

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_json(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open output file " + path.string());
    out << j.dump(2) << '\n';
}

void write_manifest(const CliOptions& opt, const Scenario& scenario, const std::string& command) {
    json j;
    j["version"] = kVersion;
    j["command"] = command;
    j["scenario"] = opt.scenario_path;
    j["scenario_hash"] = fnv1a64(read_file(opt.scenario_path));
    j["seed"] = opt.seed.value_or(scenario.rng_seed);
    j["workers"] = opt.workers;
    write_json(j, std::filesystem::path(opt.out) / "manifest.json");
}

const char* class_name(FocalClass cls) {
    switch (cls) {
    case FocalClass::P1:
        return "P1";
    case FocalClass::P2:
        return "P2";
    case FocalClass::P3:
        return "P3";
    default:
        return "higher";
    }
}

json focal_to_json(const FocalPoint& f) {
    json j;
    json tuple = json::array();
    for (int t : f.tuple)
        tuple.push_back(t);
    j["tuple"] = tuple;
    j["class"] = class_name(f.cls);
    j["azimuth_deg"] = f.azimuth_indeterminate || std::isnan(f.azimuth)
                           ? json(nullptr)
                           : json(rad2deg(f.azimuth));
    j["elevation_deg"] = std::isnan(f.elevation) ? json(nullptr) : json(rad2deg(f.elevation));
    if (f.inv_range == 0.0)
        j["range_m"] = "farfield";
    else if (f.inv_range > 0.0)
        j["range_m"] = 1.0 / f.inv_range;
    else
        j["range_m"] = json(nullptr);
    j["physical"] = f.physical;
    return j;
}

std::vector<SphericalPoint> user_positions(const Scenario& scenario) {
    std::vector<SphericalPoint> positions;
    for (const UserChannelParams& u : scenario.users)
        positions.push_back(u.position);
    return positions;
}

std::vector<FocalPoint> scenario_focal_points(const Scenario& scenario, int order) {
    const std::vector<SphericalPoint> positions = user_positions(scenario);
    if (scenario.mode == "ris")
        return ris_focal_points(positions, *scenario.ris, order);
    return predict(positions, order);
}

void run_predict(const Scenario& scenario, const CliOptions& opt) {
    const int order = scenario.predict_spec.order;
    const std::vector<FocalPoint> points = scenario_focal_points(scenario, order);

    json j;
    j["order"] = order;
    j["points"] = json::array();
    for (const FocalPoint& f : points)
        j["points"].push_back(focal_to_json(f));
    if (order == 1 && scenario.mode != "ris") {
        const UniquePoints up = unique_points(user_positions(scenario));
        json distinct = json::array();
        for (const FocalPoint& f : up.distinct)
            distinct.push_back(focal_to_json(f));
        j["distinct"] = distinct;
        j["bound"] = unique_point_bound(static_cast<int>(scenario.users.size()));
    }
    write_json(j, std::filesystem::path(opt.out) / "focal_points.json");
}

ScanSpec scan_spec_with_grid(const Scenario& scenario, const CliOptions& opt) {
    ScanSpec spec = scenario.radiate.scan;
    if (!opt.grid_deg)
        return spec;
    auto regrid = [&](ScanAxis& axis) {
        if (axis.kind != AxisKind::Azimuth && axis.kind != AxisKind::Elevation)
            return;
        const double start = axis.grid(0);
        const double stop = axis.grid(axis.grid.size() - 1);
        const double step = deg2rad(*opt.grid_deg);
        const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
        axis.grid.resize(count);
        for (int i = 0; i < count; ++i)
            axis.grid(i) = start + i * step;
    };
    regrid(spec.axis1);
    if (spec.axis2)
        regrid(*spec.axis2);
    return spec;
}

SpectralField run_scan(const Scenario& scenario, const CliOptions& opt) {
    const TransmitSetup setup = build_setup(scenario);
    const ScanSpec spec = scan_spec_with_grid(scenario, opt);
    if (scenario.radiate.estimator == "analytic") {
        const SpectralDensity density = analytic_spectra(setup, scenario.pa);
        return scan(spec, density, scenario.geometry);
    }
    Rng rng(opt.seed.value_or(scenario.rng_seed));
    return ensemble_scan(spec, setup, scenario.pa, scenario.radiate.frames, SymbolKind::Gaussian,
                         rng);
}

void run_radiate(const Scenario& scenario, const CliOptions& opt) {
    const SpectralField field = run_scan(scenario, opt);
    const std::filesystem::path dir(opt.out);
    write_field_csv(field, (dir / "field.csv").string());
    write_field_sidecar(field, (dir / "field.json").string(),
                        opt.seed.value_or(scenario.rng_seed));
}

void run_rates(const Scenario& scenario, const CliOptions& opt) {
    const TransmitSetup setup = build_setup(scenario);
    std::ofstream out(std::filesystem::path(opt.out) / "rates.csv");
    if (!out)
        throw std::runtime_error("cannot open rates.csv");
    out.precision(10);
    out << "evm,snr_db,sum_rate\n";

    std::vector<std::pair<double, PaModel>> models;
    if (scenario.rates.evms.empty()) {
        models.emplace_back(analytic_evm(scenario.pa), scenario.pa);
    } else {
        for (double evm : scenario.rates.evms)
            models.emplace_back(evm, calibrate_evm(evm));
    }
    for (const auto& [evm, model] : models)
        for (double snr : scenario.rates.snrs_db)
            out << evm << ',' << snr << ','
                << evaluate_rates(setup, scenario.users, model, snr).sum_rate << '\n';
}

void run_schedule(const Scenario& scenario, const CliOptions& opt) {
    SchedulingConfig config;
    config.geometry = scenario.geometry;
    config.evms = scenario.schedule_spec.evms;
    config.snrs_db = scenario.schedule_spec.snrs_db;
    config.n_fft = scenario.schedule_spec.n_fft;
    config.block_size = scenario.schedule_spec.block_size;
    config.n_coscheduled = scenario.schedule_spec.n_coscheduled;
    config.n_realizations = scenario.schedule_spec.n_realizations;
    Rng rng(opt.seed.value_or(scenario.rng_seed));
    const std::vector<SchedulingCell> cells = scheduling_experiment(config, rng);
    write_rate_csv(cells, (std::filesystem::path(opt.out) / "schedule.csv").string());
}

void run_calibrate(const Scenario& scenario, const CliOptions& opt) {
    const PaModel model =
        calibrate_evm(scenario.calibrate.target_evm, scenario.calibrate.input_power);
    json j;
    j["beta1"] = {model.beta1().real(), model.beta1().imag()};
    j["beta3"] = {model.beta3().real(), model.beta3().imag()};
    j["evm"] = analytic_evm(model, scenario.calibrate.input_power);
    j["input_power"] = scenario.calibrate.input_power;
    write_json(j, std::filesystem::path(opt.out) / "pa.json");
}

// Coordinate of a focal point along one scan axis, when defined.
std::optional<double> focal_coordinate(const FocalPoint& f, AxisKind kind) {
    switch (kind) {
    case AxisKind::Azimuth:
        return f.azimuth_indeterminate || std::isnan(f.azimuth) ? std::nullopt
                                                                : std::optional<double>(f.azimuth);
    case AxisKind::Elevation:
        return std::isnan(f.elevation) ? std::nullopt : std::optional<double>(f.elevation);
    case AxisKind::Range:
        return f.inv_range > 0.0 ? std::optional<double>(1.0 / f.inv_range) : std::nullopt;
    default:
        return std::nullopt;
    }
}

bool coordinate_matches(AxisKind kind, double predicted, double observed, double angular_tol) {
    if (kind == AxisKind::Range)
        return std::abs(observed - predicted) <= 0.10 * predicted;
    return std::abs(observed - predicted) <= angular_tol;
}

int run_validate(const Scenario& scenario, const CliOptions& opt) {
    const SpectralField field = run_scan(scenario, opt);
    double ref = field.linear.maxCoeff();
    if (ref <= 0.0)
        ref = 1.0;
    const MatXd db = to_db(field.distortion, ref);
    const std::vector<Peak> peaks = find_peaks(db, 6.0);

    // Physical, deduplicated third-order predictions.
    std::vector<FocalPoint> predictions;
    if (scenario.mode == "ris") {
        for (const FocalPoint& f : ris_focal_points(user_positions(scenario), *scenario.ris, 1))
            if (f.physical)
                predictions.push_back(f);
    } else {
        for (const FocalPoint& f : unique_points(user_positions(scenario)).distinct)
            if (f.physical)
                predictions.push_back(f);
    }

    const ScanSpec spec = scan_spec_with_grid(scenario, opt);
    const double angular_tol = deg2rad(1.0);
    auto axis_of = [&](int which) -> const ScanAxis* {
        if (which == 0)
            return &spec.axis1;
        return spec.axis2 ? &*spec.axis2 : nullptr;
    };

    auto in_window = [&](const ScanAxis& axis, double v) {
        return v >= axis.grid(0) - 1e-12 && v <= axis.grid(axis.grid.size() - 1) + 1e-12;
    };

    json unmatched_predictions = json::array();
    json matched = json::array();
    int misses = 0;
    for (const FocalPoint& f : predictions) {
        bool applicable = true;
        std::optional<double> coords[2];
        for (int ax = 0; ax < 2; ++ax) {
            const ScanAxis* axis = axis_of(ax);
            if (!axis)
                continue;
            if (axis->kind == AxisKind::Subcarrier)
                continue;
            coords[ax] = focal_coordinate(f, axis->kind);
            if (!coords[ax] || !in_window(*axis, *coords[ax]))
                applicable = false;
        }
        if (!applicable)
            continue;

        bool hit = false;
        for (const Peak& peak : peaks) {
            bool ok = true;
            const int cell[2] = {peak.i, peak.j};
            for (int ax = 0; ax < 2 && ok; ++ax) {
                const ScanAxis* axis = axis_of(ax);
                if (!axis || !coords[ax])
                    continue;
                ok = coordinate_matches(axis->kind, *coords[ax], axis->grid(cell[ax]), angular_tol);
            }
            if (ok) {
                hit = true;
                break;
            }
        }
        (hit ? matched : unmatched_predictions).push_back(focal_to_json(f));
        if (!hit)
            ++misses;
    }

    json unmatched_peaks = json::array();
    for (const Peak& peak : peaks) {
        bool hit = false;
        for (const FocalPoint& f : predictions) {
            bool ok = true;
            const int cell[2] = {peak.i, peak.j};
            for (int ax = 0; ax < 2 && ok; ++ax) {
                const ScanAxis* axis = axis_of(ax);
                if (!axis || axis->kind == AxisKind::Subcarrier)
                    continue;
                const std::optional<double> coord = focal_coordinate(f, axis->kind);
                if (!coord) {
                    ok = false;
                    break;
                }
                ok = coordinate_matches(axis->kind, *coord, axis->grid(cell[ax]), angular_tol);
            }
            if (ok) {
                hit = true;
                break;
            }
        }
        if (!hit) {
            json p;
            p["axis1"] = spec.axis1.kind == AxisKind::Range ? spec.axis1.grid(peak.i)
                                                            : rad2deg(spec.axis1.grid(peak.i));
            if (spec.axis2)
                p["axis2"] = spec.axis2->kind == AxisKind::Range
                                 ? spec.axis2->grid(peak.j)
                                 : rad2deg(spec.axis2->grid(peak.j));
            p["psd_db"] = peak.value;
            p["prominence_db"] = peak.prominence;
            unmatched_peaks.push_back(p);
        }
    }

    json report;
    report["matched"] = matched;
    report["unmatched_predictions"] = unmatched_predictions;
    report["unmatched_peaks"] = unmatched_peaks;
    report["peak_count"] = peaks.size();
    write_json(report, std::filesystem::path(opt.out) / "validation.json");

    if (misses > 0 || !unmatched_peaks.empty()) {
        std::cerr << "validate: " << misses << " unmatched predictions, "
                  << unmatched_peaks.size() << " unmatched peaks\n";
        return 3;
    }
    return 0;
}

int dispatch(const std::string& command, const CliOptions& opt) {
    Scenario scenario = load_scenario(opt.scenario_path);
    if (opt.seed)
        scenario.rng_seed = *opt.seed;
    std::filesystem::create_directories(opt.out);
    write_manifest(opt, scenario, command);

    if (command == "predict")
        run_predict(scenario, opt);
    else if (command == "radiate")
        run_radiate(scenario, opt);
    else if (command == "rates")
        run_rates(scenario, opt);
    else if (command == "schedule")
        run_schedule(scenario, opt);
    else if (command == "calibrate")
        run_calibrate(scenario, opt);
    else if (command == "validate")
        return run_validate(scenario, opt);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nfdist: nonlinear amplifier distortion radiated from large planar arrays"};
    app.require_subcommand(1);

    CliOptions opt;
    std::uint64_t seed_value = 0;
    double grid_value = 0.0;

    const char* names[] = {"predict", "radiate", "rates", "schedule", "calibrate", "validate"};
    for (const char* name : names) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--scenario", opt.scenario_path, "scenario JSON file")->required();
        sub->add_option("--seed", seed_value, "override the scenario RNG seed");
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--workers", opt.workers, "worker cap (runs are single-process)");
        sub->add_option("--grid", grid_value, "angular grid step override in degrees");
    }

    CLI11_PARSE(app, argc, argv);

    const CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--seed"))
        opt.seed = seed_value;
    if (sub->count("--grid"))
        opt.grid_deg = grid_value;

    try {
        return dispatch(sub->get_name(), opt);
    } catch (const nfdist::ScenarioError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
}
