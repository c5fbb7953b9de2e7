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

#include <cmath>
#include <fstream>

namespace nfdist {

namespace {

using nlohmann::json;

std::string join(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key))
        throw ScenarioError(join(path, key), "missing required field");
    return j.at(key);
}

double number(const json& j, const std::string& path) {
    if (!j.is_number())
        throw ScenarioError(path, "expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer())
        throw ScenarioError(path, "expected an integer");
    return j.get<int>();
}

std::string text(const json& j, const std::string& path) {
    if (!j.is_string())
        throw ScenarioError(path, "expected a string");
    return j.get<std::string>();
}

double opt_number(const json& j, const std::string& key, const std::string& path, double fallback) {
    return j.is_object() && j.contains(key) ? number(j.at(key), join(path, key)) : fallback;
}

int opt_integer(const json& j, const std::string& key, const std::string& path, int fallback) {
    return j.is_object() && j.contains(key) ? integer(j.at(key), join(path, key)) : fallback;
}

std::vector<double> number_list(const json& j, const std::string& path) {
    if (!j.is_array())
        throw ScenarioError(path, "expected an array of numbers");
    std::vector<double> out;
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Complex complex_value(const json& j, const std::string& path) {
    if (j.is_number())
        return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw ScenarioError(path, "expected a number or [re, im] pair");
}

ArrayGeometry parse_geometry(const json& j, const std::string& path) {
    const int m_y = integer(require(j, "m_y", path), join(path, "m_y"));
    if (m_y < 1)
        throw ScenarioError(join(path, "m_y"), "element count must be >= 1");
    const int m_z = integer(require(j, "m_z", path), join(path, "m_z"));
    if (m_z < 1)
        throw ScenarioError(join(path, "m_z"), "element count must be >= 1");
    const double lambda = number(require(j, "wavelength", path), join(path, "wavelength"));
    if (lambda <= 0.0)
        throw ScenarioError(join(path, "wavelength"), "must be > 0");
    const double d_y = opt_number(j, "d_y", path, lambda / 2.0);
    const double d_z = opt_number(j, "d_z", path, lambda / 2.0);
    try {
        return ArrayGeometry(m_y, m_z, d_y, d_z, lambda);
    } catch (const std::exception& e) {
        throw ScenarioError(path, e.what());
    }
}

SphericalPoint parse_point(const json& j, const std::string& path) {
    const double az = deg2rad(number(require(j, "azimuth_deg", path), join(path, "azimuth_deg")));
    const double el =
        deg2rad(number(require(j, "elevation_deg", path), join(path, "elevation_deg")));
    try {
        if (!j.contains("range_m") || (j.at("range_m").is_string() &&
                                       j.at("range_m").get<std::string>() == "farfield"))
            return SphericalPoint::far_field(az, el);
        return SphericalPoint(az, el, number(j.at("range_m"), join(path, "range_m")));
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        throw ScenarioError(path, e.what());
    }
}

PaModel parse_pa(const json& j, const std::string& path, std::string& preset_name) {
    try {
        if (j.is_string()) {
            preset_name = j.get<std::string>();
            return PaModel::preset(preset_name);
        }
        if (j.is_object() && j.contains("target_evm"))
            return calibrate_evm(number(j.at("target_evm"), join(path, "target_evm")),
                                 opt_number(j, "input_power", path, 1.0));
        if (j.is_object() && j.contains("beta1"))
            return PaModel::third_order(complex_value(j.at("beta1"), join(path, "beta1")),
                                        j.contains("beta3")
                                            ? complex_value(j.at("beta3"), join(path, "beta3"))
                                            : Complex(0.0, 0.0));
        if (j.is_object() && j.contains("coeffs")) {
            const json& rows = j.at("coeffs");
            if (!rows.is_array() || rows.empty())
                throw ScenarioError(join(path, "coeffs"), "expected a nonempty array of rows");
            MatXc coeffs(rows.size(), rows[0].size());
            for (size_t p = 0; p < rows.size(); ++p) {
                if (!rows[p].is_array() || rows[p].size() != static_cast<size_t>(coeffs.cols()))
                    throw ScenarioError(join(path, "coeffs"), "ragged coefficient rows");
                for (size_t l = 0; l < rows[p].size(); ++l)
                    coeffs(p, l) = complex_value(
                        rows[p][l], join(path, "coeffs") + "[" + std::to_string(p) + "][" +
                                        std::to_string(l) + "]");
            }
            return PaModel(coeffs);
        }
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        throw ScenarioError(path, e.what());
    }
    throw ScenarioError(path, "expected a preset name, {beta1, beta3}, {coeffs} or {target_evm}");
}

std::vector<int> parse_occupied(const json& j, const std::string& path) {
    if (j.is_array()) {
        std::vector<int> out;
        for (size_t i = 0; i < j.size(); ++i)
            out.push_back(integer(j[i], path + "[" + std::to_string(i) + "]"));
        return out;
    }
    if (j.is_object() && j.contains("first") && j.contains("count")) {
        const int first = integer(j.at("first"), join(path, "first"));
        const int count = integer(j.at("count"), join(path, "count"));
        if (count < 0)
            throw ScenarioError(join(path, "count"), "must be >= 0");
        std::vector<int> out(count);
        for (int i = 0; i < count; ++i)
            out[i] = first + i;
        return out;
    }
    throw ScenarioError(path, "expected an index array or {first, count}");
}

OfdmConfig parse_ofdm(const json& j, const std::string& path, int n_users) {
    OfdmConfig ofdm;
    ofdm.n_fft = integer(require(j, "n_fft", path), join(path, "n_fft"));
    ofdm.occupied = parse_occupied(require(j, "occupied", path), join(path, "occupied"));
    if (j.contains("allocation")) {
        const json& alloc = j.at("allocation");
        const std::string apath = join(path, "allocation");
        if (alloc.is_string()) {
            const std::string kind = alloc.get<std::string>();
            if (kind == "shared")
                ; // empty allocation
            else if (kind == "subbands")
                ofdm.allocation = contiguous_subbands(ofdm.occupied, n_users);
            else
                throw ScenarioError(apath, "expected \"shared\", \"subbands\" or explicit bands");
        } else if (alloc.is_array()) {
            for (size_t k = 0; k < alloc.size(); ++k)
                ofdm.allocation.push_back(
                    parse_occupied(alloc[k], apath + "[" + std::to_string(k) + "]"));
        } else {
            throw ScenarioError(apath, "expected a string or array");
        }
    }
    try {
        ofdm.validate(n_users);
    } catch (const std::exception& e) {
        throw ScenarioError(path, e.what());
    }
    return ofdm;
}

AxisKind parse_axis_kind(const std::string& name, const std::string& path) {
    if (name == "azimuth")
        return AxisKind::Azimuth;
    if (name == "elevation")
        return AxisKind::Elevation;
    if (name == "range")
        return AxisKind::Range;
    if (name == "subcarrier")
        return AxisKind::Subcarrier;
    throw ScenarioError(path, "unknown axis kind '" + name + "'");
}

ScanAxis parse_axis(const json& j, const std::string& path) {
    ScanAxis axis;
    axis.kind = parse_axis_kind(text(require(j, "kind", path), join(path, "kind")), path);
    const bool angular = axis.kind == AxisKind::Azimuth || axis.kind == AxisKind::Elevation;
    const double start = number(require(j, "start", path), join(path, "start"));
    const double stop = number(require(j, "stop", path), join(path, "stop"));
    const double step = number(require(j, "step", path), join(path, "step"));
    if (step <= 0.0 || stop < start)
        throw ScenarioError(path, "need step > 0 and stop >= start");
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    axis.grid.resize(count);
    for (int i = 0; i < count; ++i) {
        const double v = start + i * step;
        axis.grid(i) = angular ? deg2rad(v) : v;
    }
    return axis;
}

RadiateSpec parse_radiate(const json& j, const std::string& path) {
    RadiateSpec spec;
    if (j.contains("estimator")) {
        spec.estimator = text(j.at("estimator"), join(path, "estimator"));
        if (spec.estimator != "analytic" && spec.estimator != "ensemble")
            throw ScenarioError(join(path, "estimator"), "expected \"analytic\" or \"ensemble\"");
    }
    spec.frames = opt_integer(j, "frames", path, 200);
    spec.scan.axis1 = parse_axis(require(j, "axis1", path), join(path, "axis1"));
    if (j.contains("axis2"))
        spec.scan.axis2 = parse_axis(j.at("axis2"), join(path, "axis2"));
    if (j.contains("fixed")) {
        const json& f = j.at("fixed");
        const std::string fpath = join(path, "fixed");
        spec.scan.azimuth = deg2rad(opt_number(f, "azimuth_deg", fpath, 0.0));
        spec.scan.elevation = deg2rad(opt_number(f, "elevation_deg", fpath, 0.0));
        if (f.contains("range_m") && f.at("range_m").is_number()) {
            spec.scan.range = f.at("range_m").get<double>();
            spec.scan.far_field = false;
        }
        spec.scan.subcarrier = opt_integer(f, "subcarrier", fpath, -1);
    }
    return spec;
}

} // namespace

Scenario parse_scenario(const json& j) {
    Scenario s;
    s.geometry = parse_geometry(require(j, "geometry", ""), "geometry");
    if (j.contains("mode")) {
        s.mode = text(j.at("mode"), "mode");
        if (s.mode != "elaa" && s.mode != "ris")
            throw ScenarioError("mode", "expected \"elaa\" or \"ris\"");
    }

    const json& users = require(j, "users", "");
    if (!users.is_array() || users.empty())
        throw ScenarioError("users", "expected a nonempty array");
    for (size_t k = 0; k < users.size(); ++k) {
        const std::string upath = "users[" + std::to_string(k) + "]";
        UserChannelParams u{parse_point(users[k], upath), Complex(1.0, 0.0), 0.0};
        if (users[k].contains("gain"))
            u.gain = complex_value(users[k].at("gain"), join(upath, "gain"));
        u.delay = opt_number(users[k], "delay", upath, 0.0);
        s.users.push_back(u);
        s.clusters.push_back(opt_integer(users[k], "cluster", upath, -1));
    }

    s.pa = j.contains("pa") ? parse_pa(j.at("pa"), "pa", s.pa_preset) : PaModel::linear();
    if (j.contains("precoder")) {
        const std::string kind = text(j.at("precoder"), "precoder");
        if (kind == "mrt")
            s.precoder = PrecoderKind::Mrt;
        else if (kind == "zf")
            s.precoder = PrecoderKind::Zf;
        else
            throw ScenarioError("precoder", "expected \"mrt\" or \"zf\"");
    }
    if (j.contains("phase_model")) {
        const std::string phase = text(j.at("phase_model"), "phase_model");
        if (phase == "exact")
            s.phase = PhaseMode::Exact;
        else if (phase == "fresnel")
            s.phase = PhaseMode::Fresnel;
        else
            throw ScenarioError("phase_model", "expected \"exact\" or \"fresnel\"");
    }
    if (j.contains("power")) {
        if (j.at("power").is_string() && j.at("power").get<std::string>() == "unit_drive") {
            s.unit_drive = true;
        } else {
            s.unit_drive = false;
            s.power = number(j.at("power"), "power");
        }
    }
    if (j.contains("ofdm"))
        s.ofdm = parse_ofdm(j.at("ofdm"), "ofdm", static_cast<int>(s.users.size()));

    if (j.contains("ris"))
        s.ris = RisConfig{parse_point(j.at("ris"), "ris")};
    if (s.mode == "ris" && !s.ris)
        throw ScenarioError("ris", "required when mode is \"ris\"");

    s.experiment = text(require(j, "experiment", ""), "experiment");
    const bool known = s.experiment == "predict" || s.experiment == "radiate" ||
                       s.experiment == "rates" || s.experiment == "schedule" ||
                       s.experiment == "calibrate";
    if (!known)
        throw ScenarioError("experiment", "unknown experiment '" + s.experiment + "'");

    if (!j.contains("rng_seed") || !j.at("rng_seed").is_number_unsigned())
        throw ScenarioError("rng_seed", "a nonnegative integer seed is mandatory");
    s.rng_seed = j.at("rng_seed").get<std::uint64_t>();

    if (j.contains("radiate"))
        s.radiate = parse_radiate(j.at("radiate"), "radiate");
    else if (s.experiment == "radiate")
        throw ScenarioError("radiate", "missing radiate section for the radiate experiment");
    s.radiate.scan.phase = s.phase;

    if (j.contains("rates")) {
        const json& r = j.at("rates");
        if (r.contains("snrs_db"))
            s.rates.snrs_db = number_list(r.at("snrs_db"), "rates.snrs_db");
        if (r.contains("evms"))
            s.rates.evms = number_list(r.at("evms"), "rates.evms");
    }
    if (j.contains("predict"))
        s.predict_spec.order = opt_integer(j.at("predict"), "order", "predict", 1);
    if (j.contains("calibrate")) {
        s.calibrate.target_evm = opt_number(j.at("calibrate"), "target_evm", "calibrate", 0.03);
        s.calibrate.input_power = opt_number(j.at("calibrate"), "input_power", "calibrate", 1.0);
    }
    if (j.contains("schedule")) {
        const json& sch = j.at("schedule");
        if (sch.contains("evms"))
            s.schedule_spec.evms = number_list(sch.at("evms"), "schedule.evms");
        if (sch.contains("snrs_db"))
            s.schedule_spec.snrs_db = number_list(sch.at("snrs_db"), "schedule.snrs_db");
        s.schedule_spec.n_fft = opt_integer(sch, "n_fft", "schedule", 128);
        s.schedule_spec.block_size = opt_integer(sch, "block_size", "schedule", 30);
        s.schedule_spec.n_coscheduled = opt_integer(sch, "coscheduled", "schedule", 4);
        s.schedule_spec.n_realizations = opt_integer(sch, "realizations", "schedule", 20);
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ScenarioError("(file)", "cannot open scenario file " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ScenarioError("(file)", std::string("invalid JSON: ") + e.what());
    }
    return parse_scenario(j);
}

namespace {

json point_to_json(const SphericalPoint& p) {
    json j;
    j["azimuth_deg"] = rad2deg(p.azimuth());
    j["elevation_deg"] = rad2deg(p.elevation());
    if (p.is_far_field())
        j["range_m"] = "farfield";
    else
        j["range_m"] = p.range();
    return j;
}

json axis_to_json(const ScanAxis& axis) {
    const bool angular = axis.kind == AxisKind::Azimuth || axis.kind == AxisKind::Elevation;
    auto out = [&](double v) { return angular ? rad2deg(v) : v; };
    json j;
    switch (axis.kind) {
    case AxisKind::Azimuth:
        j["kind"] = "azimuth";
        break;
    case AxisKind::Elevation:
        j["kind"] = "elevation";
        break;
    case AxisKind::Range:
        j["kind"] = "range";
        break;
    default:
        j["kind"] = "subcarrier";
    }
    j["start"] = out(axis.grid(0));
    j["stop"] = out(axis.grid(axis.grid.size() - 1));
    j["step"] = axis.grid.size() > 1 ? out(axis.grid(1)) - out(axis.grid(0)) : 1.0;
    return j;
}

} // namespace

json scenario_to_json(const Scenario& s) {
    json j;
    j["geometry"] = {{"m_y", s.geometry.m_y},
                     {"m_z", s.geometry.m_z},
                     {"d_y", s.geometry.d_y},
                     {"d_z", s.geometry.d_z},
                     {"wavelength", s.geometry.wavelength}};
    j["mode"] = s.mode;
    j["phase_model"] = s.phase == PhaseMode::Fresnel ? "fresnel" : "exact";
    j["users"] = json::array();
    for (size_t k = 0; k < s.users.size(); ++k) {
        json u = point_to_json(s.users[k].position);
        u["gain"] = {s.users[k].gain.real(), s.users[k].gain.imag()};
        u["delay"] = s.users[k].delay;
        if (s.clusters[k] >= 0)
            u["cluster"] = s.clusters[k];
        j["users"].push_back(u);
    }
    if (!s.pa_preset.empty()) {
        j["pa"] = s.pa_preset;
    } else {
        json rows = json::array();
        for (Eigen::Index p = 0; p < s.pa.coeffs.rows(); ++p) {
            json row = json::array();
            for (Eigen::Index l = 0; l < s.pa.coeffs.cols(); ++l)
                row.push_back({s.pa.coeffs(p, l).real(), s.pa.coeffs(p, l).imag()});
            rows.push_back(row);
        }
        j["pa"] = {{"coeffs", rows}};
    }
    j["precoder"] = s.precoder == PrecoderKind::Mrt ? "mrt" : "zf";
    if (s.unit_drive)
        j["power"] = "unit_drive";
    else
        j["power"] = s.power;
    j["ofdm"] = {{"n_fft", s.ofdm.n_fft}, {"occupied", s.ofdm.occupied}};
    if (!s.ofdm.allocation.empty())
        j["ofdm"]["allocation"] = s.ofdm.allocation;
    if (s.ris)
        j["ris"] = point_to_json(s.ris->steer_from);
    j["experiment"] = s.experiment;
    j["rng_seed"] = s.rng_seed;

    json rad;
    rad["estimator"] = s.radiate.estimator;
    rad["frames"] = s.radiate.frames;
    if (s.radiate.scan.axis1.grid.size() > 0) {
        rad["axis1"] = axis_to_json(s.radiate.scan.axis1);
        if (s.radiate.scan.axis2)
            rad["axis2"] = axis_to_json(*s.radiate.scan.axis2);
        json fixed;
        fixed["azimuth_deg"] = rad2deg(s.radiate.scan.azimuth);
        fixed["elevation_deg"] = rad2deg(s.radiate.scan.elevation);
        if (!s.radiate.scan.far_field)
            fixed["range_m"] = s.radiate.scan.range;
        fixed["subcarrier"] = s.radiate.scan.subcarrier;
        rad["fixed"] = fixed;
        j["radiate"] = rad;
    }
    j["rates"] = {{"snrs_db", s.rates.snrs_db}, {"evms", s.rates.evms}};
    j["predict"] = {{"order", s.predict_spec.order}};
    j["calibrate"] = {{"target_evm", s.calibrate.target_evm},
                      {"input_power", s.calibrate.input_power}};
    j["schedule"] = {{"evms", s.schedule_spec.evms},
                     {"snrs_db", s.schedule_spec.snrs_db},
                     {"n_fft", s.schedule_spec.n_fft},
                     {"block_size", s.schedule_spec.block_size},
                     {"coscheduled", s.schedule_spec.n_coscheduled},
                     {"realizations", s.schedule_spec.n_realizations}};
    return j;
}

TransmitSetup build_setup(const Scenario& scenario) {
    if (scenario.ofdm.occupied.empty())
        throw ScenarioError("ofdm.occupied", "the experiment needs occupied subcarriers");
    if (scenario.mode == "ris")
        return build_ris_setup(scenario.geometry, scenario.users, scenario.ofdm, *scenario.ris);
    const double power = scenario.unit_drive
                             ? unit_drive_power(scenario.geometry, scenario.ofdm)
                             : scenario.power;
    return build_elaa_setup(scenario.geometry, scenario.users, scenario.ofdm, scenario.precoder,
                            power, scenario.phase);
}

} // namespace nfdist
