// SPDX-License-Identifier: Apache-2.0
//
// nfdist -- simulation toolkit for nonlinear amplifier distortion radiated
// from large planar antenna arrays and active reflecting surfaces.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "nfdist/evaluation.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfdist {

// Config error carrying the dotted path to the offending field.
class ScenarioError : public std::runtime_error {
  public:
    ScenarioError(const std::string& path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(path) {}
    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

struct RadiateSpec {
    std::string estimator = "analytic"; // or "ensemble"
    int frames = 200;
    ScanSpec scan;
};

struct RatesSpec {
    std::vector<double> snrs_db{25.0};
    std::vector<double> evms; // empty => use the scenario PA model as-is
};

struct PredictSpec {
    int order = 1;
};

struct CalibrateSpec {
    double target_evm = 0.03;
    double input_power = 1.0;
};

struct ScheduleSpec {
    std::vector<double> evms{0.05, 0.10};
    std::vector<double> snrs_db{25.0};
    int n_fft = 128;
    int block_size = 30;
    int n_coscheduled = 4;
    int n_realizations = 20;
};

struct Scenario {
    ArrayGeometry geometry;
    std::string mode = "elaa"; // or "ris"
    std::vector<UserChannelParams> users;
    std::vector<int> clusters; // parallel to users, -1 when unlabeled
    PaModel pa;
    std::string pa_preset; // nonempty when the PA came from a named preset
    PrecoderKind precoder = PrecoderKind::Mrt;
    PhaseMode phase = PhaseMode::Exact; // applied to precoding and grid scans
    bool unit_drive = true; // power = N M / S when set
    double power = 1.0;
    OfdmConfig ofdm;
    std::optional<RisConfig> ris;
    std::string experiment = "predict";
    std::uint64_t rng_seed = 0;

    RadiateSpec radiate;
    RatesSpec rates;
    PredictSpec predict_spec;
    CalibrateSpec calibrate;
    ScheduleSpec schedule_spec;
};

Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);
nlohmann::json scenario_to_json(const Scenario& scenario);

// Precoded transmit chain for an elaa or ris scenario.
TransmitSetup build_setup(const Scenario& scenario);

} // namespace nfdist
