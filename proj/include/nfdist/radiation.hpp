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

#include "nfdist/amplifier.hpp"
#include "nfdist/waveform.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nfdist {

// Per-subcarrier spatial spectral densities of the Bussgang-linear part and
// the distortion, each an M x M matrix, indexed 0..n_fft-1.
struct SpectralDensity {
    int n_fft = 0;
    std::vector<MatXc> s_uu;
    std::vector<MatXc> s_dd;
};

// Per-antenna average input power diag(C_xx[0]) implied by the precoders.
VecXd input_power_per_antenna(const TransmitSetup& setup);

// Closed-form route: S_xx[nu] = alpha^2 P_nu P_nu^H, covariance stack by
// inverse DFT, third-order output covariance, DFT back. Memoryless
// third-order models only; guarded against infeasible M^2 N storage.
SpectralDensity analytic_spectra(const TransmitSetup& setup, const PaModel& model);

// Empirical route from a decomposition whose lag window spans the full frame
// (lag_window == n_fft - 1).
SpectralDensity spectra_from_decomposition(const BussgangDecomposition& decomposition, int n_fft);

enum class AxisKind { Azimuth, Elevation, Range, Subcarrier };

struct ScanAxis {
    AxisKind kind = AxisKind::Azimuth;
    VecXd grid; // radians / meters / subcarrier index
};

// Two scan axes (axis2 absent for 1-D scans) plus the held-fixed coordinates.
// subcarrier = -1 sums the PSD over the whole band. The phase model selects
// the steering basis the field is projected onto; Fresnel projection places
// near-field beams exactly where the parabolic-wavefront theory predicts.
struct ScanSpec {
    ScanAxis axis1;
    std::optional<ScanAxis> axis2;
    double azimuth = 0.0;
    double elevation = 0.0;
    double range = 0.0;
    bool far_field = true;
    int subcarrier = -1;
    PhaseMode phase = PhaseMode::Exact;
};

struct SpectralField {
    ScanSpec spec;
    MatXd linear;     // axis1 x axis2 (single column when 1-D), linear scale
    MatXd distortion;
    MatXd total;
    std::vector<std::string> warnings;
};

// Quadratic form a^T S a* per grid cell from dense spectral densities.
// Ranges below d_B add a validity warning.
SpectralField scan(const ScanSpec& spec, const SpectralDensity& density,
                   const ArrayGeometry& geometry);

// Averaged-periodogram route fused with the scan: frames are synthesized,
// amplified, split via the analytic Bussgang gains, and projected onto the
// grid steering vectors before averaging. Feasible at large M where dense
// M x M densities are not.
SpectralField ensemble_scan(const ScanSpec& spec, const TransmitSetup& setup,
                            const PaModel& model, int n_frames, SymbolKind kind, Rng& rng);

// dB relative to a positive reference, floored at -300 dB.
MatXd to_db(const MatXd& values, double reference);

struct Peak {
    int i = 0; // axis1 index
    int j = 0; // axis2 index
    double value = 0.0;
    double prominence = 0.0;
};

// Local maxima above the prominence threshold, sorted by value descending.
// 2-neighborhood on 1-D fields, 8-neighborhood on 2-D; prominence by
// descending watershed merge levels.
std::vector<Peak> find_peaks(const MatXd& values, double min_prominence);

// CSV rows axis1,axis2,component,psd_db (dB relative to the linear maximum)
// plus a JSON sidecar with the fixed coordinates, grid spec and seed.
void write_field_csv(const SpectralField& field, const std::string& path);
void write_field_sidecar(const SpectralField& field, const std::string& path, std::uint64_t seed);

} // namespace nfdist
