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

#include "nfdist/rng.hpp"

#include <string>
#include <vector>

namespace nfdist {

// Memory-polynomial amplifier: A(x[n]) = sum_{p,l} beta_{2p+1}[l] x[n-l] |x[n-l]|^{2p}.
// coeffs(p, l) holds beta_{2p+1}[l]. The same transfer function is shared by
// every array element.
struct PaModel {
    MatXc coeffs; // (P+1) x (L+1)

    PaModel() : coeffs(MatXc::Ones(1, 1)) {}
    explicit PaModel(MatXc c);

    static PaModel linear() { return third_order(1.0, 0.0); }
    static PaModel third_order(Complex beta1, Complex beta3);
    // Named presets: "linear" = (1, 0), "evm3" = (1.042, -0.0212).
    static PaModel preset(const std::string& name);

    int order() const { return static_cast<int>(coeffs.rows()) - 1; }   // P
    int memory() const { return static_cast<int>(coeffs.cols()) - 1; }  // L
    bool memoryless_third_order() const { return order() <= 1 && memory() == 0; }
    Complex beta1() const { return coeffs(0, 0); }
    Complex beta3() const { return order() >= 1 ? coeffs(1, 0) : Complex(0.0); }

    Complex evaluate(Complex x) const; // memoryless evaluation of one sample
};

// Per-element, per-sample polynomial with memory taps indexed circularly
// over the frame. Throws when the frame is shorter than the memory depth.
MatXc apply_pa(const PaModel& model, const MatXc& frame);

// Analytic EVM of a memoryless third-order model under circular Gaussian
// input of the given power: sqrt(E|d|^2 / E|u|^2) with u the Bussgang-linear part.
double analytic_evm(const PaModel& model, double input_power = 1.0);

// Third-order memoryless model hitting the target EVM at the given input
// power, with beta1 chosen to preserve output power. EVM here is the
// amplitude-ratio convention (the one that reproduces the published
// coefficient pair).
PaModel calibrate_evm(double target_evm, double input_power = 1.0);

// Bussgang linear gain beta1 + 2*beta3*sigma_m^2 per element.
VecXc bussgang_gain(const PaModel& model, const VecXd& input_power);

// Closed-form output covariance sequence of the third-order memoryless
// model for jointly circular Gaussian input:
//   C_yy[tau] = G C_xx[tau] G^H + 2|beta3|^2 C_xx[tau] o |C_xx[tau]|^2.
std::vector<MatXc> output_covariance(const PaModel& model, const std::vector<MatXc>& c_xx);

struct BussgangDecomposition {
    VecXc gains;              // diagonal of G
    std::vector<MatXc> c_xx;  // covariance sequences over the lag window
    std::vector<MatXc> c_yy;
    std::vector<MatXc> c_dd;
    bool analytic = false;    // covariances closed-form vs ensemble-estimated
    double max_cross_correlation = 0.0; // empirical |<d, x>| normalized, max over elements
};

// Decompose an ensemble of (input, output) frame pairs into the Bussgang
// linear part and uncorrelated distortion. Covariances are closed-form for
// memoryless third-order models and ensemble estimates otherwise.
BussgangDecomposition decompose(const PaModel& model,
                                const std::vector<MatXc>& input_frames,
                                const std::vector<MatXc>& output_frames,
                                int lag_window, size_t min_frames = 1);

} // namespace nfdist
