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

#include <Eigen/Dense>
#include <complex>

namespace nfdist {

using Complex = std::complex<double>;
using VecXd = Eigen::VectorXd;
using VecXc = Eigen::VectorXcd;
using MatXd = Eigen::MatrixXd;
using MatXc = Eigen::MatrixXcd;

inline constexpr double pi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * pi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / pi; }

} // namespace nfdist
