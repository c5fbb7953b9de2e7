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

#include "nfdist/geometry.hpp"

#include <optional>
#include <vector>

namespace nfdist {

// A point of interest (azimuth, elevation, range) seen from the array
// reference element. Angles in radians, range in meters. A point without a
// range is in the far field.
class SphericalPoint {
  public:
    SphericalPoint(double azimuth, double elevation, double range);
    static SphericalPoint far_field(double azimuth, double elevation);

    double azimuth() const { return azimuth_; }
    double elevation() const { return elevation_; }
    bool is_far_field() const { return !range_.has_value(); }
    double range() const; // throws for far-field points
    double inv_range() const { return range_ ? 1.0 / *range_ : 0.0; }

  private:
    SphericalPoint(double azimuth, double elevation, std::optional<double> range);
    double azimuth_;
    double elevation_;
    std::optional<double> range_;
};

struct UserChannelParams {
    SphericalPoint position;
    Complex gain{1.0, 0.0};
    double delay = 0.0; // normalized per-subcarrier phase slope
};

enum class PhaseMode { Exact, Fresnel };

// Relative distance r - r_m with the exact Euclidean element distance.
// Requires a finite-range point.
double exact_relative_phase(const ArrayGeometry& geometry, int m, const SphericalPoint& point);

// Parabolic (Fresnel) approximation of the relative distance. The quadratic
// 1/r term is dropped for far-field points.
double fresnel_relative_phase(const ArrayGeometry& geometry, int m, const SphericalPoint& point);

// Unit-modulus array response vector, element m = exp(j 2pi/lambda * phase_m).
VecXc array_response(const ArrayGeometry& geometry, const SphericalPoint& point, PhaseMode mode);

// Steering in the requested phase model where a range is available,
// far-field phase otherwise. Exact by default.
VecXc steering_vector(const ArrayGeometry& geometry, const SphericalPoint& point,
                      PhaseMode mode = PhaseMode::Exact);

// H_nu = A * diag(f) with A the per-user steering columns and
// f_k = g_k * exp(-j 2pi tau_k nu).
struct LosChannel {
    MatXc steering;       // M x K
    VecXc subcarrier_gains; // K
    MatXc matrix() const { return steering * subcarrier_gains.asDiagonal(); }
};

LosChannel los_channel(const std::vector<UserChannelParams>& users,
                       const ArrayGeometry& geometry, int subcarrier,
                       PhaseMode mode = PhaseMode::Exact);

// Fresnel-approximation discrepancy diagnostics (the published error bound
// does not state its unit, so both conventions are reported).
struct FresnelError {
    double meters;  // max_m |exact - fresnel| relative distance
    double radians; // the same scaled by 2pi/lambda
};
FresnelError fresnel_error(const ArrayGeometry& geometry, const SphericalPoint& point);

// Smallest range satisfying -2*fresnel_phase/r <= 0.1745 at broadside.
double fresnel_validity_radius(const ArrayGeometry& geometry);

} // namespace nfdist
