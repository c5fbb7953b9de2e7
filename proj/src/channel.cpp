// SPDX-License-Identifier: Apache-2.0
//
// nfdist -- simulation toolkit for nonlinear amplifier distortion radiated
// from large planar antenna arrays and active reflecting surfaces.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "nfdist/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace nfdist {

SphericalPoint::SphericalPoint(double azimuth, double elevation, std::optional<double> range)
    : azimuth_(azimuth), elevation_(elevation), range_(range) {
    if (azimuth_ < -pi / 2 - 1e-12 || azimuth_ > pi / 2 + 1e-12)
        throw std::invalid_argument("SphericalPoint: azimuth outside [-pi/2, pi/2]");
    if (elevation_ < -pi / 2 - 1e-12 || elevation_ > pi / 2 + 1e-12)
        throw std::invalid_argument("SphericalPoint: elevation outside [-pi/2, pi/2]");
    if (range_ && *range_ <= 0.0)
        throw std::invalid_argument("SphericalPoint: finite range must be > 0");
}

SphericalPoint::SphericalPoint(double azimuth, double elevation, double range)
    : SphericalPoint(azimuth, elevation, std::optional<double>(range)) {}

SphericalPoint SphericalPoint::far_field(double azimuth, double elevation) {
    return SphericalPoint(azimuth, elevation, std::nullopt);
}

double SphericalPoint::range() const {
    if (!range_)
        throw std::domain_error("SphericalPoint: far-field point has no range");
    return *range_;
}

double exact_relative_phase(const ArrayGeometry& geometry, int m, const SphericalPoint& point) {
    if (point.is_far_field())
        throw std::domain_error("exact_relative_phase: far-field point, use the Fresnel/far-field phase");
    const Eigen::Vector2d pos = element_position(geometry, m);
    const double k_y = pos(0), k_z = pos(1);
    const double r = point.range();
    const double st = std::sin(point.elevation());
    const double sp_ct = std::sin(point.azimuth()) * std::cos(point.elevation());
    const double r_m = std::sqrt(r * r + k_y * k_y + k_z * k_z - 2.0 * r * k_z * st - 2.0 * r * k_y * sp_ct);
    return r - r_m;
}

double fresnel_relative_phase(const ArrayGeometry& geometry, int m, const SphericalPoint& point) {
    const Eigen::Vector2d pos = element_position(geometry, m);
    const double k_y = pos(0), k_z = pos(1);
    const double st = std::sin(point.elevation());
    const double sp_ct = std::sin(point.azimuth()) * std::cos(point.elevation());
    double phase = k_z * st + k_y * sp_ct;
    if (!point.is_far_field())
        phase -= (k_y * k_y + k_z * k_z) / (2.0 * point.range());
    return phase;
}

VecXc array_response(const ArrayGeometry& geometry, const SphericalPoint& point, PhaseMode mode) {
    const int M = geometry.size();
    const double k = geometry.wavenumber();
    VecXc a(M);
    for (int m = 0; m < M; ++m) {
        const double phase = (mode == PhaseMode::Exact)
                                 ? exact_relative_phase(geometry, m, point)
                                 : fresnel_relative_phase(geometry, m, point);
        a(m) = std::polar(1.0, k * phase);
    }
    return a;
}

VecXc steering_vector(const ArrayGeometry& geometry, const SphericalPoint& point,
                      PhaseMode mode) {
    return array_response(geometry, point, point.is_far_field() ? PhaseMode::Fresnel : mode);
}

LosChannel los_channel(const std::vector<UserChannelParams>& users,
                       const ArrayGeometry& geometry, int subcarrier, PhaseMode mode) {
    if (users.empty())
        throw std::invalid_argument("los_channel: at least one user required");
    const int K = static_cast<int>(users.size());
    LosChannel ch;
    ch.steering.resize(geometry.size(), K);
    ch.subcarrier_gains.resize(K);
    for (int k = 0; k < K; ++k) {
        ch.steering.col(k) = steering_vector(geometry, users[k].position, mode);
        ch.subcarrier_gains(k) =
            users[k].gain * std::polar(1.0, -2.0 * pi * users[k].delay * subcarrier);
    }
    return ch;
}

FresnelError fresnel_error(const ArrayGeometry& geometry, const SphericalPoint& point) {
    double worst = 0.0;
    for (int m = 0; m < geometry.size(); ++m) {
        const double d = std::abs(exact_relative_phase(geometry, m, point) -
                                  fresnel_relative_phase(geometry, m, point));
        worst = std::max(worst, d);
    }
    return {worst, worst * geometry.wavenumber()};
}

double fresnel_validity_radius(const ArrayGeometry& geometry) {
    const double delta = aperture(geometry);
    return std::sqrt(delta * delta / 0.1745);
}

} // namespace nfdist
