// SPDX-License-Identifier: Apache-2.0
//
// nfdist -- simulation toolkit for nonlinear amplifier distortion radiated
// from large planar antenna arrays and active reflecting surfaces.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "nfdist/focal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nfdist {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

FocalPoint evaluate_tuple(const std::vector<EffectivePosition>& users,
                          const std::vector<int>& tuple, int p) {
    FocalPoint fp;
    fp.tuple = tuple;
    fp.order = p;

    double sin_el = 0.0, sin_az_cos_el = 0.0, inv_r = 0.0;
    bool inputs_physical = true;
    for (size_t i = 0; i < tuple.size(); ++i) {
        const EffectivePosition& u = users[tuple[i]];
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        sin_el += sign * std::sin(u.elevation);
        sin_az_cos_el += sign * std::sin(u.azimuth) * std::cos(u.elevation);
        inv_r += sign * u.inv_range;
        inputs_physical = inputs_physical && u.physical;
    }

    if (std::abs(sin_el) > 1.0) {
        fp.elevation = nan_v;
        fp.azimuth = nan_v;
        fp.physical = false;
    } else {
        fp.elevation = std::asin(sin_el);
        const double cos_el = std::cos(fp.elevation);
        if (cos_el == 0.0) {
            fp.azimuth = nan_v;
            fp.azimuth_indeterminate = true;
            fp.physical = false;
        } else {
            const double arg = sin_az_cos_el / cos_el;
            if (std::abs(arg) > 1.0) {
                fp.azimuth = nan_v;
                fp.physical = false;
            } else {
                fp.azimuth = std::asin(arg);
            }
        }
    }

    fp.inv_range = inv_r;
    if (inv_r < 0.0)
        fp.physical = false;
    if (!inputs_physical)
        fp.physical = false;

    if (p != 1) {
        fp.cls = FocalClass::Higher;
    } else if (tuple[0] == tuple[1] && tuple[1] == tuple[2]) {
        fp.cls = FocalClass::P1;
    } else if (tuple[0] == tuple[2] && tuple[1] != tuple[0]) {
        fp.cls = FocalClass::P2;
    } else {
        fp.cls = FocalClass::P3;
    }
    return fp;
}

bool same_location(const FocalPoint& a, const FocalPoint& b) {
    if (!a.physical || !b.physical)
        return false;
    if (std::abs(a.azimuth - b.azimuth) > 1e-9 || std::abs(a.elevation - b.elevation) > 1e-9)
        return false;
    if (a.is_far_field() != b.is_far_field())
        return false;
    if (a.is_far_field())
        return true;
    return std::abs(a.range() - b.range()) <= 1e-9 * std::abs(a.range());
}

} // namespace

EffectivePosition to_effective(const SphericalPoint& point) {
    return {point.azimuth(), point.elevation(), point.inv_range(), true};
}

std::vector<FocalPoint> predict(const std::vector<EffectivePosition>& users, int p) {
    if (users.empty())
        throw std::invalid_argument("predict: at least one user required");
    if (p < 1)
        throw std::invalid_argument("predict: order p must be >= 1");
    const int K = static_cast<int>(users.size());
    const int n = 2 * p + 1;

    std::vector<FocalPoint> out;
    out.reserve(static_cast<size_t>(std::pow(K, n)));
    std::vector<int> tuple(n, 0);
    while (true) {
        out.push_back(evaluate_tuple(users, tuple, p));
        int i = n - 1;
        while (i >= 0 && tuple[i] == K - 1)
            tuple[i--] = 0;
        if (i < 0)
            break;
        ++tuple[i];
    }
    return out;
}

std::vector<FocalPoint> predict(const std::vector<SphericalPoint>& users, int p) {
    std::vector<EffectivePosition> eff;
    eff.reserve(users.size());
    for (const auto& u : users)
        eff.push_back(to_effective(u));
    return predict(eff, p);
}

UniquePoints unique_points(const std::vector<SphericalPoint>& users) {
    const int K = static_cast<int>(users.size());
    std::vector<EffectivePosition> eff;
    eff.reserve(users.size());
    for (const auto& u : users)
        eff.push_back(to_effective(u));

    UniquePoints up;
    for (int k = 0; k < K; ++k)
        up.p1.push_back(evaluate_tuple(eff, {k, k, k}, 1));
    for (int a = 0; a < K; ++a)
        for (int q = 0; q < K; ++q)
            if (q != a)
                up.p2.push_back(evaluate_tuple(eff, {a, q, a}, 1));
    for (int q = 0; q < K; ++q)
        for (int a = 0; a < K; ++a)
            for (int v = a + 1; v < K; ++v)
                if (a != q && v != q)
                    up.p3.push_back(evaluate_tuple(eff, {a, q, v}, 1));

    auto add_distinct = [&](const FocalPoint& fp) {
        if (!fp.physical)
            return;
        for (const auto& d : up.distinct)
            if (same_location(d, fp))
                return;
        up.distinct.push_back(fp);
    };
    for (const auto& fp : up.p1)
        add_distinct(fp);
    for (const auto& fp : up.p2)
        add_distinct(fp);
    for (const auto& fp : up.p3)
        add_distinct(fp);
    return up;
}

long unique_point_bound(int user_count) {
    const long k = user_count;
    return (k * k * k - k * k + 2 * k) / 2;
}

std::vector<FocalPoint> same_elevation_case(const std::vector<SphericalPoint>& users) {
    for (const auto& u : users)
        if (u.elevation() != users.front().elevation())
            throw std::invalid_argument("same_elevation_case: users have mixed elevations");
    return predict(users, 1);
}

std::vector<FocalPoint> same_azimuth_case(const std::vector<SphericalPoint>& users) {
    for (const auto& u : users)
        if (u.azimuth() != users.front().azimuth())
            throw std::invalid_argument("same_azimuth_case: users have mixed azimuths");
    return predict(users, 1);
}

EffectivePosition ris_effective_position(const SphericalPoint& user, const RisConfig& steer) {
    const SphericalPoint& s = steer.steer_from;
    EffectivePosition eff;

    const double sin_el = std::sin(user.elevation()) - std::sin(s.elevation());
    if (std::abs(sin_el) > 1.0) {
        eff.elevation = nan_v;
        eff.azimuth = nan_v;
        eff.physical = false;
    } else {
        eff.elevation = std::asin(sin_el);
        const double arg = (std::cos(user.elevation()) * std::sin(user.azimuth()) -
                            std::cos(s.elevation()) * std::sin(s.azimuth())) /
                           std::cos(eff.elevation);
        if (std::abs(arg) > 1.0) {
            eff.azimuth = nan_v;
            eff.physical = false;
        } else {
            eff.azimuth = std::asin(arg);
        }
    }
    eff.inv_range = user.inv_range() - s.inv_range();
    return eff;
}

std::vector<FocalPoint> ris_focal_points(const std::vector<SphericalPoint>& users,
                                         const RisConfig& steer, int p) {
    std::vector<EffectivePosition> eff;
    eff.reserve(users.size());
    for (const auto& u : users)
        eff.push_back(ris_effective_position(u, steer));
    std::vector<FocalPoint> points = predict(eff, p);
    for (auto& fp : points) {
        fp.azimuth = -fp.azimuth;
        fp.elevation = -fp.elevation;
    }
    return points;
}

} // namespace nfdist
