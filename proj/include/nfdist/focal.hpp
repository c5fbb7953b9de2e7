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

#include "nfdist/channel.hpp"

#include <cstdint>
#include <vector>

namespace nfdist {

enum class FocalClass { P1, P2, P3, Higher };

// One predicted focal point of the (2p+1)-order intermodulation beam,
// generated by the alternating-sum combination of the users in `tuple`.
struct FocalPoint {
    double azimuth = 0.0;   // NaN when the arcsin argument left [-1, 1]
    double elevation = 0.0; // NaN when the arcsin argument left [-1, 1]
    double inv_range = 0.0; // 0 means far field; negative values are unphysical
    std::vector<int> tuple; // 0-based user indices, length 2p+1
    int order = 1;
    FocalClass cls = FocalClass::P1;
    bool physical = true;
    bool azimuth_indeterminate = false; // focal elevation at +-90 deg

    bool is_far_field() const { return inv_range == 0.0; }
    double range() const { return 1.0 / inv_range; }
};

// Angle/inverse-range triple used when composing through RIS phase shifts,
// where effective ranges may come out negative (virtual focus behind the
// surface).
struct EffectivePosition {
    double azimuth = 0.0;
    double elevation = 0.0;
    double inv_range = 0.0; // 0 => far field
    bool physical = true;
};

EffectivePosition to_effective(const SphericalPoint& point);

// All focal points of the (2p+1)-order distortion over the full tuple space
// {0..K-1}^(2p+1), ordered lexicographically by tuple. Unphysical points are
// retained with physical=false.
std::vector<FocalPoint> predict(const std::vector<SphericalPoint>& users, int p);
std::vector<FocalPoint> predict(const std::vector<EffectivePosition>& users, int p);

// Canonical third-order partition with cross-class location deduplication.
struct UniquePoints {
    std::vector<FocalPoint> p1; // diagonal tuples, one per user
    std::vector<FocalPoint> p2; // (p, q, p) patterns, q != p
    std::vector<FocalPoint> p3; // (a, q, v): middle q free, outer pair a < v, both != q
    // Physical points deduplicated by location across all three classes.
    std::vector<FocalPoint> distinct;
};

UniquePoints unique_points(const std::vector<SphericalPoint>& users);

// Theoretical cap on |distinct|: (K^3 - K^2 + 2K) / 2.
long unique_point_bound(int user_count);

// Corollary special cases. Both delegate to predict() after checking the
// shared-coordinate precondition, so outputs match predict() bitwise.
std::vector<FocalPoint> same_elevation_case(const std::vector<SphericalPoint>& users);
std::vector<FocalPoint> same_azimuth_case(const std::vector<SphericalPoint>& users);

struct RisConfig {
    SphericalPoint steer_from; // the profile the RIS conjugates
};

// Effective user position after subtracting the RIS steering phase.
EffectivePosition ris_effective_position(const SphericalPoint& user, const RisConfig& steer);

// Focal points of the reflected distortion: predict() on the effective
// positions, angles negated into the reflected coordinate frame.
std::vector<FocalPoint> ris_focal_points(const std::vector<SphericalPoint>& users,
                                         const RisConfig& steer, int p);

} // namespace nfdist
