// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "nfdist/channel.hpp"

#include <doctest.h>

#include <cmath>

using namespace nfdist;

namespace {
const ArrayGeometry kUpa20 = ArrayGeometry::half_wavelength_upa(20, 0.1);
}

TEST_CASE("exact relative phase") {
    const SphericalPoint broadside(0.0, 0.0, 20.0);
    CHECK(exact_relative_phase(kUpa20, 0, broadside) == 0.0);

    // element 20 sits at (k_y, k_z) = (0.05, 0)
    const double expected = 20.0 - std::sqrt(20.0 * 20.0 + 0.05 * 0.05);
    CHECK(exact_relative_phase(kUpa20, 20, broadside) == doctest::Approx(expected));
    CHECK(exact_relative_phase(kUpa20, 20, broadside) == doctest::Approx(-6.25e-5).epsilon(1e-3));

    CHECK_THROWS_AS(exact_relative_phase(kUpa20, 0, SphericalPoint::far_field(0.1, 0.2)),
                    std::domain_error);
}

TEST_CASE("fresnel relative phase") {
    const double r = 15.0;
    const SphericalPoint broadside(0.0, 0.0, r);
    for (int m : {0, 1, 20, 399}) {
        const Eigen::Vector2d pos = element_position(kUpa20, m);
        CHECK(fresnel_relative_phase(kUpa20, m, broadside) ==
              doctest::Approx(-(pos(0) * pos(0) + pos(1) * pos(1)) / (2.0 * r)));
    }

    const SphericalPoint ff = SphericalPoint::far_field(deg2rad(25.0), deg2rad(-10.0));
    const Eigen::Vector2d pos = element_position(kUpa20, 37);
    const double expected = pos(1) * std::sin(ff.elevation()) +
                            pos(0) * std::sin(ff.azimuth()) * std::cos(ff.elevation());
    CHECK(fresnel_relative_phase(kUpa20, 37, ff) == doctest::Approx(expected));
}

TEST_CASE("array response is unit modulus with unit reference element") {
    const SphericalPoint p(deg2rad(12.0), deg2rad(-3.0), 8.0);
    const VecXc a = array_response(kUpa20, p, PhaseMode::Exact);
    CHECK(a(0) == Complex(1.0, 0.0));
    for (int m = 0; m < kUpa20.size(); ++m)
        CHECK(std::abs(a(m)) == doctest::Approx(1.0));
    CHECK(a.norm() == doctest::Approx(std::sqrt(double(kUpa20.size()))));
}

TEST_CASE("exact response converges to the far-field response") {
    const double far = 1e6 * field_boundaries(kUpa20).d_fa;
    const SphericalPoint near(deg2rad(30.0), deg2rad(10.0), far);
    const SphericalPoint ff = SphericalPoint::far_field(deg2rad(30.0), deg2rad(10.0));
    const VecXc exact = array_response(kUpa20, near, PhaseMode::Exact);
    const VecXc plane = array_response(kUpa20, ff, PhaseMode::Fresnel);
    double worst = 0.0;
    for (int m = 0; m < kUpa20.size(); ++m)
        worst = std::max(worst, std::abs(std::arg(exact(m) * std::conj(plane(m)))));
    CHECK(worst < 1e-3);
}

TEST_CASE("los channel columns") {
    std::vector<UserChannelParams> users{
        {SphericalPoint::far_field(deg2rad(2.0), 0.0)},
        {SphericalPoint::far_field(deg2rad(20.0), 0.0)},
        {SphericalPoint::far_field(deg2rad(35.0), 0.0)},
    };

    SUBCASE("unit gain, zero delay reproduces the steering vectors") {
        const LosChannel ch = los_channel(users, kUpa20, 7);
        for (int k = 0; k < 3; ++k) {
            const VecXc a = steering_vector(kUpa20, users[k].position);
            CHECK((ch.matrix().col(k) - a).norm() == doctest::Approx(0.0));
        }
    }

    SUBCASE("delay phase wraps at integer products") {
        users[1].delay = 0.5;
        const LosChannel ch = los_channel(users, kUpa20, 2); // e^{-j 2 pi} = 1
        const VecXc a = steering_vector(kUpa20, users[1].position);
        CHECK((ch.matrix().col(1) - a).norm() < 1e-9);
    }

    SUBCASE("distinct users are not collinear") {
        const LosChannel ch = los_channel(users, kUpa20, 0);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                const double coh = std::abs(ch.steering.col(i).dot(ch.steering.col(j))) /
                                   double(kUpa20.size());
                CHECK(coh < 1.0);
            }
    }
}

TEST_CASE("fresnel error shrinks with range") {
    const FresnelError e6 = fresnel_error(kUpa20, SphericalPoint(deg2rad(20.0), 0.0, 6.0));
    const FresnelError e36 = fresnel_error(kUpa20, SphericalPoint(deg2rad(20.0), 0.0, 36.1));
    CHECK(e36.meters < e6.meters);
    CHECK(e6.radians == doctest::Approx(e6.meters * kUpa20.wavenumber()));
    CHECK(fresnel_validity_radius(kUpa20) > 0.0);
    CHECK(fresnel_validity_radius(kUpa20) < field_boundaries(kUpa20).d_fa);
}
