// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "nfdist/waveform.hpp"

#include <doctest.h>

#include <cmath>

using namespace nfdist;

namespace {

OfdmConfig make_ofdm(int n_fft, int first, int count) {
    OfdmConfig ofdm;
    ofdm.n_fft = n_fft;
    for (int i = 0; i < count; ++i)
        ofdm.occupied.push_back(first + i);
    return ofdm;
}

} // namespace

TEST_CASE("ofdm config validation") {
    OfdmConfig ofdm = make_ofdm(64, 0, 60);
    CHECK_NOTHROW(ofdm.validate(3));
    CHECK(ofdm.shared());
    CHECK(ofdm.allocated(2, 59));
    CHECK(!ofdm.allocated(2, 63));

    ofdm.allocation = contiguous_subbands(ofdm.occupied, 3);
    CHECK_NOTHROW(ofdm.validate(3));
    CHECK(ofdm.allocation[0].size() == 20);
    CHECK(ofdm.allocated(1, 20));
    CHECK(!ofdm.allocated(0, 20));
    CHECK_THROWS_AS(ofdm.validate(2), std::invalid_argument);

    ofdm.allocation[1][0] = ofdm.allocation[0][0]; // overlap
    CHECK_THROWS_AS(ofdm.validate(3), std::invalid_argument);

    OfdmConfig bad = make_ofdm(64, 60, 8); // runs past n_fft
    CHECK_THROWS_AS(bad.validate(1), std::invalid_argument);

    CHECK_THROWS_AS(contiguous_subbands({1, 2}, 3), std::invalid_argument);
}

TEST_CASE("mrt precoder is the conjugate channel") {
    const ArrayGeometry geom = ArrayGeometry::half_wavelength_upa(4, 0.1);
    const std::vector<UserChannelParams> users{
        {SphericalPoint::far_field(deg2rad(-30.0), 0.0)},
        {SphericalPoint::far_field(deg2rad(30.0), 0.0), Complex(0.0, 2.0)},
    };
    const LosChannel ch = los_channel(users, geom, 1);
    const MatXc p = mrt_precoder(ch.steering, ch.subcarrier_gains);
    CHECK((p.col(0) - ch.steering.col(0).conjugate()).norm() < 1e-12);
    CHECK(p.col(0).norm() == doctest::Approx(4.0)); // sqrt(M) |g|
    CHECK(p.col(1).norm() == doctest::Approx(8.0));
}

TEST_CASE("zf precoder inverts the channel") {
    const ArrayGeometry geom = ArrayGeometry::half_wavelength_upa(8, 0.1);
    const std::vector<UserChannelParams> users{
        {SphericalPoint::far_field(deg2rad(-40.0), 0.0), Complex(0.8, 0.1)},
        {SphericalPoint::far_field(deg2rad(-10.0), 0.0)},
        {SphericalPoint::far_field(deg2rad(20.0), 0.0), Complex(0.0, 1.0), 0.1},
    };
    const LosChannel ch = los_channel(users, geom, 3);
    const MatXc p = zf_precoder(ch.steering, ch.subcarrier_gains);
    const MatXc h_t = ch.subcarrier_gains.asDiagonal() * ch.steering.transpose();
    CHECK((h_t * p - MatXc::Identity(3, 3)).norm() < 1e-9 * std::sqrt(3.0));

    SUBCASE("single user reduces to scaled MRT") {
        const LosChannel one = los_channel({users[1]}, geom, 0);
        const MatXc pz = zf_precoder(one.steering, one.subcarrier_gains);
        const MatXc pm = mrt_precoder(one.steering, one.subcarrier_gains);
        const Complex ratio = pz(0, 0) / pm(0, 0);
        CHECK((pz - ratio * pm).norm() < 1e-12 * pz.norm());
    }

    SUBCASE("co-located users are rejected") {
        const std::vector<UserChannelParams> twins{users[0], users[0]};
        const LosChannel bad = los_channel(twins, geom, 0);
        CHECK_THROWS_AS(zf_precoder(bad.steering, bad.subcarrier_gains), std::runtime_error);
    }
}

TEST_CASE("power normalization") {
    CHECK(normalize_power({MatXc::Ones(1, 1)}, 1.0) == doctest::Approx(1.0));
    CHECK(normalize_power({MatXc::Ones(1, 1)}, 2.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(normalize_power({MatXc::Zero(2, 2)}, 1.0), std::domain_error);
    CHECK_THROWS_AS(normalize_power({MatXc::Ones(1, 1)}, 0.0), std::invalid_argument);

    // MRT, M=16, K=1, S=64, P=1: per-subcarrier Frobenius norm^2 = M
    const ArrayGeometry geom = ArrayGeometry::half_wavelength_upa(4, 0.1);
    const OfdmConfig ofdm = make_ofdm(64, 0, 64);
    const std::vector<UserChannelParams> users{{SphericalPoint::far_field(deg2rad(5.0), 0.0)}};
    const TransmitSetup setup = build_elaa_setup(geom, users, ofdm, PrecoderKind::Mrt, 1.0);
    CHECK(setup.alpha == doctest::Approx(0.25));
}

TEST_CASE("unit drive power yields unit per-antenna input power") {
    const ArrayGeometry geom = ArrayGeometry::half_wavelength_upa(10, 0.1);
    OfdmConfig ofdm = make_ofdm(64, 0, 60);
    ofdm.allocation = contiguous_subbands(ofdm.occupied, 2);
    const std::vector<UserChannelParams> users{
        {SphericalPoint::far_field(deg2rad(-15.0), 0.0)},
        {SphericalPoint::far_field(deg2rad(25.0), 0.0)},
    };
    const double power = unit_drive_power(geom, ofdm);
    CHECK(power == doctest::Approx(64.0 * 100.0 / 60.0));

    const TransmitSetup setup = build_elaa_setup(geom, users, ofdm, PrecoderKind::Mrt, power);
    Rng rng(17);
    double acc = 0.0;
    const int frames = 200;
    for (int f = 0; f < frames; ++f) {
        const MatXc symbols = draw_symbols(ofdm, 2, SymbolKind::Gaussian, rng);
        const PrecodedFrame frame = synthesize(setup, symbols);
        acc += frame.samples.cwiseAbs2().mean();
    }
    CHECK(acc / frames == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("synthesis") {
    SUBCASE("single occupied tone") {
        TransmitSetup setup;
        setup.geometry = ArrayGeometry(1, 1, 0.05, 0.05, 0.1);
        setup.ofdm.n_fft = 8;
        setup.ofdm.occupied = {2};
        setup.precoders = {MatXc::Ones(1, 1)};
        const MatXc symbols = MatXc::Ones(1, 1);
        const PrecodedFrame frame = synthesize(setup, symbols);
        const double scale = 1.0 / std::sqrt(8.0);
        for (int n = 0; n < 8; ++n) {
            const Complex expected = scale * std::polar(1.0, 2.0 * pi * 2.0 * n / 8.0);
            CHECK(std::abs(frame.samples(0, n) - expected) < 1e-12);
        }
    }

    SUBCASE("parseval energy identity") {
        const ArrayGeometry geom = ArrayGeometry::half_wavelength_upa(3, 0.1);
        OfdmConfig ofdm = make_ofdm(16, 1, 12);
        const std::vector<UserChannelParams> users{
            {SphericalPoint::far_field(deg2rad(10.0), deg2rad(4.0))},
            {SphericalPoint::far_field(deg2rad(-20.0), 0.0)},
        };
        const TransmitSetup setup = build_elaa_setup(geom, users, ofdm, PrecoderKind::Zf, 3.0);
        Rng rng(5);
        const MatXc symbols = draw_symbols(ofdm, 2, SymbolKind::Qpsk, rng);
        const PrecodedFrame frame = synthesize(setup, symbols);
        double freq_energy = 0.0;
        for (int i = 0; i < ofdm.occupied_count(); ++i)
            freq_energy += (setup.alpha * setup.precoders[i] * symbols.col(i)).squaredNorm();
        CHECK(frame.samples.squaredNorm() == doctest::Approx(freq_energy));
    }

    SUBCASE("shape mismatch is rejected") {
        TransmitSetup setup;
        setup.geometry = ArrayGeometry(1, 1, 0.05, 0.05, 0.1);
        setup.ofdm.n_fft = 8;
        setup.ofdm.occupied = {2};
        setup.precoders = {MatXc::Ones(1, 1)};
        CHECK_THROWS_AS(synthesize(setup, MatXc::Ones(1, 2)), std::invalid_argument);
    }
}

TEST_CASE("symbol draws respect the allocation and the seed") {
    OfdmConfig ofdm = make_ofdm(16, 0, 12);
    ofdm.allocation = contiguous_subbands(ofdm.occupied, 3);

    Rng rng_a(99), rng_b(99);
    const MatXc a = draw_symbols(ofdm, 3, SymbolKind::Gaussian, rng_a);
    const MatXc b = draw_symbols(ofdm, 3, SymbolKind::Gaussian, rng_b);
    CHECK((a - b).norm() == 0.0); // same stream, same symbols

    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < ofdm.occupied_count(); ++i) {
            const bool mine = ofdm.allocated(k, ofdm.occupied[i]);
            CHECK((std::abs(a(k, i)) > 0.0) == mine);
        }

    Rng rng_q(1);
    const MatXc q = draw_symbols(ofdm, 3, SymbolKind::Qpsk, rng_q);
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < ofdm.occupied_count(); ++i)
            if (ofdm.allocated(k, ofdm.occupied[i]))
                CHECK(std::abs(q(k, i)) == doctest::Approx(1.0));
}

TEST_CASE("ris setup conjugates the steered profile") {
    const ArrayGeometry geom = ArrayGeometry::half_wavelength_upa(6, 0.1);
    const std::vector<UserChannelParams> users{
        {SphericalPoint::far_field(deg2rad(14.0), deg2rad(1.0))},
        {SphericalPoint::far_field(deg2rad(8.0), deg2rad(18.0))},
    };
    OfdmConfig ofdm = make_ofdm(64, 0, 60);
    ofdm.allocation = contiguous_subbands(ofdm.occupied, 2);

    const RisConfig ris{users[0].position};
    const TransmitSetup setup = build_ris_setup(geom, users, ofdm, ris);
    CHECK(setup.alpha == 1.0);

    // steering at user 0 flattens its column to all ones
    const MatXc& p0 = setup.precoders[0]; // subcarrier 0, user 0 allocated
    CHECK((p0.col(0) - VecXc::Ones(geom.size())).norm() < 1e-9);
    CHECK(p0.col(1).norm() == 0.0); // masked: user 1 owns the upper band
}
