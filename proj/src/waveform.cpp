// SPDX-License-Identifier: Apache-2.0
//
// nfdist -- simulation toolkit for nonlinear amplifier distortion radiated
// from large planar antenna arrays and active reflecting surfaces.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "nfdist/waveform.hpp"

#include "nfdist/dft.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace nfdist {

bool OfdmConfig::allocated(int user, int subcarrier) const {
    if (shared())
        return std::find(occupied.begin(), occupied.end(), subcarrier) != occupied.end();
    if (user < 0 || user >= static_cast<int>(allocation.size()))
        return false;
    const auto& band = allocation[user];
    return std::find(band.begin(), band.end(), subcarrier) != band.end();
}

void OfdmConfig::validate(int n_users) const {
    if (n_fft < 1)
        throw std::invalid_argument("ofdm: n_fft must be >= 1");
    std::set<int> occ;
    for (int nu : occupied) {
        if (nu < 0 || nu >= n_fft)
            throw std::invalid_argument("ofdm: occupied subcarrier out of [0, n_fft)");
        if (!occ.insert(nu).second)
            throw std::invalid_argument("ofdm: duplicate occupied subcarrier");
    }
    if (shared())
        return;
    if (static_cast<int>(allocation.size()) != n_users)
        throw std::invalid_argument("ofdm: allocation must list one sub-band per user");
    std::set<int> used;
    for (const auto& band : allocation) {
        for (int nu : band) {
            if (!occ.count(nu))
                throw std::invalid_argument("ofdm: allocation references an unoccupied subcarrier");
            if (!used.insert(nu).second)
                throw std::invalid_argument("ofdm: sub-bands must be disjoint");
        }
    }
}

std::vector<std::vector<int>> contiguous_subbands(const std::vector<int>& occupied, int n_users) {
    if (n_users < 1)
        throw std::invalid_argument("contiguous_subbands: need at least one user");
    const int per_user = static_cast<int>(occupied.size()) / n_users;
    if (per_user < 1)
        throw std::invalid_argument("contiguous_subbands: fewer occupied subcarriers than users");
    std::vector<std::vector<int>> bands(n_users);
    for (int k = 0; k < n_users; ++k)
        bands[k].assign(occupied.begin() + k * per_user, occupied.begin() + (k + 1) * per_user);
    return bands;
}

MatXc mrt_precoder(const MatXc& steering, const VecXc& subcarrier_gains) {
    return steering.conjugate() * subcarrier_gains.conjugate().asDiagonal();
}

MatXc zf_precoder(const MatXc& steering, const VecXc& subcarrier_gains) {
    const MatXc gram = steering.transpose() * steering.conjugate();
    Eigen::JacobiSVD<MatXc> svd(gram);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(smin > smax * 1e-12)) {
        const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
        throw std::runtime_error("zf_precoder: ill-conditioned Gram matrix, condition number " +
                                 std::to_string(cond));
    }
    const MatXc f_gram = subcarrier_gains.asDiagonal() * gram;
    return steering.conjugate() * f_gram.partialPivLu().solve(MatXc::Identity(gram.rows(), gram.cols()));
}

double normalize_power(const std::vector<MatXc>& masked_precoders, double power) {
    if (power <= 0.0)
        throw std::invalid_argument("normalize_power: power budget must be > 0");
    double norm_sq = 0.0;
    for (const MatXc& p : masked_precoders)
        norm_sq += p.squaredNorm();
    if (norm_sq <= 0.0)
        throw std::domain_error("normalize_power: zero-norm precoder set");
    return std::sqrt(power * static_cast<double>(masked_precoders.size()) / norm_sq);
}

double unit_drive_power(const ArrayGeometry& geometry, const OfdmConfig& ofdm) {
    if (ofdm.occupied.empty())
        throw std::invalid_argument("unit_drive_power: no occupied subcarriers");
    return static_cast<double>(ofdm.n_fft) * geometry.size() / ofdm.occupied_count();
}

namespace {

// Zero the columns of users not allocated on this subcarrier.
MatXc mask_columns(MatXc p, const OfdmConfig& ofdm, int subcarrier) {
    if (ofdm.shared())
        return p;
    for (Eigen::Index k = 0; k < p.cols(); ++k)
        if (!ofdm.allocated(static_cast<int>(k), subcarrier))
            p.col(k).setZero();
    return p;
}

} // namespace

TransmitSetup build_elaa_setup(const ArrayGeometry& geometry,
                               const std::vector<UserChannelParams>& users,
                               const OfdmConfig& ofdm, PrecoderKind kind, double power,
                               PhaseMode phase) {
    ofdm.validate(static_cast<int>(users.size()));
    if (ofdm.occupied.empty())
        throw std::invalid_argument("build_elaa_setup: no occupied subcarriers");

    TransmitSetup setup{geometry, ofdm, {}, 1.0, phase};
    setup.precoders.reserve(ofdm.occupied.size());
    for (int nu : ofdm.occupied) {
        const LosChannel ch = los_channel(users, geometry, nu, phase);
        MatXc p = kind == PrecoderKind::Mrt ? mrt_precoder(ch.steering, ch.subcarrier_gains)
                                            : zf_precoder(ch.steering, ch.subcarrier_gains);
        setup.precoders.push_back(mask_columns(std::move(p), ofdm, nu));
    }
    setup.alpha = normalize_power(setup.precoders, power);
    return setup;
}

VecXc ris_phase_profile(const ArrayGeometry& geometry, const RisConfig& ris) {
    return steering_vector(geometry, ris.steer_from).conjugate();
}

TransmitSetup build_ris_setup(const ArrayGeometry& geometry,
                              const std::vector<UserChannelParams>& users,
                              const OfdmConfig& ofdm, const RisConfig& ris) {
    ofdm.validate(static_cast<int>(users.size()));
    if (ofdm.occupied.empty())
        throw std::invalid_argument("build_ris_setup: no occupied subcarriers");

    const VecXc phi = ris_phase_profile(geometry, ris);
    TransmitSetup setup{geometry, ofdm, {}, 1.0};
    setup.precoders.reserve(ofdm.occupied.size());
    for (int nu : ofdm.occupied) {
        const LosChannel ch = los_channel(users, geometry, nu);
        MatXc p = phi.asDiagonal() * (ch.steering * ch.subcarrier_gains.asDiagonal());
        setup.precoders.push_back(mask_columns(std::move(p), ofdm, nu));
    }
    return setup;
}

MatXc draw_symbols(const OfdmConfig& ofdm, int n_users, SymbolKind kind, Rng& rng) {
    const int S = ofdm.occupied_count();
    MatXc symbols = MatXc::Zero(n_users, S);
    for (int i = 0; i < S; ++i) {
        for (int k = 0; k < n_users; ++k) {
            if (!ofdm.allocated(k, ofdm.occupied[i]))
                continue;
            if (kind == SymbolKind::Gaussian) {
                symbols(k, i) = rng.cgaussian();
            } else {
                const auto q = rng.integer(4);
                const double re = (q & 1) ? -1.0 : 1.0;
                const double im = (q & 2) ? -1.0 : 1.0;
                symbols(k, i) = Complex(re, im) / std::sqrt(2.0);
            }
        }
    }
    return symbols;
}

PrecodedFrame synthesize(const TransmitSetup& setup, const MatXc& symbols) {
    const int S = setup.ofdm.occupied_count();
    if (symbols.cols() != S || symbols.rows() != setup.n_users())
        throw std::invalid_argument("synthesize: symbol matrix shape mismatch");

    MatXc freq = MatXc::Zero(setup.antennas(), setup.ofdm.n_fft);
    for (int i = 0; i < S; ++i)
        freq.col(setup.ofdm.occupied[i]) = setup.alpha * (setup.precoders[i] * symbols.col(i));

    PrecodedFrame frame;
    frame.samples = idft_rows(freq);
    frame.symbols = symbols;
    frame.alpha = setup.alpha;
    return frame;
}

} // namespace nfdist
