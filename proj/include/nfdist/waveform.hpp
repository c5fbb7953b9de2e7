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

#include "nfdist/focal.hpp"
#include "nfdist/rng.hpp"

#include <string>
#include <vector>

namespace nfdist {

// Subcarrier layout. An empty allocation means all users share every
// occupied subcarrier; otherwise allocation[k] is user k's disjoint sub-band.
struct OfdmConfig {
    int n_fft = 64;
    std::vector<int> occupied;
    std::vector<std::vector<int>> allocation;

    bool shared() const { return allocation.empty(); }
    int occupied_count() const { return static_cast<int>(occupied.size()); }
    bool allocated(int user, int subcarrier) const;
    void validate(int n_users) const; // throws std::invalid_argument
};

// Equal contiguous sub-bands over the occupied set, one per user.
std::vector<std::vector<int>> contiguous_subbands(const std::vector<int>& occupied, int n_users);

enum class PrecoderKind { Mrt, Zf };
enum class SymbolKind { Gaussian, Qpsk };

// Unnormalized MRT precoder A* F*.
MatXc mrt_precoder(const MatXc& steering, const VecXc& subcarrier_gains);

// Unnormalized ZF precoder A* (F A^T A*)^{-1}. Throws when the Gram matrix
// is ill-conditioned (co-located users), reporting the condition number.
MatXc zf_precoder(const MatXc& steering, const VecXc& subcarrier_gains);

// Power normalization alpha = sqrt(P S / sum_nu ||P_nu||_F^2) over the
// allocation-masked precoders. Throws on an all-zero precoder set.
double normalize_power(const std::vector<MatXc>& masked_precoders, double power);

// Average power making the per-antenna, per-sample input power equal to one:
// P = N M / S under the normalization of normalize_power.
double unit_drive_power(const ArrayGeometry& geometry, const OfdmConfig& ofdm);

// Everything needed to synthesize frames: per-occupied-subcarrier precoders
// with unallocated user columns zeroed, and the normalization already chosen.
// The RIS path reuses the same shape with Phi*A columns and alpha = 1.
struct TransmitSetup {
    ArrayGeometry geometry;
    OfdmConfig ofdm;
    std::vector<MatXc> precoders; // per occupied nu, M x K, allocation-masked
    double alpha = 1.0;
    PhaseMode phase = PhaseMode::Exact; // steering model used for the precoders

    int antennas() const { return geometry.size(); }
    int n_users() const { return precoders.empty() ? 0 : static_cast<int>(precoders.front().cols()); }
};

TransmitSetup build_elaa_setup(const ArrayGeometry& geometry,
                               const std::vector<UserChannelParams>& users,
                               const OfdmConfig& ofdm, PrecoderKind kind, double power,
                               PhaseMode phase = PhaseMode::Exact);

// Reflective path: the RIS applies Phi = diag(conj(a(steer_from))) to the
// impinging user signals. No power normalization.
TransmitSetup build_ris_setup(const ArrayGeometry& geometry,
                              const std::vector<UserChannelParams>& users,
                              const OfdmConfig& ofdm, const RisConfig& ris);

// Diagonal of Phi for the configured steering point.
VecXc ris_phase_profile(const ArrayGeometry& geometry, const RisConfig& ris);

struct PrecodedFrame {
    MatXc samples; // M x N time-domain x_m[n]
    MatXc symbols; // K x |S| frequency-domain data
    double alpha = 1.0;
};

// Unit-variance data symbols per occupied subcarrier, zeroed on subcarriers
// outside each user's allocation.
MatXc draw_symbols(const OfdmConfig& ofdm, int n_users, SymbolKind kind, Rng& rng);

// x_n = (1/sqrt(N)) sum_nu alpha P_nu s_nu e^{j nu 2pi n / N}.
PrecodedFrame synthesize(const TransmitSetup& setup, const MatXc& symbols);

} // namespace nfdist
