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

#include "nfdist/radiation.hpp"

#include <string>
#include <vector>

namespace nfdist {

struct RateResult {
    double sum_rate = 0.0; // bits/s/Hz
    MatXd sindr;           // K x |occupied|, -1 on unallocated subcarriers
    double noise_power = 0.0;
};

// gamma_k[nu] = |a_k^T G P_{nu,k}|^2 /
//   (sum_{i != k} |a_k^T G P_{nu,i}|^2 + a_k^T S_dd[nu] a_k* + sigma_n^2)
// with sigma_n^2 = tr(C_yy[0]) / SNR, summed into
// R = (1/S) sum_k sum_nu log2(1 + gamma_k[nu]) over each user's allocation.
RateResult evaluate_rates(const TransmitSetup& setup,
                          const std::vector<UserChannelParams>& users,
                          const PaModel& model, double snr_db);

enum class SchedulePolicy { Unaware, Aware };

struct ClusteredUser {
    SphericalPoint position;
    int cluster = 0;
};

struct ScheduleAssignment {
    std::vector<int> coscheduled;             // selected user indices
    std::vector<int> occupied;                // union of the assigned blocks
    std::vector<std::vector<int>> allocation; // contiguous block per selected user
    SchedulePolicy policy = SchedulePolicy::Unaware;
};

// 12 far-field users in 4 clusters at azimuths (-40, -10, 20, 50) degrees,
// elevation 0, jittered uniformly within +-1.5 degrees.
std::vector<ClusteredUser> default_cluster_geometry(Rng& rng);

// Unaware: co-scheduled users drawn uniformly without replacement. Aware:
// one user per cluster, the combination maximizing the minimum beamspace
// distance between its predicted third-order focal points (P2 and P3) and
// the co-scheduled users. Blocks of block_size subcarriers from index 0.
ScheduleAssignment schedule(const std::vector<ClusteredUser>& users, SchedulePolicy policy,
                            int n_coscheduled, int block_size, Rng& rng);

struct SchedulingCell {
    SchedulePolicy policy = SchedulePolicy::Unaware;
    double evm = 0.0;
    double snr_db = 0.0;
    double sum_rate = 0.0;
    double std_error = 0.0;
    std::vector<double> samples; // per-realization rates, aligned across policies
};

struct SchedulingConfig {
    ArrayGeometry geometry;
    std::vector<double> evms{0.05, 0.10};
    std::vector<double> snrs_db{25.0};
    int n_fft = 128;
    int block_size = 30;
    int n_coscheduled = 4;
    int n_realizations = 20;
};

std::vector<SchedulingCell> scheduling_experiment(const SchedulingConfig& config, Rng& rng);

// CSV rows policy,evm,snr_db,sum_rate,stderr.
void write_rate_csv(const std::vector<SchedulingCell>& cells, const std::string& path);

} // namespace nfdist
