// SPDX-License-Identifier: Apache-2.0
//
// nfdist -- simulation toolkit for nonlinear amplifier distortion radiated
// from large planar antenna arrays and active reflecting surfaces.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "nfdist/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace nfdist {

RateResult evaluate_rates(const TransmitSetup& setup,
                          const std::vector<UserChannelParams>& users,
                          const PaModel& model, double snr_db) {
    const int K = static_cast<int>(users.size());
    const int S = setup.ofdm.occupied_count();
    if (setup.n_users() != K)
        throw std::invalid_argument("evaluate_rates: user list does not match the setup");

    const SpectralDensity density = analytic_spectra(setup, model);
    const VecXc gains = bussgang_gain(model, input_power_per_antenna(setup));

    // rho = tr(C_yy[0]) = (1/N) sum_nu tr(S_yy[nu])
    double rho = 0.0;
    for (int nu = 0; nu < density.n_fft; ++nu)
        rho += density.s_uu[nu].trace().real() + density.s_dd[nu].trace().real();
    rho /= density.n_fft;
    const double sigma2 = rho / std::pow(10.0, snr_db / 10.0);

    RateResult result;
    result.noise_power = sigma2;
    result.sindr = MatXd::Constant(K, S, -1.0);

    MatXc a(setup.antennas(), K); // exact steering per user
    for (int k = 0; k < K; ++k)
        a.col(k) = steering_vector(setup.geometry, users[k].position);
    const MatXc ag = gains.asDiagonal() * a; // column k = G a_k

    double rate = 0.0;
    for (int i = 0; i < S; ++i) {
        const int nu = setup.ofdm.occupied[i];
        const MatXc p = setup.alpha * setup.precoders[i];
        const MatXc reach = ag.transpose() * p; // (k, j) = a_k^T G P_{nu, j}
        for (int k = 0; k < K; ++k) {
            if (!setup.ofdm.allocated(k, nu))
                continue;
            const double signal = std::norm(reach(k, k));
            double interference = 0.0;
            for (int j = 0; j < K; ++j)
                if (j != k)
                    interference += std::norm(reach(k, j));
            const double distortion = std::max(
                0.0, (a.col(k).transpose() * density.s_dd[nu] * a.col(k).conjugate())(0).real());
            const double gamma = signal / (interference + distortion + sigma2);
            result.sindr(k, i) = gamma;
            rate += std::log2(1.0 + gamma);
        }
    }
    result.sum_rate = rate / S;
    return result;
}

std::vector<ClusteredUser> default_cluster_geometry(Rng& rng) {
    const double centers_deg[] = {-40.0, -10.0, 20.0, 50.0};
    std::vector<ClusteredUser> users;
    for (int c = 0; c < 4; ++c) {
        for (int u = 0; u < 3; ++u) {
            const double jitter = (2.0 * rng.uniform() - 1.0) * 1.5;
            users.push_back(
                {SphericalPoint::far_field(deg2rad(centers_deg[c] + jitter), 0.0), c});
        }
    }
    return users;
}

namespace {

// Distance in beamspace coordinates (sin(az) cos(el), sin(el)).
double beamspace_distance(double az1, double el1, double az2, double el2) {
    const double dx = std::sin(az1) * std::cos(el1) - std::sin(az2) * std::cos(el2);
    const double dy = std::sin(el1) - std::sin(el2);
    return std::hypot(dx, dy);
}

std::vector<std::vector<int>> group_by_cluster(const std::vector<ClusteredUser>& users) {
    std::map<int, std::vector<int>> groups;
    for (size_t i = 0; i < users.size(); ++i)
        groups[users[i].cluster].push_back(static_cast<int>(i));
    std::vector<std::vector<int>> out;
    for (auto& [label, members] : groups)
        out.push_back(std::move(members));
    return out;
}

// Minimum distance from any physical P2/P3 focal point of the candidate set
// to any candidate user location.
double aware_objective(const std::vector<ClusteredUser>& users, const std::vector<int>& combo) {
    std::vector<SphericalPoint> positions;
    positions.reserve(combo.size());
    for (int idx : combo)
        positions.push_back(users[idx].position);
    const UniquePoints up = unique_points(positions);

    double min_dist = std::numeric_limits<double>::infinity();
    auto visit = [&](const std::vector<FocalPoint>& points) {
        for (const FocalPoint& f : points) {
            if (!f.physical)
                continue;
            for (const SphericalPoint& u : positions)
                min_dist = std::min(min_dist, beamspace_distance(f.azimuth, f.elevation,
                                                                 u.azimuth(), u.elevation()));
        }
    };
    visit(up.p2);
    visit(up.p3);
    return min_dist;
}

} // namespace

ScheduleAssignment schedule(const std::vector<ClusteredUser>& users, SchedulePolicy policy,
                            int n_coscheduled, int block_size, Rng& rng) {
    const int n = static_cast<int>(users.size());
    if (n_coscheduled < 1 || n_coscheduled > n)
        throw std::invalid_argument("schedule: co-schedule count out of range");
    if (block_size < 1)
        throw std::invalid_argument("schedule: block size must be >= 1");

    ScheduleAssignment out;
    out.policy = policy;

    if (policy == SchedulePolicy::Unaware) {
        std::vector<int> pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = 0; i < n_coscheduled; ++i) {
            const int j = i + static_cast<int>(rng.integer(static_cast<std::uint64_t>(n - i)));
            std::swap(pool[i], pool[j]);
            out.coscheduled.push_back(pool[i]);
        }
    } else {
        const auto groups = group_by_cluster(users);
        if (static_cast<int>(groups.size()) < n_coscheduled)
            throw std::invalid_argument("schedule: fewer clusters than the co-schedule count");

        std::vector<int> combo(n_coscheduled, 0), best;
        double best_score = -1.0;
        bool done = false;
        while (!done) {
            std::vector<int> candidate;
            for (int c = 0; c < n_coscheduled; ++c)
                candidate.push_back(groups[c][combo[c]]);
            const double score = aware_objective(users, candidate);
            if (score > best_score) {
                best_score = score;
                best = candidate;
            }
            done = true;
            for (int c = n_coscheduled - 1; c >= 0; --c) {
                if (++combo[c] < static_cast<int>(groups[c].size())) {
                    done = false;
                    break;
                }
                combo[c] = 0;
            }
        }
        out.coscheduled = best;
    }

    for (int j = 0; j < n_coscheduled; ++j) {
        std::vector<int> block(block_size);
        std::iota(block.begin(), block.end(), j * block_size);
        out.occupied.insert(out.occupied.end(), block.begin(), block.end());
        out.allocation.push_back(std::move(block));
    }
    return out;
}

std::vector<SchedulingCell> scheduling_experiment(const SchedulingConfig& config, Rng& rng) {
    if (config.n_realizations < 1)
        throw std::invalid_argument("scheduling_experiment: need at least one realization");
    if (config.n_coscheduled * config.block_size > config.n_fft)
        throw std::invalid_argument("scheduling_experiment: blocks exceed the FFT size");

    const SchedulePolicy policies[] = {SchedulePolicy::Unaware, SchedulePolicy::Aware};
    std::vector<SchedulingCell> cells;
    for (SchedulePolicy policy : policies)
        for (double evm : config.evms)
            for (double snr : config.snrs_db)
                cells.push_back({policy, evm, snr, 0.0, 0.0, {}});

    for (int r = 0; r < config.n_realizations; ++r) {
        Rng realization = rng.substream(static_cast<std::uint64_t>(r));
        Rng geometry_stream = realization.substream(0);
        Rng schedule_stream = realization.substream(1);
        const std::vector<ClusteredUser> population = default_cluster_geometry(geometry_stream);

        for (SchedulePolicy policy : policies) {
            const ScheduleAssignment assignment = schedule(
                population, policy, config.n_coscheduled, config.block_size, schedule_stream);

            std::vector<UserChannelParams> users;
            for (int idx : assignment.coscheduled)
                users.push_back({population[idx].position, Complex(1.0, 0.0), 0.0});

            OfdmConfig ofdm;
            ofdm.n_fft = config.n_fft;
            ofdm.occupied = assignment.occupied;
            ofdm.allocation = assignment.allocation;

            const TransmitSetup setup =
                build_elaa_setup(config.geometry, users, ofdm, PrecoderKind::Mrt,
                                 unit_drive_power(config.geometry, ofdm));

            for (double evm : config.evms) {
                const PaModel model = calibrate_evm(evm);
                for (double snr : config.snrs_db) {
                    const double rate = evaluate_rates(setup, users, model, snr).sum_rate;
                    for (SchedulingCell& cell : cells)
                        if (cell.policy == policy && cell.evm == evm && cell.snr_db == snr)
                            cell.samples.push_back(rate);
                }
            }
        }
    }

    for (SchedulingCell& cell : cells) {
        const double n = static_cast<double>(cell.samples.size());
        const double mean =
            std::accumulate(cell.samples.begin(), cell.samples.end(), 0.0) / n;
        double var = 0.0;
        for (double s : cell.samples)
            var += (s - mean) * (s - mean);
        cell.sum_rate = mean;
        cell.std_error = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
    }
    return cells;
}

void write_rate_csv(const std::vector<SchedulingCell>& cells, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_rate_csv: cannot open " + path);
    out.precision(10);
    out << "policy,evm,snr_db,sum_rate,stderr\n";
    for (const SchedulingCell& cell : cells)
        out << (cell.policy == SchedulePolicy::Aware ? "aware" : "unaware") << ',' << cell.evm
            << ',' << cell.snr_db << ',' << cell.sum_rate << ',' << cell.std_error << '\n';
}

} // namespace nfdist
