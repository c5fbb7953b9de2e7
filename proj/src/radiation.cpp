// SPDX-License-Identifier: Apache-2.0
//
// nfdist -- simulation toolkit for nonlinear amplifier distortion radiated
// from large planar antenna arrays and active reflecting surfaces.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "nfdist/radiation.hpp"

#include "nfdist/dft.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace nfdist {

VecXd input_power_per_antenna(const TransmitSetup& setup) {
    VecXd power = VecXd::Zero(setup.antennas());
    for (const MatXc& p : setup.precoders)
        power += p.cwiseAbs2().rowwise().sum();
    return power * (setup.alpha * setup.alpha / setup.ofdm.n_fft);
}

SpectralDensity analytic_spectra(const TransmitSetup& setup, const PaModel& model) {
    if (!model.memoryless_third_order())
        throw std::domain_error(
            "analytic_spectra: closed form covers memoryless third-order models only; "
            "use the ensemble route for memory polynomials");
    const int M = setup.antennas();
    const int N = setup.ofdm.n_fft;
    if (static_cast<double>(M) * M * N > 2.5e8)
        throw std::domain_error(
            "analytic_spectra: dense M x M x N storage infeasible at this array size; "
            "use the ensemble route");

    std::vector<MatXc> s_xx(N, MatXc::Zero(M, M));
    const double a2 = setup.alpha * setup.alpha;
    for (int i = 0; i < setup.ofdm.occupied_count(); ++i) {
        const MatXc& p = setup.precoders[i];
        s_xx[setup.ofdm.occupied[i]] = a2 * (p * p.adjoint());
    }

    std::vector<MatXc> c_xx = stack_dft(s_xx, +1);
    for (MatXc& c : c_xx)
        c /= static_cast<double>(N);

    const std::vector<MatXc> c_yy = output_covariance(model, c_xx);
    const VecXc g = bussgang_gain(model, c_xx.front().diagonal().real());
    std::vector<MatXc> c_dd(N);
    for (int t = 0; t < N; ++t)
        c_dd[t] = c_yy[t] - g.asDiagonal() * c_xx[t] * g.conjugate().asDiagonal();

    SpectralDensity density;
    density.n_fft = N;
    density.s_dd = stack_dft(c_dd, -1);
    density.s_uu.reserve(N);
    for (int nu = 0; nu < N; ++nu)
        density.s_uu.push_back(g.asDiagonal() * s_xx[nu] * g.conjugate().asDiagonal());
    return density;
}

SpectralDensity spectra_from_decomposition(const BussgangDecomposition& decomposition, int n_fft) {
    if (static_cast<int>(decomposition.c_xx.size()) != n_fft)
        throw std::invalid_argument(
            "spectra_from_decomposition: lag window must span the full frame");
    const auto& g = decomposition.gains;
    std::vector<MatXc> c_uu(n_fft);
    for (int t = 0; t < n_fft; ++t)
        c_uu[t] = g.asDiagonal() * decomposition.c_xx[t] * g.conjugate().asDiagonal();
    SpectralDensity density;
    density.n_fft = n_fft;
    density.s_uu = stack_dft(c_uu, -1);
    density.s_dd = stack_dft(decomposition.c_dd, -1);
    return density;
}

namespace {

bool is_spatial(AxisKind kind) { return kind != AxisKind::Subcarrier; }

// Flattened evaluation layout: a list of spatial points (row-major over the
// spatial axes) and a list of subcarriers (or the whole band, summed).
struct ScanLayout {
    std::vector<SphericalPoint> points;
    std::vector<int> subcarriers; // empty => sum over the full band
    bool axis1_spatial = true;
    bool axis2_spatial = false;
    int n1 = 0, n2 = 1;
};

SphericalPoint make_point(double az, double el, double range, bool far_field) {
    if (far_field)
        return SphericalPoint::far_field(az, el);
    return SphericalPoint(az, el, range);
}

ScanLayout resolve_layout(const ScanSpec& spec, int n_fft, std::vector<std::string>& warnings,
                          const ArrayGeometry& geometry) {
    ScanLayout layout;
    layout.n1 = static_cast<int>(spec.axis1.grid.size());
    layout.n2 = spec.axis2 ? static_cast<int>(spec.axis2->grid.size()) : 1;
    if (layout.n1 < 1 || layout.n2 < 1)
        throw std::invalid_argument("scan: empty axis grid");
    layout.axis1_spatial = is_spatial(spec.axis1.kind);
    layout.axis2_spatial = spec.axis2 && is_spatial(spec.axis2->kind);
    if (!layout.axis1_spatial && spec.axis2 && !layout.axis2_spatial)
        throw std::invalid_argument("scan: at most one subcarrier axis is supported");

    const ScanAxis* sub_axis = nullptr;
    if (!layout.axis1_spatial)
        sub_axis = &spec.axis1;
    else if (spec.axis2 && !layout.axis2_spatial)
        sub_axis = &*spec.axis2;

    if (sub_axis) {
        for (Eigen::Index i = 0; i < sub_axis->grid.size(); ++i) {
            const int nu = static_cast<int>(std::lround(sub_axis->grid(i)));
            if (nu < 0 || nu >= n_fft)
                throw std::invalid_argument("scan: subcarrier axis value out of [0, n_fft)");
            layout.subcarriers.push_back(nu);
        }
    } else if (spec.subcarrier >= 0) {
        if (spec.subcarrier >= n_fft)
            throw std::invalid_argument("scan: fixed subcarrier out of [0, n_fft)");
        layout.subcarriers.push_back(spec.subcarrier);
    }

    auto apply = [](SphericalPoint base, AxisKind kind, double v) {
        switch (kind) {
        case AxisKind::Azimuth:
            return base.is_far_field() ? SphericalPoint::far_field(v, base.elevation())
                                       : SphericalPoint(v, base.elevation(), base.range());
        case AxisKind::Elevation:
            return base.is_far_field() ? SphericalPoint::far_field(base.azimuth(), v)
                                       : SphericalPoint(base.azimuth(), v, base.range());
        case AxisKind::Range:
            return SphericalPoint(base.azimuth(), base.elevation(), v);
        default:
            return base;
        }
    };

    const SphericalPoint base =
        make_point(spec.azimuth, spec.elevation, spec.range, spec.far_field);
    if (layout.axis1_spatial && layout.axis2_spatial) {
        for (int i = 0; i < layout.n1; ++i) {
            const SphericalPoint row = apply(base, spec.axis1.kind, spec.axis1.grid(i));
            for (int j = 0; j < layout.n2; ++j)
                layout.points.push_back(apply(row, spec.axis2->kind, spec.axis2->grid(j)));
        }
    } else if (layout.axis1_spatial) {
        for (int i = 0; i < layout.n1; ++i)
            layout.points.push_back(apply(base, spec.axis1.kind, spec.axis1.grid(i)));
    } else if (layout.axis2_spatial) {
        for (int j = 0; j < layout.n2; ++j)
            layout.points.push_back(apply(base, spec.axis2->kind, spec.axis2->grid(j)));
    } else {
        layout.points.push_back(base);
    }

    const double d_b = field_boundaries(geometry).d_b;
    for (const SphericalPoint& pt : layout.points) {
        if (!pt.is_far_field() && pt.range() < d_b) {
            warnings.push_back("scan range below d_B = " + std::to_string(d_b) +
                               " m; phase-only model validity is reduced");
            break;
        }
    }
    return layout;
}

// Rows are a^T for every spatial point.
MatXc steering_rows(const std::vector<SphericalPoint>& points, const ArrayGeometry& geometry,
                    PhaseMode mode) {
    MatXc a(points.size(), geometry.size());
    for (size_t i = 0; i < points.size(); ++i)
        a.row(i) = steering_vector(geometry, points[i], mode).transpose();
    return a;
}

// Reshape per-(point, subcarrier) values into the axis1 x axis2 field matrix.
MatXd assemble(const ScanLayout& layout, const MatXd& vals, bool band_summed) {
    MatXd out(layout.n1, layout.n2);
    for (int i = 0; i < layout.n1; ++i) {
        for (int j = 0; j < layout.n2; ++j) {
            int pt = 0, nu = 0;
            if (layout.axis1_spatial && layout.axis2_spatial)
                pt = i * layout.n2 + j;
            else if (layout.axis1_spatial) {
                pt = i;
                nu = j;
            } else if (layout.axis2_spatial) {
                pt = j;
                nu = i;
            } else {
                nu = layout.axis1_spatial ? j : i;
            }
            out(i, j) = vals(pt, band_summed ? 0 : nu);
        }
    }
    return out;
}

} // namespace

SpectralField scan(const ScanSpec& spec, const SpectralDensity& density,
                   const ArrayGeometry& geometry) {
    SpectralField field;
    field.spec = spec;
    const ScanLayout layout = resolve_layout(spec, density.n_fft, field.warnings, geometry);
    const MatXc a = steering_rows(layout.points, geometry, spec.phase);
    const Eigen::Index pts = a.rows();

    std::vector<int> nus = layout.subcarriers;
    const bool band_summed = nus.empty();
    if (nus.empty()) {
        nus.resize(density.n_fft);
        std::iota(nus.begin(), nus.end(), 0);
    }

    const Eigen::Index cols = band_summed ? 1 : static_cast<Eigen::Index>(nus.size());
    MatXd lin = MatXd::Zero(pts, cols);
    MatXd dist = MatXd::Zero(pts, cols);
    for (size_t idx = 0; idx < nus.size(); ++idx) {
        const Eigen::Index col = band_summed ? 0 : static_cast<Eigen::Index>(idx);
        const int nu = nus[idx];
        const MatXc bu = a * density.s_uu[nu];
        const MatXc bd = a * density.s_dd[nu];
        lin.col(col) += (bu.cwiseProduct(a.conjugate())).rowwise().sum().real().cwiseMax(0.0);
        dist.col(col) += (bd.cwiseProduct(a.conjugate())).rowwise().sum().real().cwiseMax(0.0);
    }

    field.linear = assemble(layout, lin, band_summed);
    field.distortion = assemble(layout, dist, band_summed);
    field.total = field.linear + field.distortion;
    return field;
}

SpectralField ensemble_scan(const ScanSpec& spec, const TransmitSetup& setup,
                            const PaModel& model, int n_frames, SymbolKind kind, Rng& rng) {
    if (n_frames < 1)
        throw std::invalid_argument("ensemble_scan: need at least one frame");

    SpectralField field;
    field.spec = spec;
    const ScanLayout layout =
        resolve_layout(spec, setup.ofdm.n_fft, field.warnings, setup.geometry);
    const MatXc a = steering_rows(layout.points, setup.geometry, spec.phase);
    const Eigen::Index pts = a.rows();
    const int N = setup.ofdm.n_fft;

    VecXc gains;
    if (model.memoryless_third_order()) {
        gains = bussgang_gain(model, input_power_per_antenna(setup));
    } else {
        // Memory models have no closed-form gain; regress over the same
        // deterministic substreams the averaging pass will replay.
        VecXc num = VecXc::Zero(setup.antennas());
        VecXd den = VecXd::Zero(setup.antennas());
        for (int f = 0; f < n_frames; ++f) {
            Rng stream = rng.substream(static_cast<std::uint64_t>(f));
            const MatXc symbols = draw_symbols(setup.ofdm, setup.n_users(), kind, stream);
            const PrecodedFrame frame = synthesize(setup, symbols);
            const MatXc y = apply_pa(model, frame.samples);
            num += (y.cwiseProduct(frame.samples.conjugate())).rowwise().sum();
            den += frame.samples.cwiseAbs2().rowwise().sum();
        }
        gains = num.cwiseQuotient(den.cast<Complex>());
    }

    MatXd acc_uu = MatXd::Zero(pts, N);
    MatXd acc_dd = MatXd::Zero(pts, N);
    for (int f = 0; f < n_frames; ++f) {
        Rng stream = rng.substream(static_cast<std::uint64_t>(f));
        const MatXc symbols = draw_symbols(setup.ofdm, setup.n_users(), kind, stream);
        const PrecodedFrame frame = synthesize(setup, symbols);
        const MatXc y = apply_pa(model, frame.samples);
        const MatXc u = gains.asDiagonal() * frame.samples;
        acc_uu += (a * dft_rows(u)).cwiseAbs2();
        acc_dd += (a * dft_rows(y - u)).cwiseAbs2();
    }
    acc_uu /= static_cast<double>(n_frames);
    acc_dd /= static_cast<double>(n_frames);

    std::vector<int> nus = layout.subcarriers;
    const bool band_summed = nus.empty();
    MatXd lin, dist;
    if (band_summed) {
        lin = acc_uu.rowwise().sum();
        dist = acc_dd.rowwise().sum();
    } else {
        lin.resize(pts, static_cast<Eigen::Index>(nus.size()));
        dist.resize(pts, static_cast<Eigen::Index>(nus.size()));
        for (size_t idx = 0; idx < nus.size(); ++idx) {
            lin.col(static_cast<Eigen::Index>(idx)) = acc_uu.col(nus[idx]);
            dist.col(static_cast<Eigen::Index>(idx)) = acc_dd.col(nus[idx]);
        }
    }

    field.linear = assemble(layout, lin, band_summed);
    field.distortion = assemble(layout, dist, band_summed);
    field.total = field.linear + field.distortion;
    return field;
}

MatXd to_db(const MatXd& values, double reference) {
    if (reference <= 0.0)
        throw std::invalid_argument("to_db: reference must be > 0");
    return (values.cwiseMax(reference * 1e-30) / reference).array().log10() * 10.0;
}

std::vector<Peak> find_peaks(const MatXd& values, double min_prominence) {
    const int rows = static_cast<int>(values.rows());
    const int cols = static_cast<int>(values.cols());
    const int n = rows * cols;
    if (n == 0)
        return {};

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double va = values(a / cols, a % cols);
        const double vb = values(b / cols, b % cols);
        return va != vb ? va > vb : a < b;
    });

    std::vector<int> parent(n, -1);       // -1 = unvisited
    std::vector<int> comp_peak(n, -1);    // root -> peak cell
    std::vector<double> prominence(n, -1.0);
    std::vector<int> candidates;

    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    const bool one_dim = rows == 1 || cols == 1;
    auto for_neighbors = [&](int cell, auto&& fn) {
        const int i = cell / cols, j = cell % cols;
        if (one_dim) {
            const int len = rows * cols;
            if (cell > 0)
                fn(cell - 1);
            if (cell + 1 < len)
                fn(cell + 1);
            return;
        }
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                if (di == 0 && dj == 0)
                    continue;
                const int ni = i + di, nj = j + dj;
                if (ni >= 0 && ni < rows && nj >= 0 && nj < cols)
                    fn(ni * cols + nj);
            }
    };

    auto value_of = [&](int cell) { return values(cell / cols, cell % cols); };

    for (int cell : order) {
        std::vector<int> roots;
        for_neighbors(cell, [&](int nb) {
            if (parent[nb] < 0)
                return;
            const int r = find(nb);
            if (std::find(roots.begin(), roots.end(), r) == roots.end())
                roots.push_back(r);
        });
        if (roots.empty()) {
            parent[cell] = cell;
            comp_peak[cell] = cell;
            candidates.push_back(cell);
            continue;
        }
        int survivor = roots[0];
        for (int r : roots)
            if (value_of(comp_peak[r]) > value_of(comp_peak[survivor]))
                survivor = r;
        for (int r : roots) {
            if (r == survivor)
                continue;
            prominence[comp_peak[r]] = value_of(comp_peak[r]) - value_of(cell);
            parent[r] = survivor;
        }
        parent[cell] = survivor;
    }

    const double floor_value = value_of(order.back());
    std::vector<Peak> peaks;
    for (int c : candidates) {
        double prom = prominence[c];
        if (prom < 0.0)
            prom = value_of(c) - floor_value; // never merged into a higher peak
        if (prom < min_prominence)
            continue;
        peaks.push_back({c / cols, c % cols, value_of(c), prom});
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.value > b.value; });
    return peaks;
}

namespace {

const char* axis_name(AxisKind kind) {
    switch (kind) {
    case AxisKind::Azimuth:
        return "azimuth_deg";
    case AxisKind::Elevation:
        return "elevation_deg";
    case AxisKind::Range:
        return "range_m";
    default:
        return "subcarrier";
    }
}

double axis_out(AxisKind kind, double v) {
    return kind == AxisKind::Azimuth || kind == AxisKind::Elevation ? rad2deg(v) : v;
}

} // namespace

void write_field_csv(const SpectralField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_field_csv: cannot open " + path);
    out.precision(10);
    out << "axis1,axis2,component,psd_db\n";

    double ref = field.linear.maxCoeff();
    if (ref <= 0.0)
        ref = 1.0;
    const MatXd db_total = to_db(field.total, ref);
    const MatXd db_lin = to_db(field.linear, ref);
    const MatXd db_dist = to_db(field.distortion, ref);

    const AxisKind k1 = field.spec.axis1.kind;
    const AxisKind k2 = field.spec.axis2 ? field.spec.axis2->kind : AxisKind::Subcarrier;
    for (Eigen::Index i = 0; i < db_total.rows(); ++i) {
        const double a1 = axis_out(k1, field.spec.axis1.grid(i));
        for (Eigen::Index j = 0; j < db_total.cols(); ++j) {
            const double a2 = field.spec.axis2 ? axis_out(k2, field.spec.axis2->grid(j)) : 0.0;
            out << a1 << ',' << a2 << ",total," << db_total(i, j) << '\n';
            out << a1 << ',' << a2 << ",linear," << db_lin(i, j) << '\n';
            out << a1 << ',' << a2 << ",distortion," << db_dist(i, j) << '\n';
        }
    }
}

void write_field_sidecar(const SpectralField& field, const std::string& path, std::uint64_t seed) {
    nlohmann::json j;
    auto axis_json = [](const ScanAxis& axis) {
        nlohmann::json a;
        a["kind"] = axis_name(axis.kind);
        std::vector<double> grid(axis.grid.size());
        for (Eigen::Index i = 0; i < axis.grid.size(); ++i)
            grid[i] = axis_out(axis.kind, axis.grid(i));
        a["grid"] = grid;
        return a;
    };
    j["axis1"] = axis_json(field.spec.axis1);
    if (field.spec.axis2)
        j["axis2"] = axis_json(*field.spec.axis2);
    j["fixed"] = {{"azimuth_deg", rad2deg(field.spec.azimuth)},
                  {"elevation_deg", rad2deg(field.spec.elevation)},
                  {"range_m", field.spec.far_field ? nlohmann::json("farfield")
                                                   : nlohmann::json(field.spec.range)},
                  {"subcarrier", field.spec.subcarrier}};
    j["seed"] = seed;
    j["warnings"] = field.warnings;

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_field_sidecar: cannot open " + path);
    out << j.dump(2) << '\n';
}

} // namespace nfdist
