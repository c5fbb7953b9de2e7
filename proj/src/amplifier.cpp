// SPDX-License-Identifier: Apache-2.0
//
// nfdist -- simulation toolkit for nonlinear amplifier distortion radiated
// from large planar antenna arrays and active reflecting surfaces.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "nfdist/amplifier.hpp"

#include <cmath>
#include <stdexcept>

namespace nfdist {

PaModel::PaModel(MatXc c) : coeffs(std::move(c)) {
    if (coeffs.rows() < 1 || coeffs.cols() < 1)
        throw std::invalid_argument("PaModel: empty coefficient matrix");
    if (coeffs(0, 0) == Complex(0.0, 0.0))
        throw std::invalid_argument("PaModel: linear term beta1[0] must be nonzero");
}

PaModel PaModel::third_order(Complex beta1, Complex beta3) {
    MatXc c(2, 1);
    c(0, 0) = beta1;
    c(1, 0) = beta3;
    return PaModel(c);
}

PaModel PaModel::preset(const std::string& name) {
    if (name == "linear")
        return linear();
    if (name == "evm3")
        return third_order(1.042, -0.0212);
    throw std::invalid_argument("PaModel: unknown preset '" + name + "'");
}

Complex PaModel::evaluate(Complex x) const {
    if (memory() != 0)
        throw std::domain_error("PaModel::evaluate: model has memory taps");
    Complex y(0.0, 0.0);
    double amp_pow = 1.0; // |x|^{2p}
    const double a2 = std::norm(x);
    for (int p = 0; p <= order(); ++p) {
        y += coeffs(p, 0) * x * amp_pow;
        amp_pow *= a2;
    }
    return y;
}

MatXc apply_pa(const PaModel& model, const MatXc& frame) {
    const int N = static_cast<int>(frame.cols());
    const int L = model.memory();
    const int P = model.order();
    if (N <= L)
        throw std::domain_error("apply_pa: frame shorter than PA memory depth");

    MatXc out = MatXc::Zero(frame.rows(), N);
    for (int l = 0; l <= L; ++l) {
        for (int n = 0; n < N; ++n) {
            const int src = (n - l + N) % N;
            for (Eigen::Index m = 0; m < frame.rows(); ++m) {
                const Complex x = frame(m, src);
                const double a2 = std::norm(x);
                double amp_pow = 1.0;
                Complex acc(0.0, 0.0);
                for (int p = 0; p <= P; ++p) {
                    acc += model.coeffs(p, l) * amp_pow;
                    amp_pow *= a2;
                }
                out(m, n) += acc * x;
            }
        }
    }
    return out;
}

double analytic_evm(const PaModel& model, double input_power) {
    if (!model.memoryless_third_order())
        throw std::domain_error("analytic_evm: requires a memoryless third-order model");
    const Complex b1 = model.beta1();
    const Complex b3 = model.beta3();
    const double s2 = input_power;
    const Complex g = b1 + 2.0 * b3 * s2;
    const double out_power = std::norm(b1) * s2 + 4.0 * std::real(b1 * std::conj(b3)) * s2 * s2 +
                             6.0 * std::norm(b3) * s2 * s2 * s2;
    const double lin_power = std::norm(g) * s2;
    const double dist_power = std::max(0.0, out_power - lin_power);
    return std::sqrt(dist_power / lin_power);
}

PaModel calibrate_evm(double target_evm, double input_power) {
    if (target_evm < 0.0 || target_evm >= 0.3)
        throw std::invalid_argument("calibrate_evm: target EVM must be in [0, 0.3)");
    if (input_power <= 0.0)
        throw std::invalid_argument("calibrate_evm: input power must be > 0");
    if (target_evm == 0.0)
        return PaModel::linear();

    // At unit input power with real coefficients, output power is preserved
    // when (beta1 + 2*beta3)^2 + 2*beta3^2 = 1. Bisect on t = -beta3.
    auto beta1_for = [](double t) { return std::sqrt(1.0 - 2.0 * t * t) + 2.0 * t; };
    double lo = 0.0, hi = 0.21;
    if (analytic_evm(PaModel::third_order(beta1_for(hi), -hi)) < target_evm)
        throw std::runtime_error("calibrate_evm: target EVM not attainable");
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double evm = analytic_evm(PaModel::third_order(beta1_for(mid), -mid));
        (evm < target_evm ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    return PaModel::third_order(beta1_for(t), -t / input_power);
}

VecXc bussgang_gain(const PaModel& model, const VecXd& input_power) {
    if (!model.memoryless_third_order())
        throw std::domain_error("bussgang_gain: requires a memoryless third-order model");
    return (model.beta1() + (2.0 * model.beta3() * input_power.array()).cast<Complex>()).matrix();
}

std::vector<MatXc> output_covariance(const PaModel& model, const std::vector<MatXc>& c_xx) {
    if (!model.memoryless_third_order())
        throw std::domain_error("output_covariance: requires a memoryless third-order model");
    if (c_xx.empty())
        throw std::invalid_argument("output_covariance: empty covariance sequence");

    const MatXc& c0 = c_xx.front();
    Eigen::SelfAdjointEigenSolver<MatXc> es(0.5 * (c0 + c0.adjoint()));
    if (es.eigenvalues().minCoeff() < -1e-9 * std::abs(c0.trace()))
        throw std::domain_error("output_covariance: C_xx[0] is not positive semidefinite");

    const VecXc g = bussgang_gain(model, c0.diagonal().real());
    const double b3sq = std::norm(model.beta3());
    std::vector<MatXc> c_yy;
    c_yy.reserve(c_xx.size());
    for (const MatXc& c : c_xx) {
        MatXc lin = g.asDiagonal() * c * g.conjugate().asDiagonal();
        c_yy.push_back(lin + 2.0 * b3sq * c.cwiseProduct(c.cwiseAbs2().cast<Complex>()));
    }
    return c_yy;
}

namespace {

// Circular lagged cross-covariance (1 / (F N)) sum_f sum_n a_n b_{n-tau}^H.
std::vector<MatXc> circular_covariance(const std::vector<MatXc>& a,
                                       const std::vector<MatXc>& b, int lag_window) {
    const Eigen::Index M = a.front().rows();
    const int N = static_cast<int>(a.front().cols());
    std::vector<MatXc> cov(lag_window + 1, MatXc::Zero(M, M));
    for (size_t f = 0; f < a.size(); ++f) {
        for (int tau = 0; tau <= lag_window; ++tau) {
            MatXc shifted(M, N);
            for (int n = 0; n < N; ++n)
                shifted.col(n) = b[f].col((n - tau + N) % N);
            cov[tau] += a[f] * shifted.adjoint();
        }
    }
    const double scale = 1.0 / (static_cast<double>(a.size()) * N);
    for (auto& c : cov)
        c *= scale;
    return cov;
}

} // namespace

BussgangDecomposition decompose(const PaModel& model,
                                const std::vector<MatXc>& input_frames,
                                const std::vector<MatXc>& output_frames,
                                int lag_window, size_t min_frames) {
    if (input_frames.size() < min_frames || input_frames.empty())
        throw std::invalid_argument("decompose: ensemble smaller than the configured minimum");
    if (input_frames.size() != output_frames.size())
        throw std::invalid_argument("decompose: input/output frame counts differ");

    BussgangDecomposition d;
    d.c_xx = circular_covariance(input_frames, input_frames, lag_window);

    const Eigen::Index M = input_frames.front().rows();
    if (model.memoryless_third_order()) {
        d.gains = bussgang_gain(model, d.c_xx.front().diagonal().real());
        d.c_yy = output_covariance(model, d.c_xx);
        d.analytic = true;
    } else {
        // Per-element least-squares gain E[y x*] / E[|x|^2].
        VecXc num = VecXc::Zero(M);
        VecXd den = VecXd::Zero(M);
        for (size_t f = 0; f < input_frames.size(); ++f) {
            num += (output_frames[f].cwiseProduct(input_frames[f].conjugate())).rowwise().sum();
            den += input_frames[f].cwiseAbs2().rowwise().sum();
        }
        d.gains = num.cwiseQuotient(den.cast<Complex>());
        d.c_yy = circular_covariance(output_frames, output_frames, lag_window);
        d.analytic = false;
    }

    d.c_dd.reserve(d.c_xx.size());
    for (size_t t = 0; t < d.c_xx.size(); ++t)
        d.c_dd.push_back(d.c_yy[t] -
                         d.gains.asDiagonal() * d.c_xx[t] * d.gains.conjugate().asDiagonal());

    VecXc cross = VecXc::Zero(M);
    VecXd dist_power = VecXd::Zero(M);
    VecXd in_power = VecXd::Zero(M);
    for (size_t f = 0; f < input_frames.size(); ++f) {
        const MatXc dist = output_frames[f] - d.gains.asDiagonal() * input_frames[f];
        cross += (dist.cwiseProduct(input_frames[f].conjugate())).rowwise().sum();
        dist_power += dist.cwiseAbs2().rowwise().sum();
        in_power += input_frames[f].cwiseAbs2().rowwise().sum();
    }
    d.max_cross_correlation = 0.0;
    for (Eigen::Index m = 0; m < M; ++m) {
        const double denom = std::sqrt(dist_power(m) * in_power(m));
        if (denom > 0.0)
            d.max_cross_correlation =
                std::max(d.max_cross_correlation, std::abs(cross(m)) / denom);
    }
    return d;
}

} // namespace nfdist
