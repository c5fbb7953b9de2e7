// SPDX-License-Identifier: Apache-2.0
//
// nfdist -- simulation toolkit for nonlinear amplifier distortion radiated
// from large planar antenna arrays and active reflecting surfaces.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "nfdist/dft.hpp"

#include <cmath>

namespace nfdist {

namespace {

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_pow2(std::vector<Complex>& a, int sign) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * pi / static_cast<double>(len);
        const Complex wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (size_t j = 0; j < len / 2; ++j) {
                const Complex u = a[i + j];
                const Complex v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

void dft_naive(std::vector<Complex>& a, int sign) {
    const size_t n = a.size();
    std::vector<Complex> out(n, Complex(0.0, 0.0));
    for (size_t k = 0; k < n; ++k)
        for (size_t t = 0; t < n; ++t)
            out[k] += a[t] * std::polar(1.0, sign * 2.0 * pi * static_cast<double>(k * t % n) / n);
    a = std::move(out);
}

MatXc dft_matrix(int n, int sign) {
    MatXc w(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int nu = 0; nu < n; ++nu)
        for (int t = 0; t < n; ++t)
            w(nu, t) = std::polar(scale, sign * 2.0 * pi * static_cast<double>((long(nu) * t) % n) / n);
    return w;
}

} // namespace

void dft_inplace(std::vector<Complex>& a, int sign) {
    if (a.size() <= 1)
        return;
    if (is_pow2(a.size()))
        fft_pow2(a, sign);
    else
        dft_naive(a, sign);
}

MatXc idft_rows(const MatXc& freq) {
    return freq * dft_matrix(static_cast<int>(freq.cols()), +1);
}

MatXc dft_rows(const MatXc& time) {
    return time * dft_matrix(static_cast<int>(time.cols()), -1);
}

std::vector<MatXc> stack_dft(const std::vector<MatXc>& stack, int sign) {
    const size_t n = stack.size();
    const Eigen::Index rows = stack.front().rows();
    const Eigen::Index cols = stack.front().cols();
    std::vector<MatXc> out(n, MatXc(rows, cols));
    std::vector<Complex> buf(n);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            for (size_t t = 0; t < n; ++t)
                buf[t] = stack[t](i, j);
            dft_inplace(buf, sign);
            for (size_t t = 0; t < n; ++t)
                out[t](i, j) = buf[t];
        }
    }
    return out;
}

} // namespace nfdist
