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

#include "nfdist/types.hpp"

#include <vector>

namespace nfdist {

// In-place DFT, X[k] = sum_n x[n] e^{sign * j 2pi k n / N}. Radix-2 when N is
// a power of two, O(N^2) fallback otherwise. No 1/N or 1/sqrt(N) scaling.
void dft_inplace(std::vector<Complex>& a, int sign);

// Unitary IDFT across rows: out(m, n) = (1/sqrt(N)) sum_nu in(m, nu) e^{+j 2pi nu n / N}.
MatXc idft_rows(const MatXc& freq);

// Unitary DFT across rows (inverse of idft_rows).
MatXc dft_rows(const MatXc& time);

// Transform a lag-indexed stack of matrices: out[k] = sum_tau in[tau] e^{sign j 2pi k tau / N}.
std::vector<MatXc> stack_dft(const std::vector<MatXc>& stack, int sign);

} // namespace nfdist
