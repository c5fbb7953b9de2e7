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

#include <cstdint>
#include <random>

namespace nfdist {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic random stream. Gaussian draws use Box-Muller on explicit
// uniforms so sequences do not depend on the standard library's
// distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

    // Independent stream derived from this stream's seed and an index,
    // so parallel workers reproduce serial results.
    Rng substream(std::uint64_t index) const {
        return Rng(splitmix64(seed_ ^ (0x9e3779b97f4a7c15ULL * (index + 1))));
    }

    double uniform() {
        // 53-bit mantissa uniform in [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t integer(std::uint64_t n) { return gen_() % n; }

    double gaussian() {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
    }

    // Circularly symmetric CN(0, 1): unit total variance.
    Complex cgaussian() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::polar(std::sqrt(-std::log(u1)), 2.0 * pi * u2);
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

} // namespace nfdist
