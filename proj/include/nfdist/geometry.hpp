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

namespace nfdist {

// Uniform planar array in the yz-plane. Element 0 sits at the origin,
// element index m maps to the grid column-major along z:
//   k_z(m) = (m mod m_z) * d_z,   k_y(m) = floor(m / m_z) * d_y.
struct ArrayGeometry {
    int m_y = 1;          // horizontal element count
    int m_z = 1;          // vertical element count
    double d_y = 0.0;     // horizontal spacing [m]
    double d_z = 0.0;     // vertical spacing [m]
    double wavelength = 0.0; // carrier wavelength [m]

    ArrayGeometry() = default;
    ArrayGeometry(int my, int mz, double dy, double dz, double lambda);

    // Square UPA with half-wavelength spacing.
    static ArrayGeometry half_wavelength_upa(int elements_per_side, double lambda);

    int size() const { return m_y * m_z; }
    double wavenumber() const { return 2.0 * pi / wavelength; }
};

struct FieldBoundaries {
    double d_b;   // start of the radiative near-field, 2*aperture
    double d_fa;  // Fraunhofer array distance, 2*aperture^2 / wavelength
};

// Cartesian yz offsets (k_y, k_z) of element m. Throws on out-of-range m.
Eigen::Vector2d element_position(const ArrayGeometry& geometry, int m);

// Diagonal extent of the array.
double aperture(const ArrayGeometry& geometry);

FieldBoundaries field_boundaries(const ArrayGeometry& geometry);

} // namespace nfdist
