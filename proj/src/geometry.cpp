// SPDX-License-Identifier: Apache-2.0
//
// nfdist -- simulation toolkit for nonlinear amplifier distortion radiated
// from large planar antenna arrays and active reflecting surfaces.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "nfdist/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace nfdist {

ArrayGeometry::ArrayGeometry(int my, int mz, double dy, double dz, double lambda)
    : m_y(my), m_z(mz), d_y(dy), d_z(dz), wavelength(lambda) {
    if (m_y < 1 || m_z < 1)
        throw std::invalid_argument("ArrayGeometry: element counts must be >= 1");
    if (d_y <= 0.0 || d_z <= 0.0)
        throw std::invalid_argument("ArrayGeometry: element spacings must be > 0");
    if (wavelength <= 0.0)
        throw std::invalid_argument("ArrayGeometry: wavelength must be > 0");
}

ArrayGeometry ArrayGeometry::half_wavelength_upa(int elements_per_side, double lambda) {
    return ArrayGeometry(elements_per_side, elements_per_side, lambda / 2.0, lambda / 2.0, lambda);
}

Eigen::Vector2d element_position(const ArrayGeometry& geometry, int m) {
    if (m < 0 || m >= geometry.size())
        throw std::out_of_range("element_position: element index out of range");
    const double k_z = static_cast<double>(m % geometry.m_z) * geometry.d_z;
    const double k_y = static_cast<double>(m / geometry.m_z) * geometry.d_y;
    return {k_y, k_z};
}

double aperture(const ArrayGeometry& geometry) {
    const double ly = (geometry.m_y - 1) * geometry.d_y;
    const double lz = (geometry.m_z - 1) * geometry.d_z;
    return std::hypot(ly, lz);
}

FieldBoundaries field_boundaries(const ArrayGeometry& geometry) {
    const double delta = aperture(geometry);
    return {2.0 * delta, 2.0 * delta * delta / geometry.wavelength};
}

} // namespace nfdist
