// dris c++ library for double-RIS MIMO channel simulation and optimization
// Copyright (C) 2026 The dris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "dris/common.hpp"

namespace dris {

/// Uniform linear array. Spacing is in wavelengths (d / lambda).
struct UlaSpec {
    int size = 1;
    double spacing = 0.5;

    void validate() const
    {
        require(size >= 1, "UlaSpec: size must be >= 1");
        require(spacing > 0.0, "UlaSpec: spacing must be positive");
    }
};

/// Uniform planar array with `rows` elements along the vertical axis and
/// `cols` along the horizontal axis. Spacings are in wavelengths.
struct UpaSpec {
    int rows = 1;
    int cols = 1;
    double row_spacing = 0.5;
    double col_spacing = 0.5;

    int size() const { return rows * cols; }

    void validate() const
    {
        require(rows >= 1 && cols >= 1, "UpaSpec: rows and cols must be >= 1");
        require(row_spacing > 0.0 && col_spacing > 0.0,
                "UpaSpec: spacings must be positive");
    }
};

/// A ULA is the single-row special case of a UPA.
inline UpaSpec as_upa(const UlaSpec &ula)
{
    return UpaSpec{1, ula.size, ula.spacing, ula.spacing};
}

/// ULA steering vector, entry m = exp(j 2 pi m d sin(theta)), entry 0 = 1.
inline CVec ula_response(const UlaSpec &spec, double azimuth)
{
    spec.validate();
    CVec a(spec.size);
    const double phase_step = 2.0 * pi * spec.spacing * std::sin(azimuth);
    for (int m = 0; m < spec.size; ++m)
        a(m) = std::exp(iu * (phase_step * m));
    return a;
}

/// UPA steering vector a_v(theta, phi) kron a_h(theta), with the vertical
/// factor stepping as exp(j 2 pi m d_v cos(theta) sin(phi)) and the
/// horizontal factor as exp(j 2 pi n d_h sin(theta)).
inline CVec upa_response(const UpaSpec &spec, double azimuth, double elevation)
{
    spec.validate();
    const double v_step = 2.0 * pi * spec.row_spacing * std::cos(azimuth) * std::sin(elevation);
    const double h_step = 2.0 * pi * spec.col_spacing * std::sin(azimuth);
    CVec a(spec.size());
    for (int m = 0; m < spec.rows; ++m) {
        const cxd vm = std::exp(iu * (v_step * m));
        for (int n = 0; n < spec.cols; ++n)
            a(m * spec.cols + n) = vm * std::exp(iu * (h_step * n));
    }
    return a;
}

} // namespace dris
