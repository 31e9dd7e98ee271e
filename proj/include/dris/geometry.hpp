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

/// Geometry of one propagation link: distance plus azimuth/elevation
/// arrival and departure angles. Angles are radians in (-pi, pi]. ULA ends
/// only use the azimuth; the unused elevation is stored as 0.
struct LinkGeometry {
    double distance = 0.0;
    double aoa_az = 0.0;
    double aoa_el = 0.0;
    double aod_az = 0.0;
    double aod_el = 0.0;
};

/// Placement of transmitter, receiver and the two RIS panels. The setup is
/// parameterized by the horizontal offsets d1, d2 and the height offset dh:
/// the transmitter and both RIS panels sit dh above the receiver plane,
/// with RIS 1 next to the transmitter and RIS 2 next to the receiver.
struct ScenarioLayout {
    double d1 = 0.0;
    double d2 = 0.0;
    double dh = 0.0;
    LinkGeometry h1; // transmitter -> RIS 1
    LinkGeometry h2; // transmitter -> RIS 2
    LinkGeometry g1; // RIS 1 -> receiver
    LinkGeometry g2; // RIS 2 -> receiver
    LinkGeometry d;  // RIS 1 -> RIS 2
};

/// Large-scale pathloss in dB: 35.6 + 22 log10(d), valid for d >= 1 m.
inline double pathloss_db(double distance_m)
{
    if (!(distance_m >= 1.0))
        throw std::domain_error("pathloss_db: model requires distance >= 1 m");
    return 35.6 + 22.0 * std::log10(distance_m);
}

/// Linear power gain 10^(-pathloss_db / 10).
inline double pathloss_linear(double distance_m)
{
    return std::pow(10.0, -pathloss_db(distance_m) / 10.0);
}

/// Builds distances and angles for the five links of the two-RIS layout.
/// dh = 0 degenerates to a coplanar layout with all elevations 0.
inline ScenarioLayout build_scenario(double d1, double d2, double dh)
{
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw std::domain_error("build_scenario: d1 and d2 must be positive");
    if (!(dh >= 0.0))
        throw std::domain_error("build_scenario: dh must be non-negative");

    ScenarioLayout s;
    s.d1 = d1;
    s.d2 = d2;
    s.dh = dh;

    const double d12 = std::hypot(d1, d2);

    s.h1.distance = d1;
    s.h1.aoa_az = pi / 4.0;
    s.h1.aoa_el = 0.0;
    s.h1.aod_az = pi / 2.0;

    s.h2.distance = d12;
    s.h2.aoa_az = pi / 4.0 - std::atan(d2 / d1);
    s.h2.aoa_el = 0.0;
    s.h2.aod_az = std::atan(d1 / d2);

    s.g1.distance = std::sqrt(d1 * d1 + d2 * d2 + dh * dh);
    s.g1.aoa_az = std::atan(d2 / d1);
    s.g1.aod_az = std::atan(d1 / d2);
    s.g1.aod_el = std::atan(dh / d12);

    s.g2.distance = std::hypot(d1, dh);
    s.g2.aoa_az = 0.0;
    s.g2.aod_az = pi / 4.0;
    s.g2.aod_el = std::atan(dh / d1);

    s.d.distance = d2;
    s.d.aoa_az = pi / 4.0;
    s.d.aoa_el = 0.0;
    s.d.aod_az = pi / 4.0;
    s.d.aod_el = 0.0;

    for (LinkGeometry *lg : {&s.h1, &s.h2, &s.g1, &s.g2, &s.d}) {
        lg->aoa_az = wrap_angle(lg->aoa_az);
        lg->aoa_el = wrap_angle(lg->aoa_el);
        lg->aod_az = wrap_angle(lg->aod_az);
        lg->aod_el = wrap_angle(lg->aod_el);
    }
    return s;
}

} // namespace dris
