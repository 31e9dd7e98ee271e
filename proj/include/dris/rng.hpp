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

#include <cstdint>
#include <random>

namespace dris {

/// splitmix64 scrambler, used to derive independent per-trial seeds from a
/// master seed. Identical (master, index) pairs give identical streams, so
/// parallel runs reproduce serial ones exactly.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seeded random stream with an explicit Box-Muller transform so that the
/// produced sequence is pinned by this library, not by the standard library
/// implementation of normal_distribution.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard real normal N(0, 1).
    double normal()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        auto [z0, z1] = box_muller();
        spare_ = z1;
        have_spare_ = true;
        return z0;
    }

    /// Circularly symmetric complex normal CN(0, 1): (x + iy) / sqrt(2)
    /// with x, y independent standard real normals.
    cxd complex_normal()
    {
        auto [z0, z1] = box_muller();
        return cxd(z0, z1) / std::sqrt(2.0);
    }

    /// Matrix with i.i.d. CN(0, 1) entries, filled column-major.
    CMat complex_normal_matrix(Eigen::Index rows, Eigen::Index cols)
    {
        CMat m(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r)
                m(r, c) = complex_normal();
        return m;
    }

    /// Uniform integer in [0, bound).
    std::uint64_t uniform_int(std::uint64_t bound)
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

  private:
    std::pair<double, double> box_muller()
    {
        const double u1 = 1.0 - uniform(); // (0, 1], keeps log() finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(2.0 * pi * u2), r * std::sin(2.0 * pi * u2)};
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace dris
