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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace dris {

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cxd iu{0.0, 1.0};

/// Configuration or input validation failure (CLI exit code 2).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure, e.g. an indefinite matrix where PSD is required
/// or non-convergence beyond the configured budget (CLI exit code 3).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Wraps an angle to the interval (-pi, pi].
inline double wrap_angle(double a)
{
    a = std::remainder(a, 2.0 * pi); // [-pi, pi]
    if (a <= -pi)
        a = pi;
    return a;
}

/// Hermitian part (m + m^H) / 2.
inline CMat hermitian_part(const CMat &m)
{
    return 0.5 * (m + m.adjoint());
}

/// Largest singular value. For Hermitian input prefer spectral_norm_hermitian.
inline double spectral_norm(const CMat &m)
{
    if (m.rows() == 0 || m.cols() == 0)
        return 0.0;
    Eigen::JacobiSVD<CMat> svd(m);
    return svd.singularValues()(0);
}

/// Largest absolute eigenvalue of a Hermitian matrix.
inline double spectral_norm_hermitian(const CMat &m)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
    const auto &ev = es.eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

inline void require(bool cond, const std::string &msg)
{
    if (!cond)
        throw std::invalid_argument(msg);
}

} // namespace dris
