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

#include "dris/arrays.hpp"
#include "dris/common.hpp"

#include <vector>

namespace dris {

/// Kronecker product a (x) b.
inline CMat kron(const CMat &a, const CMat &b)
{
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Correlation of a `size`-element ULA seen through `n_scatterers` discrete
/// plane waves spread over `angular_spread` radians:
///   [R]_{m,n} = (1/SC) sum_k exp(j 2 pi d (m-n) sin(k psi / (1-SC))),
/// k = 0.5(1-SC), 0.5(1-SC)+1, ..., 0.5(SC-1). The single-scatterer case
/// takes the k = 0 term with angle 0, which gives the all-ones keyhole
/// matrix. The result is Toeplitz Hermitian with an exactly unit diagonal.
inline CMat ula_correlation(int size, double spacing, double angular_spread, int n_scatterers)
{
    require(size >= 1, "ula_correlation: size must be >= 1");
    require(spacing > 0.0, "ula_correlation: spacing must be positive");
    require(n_scatterers >= 1, "ula_correlation: n_scatterers must be >= 1");

    const int sc = n_scatterers;
    std::vector<double> sin_angle(sc, 0.0);
    if (sc > 1) {
        for (int i = 0; i < sc; ++i) {
            const double k = 0.5 * (1.0 - sc) + i;
            sin_angle[i] = std::sin(k * angular_spread / (1.0 - sc));
        }
    }

    // One complex value per lag; the matrix is Toeplitz in (m - n).
    std::vector<cxd> lag(size);
    for (int l = 0; l < size; ++l) {
        cxd sum(0.0, 0.0);
        for (int i = 0; i < sc; ++i)
            sum += std::exp(iu * (2.0 * pi * spacing * l * sin_angle[i]));
        lag[l] = sum / static_cast<double>(sc);
    }

    CMat r(size, size);
    for (int m = 0; m < size; ++m)
        for (int n = 0; n < size; ++n)
            r(m, n) = (m >= n) ? lag[m - n] : std::conj(lag[n - m]);
    return r;
}

/// Kronecker correlation R_v (x) R_h of a planar array, each axis built as
/// a ULA correlation with the same spread and scatterer count.
inline CMat upa_correlation(const UpaSpec &spec, double angular_spread, int n_scatterers)
{
    spec.validate();
    const CMat rv = ula_correlation(spec.rows, spec.row_spacing, angular_spread, n_scatterers);
    const CMat rh = ula_correlation(spec.cols, spec.col_spacing, angular_spread, n_scatterers);
    return kron(rv, rh);
}

/// Correlation among the scatterers themselves, modeled as a linear array
/// with spacing `spacing` and spread `angular_spread`. Trace is exactly SC.
inline CMat scatter_correlation(int n_scatterers, double spacing, double angular_spread)
{
    return ula_correlation(n_scatterers, spacing, angular_spread, n_scatterers);
}

/// Principal square root of a numerically PSD Hermitian matrix. Eigenvalues
/// in [-1e-9, 0) are clamped to zero; anything lower is rejected.
inline CMat psd_sqrt(const CMat &r)
{
    require(r.rows() == r.cols(), "psd_sqrt: matrix must be square");
    if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("psd_sqrt: matrix is not Hermitian");

    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(r));
    if (es.info() != Eigen::Success)
        throw NumericalError("psd_sqrt: eigendecomposition failed");

    RVec ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -1e-9)
            throw NumericalError("psd_sqrt: matrix has a significantly negative eigenvalue");
        if (ev(i) < 0.0)
            ev(i) = 0.0;
    }
    const CMat s = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    return hermitian_part(s);
}

} // namespace dris
