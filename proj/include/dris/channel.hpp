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
#include "dris/correlation.hpp"
#include "dris/geometry.hpp"
#include "dris/rng.hpp"

namespace dris {

// Rician factors above this cap are treated as the pure-LoS limit.
inline constexpr double rician_cap = 1e12;

/// Unit-modulus phase vectors of the two RIS panels. The reflection matrix
/// applied to the signal is diag(conj(v)); optimization always works on v.
struct PhaseConfig {
    CVec v1;
    CVec v2;
};

inline void validate_unit_modulus(const CVec &v, double tol = 1e-12)
{
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(std::abs(v(i)) - 1.0) > tol)
            throw std::invalid_argument("phase vector entry is not unit-modulus");
}

inline CVec uniform_phases(Eigen::Index n, Rng &rng)
{
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = std::exp(iu * (2.0 * pi * rng.uniform()));
    return v;
}

/// Declarative description of one Rician double-scattering link. The
/// channel matrix has `row_array.size()` rows (output side) and
/// `col_array.size()` columns (input side); correlation matrices follow the
/// same row/column convention.
struct LinkSpec {
    double rician = 0.0;      // LoS-to-NLoS power ratio (kappa)
    double gain = 1.0;        // linear pathloss gain (chi)
    int n_scatterers = 1;     // SC
    bool pure_los = false;    // exact kappa -> infinity channel
    UpaSpec row_array;
    UpaSpec col_array;
    double row_spread = pi / 3.0;     // angular spread seen by the row array
    double col_spread = pi / 3.0;     // angular spread seen by the column array
    double scatter_spread = pi / 3.0; // angular spread among scatterers
    double scatter_spacing = 0.5;     // scatterer spacing in wavelengths
    double aoa_az = 0.0, aoa_el = 0.0; // LoS arrival angles at the row array
    double aod_az = 0.0, aod_el = 0.0; // LoS departure angles at the column array

    void validate() const
    {
        require(rician >= 0.0, "LinkSpec: rician factor must be >= 0");
        require(gain > 0.0, "LinkSpec: pathloss gain must be positive");
        require(n_scatterers >= 1, "LinkSpec: n_scatterers must be >= 1");
        require(row_spread >= 0.0 && row_spread <= pi && col_spread >= 0.0 &&
                    col_spread <= pi && scatter_spread >= 0.0 && scatter_spread <= pi,
                "LinkSpec: angular spreads must lie in [0, pi]");
        row_array.validate();
        col_array.validate();
    }
};

/// Rank-1 LoS matrix: steering vector of the row-side array at the arrival
/// angles times the transposed steering vector of the column-side array at
/// the departure angles. All entries are unit-modulus phasors.
inline CMat los_matrix(const UpaSpec &row_array, const UpaSpec &col_array,
                       double aoa_az, double aoa_el, double aod_az, double aod_el)
{
    const CVec a_row = upa_response(row_array, aoa_az, aoa_el);
    const CVec a_col = upa_response(col_array, aod_az, aod_el);
    return a_row * a_col.transpose();
}

inline CMat los_matrix(const LinkSpec &spec)
{
    return los_matrix(spec.row_array, spec.col_array, spec.aoa_az, spec.aoa_el,
                      spec.aod_az, spec.aod_el);
}

/// A link with its deterministic pieces prebuilt: LoS matrix, correlation
/// matrices and their principal square roots. Immutable after construction;
/// draws only read from it.
struct LinkModel {
    LinkSpec spec;
    CMat los;          // rows x cols
    CMat row_corr;     // rows x rows
    CMat col_corr;     // cols x cols
    CMat row_sqrt;
    CMat col_sqrt;
    CMat scatter_sqrt; // SC x SC
};

inline LinkModel build_link(const LinkSpec &spec)
{
    spec.validate();
    LinkModel link;
    link.spec = spec;
    link.spec.rician = std::min(spec.rician, rician_cap);
    link.los = los_matrix(spec);
    link.row_corr = upa_correlation(spec.row_array, spec.row_spread, spec.n_scatterers);
    link.col_corr = upa_correlation(spec.col_array, spec.col_spread, spec.n_scatterers);
    link.row_sqrt = psd_sqrt(link.row_corr);
    link.col_sqrt = psd_sqrt(link.col_corr);
    link.scatter_sqrt = psd_sqrt(
        scatter_correlation(spec.n_scatterers, spec.scatter_spacing, spec.scatter_spread));
    return link;
}

/// One double-scattering NLoS draw:
///   (1/sqrt(SC)) R_row^{1/2} Q S^{1/2} P R_col^{1/2},
/// Q (rows x SC) and P (SC x cols) i.i.d. CN(0, 1). Q is drawn before P.
inline CMat draw_nlos(const LinkModel &link, Rng &rng)
{
    const int sc = link.spec.n_scatterers;
    const CMat q = rng.complex_normal_matrix(link.los.rows(), sc);
    const CMat p = rng.complex_normal_matrix(sc, link.los.cols());
    return (link.row_sqrt * q * link.scatter_sqrt * p * link.col_sqrt) / std::sqrt(double(sc));
}

/// Rician mixture sqrt(chi) (sqrt(k/(k+1)) LoS + sqrt(1/(k+1)) NLoS).
inline CMat compose_rician(const LinkSpec &spec, const CMat &los, const CMat &nlos)
{
    require(los.rows() == nlos.rows() && los.cols() == nlos.cols(),
            "compose_rician: LoS and NLoS dimensions differ");
    const double amp = std::sqrt(spec.gain);
    if (spec.pure_los)
        return amp * los;
    const double k = std::min(spec.rician, rician_cap);
    return amp * (std::sqrt(k / (k + 1.0)) * los + std::sqrt(1.0 / (k + 1.0)) * nlos);
}

inline CMat draw_link(const LinkModel &link, Rng &rng)
{
    if (link.spec.pure_los)
        return std::sqrt(link.spec.gain) * link.los;
    return compose_rician(link.spec, link.los, draw_nlos(link, rng));
}

/// The five channel matrices of one coherence block.
struct ChannelRealization {
    CMat h1; // K1 x Nt
    CMat h2; // K2 x Nt
    CMat g1; // Nr x K1
    CMat g2; // Nr x K2
    CMat d;  // K2 x K1
};

/// Aggregated end-to-end channel
///   O = G2 Phi2 D Phi1 H1 + G1 Phi1 H1 + G2 Phi2 H2,  Phi_i = diag(conj(v_i)).
inline CMat aggregate(const ChannelRealization &ch, const PhaseConfig &phases)
{
    require(phases.v1.size() == ch.h1.rows() && phases.v2.size() == ch.h2.rows(),
            "aggregate: phase vector lengths do not match RIS sizes");
    require(ch.g1.cols() == ch.h1.rows() && ch.g2.cols() == ch.h2.rows() &&
                ch.d.rows() == ch.h2.rows() && ch.d.cols() == ch.h1.rows() &&
                ch.h1.cols() == ch.h2.cols() && ch.g1.rows() == ch.g2.rows(),
            "aggregate: inconsistent channel dimensions");
    validate_unit_modulus(phases.v1);
    validate_unit_modulus(phases.v2);

    const auto phi1 = phases.v1.conjugate().asDiagonal();
    const auto phi2 = phases.v2.conjugate().asDiagonal();
    return ch.g2 * (phi2 * (ch.d * (phi1 * ch.h1))) + ch.g1 * (phi1 * ch.h1) +
           ch.g2 * (phi2 * ch.h2);
}

/// Per-link Rician factors, scatterer counts and array parameters for the
/// whole system. Spreads and spacings default to pi/3 and half-wavelength.
struct ChannelParams {
    int nt = 16;
    int nr = 16;
    UpaSpec ris1{4, 4, 0.5, 0.5};
    UpaSpec ris2{4, 4, 0.5, 0.5};
    double tx_spacing = 0.5;
    double rx_spacing = 0.5;
    double rician_h1 = 0.0, rician_h2 = 0.0; // epsilon_1, epsilon_2
    double rician_g1 = 0.0, rician_g2 = 0.0; // delta_1, delta_2
    double rician_d = 0.0;                   // mu
    bool pure_los = false;
    int sc_h1 = 15, sc_h2 = 15, sc_g1 = 15, sc_g2 = 15, sc_d = 15;
    double spread_tx = pi / 3.0;
    double spread_rx = pi / 3.0;
    double spread_ris1 = pi / 3.0;
    double spread_ris2 = pi / 3.0;
    double spread_scatter = pi / 3.0;
    double scatter_spacing = 0.5;
};

/// Immutable per-scenario channel generator. Building it precomputes the
/// LoS matrices, correlation matrices and square roots of all five links;
/// draw() can then be called concurrently with per-worker Rng streams.
class ChannelModel {
  public:
    ChannelModel(const ScenarioLayout &layout, const ChannelParams &params)
        : layout_(layout), params_(params)
    {
        require(params.nt >= 1 && params.nr >= 1, "ChannelModel: need nt, nr >= 1");
        const UpaSpec tx = as_upa(UlaSpec{params.nt, params.tx_spacing});
        const UpaSpec rx = as_upa(UlaSpec{params.nr, params.rx_spacing});

        h1_ = build_link(make_spec(params.ris1, tx, layout.h1, params.rician_h1,
                                   params.sc_h1, params.spread_ris1, params.spread_tx));
        h2_ = build_link(make_spec(params.ris2, tx, layout.h2, params.rician_h2,
                                   params.sc_h2, params.spread_ris2, params.spread_tx));
        g1_ = build_link(make_spec(rx, params.ris1, layout.g1, params.rician_g1,
                                   params.sc_g1, params.spread_rx, params.spread_ris1));
        g2_ = build_link(make_spec(rx, params.ris2, layout.g2, params.rician_g2,
                                   params.sc_g2, params.spread_rx, params.spread_ris2));
        d_ = build_link(make_spec(params.ris2, params.ris1, layout.d, params.rician_d,
                                  params.sc_d, params.spread_ris2, params.spread_ris1));
    }

    /// Draw order is fixed (H1, H2, G1, G2, D) so a seed pins the result.
    ChannelRealization draw(Rng &rng) const
    {
        ChannelRealization ch;
        ch.h1 = draw_link(h1_, rng);
        ch.h2 = draw_link(h2_, rng);
        ch.g1 = draw_link(g1_, rng);
        ch.g2 = draw_link(g2_, rng);
        ch.d = draw_link(d_, rng);
        return ch;
    }

    /// Deterministic pathloss-scaled LoS realization (the kappa -> infinity
    /// channel regardless of the configured Rician factors).
    ChannelRealization los_realization() const
    {
        ChannelRealization ch;
        ch.h1 = std::sqrt(h1_.spec.gain) * h1_.los;
        ch.h2 = std::sqrt(h2_.spec.gain) * h2_.los;
        ch.g1 = std::sqrt(g1_.spec.gain) * g1_.los;
        ch.g2 = std::sqrt(g2_.spec.gain) * g2_.los;
        ch.d = std::sqrt(d_.spec.gain) * d_.los;
        return ch;
    }

    const ScenarioLayout &layout() const { return layout_; }
    const ChannelParams &params() const { return params_; }
    const LinkModel &h1() const { return h1_; }
    const LinkModel &h2() const { return h2_; }
    const LinkModel &g1() const { return g1_; }
    const LinkModel &g2() const { return g2_; }
    const LinkModel &d() const { return d_; }
    int nt() const { return params_.nt; }
    int nr() const { return params_.nr; }
    int k1() const { return params_.ris1.size(); }
    int k2() const { return params_.ris2.size(); }

  private:
    LinkSpec make_spec(const UpaSpec &row_array, const UpaSpec &col_array,
                       const LinkGeometry &geo, double rician, int sc,
                       double row_spread, double col_spread) const
    {
        LinkSpec spec;
        spec.rician = rician;
        spec.gain = pathloss_linear(geo.distance);
        spec.n_scatterers = sc;
        spec.pure_los = params_.pure_los;
        spec.row_array = row_array;
        spec.col_array = col_array;
        spec.row_spread = row_spread;
        spec.col_spread = col_spread;
        spec.scatter_spread = params_.spread_scatter;
        spec.scatter_spacing = params_.scatter_spacing;
        spec.aoa_az = geo.aoa_az;
        spec.aoa_el = geo.aoa_el;
        spec.aod_az = geo.aod_az;
        spec.aod_el = geo.aod_el;
        return spec;
    }

    ScenarioLayout layout_;
    ChannelParams params_;
    LinkModel h1_, h2_, g1_, g2_, d_;
};

} // namespace dris
