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

#include "dris/statistics.hpp"

#include <doctest.h>

#include <cmath>

using namespace dris;

namespace {

// Five unit-gain links sharing the reference angles, with per-link Rician
// factors chosen so every cross term of the closed form carries weight.
struct SyntheticSystem {
    LinkModel h1, h2, g1, g2, d;
    int nt, nr, k1, k2;

    ChannelRealization draw(Rng &rng) const
    {
        ChannelRealization ch;
        ch.h1 = draw_link(h1, rng);
        ch.h2 = draw_link(h2, rng);
        ch.g1 = draw_link(g1, rng);
        ch.g2 = draw_link(g2, rng);
        ch.d = draw_link(d, rng);
        return ch;
    }

    StatisticalInputs inputs(const PhaseConfig &phases) const
    {
        StatisticalInputs in;
        in.nt = nt;
        in.nr = nr;
        in.h1_los = h1.los;
        in.h2_los = h2.los;
        in.g1_los = g1.los;
        in.g2_los = g2.los;
        in.d_los = d.los;
        in.h1_row_corr = h1.row_corr;
        in.h2_row_corr = h2.row_corr;
        in.g1_row_corr = g1.row_corr;
        in.g1_col_corr = g1.col_corr;
        in.g2_row_corr = g2.row_corr;
        in.g2_col_corr = g2.col_corr;
        in.d_row_corr = d.row_corr;
        in.d_col_corr = d.col_corr;
        in.rician_h1 = h1.spec.rician;
        in.rician_h2 = h2.spec.rician;
        in.rician_g1 = g1.spec.rician;
        in.rician_g2 = g2.spec.rician;
        in.rician_d = d.spec.rician;
        in.phases = phases;
        return in;
    }
};

SyntheticSystem make_synthetic(int sc)
{
    const ScenarioLayout s = build_scenario(2.0, 3.0, 1.0);
    const int nt = 3, nr = 3;
    const UpaSpec ris1{2, 2, 0.5, 0.5}, ris2{2, 2, 0.5, 0.5};
    const UpaSpec tx = as_upa(UlaSpec{nt, 0.5}), rx = as_upa(UlaSpec{nr, 0.5});

    auto spec = [&](const UpaSpec &row, const UpaSpec &col, const LinkGeometry &g,
                    double rician) {
        LinkSpec sp;
        sp.rician = rician;
        sp.gain = 1.0;
        sp.n_scatterers = sc;
        sp.row_array = row;
        sp.col_array = col;
        sp.aoa_az = g.aoa_az;
        sp.aoa_el = g.aoa_el;
        sp.aod_az = g.aod_az;
        sp.aod_el = g.aod_el;
        return sp;
    };

    SyntheticSystem sys;
    sys.nt = nt;
    sys.nr = nr;
    sys.k1 = ris1.size();
    sys.k2 = ris2.size();
    sys.h1 = build_link(spec(ris1, tx, s.h1, 6.0));
    sys.h2 = build_link(spec(ris2, tx, s.h2, 6.0));
    sys.g1 = build_link(spec(rx, ris1, s.g1, 2.0));
    sys.g2 = build_link(spec(rx, ris2, s.g2, 1.0));
    sys.d = build_link(spec(ris2, ris1, s.d, 6.0));
    return sys;
}

StatisticalInputs identity_corr_inputs(int nt, int nr, int k1, int k2,
                                       const PhaseConfig &phases)
{
    const ScenarioLayout s = build_scenario(2.0, 3.0, 1.0);
    StatisticalInputs in;
    in.nt = nt;
    in.nr = nr;
    in.h1_los = los_matrix(UpaSpec{1, k1, 0.5, 0.5}, as_upa(UlaSpec{nt, 0.5}), s.h1.aoa_az,
                           s.h1.aoa_el, s.h1.aod_az, s.h1.aod_el);
    in.h2_los = los_matrix(UpaSpec{1, k2, 0.5, 0.5}, as_upa(UlaSpec{nt, 0.5}), s.h2.aoa_az,
                           s.h2.aoa_el, s.h2.aod_az, s.h2.aod_el);
    in.g1_los = los_matrix(as_upa(UlaSpec{nr, 0.5}), UpaSpec{1, k1, 0.5, 0.5}, s.g1.aoa_az,
                           s.g1.aoa_el, s.g1.aod_az, s.g1.aod_el);
    in.g2_los = los_matrix(as_upa(UlaSpec{nr, 0.5}), UpaSpec{1, k2, 0.5, 0.5}, s.g2.aoa_az,
                           s.g2.aoa_el, s.g2.aod_az, s.g2.aod_el);
    in.d_los = los_matrix(UpaSpec{1, k2, 0.5, 0.5}, UpaSpec{1, k1, 0.5, 0.5}, s.d.aoa_az,
                          s.d.aoa_el, s.d.aod_az, s.d.aod_el);
    in.h1_row_corr = CMat::Identity(k1, k1);
    in.h2_row_corr = CMat::Identity(k2, k2);
    in.g1_row_corr = CMat::Identity(nr, nr);
    in.g1_col_corr = CMat::Identity(k1, k1);
    in.g2_row_corr = CMat::Identity(nr, nr);
    in.g2_col_corr = CMat::Identity(k2, k2);
    in.d_row_corr = CMat::Identity(k2, k2);
    in.d_col_corr = CMat::Identity(k1, k1);
    in.phases = phases;
    return in;
}

StatisticalInputs random_inputs(Rng &rng)
{
    const int sc = 1 + int(rng.uniform_int(6));
    SyntheticSystem sys = make_synthetic(sc);
    StatisticalInputs in =
        sys.inputs({uniform_phases(sys.k1, rng), uniform_phases(sys.k2, rng)});
    in.gain_h1 = 0.1 + rng.uniform();
    in.gain_h2 = 0.1 + rng.uniform();
    in.gain_g1 = 0.1 + rng.uniform();
    in.gain_g2 = 0.1 + rng.uniform();
    in.gain_d = 0.1 + rng.uniform();
    in.rician_h1 = 8.0 * rng.uniform();
    in.rician_h2 = 8.0 * rng.uniform();
    in.rician_g1 = 8.0 * rng.uniform();
    in.rician_g2 = 8.0 * rng.uniform();
    in.rician_d = 8.0 * rng.uniform();
    return in;
}

} // namespace

TEST_SUITE_BEGIN("statistics");

TEST_CASE("rayleigh identity-correlation trace has the closed dimensional form")
{
    const int nt = 4, nr = 3, k1 = 4, k2 = 5;
    Rng rng(3);
    StatisticalInputs in = identity_corr_inputs(
        nt, nr, k1, k2, {uniform_phases(k1, rng), uniform_phases(k2, rng)});
    in.gain_h1 = 0.7;
    in.gain_h2 = 0.3;
    in.gain_g1 = 0.5;
    in.gain_g2 = 0.9;
    in.gain_d = 0.2;

    const double expected = double(nt) * nr *
                            (in.gain_h1 * in.gain_g2 * in.gain_d * k1 * k2 +
                             in.gain_h1 * in.gain_g1 * k1 + in.gain_h2 * in.gain_g2 * k2);
    for (auto variant : {CrossTermVariant::as_printed, CrossTermVariant::conjugated_phase,
                         CrossTermVariant::full_expectation})
        CHECK(expected_power_gain(in, variant) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("pure LoS covariance equals the deterministic outer product")
{
    const ScenarioLayout s = build_scenario(100.0, 200.0, 2.0);
    ChannelParams p;
    p.nt = 4;
    p.nr = 4;
    p.ris1 = UpaSpec{2, 2, 0.5, 0.5};
    p.ris2 = UpaSpec{2, 2, 0.5, 0.5};
    p.pure_los = true;
    p.rician_h1 = p.rician_h2 = p.rician_g1 = p.rician_g2 = p.rician_d = 1e15;
    const ChannelModel model(s, p);

    Rng rng(4);
    const PhaseConfig phases{uniform_phases(4, rng), uniform_phases(4, rng)};
    const CMat o = aggregate(model.los_realization(), phases);
    const CMat direct = o * o.adjoint();
    const StatisticalInputs in = make_statistical_inputs(model, phases);
    const CMat cov = closed_form_covariance(in, CrossTermVariant::full_expectation);
    CHECK((cov - direct).norm() / direct.norm() < 1e-6);
    // With a deterministic channel the expectation has no freedom left, so
    // the published cross term misses this identity at random phases.
    const CMat printed = closed_form_covariance(in, CrossTermVariant::as_printed);
    CHECK((printed - direct).norm() / direct.norm() > 1e-6);
}

TEST_CASE("monte carlo oracle matches the full expectation and rejects the printed cross term")
{
    // Unit-gain strong-LoS instance where the double/single-RIS-2 cross
    // term carries several percent of the total power.
    SyntheticSystem sys = make_synthetic(3);
    Rng phase_rng(8);
    const PhaseConfig phases{uniform_phases(sys.k1, phase_rng),
                             uniform_phases(sys.k2, phase_rng)};
    const StatisticalInputs in = sys.inputs(phases);

    const CMat cov_full = closed_form_covariance(in, CrossTermVariant::full_expectation);
    const CMat cov_printed = closed_form_covariance(in, CrossTermVariant::as_printed);
    const CMat cov_conj = closed_form_covariance(in, CrossTermVariant::conjugated_phase);

    const int n = 100000;
    CMat mc = CMat::Zero(sys.nr, sys.nr);
    Rng rng(42);
    for (int t = 0; t < n; ++t) {
        const CMat o = aggregate(sys.draw(rng), phases);
        mc += o * o.adjoint();
    }
    mc /= double(n);

    const double err_full = (cov_full - mc).norm() / mc.norm();
    const double err_printed = (cov_printed - mc).norm() / mc.norm();
    const double err_conj = (cov_conj - mc).norm() / mc.norm();

    CHECK(err_full < 0.02);
    // The published sixth term misses the Rician weighting of the shared
    // RIS-2 link; the sampled channel votes for the full expectation.
    CHECK(err_printed > 2.0 * err_full);
    CHECK(err_conj > 2.0 * err_full);
    CHECK((cov_printed - cov_full).norm() / cov_full.norm() > 0.01);
}

TEST_CASE("expected power gain, scalar reference case")
{
    // Boresight single-element RIS panels with unit gains: every LoS entry
    // is 1, so O = 3 * ones and tr(O O^H) = 9 Nt Nr.
    const int nt = 2, nr = 2;
    StatisticalInputs in =
        identity_corr_inputs(nt, nr, 1, 1, {CVec::Ones(1), CVec::Ones(1)});
    in.h1_los = CMat::Ones(1, nt);
    in.h2_los = CMat::Ones(1, nt);
    in.g1_los = CMat::Ones(nr, 1);
    in.g2_los = CMat::Ones(nr, 1);
    in.d_los = CMat::Ones(1, 1);
    in.pure_los = true;
    CHECK(expected_power_gain(in) == doctest::Approx(9.0 * nt * nr).epsilon(1e-12));
}

TEST_CASE("vanishing pathloss collapses the gain")
{
    Rng rng(5);
    StatisticalInputs in = random_inputs(rng);
    in.gain_h1 = in.gain_h2 = in.gain_g1 = in.gain_g2 = in.gain_d = 1e-30;
    CHECK(expected_power_gain(in) < 1e-50);
}

TEST_CASE("monte carlo mean converges to the closed form at reference parameters")
{
    const ScenarioLayout s = build_scenario(100.0, 200.0, 2.0);
    const ChannelParams p; // Nt = Nr = 16, K = 16, SC = 15, Rayleigh links
    const ChannelModel model(s, p);
    const PhaseConfig phases{CVec::Ones(16), CVec::Ones(16)};

    const PowerGainReport rep = monte_carlo_power_gain(model, phases, 1000, 123, 2);
    CHECK(std::abs(rep.mc_mean - rep.closed_form_trace) < 0.02 * rep.closed_form_trace);
    CHECK(rep.closed_form_trace <= rep.upper_bound * (1.0 + 1e-6));
}

TEST_CASE("general bound dominates the expectation on random configurations")
{
    Rng rng(17);
    for (int t = 0; t < 100; ++t) {
        const StatisticalInputs in = random_inputs(rng);
        const double gain = expected_power_gain(in, CrossTermVariant::full_expectation);
        const double bound = upper_bound_general(in);
        CHECK(bound >= gain * (1.0 - 1e-9));
    }
}

TEST_CASE("pure LoS dominant bound term and its K^4 scaling")
{
    auto dominant_term = [](const UpaSpec &panel) {
        const ScenarioLayout s = build_scenario(100.0, 200.0, 2.0);
        ChannelParams p;
        p.ris1 = p.ris2 = panel;
        p.pure_los = true;
        p.rician_h1 = p.rician_h2 = p.rician_g1 = p.rician_g2 = p.rician_d = 1e15;
        const ChannelModel model(s, p);
        const int k = panel.size();
        const StatisticalInputs in =
            make_statistical_inputs(model, {CVec::Ones(k), CVec::Ones(k)});
        const double expected = in.gain_h1 * in.gain_g2 * in.gain_d * in.nt * in.nr *
                                double(k) * k * k * k;
        const BoundTerms terms = upper_bound_general_terms(in);
        CHECK(terms.terms[0] == doctest::Approx(expected).epsilon(1e-12));
        return terms.terms[0];
    };

    // Doubling K1 = K2 = K multiplies the K1^2 K2^2 term by 16.
    const double at_k4 = dominant_term(UpaSpec{2, 2, 0.5, 0.5});
    const double at_k8 = dominant_term(UpaSpec{2, 4, 0.5, 0.5});
    CHECK(at_k8 == doctest::Approx(16.0 * at_k4).epsilon(1e-12));
}

TEST_CASE("rayleigh bound: closed value, K scaling and keyhole inflation")
{
    const int nt = 4, nr = 3;
    Rng rng(19);

    auto nlos_inputs = [&](int k1, int k2) {
        StatisticalInputs in = identity_corr_inputs(
            nt, nr, k1, k2, {uniform_phases(k1, rng), uniform_phases(k2, rng)});
        in.gain_h1 = 0.4;
        in.gain_h2 = 0.6;
        in.gain_g1 = 0.2;
        in.gain_g2 = 0.8;
        in.gain_d = 0.5;
        return in;
    };

    const StatisticalInputs a = nlos_inputs(3, 4);
    const BoundTerms t = upper_bound_nlos_terms(a);
    CHECK(t.terms[0] ==
          doctest::Approx(a.gain_h1 * a.gain_g2 * a.gain_d * nt * nr * 12.0).epsilon(1e-12));
    CHECK(t.terms[1] == doctest::Approx(a.gain_h1 * a.gain_g1 * nt * nr * 3.0).epsilon(1e-12));
    CHECK(t.terms[2] == doctest::Approx(a.gain_h2 * a.gain_g2 * nt * nr * 4.0).epsilon(1e-12));

    const StatisticalInputs b = nlos_inputs(6, 8);
    CHECK(upper_bound_nlos_terms(b).terms[0] == doctest::Approx(4.0 * t.terms[0]).epsilon(1e-12));

    // Keyhole: all-ones K x K correlations have spectral norm K.
    StatisticalInputs key = nlos_inputs(3, 4);
    key.g2_col_corr = CMat::Ones(4, 4);
    key.d_col_corr = CMat::Ones(3, 3);
    CHECK(upper_bound_nlos_terms(key).terms[0] ==
          doctest::Approx(12.0 * t.terms[0]).epsilon(1e-12));

    StatisticalInputs bad = nlos_inputs(3, 4);
    bad.rician_d = 0.5;
    CHECK_THROWS_AS(upper_bound_nlos(bad), std::invalid_argument);
}

TEST_CASE("covariance is hermitian PSD")
{
    Rng rng(23);
    for (int t = 0; t < 20; ++t) {
        const StatisticalInputs in = random_inputs(rng);
        const CMat cov = closed_form_covariance(in, CrossTermVariant::full_expectation);
        CHECK((cov - cov.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
        Eigen::SelfAdjointEigenSolver<CMat> es(cov);
        CHECK(es.eigenvalues()(0) >= -1e-6 * cov.trace().real());
    }
}

TEST_CASE("power gain is invariant to a common v1 rotation when cross terms vanish")
{
    Rng rng(29);
    SyntheticSystem sys = make_synthetic(3);
    PhaseConfig phases{uniform_phases(sys.k1, rng), uniform_phases(sys.k2, rng)};
    StatisticalInputs in = sys.inputs(phases);
    in.rician_h2 = 0.0; // epsilon_2 = 0 kills terms 6 and 8
    in.rician_g1 = 0.0; // delta_1 = 0 kills term 5

    const double base = expected_power_gain(in);
    in.phases.v1 *= std::exp(iu * 1.234);
    const double rotated = expected_power_gain(in);
    CHECK(std::abs(rotated - base) < 1e-8 * std::abs(base));
}

TEST_CASE("scatterer count extremes bracket the rayleigh bound")
{
    // Under the discrete-grid correlation model the spectral norms do not
    // shrink to 1 as SC grows (the grid densifies inside a fixed spread),
    // so the bound is not monotone in SC. What does hold: the keyhole
    // extreme maximizes it, and identity correlations floor it.
    const ScenarioLayout s = build_scenario(100.0, 200.0, 2.0);
    const PhaseConfig phases{CVec::Ones(16), CVec::Ones(16)};

    auto bound_at = [&](int sc) {
        ChannelParams p;
        p.sc_h1 = p.sc_h2 = p.sc_g1 = p.sc_g2 = p.sc_d = sc;
        return make_statistical_inputs(ChannelModel(s, p), phases);
    };

    const StatisticalInputs keyhole = bound_at(1);
    const double top = upper_bound_nlos(keyhole);
    StatisticalInputs floor_in = keyhole;
    floor_in.g1_col_corr = CMat::Identity(16, 16);
    floor_in.g2_col_corr = CMat::Identity(16, 16);
    floor_in.d_col_corr = CMat::Identity(16, 16);
    const double floor = upper_bound_nlos(floor_in);

    for (int sc : {2, 5, 15, 50, 500}) {
        const double bound = upper_bound_nlos(bound_at(sc));
        CHECK(bound <= top * (1.0 + 1e-12));
        CHECK(bound >= floor * (1.0 - 1e-12));
    }
}

TEST_CASE("monte carlo report is deterministic and worker-invariant")
{
    const ScenarioLayout s = build_scenario(100.0, 200.0, 2.0);
    ChannelParams p;
    p.nt = 4;
    p.nr = 4;
    p.ris1 = p.ris2 = UpaSpec{2, 2, 0.5, 0.5};
    p.sc_h1 = p.sc_h2 = p.sc_g1 = p.sc_g2 = p.sc_d = 3;
    const ChannelModel model(s, p);
    const PhaseConfig phases{CVec::Ones(4), CVec::Ones(4)};

    const PowerGainReport a = monte_carlo_power_gain(model, phases, 200, 7, 1);
    const PowerGainReport b = monte_carlo_power_gain(model, phases, 200, 7, 1);
    const PowerGainReport c = monte_carlo_power_gain(model, phases, 200, 7, 3);
    CHECK(a.mc_mean == b.mc_mean);
    CHECK(a.mc_stderr == b.mc_stderr);
    CHECK(a.mc_mean == c.mc_mean);
    CHECK(a.mc_stderr == c.mc_stderr);

    ChannelParams pl = p;
    pl.pure_los = true;
    const ChannelModel los_model(s, pl);
    const PowerGainReport r = monte_carlo_power_gain(los_model, phases, 50, 7, 1);
    CHECK(r.mc_stderr <= 1e-12 * r.mc_mean);
    CHECK(r.mc_mean == doctest::Approx(r.closed_form_trace).epsilon(1e-9));
}

TEST_SUITE_END();
