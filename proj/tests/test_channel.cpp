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

#include "dris/channel.hpp"
#include "dris/statistics.hpp"

#include <doctest.h>

#include <cmath>

using namespace dris;

namespace {

LinkSpec identity_corr_spec(int rows, int cols, int sc)
{
    // Spread 0 would give all-ones correlations; to get identity-like
    // correlations the tests build the spec and then overwrite the
    // prebuilt matrices directly.
    LinkSpec spec;
    spec.row_array = UpaSpec{1, rows, 0.5, 0.5};
    spec.col_array = UpaSpec{1, cols, 0.5, 0.5};
    spec.n_scatterers = sc;
    return spec;
}

LinkModel identity_corr_link(int rows, int cols, int sc)
{
    LinkModel link = build_link(identity_corr_spec(rows, cols, sc));
    link.row_corr = CMat::Identity(rows, rows);
    link.col_corr = CMat::Identity(cols, cols);
    link.row_sqrt = CMat::Identity(rows, rows);
    link.col_sqrt = CMat::Identity(cols, cols);
    link.scatter_sqrt = CMat::Identity(sc, sc);
    return link;
}

ChannelParams small_params()
{
    ChannelParams p;
    p.nt = 3;
    p.nr = 2;
    p.ris1 = UpaSpec{2, 2, 0.5, 0.5};
    p.ris2 = UpaSpec{1, 3, 0.5, 0.5};
    p.sc_h1 = p.sc_h2 = p.sc_g1 = p.sc_g2 = p.sc_d = 4;
    p.rician_h1 = 1.0;
    p.rician_g2 = 2.5;
    return p;
}

} // namespace

TEST_SUITE_BEGIN("channel");

TEST_CASE("los matrices are rank-1 with unit-modulus entries")
{
    const ScenarioLayout s = build_scenario(100.0, 200.0, 2.0);
    const UpaSpec ris{3, 2, 0.5, 0.5};
    const UpaSpec tx = as_upa(UlaSpec{4, 0.5});

    const CMat h1 = los_matrix(ris, tx, s.h1.aoa_az, s.h1.aoa_el, s.h1.aod_az, s.h1.aod_el);
    REQUIRE(h1.rows() == 6);
    REQUIRE(h1.cols() == 4);
    CHECK(std::abs(h1(0, 0) - cxd(1.0, 0.0)) < 1e-14);
    for (int m = 0; m < 6; ++m)
        for (int n = 0; n < 4; ++n)
            CHECK(std::abs(std::abs(h1(m, n)) - 1.0) < 1e-13);

    Eigen::JacobiSVD<CMat> svd(h1);
    CHECK(svd.singularValues()(1) < 1e-10 * svd.singularValues()(0));
}

TEST_CASE("single-scatterer NLoS draw is a keyhole outer product")
{
    const LinkModel link = identity_corr_link(3, 4, 1);
    Rng rng(5);
    const CMat a = draw_nlos(link, rng);
    Eigen::JacobiSVD<CMat> svd(a);
    CHECK(svd.singularValues()(1) < 1e-12 * svd.singularValues()(0));
}

TEST_CASE("NLoS draws have unit entry variance and zero mean")
{
    const int rows = 4, cols = 3, n = 100000;
    const LinkModel link = identity_corr_link(rows, cols, 6);
    Rng rng(11);
    double power = 0.0;
    CMat mean = CMat::Zero(rows, cols);
    for (int t = 0; t < n; ++t) {
        const CMat a = draw_nlos(link, rng);
        power += a.squaredNorm();
        mean += a;
    }
    power /= n;
    mean /= double(n);
    // E||A||_F^2 = rows * cols under identity correlations.
    CHECK(power == doctest::Approx(double(rows * cols)).epsilon(0.02));
    // Zero mean within 3 sigma / sqrt(n) per entry.
    const double bound = 3.0 / std::sqrt(double(n));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            CHECK(std::abs(mean(r, c).real()) < bound);
            CHECK(std::abs(mean(r, c).imag()) < bound);
            CHECK(std::isfinite(std::abs(mean(r, c))));
        }
}

TEST_CASE("sample covariance of a correlated draw matches N_cols * R_row")
{
    // E[A A^H] = Nt R_row for the double-scattering model; checked on the
    // identity-correlation case, diagonal within 3%.
    const int rows = 3, cols = 4, n = 100000;
    const LinkModel link = identity_corr_link(rows, cols, 5);
    Rng rng(13);
    CMat acc = CMat::Zero(rows, rows);
    for (int t = 0; t < n; ++t) {
        const CMat a = draw_nlos(link, rng);
        acc += a * a.adjoint();
    }
    acc /= double(n);
    for (int r = 0; r < rows; ++r)
        CHECK(acc(r, r).real() == doctest::Approx(double(cols)).epsilon(0.03));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < rows; ++c)
            if (r != c)
                CHECK(std::abs(acc(r, c)) < 0.05 * cols);
}

TEST_CASE("rician composition weights")
{
    const LinkModel link = identity_corr_link(2, 2, 3);
    Rng rng(17);
    const CMat nlos = draw_nlos(link, rng);
    const CMat los = link.los;

    LinkSpec spec = link.spec;
    spec.gain = 0.25;

    spec.rician = 0.0;
    CHECK((compose_rician(spec, los, nlos) - 0.5 * nlos).cwiseAbs().maxCoeff() < 1e-15);

    spec.rician = 1e13; // above the cap
    const CMat near_los = compose_rician(spec, los, nlos);
    CHECK((near_los - 0.5 * los).cwiseAbs().maxCoeff() <
          1e-5 * los.cwiseAbs().maxCoeff());

    spec.rician = 1.0;
    spec.gain = 1.0;
    CHECK((compose_rician(spec, los, nlos) - (los + nlos) / std::sqrt(2.0))
              .cwiseAbs()
              .maxCoeff() < 1e-14);

    spec.pure_los = true;
    CHECK((compose_rician(spec, los, nlos) - los).cwiseAbs().maxCoeff() < 1e-15);

    CHECK_THROWS_AS(compose_rician(spec, los, CMat::Zero(3, 3)), std::invalid_argument);
}

TEST_CASE("realizations are seed-deterministic with audited dimensions")
{
    const ScenarioLayout s = build_scenario(100.0, 200.0, 2.0);
    const ChannelParams p = small_params();
    const ChannelModel model(s, p);

    Rng rng_a(99), rng_b(99);
    const ChannelRealization a = model.draw(rng_a);
    const ChannelRealization b = model.draw(rng_b);

    CHECK(a.h1.rows() == 4);
    CHECK(a.h1.cols() == 3);
    CHECK(a.h2.rows() == 3);
    CHECK(a.g1.rows() == 2);
    CHECK(a.g1.cols() == 4);
    CHECK(a.g2.cols() == 3);
    CHECK(a.d.rows() == 3);
    CHECK(a.d.cols() == 4);

    CHECK((a.h1 - b.h1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.d - b.d).cwiseAbs().maxCoeff() == 0.0);

    Rng rng_c(100);
    const ChannelRealization c = model.draw(rng_c);
    CHECK((a.h1 - c.h1).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("pure LoS model draws the deterministic channel")
{
    const ScenarioLayout s = build_scenario(100.0, 200.0, 2.0);
    ChannelParams p = small_params();
    p.pure_los = true;
    const ChannelModel model(s, p);
    Rng rng(1);
    const ChannelRealization a = model.draw(rng);
    const ChannelRealization b = model.los_realization();
    CHECK((a.h1 - b.h1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.g2 - b.g2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(std::abs(a.h1(0, 0)) - std::sqrt(pathloss_linear(100.0))) < 1e-15);
}

TEST_CASE("aggregate reference cases")
{
    // Scalar system: every channel is [1], v = [1] => O = 3.
    ChannelRealization ch;
    ch.h1 = ch.h2 = ch.d = CMat::Ones(1, 1);
    ch.g1 = ch.g2 = CMat::Ones(1, 1);
    PhaseConfig phases{CVec::Ones(1), CVec::Ones(1)};
    const CMat o = aggregate(ch, phases);
    CHECK(std::abs(o(0, 0) - cxd(3.0, 0.0)) < 1e-15);

    // Dropping the inter-RIS link removes the double-reflection term.
    Rng rng(23);
    ChannelRealization r;
    r.h1 = rng.complex_normal_matrix(3, 2);
    r.h2 = rng.complex_normal_matrix(4, 2);
    r.g1 = rng.complex_normal_matrix(2, 3);
    r.g2 = rng.complex_normal_matrix(2, 4);
    r.d = CMat::Zero(4, 3);
    PhaseConfig ph{uniform_phases(3, rng), uniform_phases(4, rng)};
    const CMat o2 = aggregate(r, ph);
    const CMat expected = r.g1 * ph.v1.conjugate().asDiagonal() * r.h1 +
                          r.g2 * ph.v2.conjugate().asDiagonal() * r.h2;
    CHECK((o2 - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("aggregate matches a naive entrywise triple product")
{
    Rng rng(29);
    const int nt = 3, nr = 2, k1 = 4, k2 = 5;
    ChannelRealization ch;
    ch.h1 = rng.complex_normal_matrix(k1, nt);
    ch.h2 = rng.complex_normal_matrix(k2, nt);
    ch.g1 = rng.complex_normal_matrix(nr, k1);
    ch.g2 = rng.complex_normal_matrix(nr, k2);
    ch.d = rng.complex_normal_matrix(k2, k1);
    const PhaseConfig ph{uniform_phases(k1, rng), uniform_phases(k2, rng)};

    // Index-by-index evaluation of G2 Phi2 D Phi1 H1 + G1 Phi1 H1 + G2 Phi2 H2.
    CMat naive = CMat::Zero(nr, nt);
    for (int r = 0; r < nr; ++r)
        for (int c = 0; c < nt; ++c) {
            cxd acc(0.0, 0.0);
            for (int a = 0; a < k2; ++a)
                for (int b = 0; b < k1; ++b)
                    acc += ch.g2(r, a) * std::conj(ph.v2(a)) * ch.d(a, b) *
                           std::conj(ph.v1(b)) * ch.h1(b, c);
            for (int b = 0; b < k1; ++b)
                acc += ch.g1(r, b) * std::conj(ph.v1(b)) * ch.h1(b, c);
            for (int a = 0; a < k2; ++a)
                acc += ch.g2(r, a) * std::conj(ph.v2(a)) * ch.h2(a, c);
            naive(r, c) = acc;
        }

    CHECK((aggregate(ch, ph) - naive).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("single-path power is invariant to a common v1 rotation when only RIS 2 reflects")
{
    Rng rng(31);
    ChannelRealization ch;
    ch.h1 = rng.complex_normal_matrix(3, 2);
    ch.h2 = rng.complex_normal_matrix(4, 2);
    ch.g1 = CMat::Zero(2, 3);
    ch.g2 = rng.complex_normal_matrix(2, 4);
    ch.d = CMat::Zero(4, 3);
    PhaseConfig ph{uniform_phases(3, rng), uniform_phases(4, rng)};
    const double base = aggregate(ch, ph).squaredNorm();
    PhaseConfig rotated{ph.v1 * std::exp(iu * 0.87), ph.v2};
    CHECK(aggregate(ch, rotated).squaredNorm() == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("aggregate validates phases and dimensions")
{
    ChannelRealization ch;
    ch.h1 = CMat::Ones(2, 2);
    ch.h2 = CMat::Ones(3, 2);
    ch.g1 = CMat::Ones(2, 2);
    ch.g2 = CMat::Ones(2, 3);
    ch.d = CMat::Ones(3, 2);
    PhaseConfig bad{CVec::Ones(2) * 0.5, CVec::Ones(3)};
    CHECK_THROWS_AS(aggregate(ch, bad), std::invalid_argument);
    PhaseConfig wrong_len{CVec::Ones(3), CVec::Ones(3)};
    CHECK_THROWS_AS(aggregate(ch, wrong_len), std::invalid_argument);
}

TEST_SUITE_END();
