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

#include "dris/channel.hpp"
#include "dris/common.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace dris {

/// Sum path gain tr(O O^H) = ||O||_F^2, the surrogate objective used for
/// phase-shift optimization.
inline double sum_path_gain(const CMat &o)
{
    return o.squaredNorm();
}

/// Channel power of the phase subproblem, tr((M diag(conj v) H + B)(.)^H).
inline double phase_objective(const CMat &m, const CMat &h, const CMat &b, const CVec &v)
{
    return (m * v.conjugate().asDiagonal() * h + b).squaredNorm();
}

struct AdmmSettings {
    double rho_factor = 1.5 * 1.4142135623730951; // multiple of lambda_max, > sqrt(2)
    int max_iters = 500;
    double tol = 1e-5; // stop when ||u_{k+1} - u_k||_inf < tol

    void validate() const
    {
        require(rho_factor > 1.4142135623730951, "AdmmSettings: rho_factor must exceed sqrt(2)");
        require(max_iters >= 1, "AdmmSettings: max_iters must be >= 1");
        require(tol > 0.0, "AdmmSettings: tol must be positive");
    }
};

struct AoSettings {
    double epsilon = 1e-5; // stop when the fractional objective increase drops below
    int max_outer = 50;
    bool warm_start = true; // reuse the previous outer iterate as the ADMM init

    void validate() const
    {
        require(epsilon > 0.0, "AoSettings: epsilon must be positive");
        require(max_outer >= 1, "AoSettings: max_outer must be >= 1");
    }
};

/// Quadratic lift of the phase subproblem. Maximizing
/// tr((M diag(conj v) H + B)(.)^H) over unit-modulus v equals minimizing
/// p^H T p over unit-modulus p = [t v; t], up to the constant tr(B B^H):
///   p^H T p = tr(B B^H) - objective(v).
/// t_hat = T - lambda_min(T) I is the PSD shift used by the ADMM updates.
struct QuadraticLift {
    CMat t;
    CMat t_hat;
    double lambda_min = 0.0;
    double lambda_max_hat = 0.0;
};

/// Assembles the lift for given M (Nr x K), H (K x Nt), B (Nr x Nt).
/// The top-left block is -(H H^H) o conj(M^H M) (Hadamard product), the
/// border holds the negated diagonal of H B^H M.
inline QuadraticLift build_lift(const CMat &m, const CMat &h, const CMat &b)
{
    const Eigen::Index k = m.cols();
    require(h.rows() == k, "build_lift: M and H dimensions do not chain");
    require(b.rows() == m.rows() && b.cols() == h.cols(),
            "build_lift: B must match M H in shape");

    const CMat hh = h * h.adjoint();
    const CMat mm = (m.adjoint() * m).conjugate();
    const CMat hbm = h * b.adjoint() * m;

    QuadraticLift lift;
    lift.t = CMat::Zero(k + 1, k + 1);
    lift.t.topLeftCorner(k, k) = -hh.cwiseProduct(mm);
    lift.t.block(0, k, k, 1) = -hbm.diagonal();
    lift.t.block(k, 0, 1, k) = lift.t.block(0, k, k, 1).adjoint();
    lift.t = hermitian_part(lift.t);

    Eigen::SelfAdjointEigenSolver<CMat> es(lift.t, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalError("build_lift: eigendecomposition failed");
    lift.lambda_min = es.eigenvalues()(0);
    lift.lambda_max_hat = es.eigenvalues()(k) - lift.lambda_min;
    lift.t_hat = lift.t - lift.lambda_min * CMat::Identity(k + 1, k + 1);
    return lift;
}

struct AdmmResult {
    CVec u;                              // unit-modulus iterate, length K + 1
    std::vector<double> objective_trace; // Re(u^H T u) per iteration
    std::vector<double> residual_trace;  // ||u - p||_inf per iteration
    int iterations = 0;
    bool converged = false;
    double final_residual = 0.0;
    // tr(B B^H) of the owning subproblem; the channel-power objective at
    // iteration k is objective_offset - objective_trace[k].
    double objective_offset = 0.0;
};

namespace detail {

/// Entrywise projection onto the unit circle; zero maps to 1.
inline CVec unit_phase(const CVec &x)
{
    CVec out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double a = std::abs(x(i));
        out(i) = (a > 0.0) ? x(i) / a : cxd(1.0, 0.0);
    }
    return out;
}

} // namespace detail

/// ADMM for the lifted unit-modulus quadratic program. Iterates
///   u = phase(p - nu / rho),  p = (rho I + T_hat)^{-1} (rho u + nu),
///   nu = T_hat p,
/// with rho = rho_factor * lambda_max(T_hat). The linear solve reuses one
/// Cholesky factorization across iterations. Returns the best unit-modulus
/// iterate; hitting max_iters sets converged = false instead of throwing.
inline AdmmResult admm_solve(const QuadraticLift &lift, const AdmmSettings &settings,
                             const CVec &init_phases)
{
    settings.validate();
    const Eigen::Index n = lift.t_hat.rows();
    require(init_phases.size() == n - 1, "admm_solve: init length must be K");

    CVec p(n);
    p.head(n - 1) = init_phases;
    p(n - 1) = cxd(1.0, 0.0);

    const double rho = (lift.lambda_max_hat > 1e-14)
                           ? settings.rho_factor * lift.lambda_max_hat
                           : 1.0;
    Eigen::LLT<CMat> solver(rho * CMat::Identity(n, n) + lift.t_hat);
    if (solver.info() != Eigen::Success)
        throw NumericalError("admm_solve: Cholesky factorization failed");

    CVec nu = lift.t_hat * p;
    CVec u_prev = detail::unit_phase(p);

    AdmmResult result;
    result.u = u_prev;
    double best_obj = std::numeric_limits<double>::infinity();

    for (int k = 1; k <= settings.max_iters; ++k) {
        const CVec u = detail::unit_phase(p - nu / rho);
        p = solver.solve(rho * u + nu);
        nu = lift.t_hat * p;

        const double obj = (u.adjoint() * lift.t * u)(0, 0).real();
        result.objective_trace.push_back(obj);
        result.residual_trace.push_back((u - p).cwiseAbs().maxCoeff());
        if (obj < best_obj) {
            best_obj = obj;
            result.u = u;
        }

        const double du = (u - u_prev).cwiseAbs().maxCoeff();
        u_prev = u;
        result.iterations = k;
        if (du < settings.tol) {
            result.converged = true;
            break;
        }
    }
    result.final_residual = result.residual_trace.back();
    return result;
}

/// Recovers the length-K phase vector from the lifted solution by dividing
/// out the auxiliary entry; the result is renormalized to exact unit modulus.
inline CVec extract_phase_vector(const CVec &p)
{
    const Eigen::Index n = p.size();
    require(n >= 2, "extract_phase_vector: lifted vector too short");
    const cxd pivot = p(n - 1);
    require(std::abs(std::abs(pivot) - 1.0) < 1e-9,
            "extract_phase_vector: auxiliary entry must be unit-modulus");
    return detail::unit_phase(CVec(p.head(n - 1) / pivot));
}

struct SubproblemResult {
    CVec v;
    AdmmResult admm;
    bool kept_init = false; // ADMM result discarded because it lost to the init
};

/// Solves max_v tr((M diag(conj v) H + B)(.)^H) over unit-modulus v via the
/// quadratic lift and ADMM. Never returns a vector worse than the init.
inline SubproblemResult solve_phase_subproblem(const CMat &m, const CMat &h, const CMat &b,
                                               const AdmmSettings &settings, const CVec &init)
{
    const QuadraticLift lift = build_lift(m, h, b);
    SubproblemResult res;
    res.admm = admm_solve(lift, settings, init);
    res.admm.objective_offset = b.squaredNorm();
    res.v = extract_phase_vector(res.admm.u);
    if (phase_objective(m, h, b, res.v) < phase_objective(m, h, b, init)) {
        res.v = init;
        res.kept_init = true;
    }
    return res;
}

struct AoResult {
    PhaseConfig phases;
    std::vector<double> objective_trace;     // tr(O O^H) per outer iteration, entry 0 = init
    std::vector<PhaseConfig> phase_trace;    // phases after each outer iteration
    int outer_iterations = 0;
    bool converged = false;
    AdmmResult first_admm_v1; // inner trace of the first v1 subproblem
    AdmmResult first_admm_v2; // inner trace of the first v2 subproblem
    long total_inner_iterations = 0;
    long subproblem_solves = 0;
    long subproblem_nonconverged = 0; // solves that hit max_iters before tol
};

/// Alternating optimization of the two phase vectors. Each outer iteration
/// solves the v1 subproblem with M = G2 Phi2 D + G1, B = G2 Phi2 H2, then
/// the v2 subproblem with M = G2, H = D Phi1 H1 + H2, B = G1 Phi1 H1, and
/// stops once the fractional objective increase falls below epsilon. The
/// per-step keep-best rule makes the objective trace non-decreasing.
inline AoResult alternating_optimize(const ChannelRealization &ch, const AoSettings &ao,
                                     const AdmmSettings &admm, const PhaseConfig &init)
{
    ao.validate();
    CVec v1 = init.v1;
    CVec v2 = init.v2;
    validate_unit_modulus(v1);
    validate_unit_modulus(v2);

    AoResult result;
    double obj = sum_path_gain(aggregate(ch, {v1, v2}));
    result.objective_trace.push_back(obj);
    result.phases = {v1, v2};

    for (int outer = 1; outer <= ao.max_outer; ++outer) {
        const CVec v1_init = ao.warm_start ? v1 : CVec(CVec::Ones(v1.size()));
        const CVec v2_init = ao.warm_start ? v2 : CVec(CVec::Ones(v2.size()));

        const CMat g2_phi2 = ch.g2 * v2.conjugate().asDiagonal();
        const CMat m1 = g2_phi2 * ch.d + ch.g1;
        const CMat b1 = g2_phi2 * ch.h2;
        const SubproblemResult step1 = solve_phase_subproblem(m1, ch.h1, b1, admm, v1_init);
        // Under cold start the subproblem guard only compares against the
        // fixed init, so guard against the current iterate as well.
        if (phase_objective(m1, ch.h1, b1, step1.v) >= phase_objective(m1, ch.h1, b1, v1))
            v1 = step1.v;

        const CMat phi1_h1 = v1.conjugate().asDiagonal() * ch.h1;
        const CMat n2 = ch.d * phi1_h1 + ch.h2;
        const CMat b2 = ch.g1 * phi1_h1;
        const SubproblemResult step2 = solve_phase_subproblem(ch.g2, n2, b2, admm, v2_init);
        if (phase_objective(ch.g2, n2, b2, step2.v) >= phase_objective(ch.g2, n2, b2, v2))
            v2 = step2.v;

        result.total_inner_iterations += step1.admm.iterations + step2.admm.iterations;
        result.subproblem_solves += 2;
        result.subproblem_nonconverged += !step1.admm.converged + !step2.admm.converged;
        if (outer == 1) {
            result.first_admm_v1 = step1.admm;
            result.first_admm_v2 = step2.admm;
        }

        const double new_obj = sum_path_gain(aggregate(ch, {v1, v2}));
        result.outer_iterations = outer;
        if (new_obj >= obj) {
            result.phases = {v1, v2};
        } else {
            // Numerically impossible under the keep-best rule; retain the
            // previous iterate and treat as converged.
            v1 = result.phases.v1;
            v2 = result.phases.v2;
        }
        const double recorded = std::max(new_obj, obj);
        result.objective_trace.push_back(recorded);
        result.phase_trace.push_back(result.phases);

        const double rel = (obj > 0.0) ? (recorded - obj) / obj : recorded;
        obj = recorded;
        if (rel < ao.epsilon) {
            result.converged = true;
            break;
        }
    }
    return result;
}

/// Precoder, combiner and per-stream powers of the SVD design.
struct TransceiverDesign {
    CMat precoder; // Nt x Ns, ||F||_F^2 = Ns
    CMat combiner; // Ns x Nr, rows orthonormal
    RVec powers;   // length Ns, sums to Ns
    RVec singular_values; // all min(Nt, Nr) values, descending
};

/// Water-filling power allocation: p_i = (level - sigma2 Ns / (P lambda_i^2))^+
/// with the level chosen so sum p_i = Ns. The level is located by bisection
/// and then refined analytically on the resulting active set, so the KKT
/// conditions hold exactly.
inline RVec water_filling(const RVec &lambdas, int ns, double p_total, double sigma2)
{
    require(ns >= 1, "water_filling: ns must be >= 1");
    require(lambdas.size() >= ns, "water_filling: need at least ns singular values");
    require(p_total > 0.0 && sigma2 > 0.0, "water_filling: powers must be positive");

    std::vector<double> cost(ns);
    bool any_active = false;
    double max_cost = 0.0;
    for (int i = 0; i < ns; ++i) {
        require(lambdas(i) >= 0.0, "water_filling: singular values must be >= 0");
        if (lambdas(i) > 0.0) {
            cost[i] = sigma2 * ns / (p_total * lambdas(i) * lambdas(i));
            any_active = true;
            max_cost = std::max(max_cost, cost[i]);
        } else {
            cost[i] = std::numeric_limits<double>::infinity();
        }
    }
    if (!any_active)
        throw NumericalError("water_filling: all singular values are zero");

    auto allocated = [&](double level) {
        double s = 0.0;
        for (int i = 0; i < ns; ++i)
            if (std::isfinite(cost[i]) && level > cost[i])
                s += level - cost[i];
        return s;
    };

    double lo = 0.0, hi = max_cost + double(ns) + 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (allocated(mid) < double(ns) ? lo : hi) = mid;
    }

    // Exact level for the active set found by bisection; on a tie the set
    // is re-derived from the sorted costs.
    std::vector<int> order;
    for (int i = 0; i < ns; ++i)
        if (std::isfinite(cost[i]))
            order.push_back(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return cost[a] < cost[b]; });

    int n_active = 0;
    double cost_sum = 0.0;
    for (int i : order)
        if (hi > cost[i]) {
            cost_sum += cost[i];
            ++n_active;
        }
    double level = (double(ns) + cost_sum) / double(n_active);
    if (n_active < int(order.size()) && level > cost[order[n_active]] + 1e-12) {
        // Boundary tie: fall back to the standard shrink-until-valid scan.
        n_active = int(order.size());
        for (;;) {
            cost_sum = 0.0;
            for (int k = 0; k < n_active; ++k)
                cost_sum += cost[order[k]];
            level = (double(ns) + cost_sum) / double(n_active);
            if (n_active == 1 || level > cost[order[n_active - 1]])
                break;
            --n_active;
        }
    }

    RVec powers = RVec::Zero(ns);
    for (int k = 0; k < n_active; ++k)
        powers(order[k]) = level - cost[order[k]];
    return powers;
}

/// SVD transceiver: F = V_{1:Ns} Gamma^{1/2}, W = U_{1:Ns}^H with
/// water-filled per-stream powers.
inline TransceiverDesign svd_transceiver(const CMat &o, int ns, double p_total, double sigma2)
{
    const int rank_max = int(std::min(o.rows(), o.cols()));
    require(ns >= 1 && ns <= rank_max, "svd_transceiver: ns out of range");

    Eigen::JacobiSVD<CMat> svd(o, Eigen::ComputeThinU | Eigen::ComputeThinV);
    TransceiverDesign design;
    design.singular_values = svd.singularValues();
    design.powers = water_filling(design.singular_values.head(ns), ns, p_total, sigma2);
    design.precoder = svd.matrixV().leftCols(ns) *
                      design.powers.cwiseSqrt().asDiagonal();
    design.combiner = svd.matrixU().leftCols(ns).adjoint();
    return design;
}

/// Capacity sum_i log2(1 + P p_i lambda_i^2 / (sigma2 Ns)) in bits/s/Hz.
inline double capacity(const RVec &lambdas, const RVec &powers, int ns, double p_total,
                       double sigma2)
{
    require(lambdas.size() >= ns && powers.size() >= ns, "capacity: length mismatch");
    double c = 0.0;
    for (int i = 0; i < ns; ++i)
        c += std::log2(1.0 + p_total * powers(i) * lambdas(i) * lambdas(i) /
                       (sigma2 * double(ns)));
    return c;
}

/// Convenience: optimized design and capacity for one realization.
inline double design_capacity(const CMat &o, int ns, double p_total, double sigma2)
{
    const TransceiverDesign d = svd_transceiver(o, ns, p_total, sigma2);
    return capacity(d.singular_values, d.powers, ns, p_total, sigma2);
}

} // namespace dris
