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
#include "dris/optimizer.hpp"
#include "dris/parallel.hpp"
#include "dris/rng.hpp"

#include <cstdint>
#include <vector>

namespace dris {

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
inline double q_function(double x)
{
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

/// Square QAM constellation with unit average symbol energy.
struct Constellation {
    int order = 4;
    CVec points;

    double min_distance() const
    {
        double d = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < points.size(); ++i)
            for (Eigen::Index j = 0; j < points.size(); ++j)
                if (i != j)
                    d = std::min(d, std::abs(points(i) - points(j)));
        return d;
    }
};

/// Gray-ordered square M-QAM (M in {4, 16, 64}), levels {+-1, +-3, ...}
/// normalized by sqrt(2 (M - 1) / 3).
inline Constellation qam_constellation(int m)
{
    require(m == 4 || m == 16 || m == 64, "qam_constellation: order must be 4, 16 or 64");
    const int side = int(std::lround(std::sqrt(double(m))));
    const double scale = std::sqrt(2.0 * (m - 1) / 3.0);

    Constellation c;
    c.order = m;
    c.points.resize(m);
    int idx = 0;
    for (int a = 0; a < side; ++a)
        for (int b = 0; b < side; ++b)
            c.points(idx++) = cxd(2 * a - side + 1, 2 * b - side + 1) / scale;
    return c;
}

/// Squared receive-space distance ||W O F (s_i - s_j)||^2 between two
/// candidate transmit vectors.
inline double pairwise_distance_sq(const CMat &w, const CMat &o, const CMat &f,
                                   const CVec &si, const CVec &sj)
{
    require(si.size() == sj.size() && f.cols() == si.size() && o.cols() == f.rows() &&
                w.cols() == o.rows(),
            "pairwise_distance_sq: dimension mismatch");
    return (w * (o * (f * (si - sj)))).squaredNorm();
}

/// Union bound of one stream at SNR gamma over an M-point constellation:
/// (1/M) sum_i sum_{j != i} Q(sqrt(gamma |s_i - s_j|^2 / 2)).
inline double stream_union_bound(double gamma, const Constellation &c)
{
    double acc = 0.0;
    for (Eigen::Index i = 0; i < c.points.size(); ++i)
        for (Eigen::Index j = 0; j < c.points.size(); ++j)
            if (i != j)
                acc += q_function(std::sqrt(gamma * std::norm(c.points(i) - c.points(j)) / 2.0));
    return acc / double(c.order);
}

/// Exact SER of square M-QAM at symbol SNR gamma:
/// 1 - (1 - p)^2 with p = 2 (1 - 1/sqrt(M)) Q(sqrt(3 gamma / (M - 1))).
inline double exact_qam_ser(double gamma, int m)
{
    const double p = 2.0 * (1.0 - 1.0 / std::sqrt(double(m))) *
                     q_function(std::sqrt(3.0 * gamma / (double(m) - 1.0)));
    return 2.0 * p - p * p;
}

enum class SerMode { per_stream, joint };

/// Union-bound SER for a transceiver design over an aggregated channel.
/// The default per-stream mode exploits that the SVD design diagonalizes
/// W O F: each stream is scored at its own SNR and the bounds averaged.
/// Joint mode enumerates all M^Ns candidate vectors (capped, since the set
/// explodes with Ns) and applies the pairwise bound directly.
inline double union_bound_ser(const TransceiverDesign &design, const CMat &o,
                              const Constellation &c, int ns, double p_total, double sigma2,
                              SerMode mode = SerMode::per_stream, long joint_cap = 4096)
{
    require(ns >= 1, "union_bound_ser: ns must be >= 1");
    const CMat eff = design.combiner * o * design.precoder; // Ns x Ns

    if (mode == SerMode::per_stream) {
        double acc = 0.0;
        for (int i = 0; i < ns; ++i) {
            const double gain_sq = std::norm(eff(i, i));
            acc += stream_union_bound(p_total / double(ns) * gain_sq / sigma2, c);
        }
        return acc / double(ns);
    }

    double m_tilde = 1.0;
    for (int i = 0; i < ns; ++i) {
        m_tilde *= double(c.order);
        if (m_tilde > double(joint_cap))
            throw std::invalid_argument(
                "union_bound_ser: joint candidate set exceeds the cap; use per-stream mode");
    }
    const long n_cand = long(m_tilde);

    auto candidate = [&](long idx) {
        CVec s(ns);
        for (int k = 0; k < ns; ++k) {
            s(k) = c.points(idx % c.order);
            idx /= c.order;
        }
        return s;
    };

    const double tx_scale = p_total / double(ns);
    double acc = 0.0;
    for (long i = 0; i < n_cand; ++i) {
        const CVec si = candidate(i);
        for (long j = 0; j < n_cand; ++j) {
            if (i == j)
                continue;
            const double d2 = (eff * (si - candidate(j))).squaredNorm();
            acc += q_function(std::sqrt(tx_scale * d2 / (2.0 * sigma2)));
        }
    }
    return acc / double(n_cand);
}

/// Average exact square-QAM SER across the decoupled streams of the SVD
/// design, stream i at SNR P p_i lambda_i^2 / (sigma2 Ns).
inline double per_stream_ser(const RVec &lambdas, const RVec &powers, const Constellation &c,
                             int ns, double p_total, double sigma2)
{
    require(lambdas.size() >= ns && powers.size() >= ns, "per_stream_ser: length mismatch");
    double acc = 0.0;
    for (int i = 0; i < ns; ++i) {
        const double gamma =
            p_total * powers(i) * lambdas(i) * lambdas(i) / (sigma2 * double(ns));
        acc += exact_qam_ser(gamma, c.order);
    }
    return acc / double(ns);
}

struct SerReport {
    double union_bound = 0.0;
    double mc_ser = 0.0;
    double snr_db = 0.0;
    long n_symbols = 0;
};

/// Monte Carlo symbol error rate: simulates z = sqrt(P/Ns) W O F s + W n
/// and detects each stream by nearest neighbor against its effective gain.
/// Symbol batches own derived seeds and error counts reduce in batch order,
/// so any worker count reproduces the serial result.
inline SerReport mc_detect(const TransceiverDesign &design, const CMat &o,
                           const Constellation &c, long n_symbols, double p_total,
                           double sigma2, std::uint64_t seed, int workers = 1)
{
    require(n_symbols >= 1, "mc_detect: n_symbols must be >= 1");
    const int ns = int(design.precoder.cols());
    const int nr = int(o.rows());
    const double tx_amp = std::sqrt(p_total / double(ns));
    const double noise_amp = std::sqrt(sigma2);
    const CMat eff = tx_amp * (design.combiner * o * design.precoder); // Ns x Ns

    const long batch_size = 4096;
    const long n_batches = (n_symbols + batch_size - 1) / batch_size;
    std::vector<long> errors(n_batches, 0);

    parallel_for_index(int(n_batches), workers, [&](int batch) {
        Rng rng(derive_seed(seed, std::uint64_t(batch)));
        const long lo = batch * batch_size;
        const long hi = std::min(n_symbols, lo + batch_size);
        long err = 0;
        CVec s(ns), noise(nr);
        std::vector<int> sent(ns);
        for (long t = lo; t < hi; ++t) {
            for (int i = 0; i < ns; ++i) {
                sent[i] = int(rng.uniform_int(std::uint64_t(c.order)));
                s(i) = c.points(sent[i]);
            }
            for (int r = 0; r < nr; ++r)
                noise(r) = noise_amp * rng.complex_normal();
            const CVec z = eff * s + design.combiner * noise;
            for (int i = 0; i < ns; ++i) {
                int best = 0;
                double best_d = std::numeric_limits<double>::infinity();
                for (int cand = 0; cand < c.order; ++cand) {
                    const double d = std::norm(z(i) - eff(i, i) * c.points(cand));
                    if (d < best_d) {
                        best_d = d;
                        best = cand;
                    }
                }
                if (best != sent[i])
                    ++err;
            }
        }
        errors[batch] = err;
    });

    long total_errors = 0;
    for (long e : errors)
        total_errors += e;

    SerReport report;
    report.mc_ser = double(total_errors) / (double(n_symbols) * double(ns));
    report.n_symbols = n_symbols;
    report.snr_db = 10.0 * std::log10(p_total / sigma2);
    double ub = 0.0;
    for (int i = 0; i < ns; ++i)
        ub += stream_union_bound(std::norm(eff(i, i)) / sigma2, c);
    report.union_bound = ub / double(ns);
    return report;
}

} // namespace dris
