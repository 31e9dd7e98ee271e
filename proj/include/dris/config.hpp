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
#include "dris/optimizer.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

namespace dris {

inline double dbm_to_watts(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

struct GeometrySpec {
    double d1 = 100.0;
    double d2 = 200.0;
    double dh = 2.0;
};

/// Declarative experiment description. The JSON schema mirrors the field
/// groups below; every field carries the reference setup as its default so
/// a config file only needs the overrides.
struct ExperimentConfig {
    // scenario
    GeometrySpec scenario;
    // system
    int nt = 16;
    int nr = 16;
    int ris1_rows = 4, ris1_cols = 4;
    int ris2_rows = 4, ris2_cols = 4;
    int ns = 0; // 0 = min(nt, nr)
    // channel
    double rician_h1 = 0.0, rician_h2 = 0.0;
    double rician_g1 = 0.0, rician_g2 = 0.0;
    double rician_d = 0.0;
    bool pure_los = false;
    int sc_h1 = 15, sc_h2 = 15, sc_g1 = 15, sc_g2 = 15, sc_d = 15;
    double spread_tx = pi / 3.0, spread_rx = pi / 3.0;
    double spread_ris1 = pi / 3.0, spread_ris2 = pi / 3.0;
    double spread_scatter = pi / 3.0;
    double spacing_tx = 0.5, spacing_rx = 0.5, spacing_ris = 0.5, spacing_scatter = 0.5;
    // power
    double p_dbm = 30.0;
    double sigma2_dbm = -90.0;
    // optimizer
    double epsilon = 1e-5;
    int max_outer = 50;
    double rho_factor = 1.5 * 1.4142135623730951;
    int admm_max_iters = 500;
    double admm_tol = 1e-5;
    bool warm_start = true;
    // ser
    int qam_order = 16;
    long n_symbols = 20000;
    long joint_cap = 4096;
    // sweep
    std::string sweep_variable;
    std::vector<double> sweep_values;
    // multi-geometry experiments (fig6/fig7)
    std::vector<GeometrySpec> geometries;
    // run control
    int trials = 1000;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir = "results";
    std::vector<std::string> formats = {"csv", "json"};
    double nonconverged_budget = 1.0; // fraction of ADMM solves allowed to miss tol

    double p_watts() const { return dbm_to_watts(p_dbm); }
    double sigma2_watts() const { return dbm_to_watts(sigma2_dbm); }
    int streams() const { return ns > 0 ? ns : std::min(nt, nr); }

    ScenarioLayout layout() const { return build_scenario(scenario.d1, scenario.d2, scenario.dh); }
    ScenarioLayout layout(const GeometrySpec &g) const { return build_scenario(g.d1, g.d2, g.dh); }

    ChannelParams channel_params() const
    {
        ChannelParams p;
        p.nt = nt;
        p.nr = nr;
        p.ris1 = UpaSpec{ris1_rows, ris1_cols, spacing_ris, spacing_ris};
        p.ris2 = UpaSpec{ris2_rows, ris2_cols, spacing_ris, spacing_ris};
        p.tx_spacing = spacing_tx;
        p.rx_spacing = spacing_rx;
        p.rician_h1 = rician_h1;
        p.rician_h2 = rician_h2;
        p.rician_g1 = rician_g1;
        p.rician_g2 = rician_g2;
        p.rician_d = rician_d;
        p.pure_los = pure_los;
        p.sc_h1 = sc_h1;
        p.sc_h2 = sc_h2;
        p.sc_g1 = sc_g1;
        p.sc_g2 = sc_g2;
        p.sc_d = sc_d;
        p.spread_tx = spread_tx;
        p.spread_rx = spread_rx;
        p.spread_ris1 = spread_ris1;
        p.spread_ris2 = spread_ris2;
        p.spread_scatter = spread_scatter;
        p.scatter_spacing = spacing_scatter;
        return p;
    }

    AoSettings ao_settings() const
    {
        AoSettings ao;
        ao.epsilon = epsilon;
        ao.max_outer = max_outer;
        ao.warm_start = warm_start;
        return ao;
    }

    AdmmSettings admm_settings() const
    {
        AdmmSettings a;
        a.rho_factor = rho_factor;
        a.max_iters = admm_max_iters;
        a.tol = admm_tol;
        return a;
    }

    void set_all_rician(double v)
    {
        rician_h1 = rician_h2 = rician_g1 = rician_g2 = rician_d = v;
    }

    void set_all_sc(int v) { sc_h1 = sc_h2 = sc_g1 = sc_g2 = sc_d = v; }

    void set_square_panels(int k)
    {
        const int side = int(std::lround(std::sqrt(double(k))));
        if (side * side != k)
            throw ConfigError("sweep value " + std::to_string(k) +
                              " is not a perfect square panel size");
        ris1_rows = ris1_cols = ris2_rows = ris2_cols = side;
    }

    void validate() const;
};

inline const std::set<std::string> &supported_sweep_variables()
{
    static const std::set<std::string> vars = {"k",     "k1", "k2", "sc",    "snr_db",
                                               "p_dbm", "sigma2_dbm", "rician", "d1", "d2"};
    return vars;
}

/// Returns a copy of the config with one sweep variable applied.
inline ExperimentConfig apply_sweep_value(const ExperimentConfig &base, const std::string &var,
                                          double value)
{
    ExperimentConfig cfg = base;
    if (var == "k") {
        cfg.set_square_panels(int(std::lround(value)));
    } else if (var == "k1") {
        const int side = int(std::lround(std::sqrt(value)));
        if (side * side != int(std::lround(value)))
            throw ConfigError("k1 sweep values must be perfect squares");
        cfg.ris1_rows = cfg.ris1_cols = side;
    } else if (var == "k2") {
        const int side = int(std::lround(std::sqrt(value)));
        if (side * side != int(std::lround(value)))
            throw ConfigError("k2 sweep values must be perfect squares");
        cfg.ris2_rows = cfg.ris2_cols = side;
    } else if (var == "sc") {
        cfg.set_all_sc(int(std::lround(value)));
    } else if (var == "snr_db") {
        cfg.sigma2_dbm = cfg.p_dbm - value; // received-SNR proxy P / sigma2
    } else if (var == "p_dbm") {
        cfg.p_dbm = value;
    } else if (var == "sigma2_dbm") {
        cfg.sigma2_dbm = value;
    } else if (var == "rician") {
        cfg.set_all_rician(value);
    } else if (var == "d1") {
        cfg.scenario.d1 = value;
    } else if (var == "d2") {
        cfg.scenario.d2 = value;
    } else {
        throw ConfigError("unsupported sweep variable: " + var);
    }
    return cfg;
}

inline void ExperimentConfig::validate() const
{
    if (!(scenario.d1 > 0.0) || !(scenario.d2 > 0.0) || !(scenario.dh >= 0.0))
        throw ConfigError("scenario: d1, d2 must be positive and dh non-negative");
    if (nt < 1 || nr < 1)
        throw ConfigError("system: nt and nr must be >= 1");
    if (ris1_rows < 1 || ris1_cols < 1 || ris2_rows < 1 || ris2_cols < 1)
        throw ConfigError("system: RIS panel dimensions must be >= 1");
    if (ns < 0 || ns > std::min(nt, nr))
        throw ConfigError("system: ns must lie in [0, min(nt, nr)]");
    if (rician_h1 < 0 || rician_h2 < 0 || rician_g1 < 0 || rician_g2 < 0 || rician_d < 0)
        throw ConfigError("channel: Rician factors must be >= 0");
    if (sc_h1 < 1 || sc_h2 < 1 || sc_g1 < 1 || sc_g2 < 1 || sc_d < 1)
        throw ConfigError("channel: scatterer counts must be >= 1");
    for (double sp : {spread_tx, spread_rx, spread_ris1, spread_ris2, spread_scatter})
        if (sp < 0.0 || sp > pi)
            throw ConfigError("channel: angular spreads must lie in [0, pi]");
    for (double sp : {spacing_tx, spacing_rx, spacing_ris, spacing_scatter})
        if (!(sp > 0.0))
            throw ConfigError("channel: element spacings must be positive");
    if (!(epsilon > 0.0))
        throw ConfigError("optimizer: epsilon must be positive");
    if (max_outer < 1 || admm_max_iters < 1)
        throw ConfigError("optimizer: iteration limits must be >= 1");
    if (!(rho_factor > 1.4142135623730951))
        throw ConfigError("optimizer: rho_factor must exceed sqrt(2)");
    if (!(admm_tol > 0.0))
        throw ConfigError("optimizer: admm_tol must be positive");
    if (qam_order != 4 && qam_order != 16 && qam_order != 64)
        throw ConfigError("ser: qam_order must be 4, 16 or 64");
    if (n_symbols < 1 || joint_cap < 1)
        throw ConfigError("ser: n_symbols and joint_cap must be >= 1");
    if (trials < 1)
        throw ConfigError("run: trials must be >= 1");
    if (workers < 1)
        throw ConfigError("run: workers must be >= 1");
    if (formats.empty())
        throw ConfigError("run: at least one output format required");
    for (const std::string &f : formats)
        if (f != "csv" && f != "json")
            throw ConfigError("run: unsupported format '" + f + "'");
    if (!(nonconverged_budget >= 0.0 && nonconverged_budget <= 1.0))
        throw ConfigError("run: nonconverged_budget must lie in [0, 1]");
    if (!sweep_variable.empty()) {
        if (!supported_sweep_variables().count(sweep_variable))
            throw ConfigError("sweep: unsupported variable '" + sweep_variable + "'");
        if (sweep_values.empty())
            throw ConfigError("sweep: values list is empty");
        // Panel sweeps must name square sizes; surface the error at load time.
        if (sweep_variable == "k" || sweep_variable == "k1" || sweep_variable == "k2")
            for (double v : sweep_values)
                (void)apply_sweep_value(*this, sweep_variable, v);
    }
}

namespace detail {

template <typename T>
void read_field(const nlohmann::json &j, const char *key, T &out, const std::string &ctx)
{
    if (!j.contains(key))
        return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception &) {
        throw ConfigError("config field " + ctx + "." + key + " has the wrong type");
    }
}

inline void reject_unknown(const nlohmann::json &j, const std::set<std::string> &known,
                           const std::string &ctx)
{
    for (const auto &item : j.items())
        if (!known.count(item.key()))
            throw ConfigError("unknown config field " + ctx + "." + item.key());
}

} // namespace detail

/// Parses a config JSON object over the defaults in `base`. Unknown keys
/// are rejected so typos fail loudly.
inline ExperimentConfig parse_config(const nlohmann::json &j,
                                     ExperimentConfig base = ExperimentConfig{})
{
    using detail::read_field;
    using detail::reject_unknown;

    if (!j.is_object())
        throw ConfigError("config root must be a JSON object");
    reject_unknown(j,
                   {"scenario", "system", "channel", "power", "optimizer", "ser", "sweep",
                    "geometries", "run"},
                   "<root>");

    ExperimentConfig cfg = base;
    if (j.contains("scenario")) {
        const auto &s = j.at("scenario");
        reject_unknown(s, {"d1", "d2", "dh"}, "scenario");
        read_field(s, "d1", cfg.scenario.d1, "scenario");
        read_field(s, "d2", cfg.scenario.d2, "scenario");
        read_field(s, "dh", cfg.scenario.dh, "scenario");
    }
    if (j.contains("system")) {
        const auto &s = j.at("system");
        reject_unknown(s, {"nt", "nr", "ris1", "ris2", "ns"}, "system");
        read_field(s, "nt", cfg.nt, "system");
        read_field(s, "nr", cfg.nr, "system");
        read_field(s, "ns", cfg.ns, "system");
        for (const char *key : {"ris1", "ris2"}) {
            if (!s.contains(key))
                continue;
            const auto &panel = s.at(key);
            if (!panel.is_array() || panel.size() != 2)
                throw ConfigError(std::string("system.") + key + " must be [rows, cols]");
            const int rows = panel.at(0).get<int>();
            const int cols = panel.at(1).get<int>();
            if (std::string(key) == "ris1") {
                cfg.ris1_rows = rows;
                cfg.ris1_cols = cols;
            } else {
                cfg.ris2_rows = rows;
                cfg.ris2_cols = cols;
            }
        }
    }
    if (j.contains("channel")) {
        const auto &c = j.at("channel");
        reject_unknown(c, {"rician", "pure_los", "sc", "spreads", "spacings"}, "channel");
        if (c.contains("rician")) {
            const auto &r = c.at("rician");
            if (r.is_number()) {
                cfg.set_all_rician(r.get<double>());
            } else {
                reject_unknown(r, {"h1", "h2", "g1", "g2", "d"}, "channel.rician");
                read_field(r, "h1", cfg.rician_h1, "channel.rician");
                read_field(r, "h2", cfg.rician_h2, "channel.rician");
                read_field(r, "g1", cfg.rician_g1, "channel.rician");
                read_field(r, "g2", cfg.rician_g2, "channel.rician");
                read_field(r, "d", cfg.rician_d, "channel.rician");
            }
        }
        read_field(c, "pure_los", cfg.pure_los, "channel");
        if (c.contains("sc")) {
            const auto &s = c.at("sc");
            if (s.is_number()) {
                cfg.set_all_sc(s.get<int>());
            } else {
                reject_unknown(s, {"h1", "h2", "g1", "g2", "d"}, "channel.sc");
                read_field(s, "h1", cfg.sc_h1, "channel.sc");
                read_field(s, "h2", cfg.sc_h2, "channel.sc");
                read_field(s, "g1", cfg.sc_g1, "channel.sc");
                read_field(s, "g2", cfg.sc_g2, "channel.sc");
                read_field(s, "d", cfg.sc_d, "channel.sc");
            }
        }
        if (c.contains("spreads")) {
            const auto &s = c.at("spreads");
            reject_unknown(s, {"tx", "rx", "ris1", "ris2", "scatter"}, "channel.spreads");
            read_field(s, "tx", cfg.spread_tx, "channel.spreads");
            read_field(s, "rx", cfg.spread_rx, "channel.spreads");
            read_field(s, "ris1", cfg.spread_ris1, "channel.spreads");
            read_field(s, "ris2", cfg.spread_ris2, "channel.spreads");
            read_field(s, "scatter", cfg.spread_scatter, "channel.spreads");
        }
        if (c.contains("spacings")) {
            const auto &s = c.at("spacings");
            reject_unknown(s, {"tx", "rx", "ris", "scatter"}, "channel.spacings");
            read_field(s, "tx", cfg.spacing_tx, "channel.spacings");
            read_field(s, "rx", cfg.spacing_rx, "channel.spacings");
            read_field(s, "ris", cfg.spacing_ris, "channel.spacings");
            read_field(s, "scatter", cfg.spacing_scatter, "channel.spacings");
        }
    }
    if (j.contains("power")) {
        const auto &p = j.at("power");
        reject_unknown(p, {"p_dbm", "sigma2_dbm"}, "power");
        read_field(p, "p_dbm", cfg.p_dbm, "power");
        read_field(p, "sigma2_dbm", cfg.sigma2_dbm, "power");
    }
    if (j.contains("optimizer")) {
        const auto &o = j.at("optimizer");
        reject_unknown(o,
                       {"epsilon", "max_outer", "rho_factor", "admm_max_iters", "admm_tol",
                        "warm_start"},
                       "optimizer");
        read_field(o, "epsilon", cfg.epsilon, "optimizer");
        read_field(o, "max_outer", cfg.max_outer, "optimizer");
        read_field(o, "rho_factor", cfg.rho_factor, "optimizer");
        read_field(o, "admm_max_iters", cfg.admm_max_iters, "optimizer");
        read_field(o, "admm_tol", cfg.admm_tol, "optimizer");
        read_field(o, "warm_start", cfg.warm_start, "optimizer");
    }
    if (j.contains("ser")) {
        const auto &s = j.at("ser");
        reject_unknown(s, {"qam_order", "n_symbols", "joint_cap"}, "ser");
        read_field(s, "qam_order", cfg.qam_order, "ser");
        read_field(s, "n_symbols", cfg.n_symbols, "ser");
        read_field(s, "joint_cap", cfg.joint_cap, "ser");
    }
    if (j.contains("sweep")) {
        const auto &s = j.at("sweep");
        reject_unknown(s, {"variable", "values"}, "sweep");
        read_field(s, "variable", cfg.sweep_variable, "sweep");
        read_field(s, "values", cfg.sweep_values, "sweep");
    }
    if (j.contains("geometries")) {
        const auto &g = j.at("geometries");
        if (!g.is_array())
            throw ConfigError("geometries must be an array of [d1, d2, dh]");
        cfg.geometries.clear();
        for (const auto &item : g) {
            if (!item.is_array() || item.size() != 3)
                throw ConfigError("geometries entries must be [d1, d2, dh]");
            cfg.geometries.push_back(
                {item.at(0).get<double>(), item.at(1).get<double>(), item.at(2).get<double>()});
        }
    }
    if (j.contains("run")) {
        const auto &r = j.at("run");
        reject_unknown(r,
                       {"trials", "seed", "workers", "out_dir", "formats",
                        "nonconverged_budget"},
                       "run");
        read_field(r, "trials", cfg.trials, "run");
        read_field(r, "seed", cfg.seed, "run");
        read_field(r, "workers", cfg.workers, "run");
        read_field(r, "out_dir", cfg.out_dir, "run");
        read_field(r, "formats", cfg.formats, "run");
        read_field(r, "nonconverged_budget", cfg.nonconverged_budget, "run");
    }

    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_config_file(const std::string &path,
                                         ExperimentConfig base = ExperimentConfig{})
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return parse_config(j, std::move(base));
}

/// Canonical JSON echo of a config (keys sorted by construction).
inline nlohmann::json config_to_json(const ExperimentConfig &c)
{
    nlohmann::json j;
    j["scenario"] = {{"d1", c.scenario.d1}, {"d2", c.scenario.d2}, {"dh", c.scenario.dh}};
    j["system"] = {{"nt", c.nt},
                   {"nr", c.nr},
                   {"ris1", {c.ris1_rows, c.ris1_cols}},
                   {"ris2", {c.ris2_rows, c.ris2_cols}},
                   {"ns", c.ns}};
    j["channel"] = {
        {"rician",
         {{"h1", c.rician_h1},
          {"h2", c.rician_h2},
          {"g1", c.rician_g1},
          {"g2", c.rician_g2},
          {"d", c.rician_d}}},
        {"pure_los", c.pure_los},
        {"sc",
         {{"h1", c.sc_h1}, {"h2", c.sc_h2}, {"g1", c.sc_g1}, {"g2", c.sc_g2}, {"d", c.sc_d}}},
        {"spreads",
         {{"tx", c.spread_tx},
          {"rx", c.spread_rx},
          {"ris1", c.spread_ris1},
          {"ris2", c.spread_ris2},
          {"scatter", c.spread_scatter}}},
        {"spacings",
         {{"tx", c.spacing_tx},
          {"rx", c.spacing_rx},
          {"ris", c.spacing_ris},
          {"scatter", c.spacing_scatter}}}};
    j["power"] = {{"p_dbm", c.p_dbm}, {"sigma2_dbm", c.sigma2_dbm}};
    j["optimizer"] = {{"epsilon", c.epsilon},
                      {"max_outer", c.max_outer},
                      {"rho_factor", c.rho_factor},
                      {"admm_max_iters", c.admm_max_iters},
                      {"admm_tol", c.admm_tol},
                      {"warm_start", c.warm_start}};
    j["ser"] = {{"qam_order", c.qam_order},
                {"n_symbols", c.n_symbols},
                {"joint_cap", c.joint_cap}};
    if (!c.sweep_variable.empty())
        j["sweep"] = {{"variable", c.sweep_variable}, {"values", c.sweep_values}};
    if (!c.geometries.empty()) {
        nlohmann::json geo = nlohmann::json::array();
        for (const GeometrySpec &g : c.geometries)
            geo.push_back({g.d1, g.d2, g.dh});
        j["geometries"] = geo;
    }
    j["run"] = {{"trials", c.trials},
                {"seed", c.seed},
                {"workers", c.workers},
                {"out_dir", c.out_dir},
                {"formats", c.formats},
                {"nonconverged_budget", c.nonconverged_budget}};
    return j;
}

/// FNV-1a over the canonical config dump; embedded in every result file so
/// outputs can be matched back to the exact inputs.
inline std::uint64_t config_hash(const ExperimentConfig &c)
{
    const std::string dump = config_to_json(c).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace dris
