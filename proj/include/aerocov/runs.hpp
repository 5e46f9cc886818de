#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "aerocov/config_io.hpp"
#include "aerocov/coverage.hpp"
#include "aerocov/montecarlo.hpp"
#include "aerocov/optimize.hpp"
#include "aerocov/sweep.hpp"
#include "aerocov/vse.hpp"

namespace aerocov {

enum class RunMode { analytic, montecarlo, both };

inline RunMode run_mode_from_string(const std::string& s) {
    if (s == "analytic") return RunMode::analytic;
    if (s == "montecarlo") return RunMode::montecarlo;
    if (s == "both") return RunMode::both;
    throw std::invalid_argument("unknown mode: " + s + " (analytic|montecarlo|both)");
}

struct RunOptions {
    long trials = 100000;
    std::uint64_t seed = 1;
    int threads = 0;  // 0 = hardware concurrency
    double radius = 0.0;
    McOptions mc;
};

namespace run_detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Writes content atomically (temp file + rename).
inline void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open output file: " + tmp);
        out << content;
        if (!out) throw std::runtime_error("failed writing output file: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("failed renaming " + tmp + " to " + path);
}

inline nlohmann::json config_json(const NetworkConfig& c) {
    return nlohmann::json{
        {"lambda_g", c.lambda_g},
        {"lambda_u", c.lambda_u},
        {"beta", c.beta},
        {"noise_uav", c.noise_uav},
        {"ground",
         {{"tx_power", c.ground.tx_power},
          {"alpha", c.ground.alpha},
          {"psi_los", c.ground.psi_los},
          {"psi_nlos", c.ground.psi_nlos},
          {"n_antennas", c.ground.n_antennas}}},
        {"uav",
         {{"tx_power", c.uav.tx_power},
          {"alpha", c.uav.alpha},
          {"psi_los", c.uav.psi_los},
          {"psi_nlos", std::isinf(c.uav.psi_nlos) ? nlohmann::json("inf")
                                                  : nlohmann::json(c.uav.psi_nlos)},
          {"n_antennas", c.uav.n_antennas}}},
        {"pattern",
         {{"theta0", c.pattern.theta0},
          {"phi0", c.pattern.phi0},
          {"delta_m", c.pattern.delta_m},
          {"delta_s", c.pattern.delta_s}}},
        {"placement",
         {{"h_o", c.placement.h_o}, {"nu", c.placement.nu}, {"h_max", c.placement.h_max}}},
        {"env", {{"c1", c.env.c1}, {"c2", c.env.c2}}},
    };
}

inline void write_manifest(const std::string& out_path, const NetworkConfig& cfg,
                           std::uint64_t seed, const std::vector<double>& timings_ms,
                           const std::vector<std::string>& warnings) {
    nlohmann::json m{
        {"tool_version", kToolVersion},
        {"output", out_path},
        {"seed", seed},
        {"config", config_json(cfg)},
        {"point_timings_ms", timings_ms},
        {"warnings", warnings},
        {"units",
         {{"lengths", "meters"},
          {"intensities", "1/m^2"},
          {"powers", "watts"},
          {"V_u", "nats/sec/Hz/m^3"}}},
    };
    write_file_atomic(out_path + ".manifest.json", m.dump(2) + "\n");
}

}  // namespace run_detail

/// Runs a 1-D sweep, writing one CSV row per grid point (grid order) plus a
/// sibling manifest. Per-point failures are recorded in the status column;
/// remaining points still evaluate.
inline void run_sweep(const NetworkConfig& cfg, const SweepSpec& spec, RunMode mode,
                      const std::string& out_path, const RunOptions& opts = {}) {
    spec.check();
    const bool want_analytic = mode != RunMode::montecarlo;
    const bool want_mc = mode != RunMode::analytic;
    std::vector<std::string> warnings;
    NetworkConfig analytic_cfg = cfg;
    if (want_analytic && !std::isinf(cfg.uav.psi_nlos)) {
        analytic_cfg = analytic_view(cfg);
        warnings.push_back(
            "uav.psi_nlos is finite; analytic columns use the undetectable-NLoS view");
    }

    std::vector<SweepObjective> cols;
    if (spec.objective == SweepObjective::all)
        cols = {SweepObjective::p_u, SweepObjective::p_g, SweepObjective::p_cov,
                SweepObjective::V_u};
    else
        cols = {spec.objective};

    const std::size_t n = spec.grid.size();
    struct Row {
        std::vector<double> analytic;
        std::vector<double> mc_mean, mc_hw;
        std::string status = "ok";
        double ms = 0.0;
    };
    std::vector<Row> rows(n);
    for (auto& r : rows) {
        r.analytic.assign(cols.size(), std::numeric_limits<double>::quiet_NaN());
        r.mc_mean.assign(cols.size(), std::numeric_limits<double>::quiet_NaN());
        r.mc_hw.assign(cols.size(), std::numeric_limits<double>::quiet_NaN());
    }

    auto analytic_point = [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const NetworkConfig c = apply_parameter(analytic_cfg, spec.parameter, spec.grid[i]);
            std::optional<double> pu, pg;
            for (std::size_t k = 0; k < cols.size(); ++k) {
                switch (cols[k]) {
                    case SweepObjective::p_u:
                        if (!pu) pu = uav_coverage(c);
                        rows[i].analytic[k] = *pu;
                        break;
                    case SweepObjective::p_g:
                        if (!pg) pg = ground_coverage(c);
                        rows[i].analytic[k] = *pg;
                        break;
                    case SweepObjective::p_cov:
                        if (!pu) pu = uav_coverage(c);
                        if (!pg) pg = ground_coverage(c);
                        rows[i].analytic[k] = *pu * *pg;
                        break;
                    case SweepObjective::V_u:
                        rows[i].analytic[k] = volume_spectral_efficiency(c).value;
                        break;
                    case SweepObjective::all: break;
                }
            }
        } catch (const std::exception& e) {
            rows[i].status = e.what();
        }
        rows[i].ms += std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    };

    if (want_analytic) {
        unsigned nt = opts.threads > 0 ? static_cast<unsigned>(opts.threads)
                                       : std::max(1u, std::thread::hardware_concurrency());
        nt = std::min<unsigned>(nt, static_cast<unsigned>(n));
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < n; i += nt) analytic_point(i);
            });
        for (auto& th : pool) th.join();
    }
    if (want_mc) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            try {
                const NetworkConfig c = apply_parameter(cfg, spec.parameter, spec.grid[i]);
                McOptions mo = opts.mc;
                mo.threads = opts.threads;
                const AllEstimates est =
                    estimate_all(c, opts.trials, opts.radius, opts.seed, mo);
                for (std::size_t k = 0; k < cols.size(); ++k) {
                    const Estimate* e = nullptr;
                    switch (cols[k]) {
                        case SweepObjective::p_u: e = &est.coverage.p_u; break;
                        case SweepObjective::p_g: e = &est.coverage.p_g; break;
                        case SweepObjective::p_cov: e = &est.coverage.p_cov; break;
                        case SweepObjective::V_u: e = &est.vse; break;
                        case SweepObjective::all: break;
                    }
                    if (e) {
                        rows[i].mc_mean[k] = e->mean;
                        rows[i].mc_hw[k] = e->half_width_95;
                    }
                }
            } catch (const std::exception& e) {
                rows[i].status = rows[i].status == "ok" ? e.what() : rows[i].status;
            }
            rows[i].ms += std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        }
    }

    std::string csv = to_string(spec.parameter);
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const std::string name = to_string(cols[k]);
        if (want_analytic) csv += "," + name;
        if (want_mc) csv += "," + name + "_mc," + name + "_mc_hw";
    }
    csv += ",status\n";
    for (std::size_t i = 0; i < n; ++i) {
        csv += run_detail::fmt(spec.grid[i]);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (want_analytic) csv += "," + run_detail::fmt(rows[i].analytic[k]);
            if (want_mc)
                csv += "," + run_detail::fmt(rows[i].mc_mean[k]) + "," +
                       run_detail::fmt(rows[i].mc_hw[k]);
        }
        csv += "," + rows[i].status + "\n";
    }
    run_detail::write_file_atomic(out_path, csv);

    std::vector<double> timings;
    for (const auto& r : rows) timings.push_back(r.ms);
    run_detail::write_manifest(out_path, cfg, opts.seed, timings, warnings);
}

/// Runs one optimizer call and writes a JSON result (argmax, value,
/// evaluation count, bracket).
inline nlohmann::json run_optimize(const NetworkConfig& cfg, const std::string& variable,
                                   double lo, double hi, SweepObjective objective, double tol,
                                   const std::string& out_path) {
    if (!(lo < hi)) throw std::invalid_argument("optimize: requires lo < hi");
    NetworkConfig acfg = std::isinf(cfg.uav.psi_nlos) ? cfg : analytic_view(cfg);
    OptResult r;
    if (variable == "height") {
        if (objective == SweepObjective::V_u)
            r = maximize_vse(acfg, OptVariable::height, lo, hi, tol);
        else
            r = maximize_coverage_over_height(acfg, lo, hi, tol);
    } else if (variable == "intensity") {
        if (objective == SweepObjective::V_u)
            r = maximize_vse(acfg, OptVariable::intensity, lo, hi, tol);
        else
            r = maximize_coverage_over_intensity(acfg, lo, hi, tol);
    } else {
        throw std::invalid_argument("optimize: variable must be height or intensity");
    }
    nlohmann::json j{
        {"tool_version", kToolVersion},
        {"variable", variable},
        {"objective", to_string(objective)},
        {"argmax", r.argmax},
        {"value", r.value},
        {"evaluations", r.evaluations},
        {"bracket", {r.lo, r.hi}},
        {"config", run_detail::config_json(cfg)},
    };
    if (!out_path.empty()) run_detail::write_file_atomic(out_path, j.dump(2) + "\n");
    return j;
}

struct MetricComparison {
    std::string name;
    double analytic = 0.0;
    double mc_mean = 0.0, mc_hw = 0.0;
    double gap = 0.0, tolerance = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<MetricComparison> metrics;
    std::vector<std::string> notes;
    bool pass = false;
};

/// Computes analytic and Monte Carlo values for p_u, p_g, p_cov and V_u at
/// one configuration and reports the gaps. Probabilities must agree within
/// max(0.02, 3 x CI half-width); V_u within 10% relative (or 3 x CI).
inline ValidationReport run_validate(const NetworkConfig& cfg, long trials, std::uint64_t seed,
                                     const RunOptions& opts = {}) {
    if (trials < 1000) throw std::domain_error("validate: need at least 1000 trials");
    ValidationReport rep;
    const NetworkConfig acfg = std::isinf(cfg.uav.psi_nlos) ? cfg : analytic_view(cfg);
    if (!std::isinf(cfg.uav.psi_nlos))
        rep.notes.push_back(
            "analytic metrics use the undetectable-NLoS view of the finite uav.psi_nlos");

    const double pu = uav_coverage(acfg);
    const double pg = ground_coverage(acfg);
    const double vu = volume_spectral_efficiency(acfg).value;
    McOptions mo = opts.mc;
    mo.threads = opts.threads;
    const AllEstimates est = estimate_all(cfg, trials, opts.radius, seed, mo);

    auto prob_metric = [&](const char* name, double analytic, const Estimate& e) {
        MetricComparison m;
        m.name = name;
        m.analytic = analytic;
        m.mc_mean = e.mean;
        m.mc_hw = e.half_width_95;
        m.gap = std::abs(analytic - e.mean);
        m.tolerance = std::max(0.02, 3.0 * e.half_width_95);
        m.pass = m.gap <= m.tolerance;
        rep.metrics.push_back(m);
    };
    prob_metric("p_u", pu, est.coverage.p_u);
    prob_metric("p_g", pg, est.coverage.p_g);
    prob_metric("p_cov", pu * pg, est.coverage.p_cov);
    {
        MetricComparison m;
        m.name = "V_u";
        m.analytic = vu;
        m.mc_mean = est.vse.mean;
        m.mc_hw = est.vse.half_width_95;
        m.gap = std::abs(vu - est.vse.mean);
        m.tolerance = std::max(0.10 * std::abs(vu), 3.0 * est.vse.half_width_95);
        m.pass = m.gap <= m.tolerance;
        rep.metrics.push_back(m);
    }
    if (est.vse_sentinel_excluded > 0)
        rep.notes.push_back("V_u estimate excluded " +
                            std::to_string(est.vse_sentinel_excluded) +
                            " infinite-SINR trials");

    if (cfg.ground.n_antennas > 1) {
        const double pg_inf = ground_coverage_limit(acfg);
        char buf[240];
        std::snprintf(buf, sizeof(buf),
                      "ground coverage: finite n_antennas=%d value %.6f approaches the "
                      "massive-array limit %.6f from below; reference targets placing the "
                      "finite value above the limit are inconsistent with this model",
                      cfg.ground.n_antennas, pg, pg_inf);
        rep.notes.push_back(buf);
    }
    rep.pass = true;
    for (const auto& m : rep.metrics) rep.pass = rep.pass && m.pass;
    return rep;
}

inline nlohmann::json to_json(const ValidationReport& rep, const NetworkConfig& cfg,
                              long trials, std::uint64_t seed) {
    nlohmann::json metrics = nlohmann::json::array();
    for (const auto& m : rep.metrics)
        metrics.push_back({{"name", m.name},
                           {"analytic", m.analytic},
                           {"mc_mean", m.mc_mean},
                           {"mc_half_width_95", m.mc_hw},
                           {"gap", m.gap},
                           {"tolerance", m.tolerance},
                           {"pass", m.pass}});
    return nlohmann::json{{"tool_version", kToolVersion},
                          {"trials", trials},
                          {"seed", seed},
                          {"metrics", metrics},
                          {"notes", rep.notes},
                          {"pass", rep.pass},
                          {"config", run_detail::config_json(cfg)}};
}

}  // namespace aerocov
