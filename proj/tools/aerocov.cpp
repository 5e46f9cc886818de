// Command-line front end: analytic coverage/VSE evaluation, parameter sweeps
// with CSV output, Monte Carlo estimation, optimizers, and the
// analytic-vs-simulation validation report.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aerocov/config_io.hpp"
#include "aerocov/coverage.hpp"
#include "aerocov/montecarlo.hpp"
#include "aerocov/optimize.hpp"
#include "aerocov/runs.hpp"
#include "aerocov/sweep.hpp"
#include "aerocov/vse.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitValidation = 4;

aerocov::NetworkConfig load(const std::string& path) {
    if (path.empty()) {
#ifdef AEROCOV_DEFAULT_CONFIG
        return aerocov::load_config(std::string(AEROCOV_DEFAULT_CONFIG));
#else
        return aerocov::table1_config();
#endif
    }
    return aerocov::load_config(path);
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    const auto colon1 = text.find(':');
    if (colon1 != std::string::npos) {
        const auto colon2 = text.find(':', colon1 + 1);
        if (colon2 == std::string::npos)
            throw std::invalid_argument("grid: expected lo:hi:step");
        const double lo = std::stod(text.substr(0, colon1));
        const double hi = std::stod(text.substr(colon1 + 1, colon2 - colon1 - 1));
        const double step = std::stod(text.substr(colon2 + 1));
        if (!(step > 0.0)) throw std::invalid_argument("grid: step must be positive");
        for (double v = lo; v <= hi + 0.5 * step; v += step) grid.push_back(v);
        return grid;
    }
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        grid.push_back(std::stod(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return grid;
}

void emit(const nlohmann::json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << "\n";
    else
        aerocov::run_detail::write_file_atomic(out_path, j.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Downlink coverage and volume spectral efficiency of a two-tier "
                 "(UHF ground + mmWave UAV) plane-split network"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_path, mode_str = "analytic";
    long trials = 100000;
    std::uint64_t seed = 1;
    int threads = 0;
    double tol = 1e-2, radius = 0.0;
    app.add_option("--config", config_path, "configuration file (defaults to bundled Table I set)");
    app.add_option("--out", out_path, "output file");
    app.add_option("--seed", seed, "Monte Carlo seed");
    app.add_option("--trials", trials, "Monte Carlo trials");
    app.add_option("--threads", threads, "parallelism degree (0 = hardware concurrency)");
    app.add_option("--tol", tol, "optimizer tolerance");
    app.add_option("--radius", radius, "simulation disc radius override, meters");

    auto* cov = app.add_subcommand("coverage", "analytic multi-cell coverage at the configuration");
    auto* vse_cmd = app.add_subcommand("vse", "analytic volume spectral efficiency");
    auto* sweep = app.add_subcommand("sweep", "evaluate objectives over a parameter grid (CSV)");
    std::string param_str = "h_o", grid_str, objective_str = "all";
    sweep->add_option("--param", param_str, "h_o|nu|lambda_ratio|beta|n_antennas_u|n_antennas_g");
    sweep->add_option("--grid", grid_str, "lo:hi:step or comma list")->required();
    sweep->add_option("--objective", objective_str, "p_u|p_g|p_cov|V_u|all");
    sweep->add_option("--mode", mode_str, "analytic|montecarlo|both");
    auto* opt = app.add_subcommand("optimize", "maximize an objective over height or intensity");
    std::string variable = "height";
    double lo = 1.0, hi = 100.0;
    opt->add_option("--variable", variable, "height|intensity");
    opt->add_option("--lo", lo, "lower bound")->required();
    opt->add_option("--hi", hi, "upper bound")->required();
    opt->add_option("--objective", objective_str, "p_u|V_u");
    auto* mc = app.add_subcommand("montecarlo", "Monte Carlo coverage/VSE estimates");
    std::string mc_mode = "default";
    mc->add_option("--sim-mode", mc_mode, "default|analytic-matching|deterministic-gain");
    auto* val = app.add_subcommand("validate", "analytic vs Monte Carlo gap report");
    for (auto* sub : {cov, vse_cmd, sweep, opt, mc, val}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        const aerocov::NetworkConfig cfg = load(config_path);
        aerocov::RunOptions ropts;
        ropts.trials = trials;
        ropts.seed = seed;
        ropts.threads = threads;
        ropts.radius = radius;

        if (cov->parsed()) {
            const aerocov::NetworkConfig acfg = aerocov::analytic_view(cfg);
            const aerocov::CoverageResult r = aerocov::multicell_coverage(acfg);
            emit({{"tool_version", aerocov::kToolVersion},
                  {"p_u", r.p_u},
                  {"p_g", r.p_g},
                  {"p_cov", r.p_cov}},
                 out_path);
        } else if (vse_cmd->parsed()) {
            const aerocov::NetworkConfig acfg = aerocov::analytic_view(cfg);
            const aerocov::VseResult r = aerocov::volume_spectral_efficiency(acfg);
            emit({{"tool_version", aerocov::kToolVersion},
                  {"V_u", r.value},
                  {"p_g_used", r.p_g_used},
                  {"units", "nats/sec/Hz/m^3"}},
                 out_path);
        } else if (sweep->parsed()) {
            if (out_path.empty()) throw std::invalid_argument("sweep: --out is required");
            aerocov::SweepSpec spec;
            spec.parameter = aerocov::sweep_parameter_from_string(param_str);
            spec.objective = aerocov::sweep_objective_from_string(objective_str);
            spec.grid = parse_grid(grid_str);
            aerocov::run_sweep(cfg, spec, aerocov::run_mode_from_string(mode_str), out_path,
                               ropts);
        } else if (opt->parsed()) {
            const auto objective = aerocov::sweep_objective_from_string(objective_str == "all"
                                                                            ? "p_u"
                                                                            : objective_str);
            const nlohmann::json j =
                aerocov::run_optimize(cfg, variable, lo, hi, objective, tol, out_path);
            if (out_path.empty()) std::cout << j.dump(2) << "\n";
        } else if (mc->parsed()) {
            aerocov::McOptions mo;
            mo.threads = threads;
            if (mc_mode == "analytic-matching")
                mo.analytic_matching = true;
            else if (mc_mode == "deterministic-gain")
                mo.deterministic_serving_gain = true;
            else if (mc_mode != "default")
                throw std::invalid_argument("montecarlo: unknown --sim-mode " + mc_mode);
            const aerocov::AllEstimates est =
                aerocov::estimate_all(cfg, trials, radius, seed, mo);
            emit({{"tool_version", aerocov::kToolVersion},
                  {"trials", trials},
                  {"seed", seed},
                  {"p_u", {{"mean", est.coverage.p_u.mean}, {"hw95", est.coverage.p_u.half_width_95}}},
                  {"p_g", {{"mean", est.coverage.p_g.mean}, {"hw95", est.coverage.p_g.half_width_95}}},
                  {"p_cov",
                   {{"mean", est.coverage.p_cov.mean}, {"hw95", est.coverage.p_cov.half_width_95}}},
                  {"V_u", {{"mean", est.vse.mean}, {"hw95", est.vse.half_width_95}}},
                  {"vse_sentinel_excluded", est.vse_sentinel_excluded}},
                 out_path);
        } else if (val->parsed()) {
            const aerocov::ValidationReport rep = aerocov::run_validate(cfg, trials, seed, ropts);
            const nlohmann::json j = aerocov::to_json(rep, cfg, trials, seed);
            emit(j, out_path);
            if (!rep.pass) {
                std::cerr << "validation FAILED\n";
                return kExitValidation;
            }
        }
        return kExitOk;
    } catch (const aerocov::convergence_error& e) {
        std::cerr << "numerical non-convergence: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage/config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "usage/config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
