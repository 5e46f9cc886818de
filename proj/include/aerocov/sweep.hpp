#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "aerocov/netmodel.hpp"

namespace aerocov {

enum class SweepParameter { h_o, nu, lambda_ratio, beta, n_antennas_u, n_antennas_g };
enum class SweepObjective { p_u, p_g, p_cov, V_u, all };

/// One sweep axis: which knob moves and over which (strictly increasing)
/// grid. lambda_ratio means lambda_u / lambda_g with lambda_g fixed from the
/// configuration.
struct SweepSpec {
    SweepParameter parameter = SweepParameter::h_o;
    std::vector<double> grid;
    SweepObjective objective = SweepObjective::all;

    void check() const {
        if (grid.empty()) throw std::invalid_argument("sweep grid must be nonempty");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1]))
                throw std::invalid_argument("sweep grid must be strictly increasing");
    }
};

inline const char* to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::h_o: return "h_o";
        case SweepParameter::nu: return "nu";
        case SweepParameter::lambda_ratio: return "lambda_ratio";
        case SweepParameter::beta: return "beta";
        case SweepParameter::n_antennas_u: return "n_antennas_u";
        case SweepParameter::n_antennas_g: return "n_antennas_g";
    }
    return "?";
}

inline SweepParameter sweep_parameter_from_string(const std::string& s) {
    if (s == "h_o") return SweepParameter::h_o;
    if (s == "nu") return SweepParameter::nu;
    if (s == "lambda_ratio") return SweepParameter::lambda_ratio;
    if (s == "beta") return SweepParameter::beta;
    if (s == "n_antennas_u") return SweepParameter::n_antennas_u;
    if (s == "n_antennas_g") return SweepParameter::n_antennas_g;
    throw std::invalid_argument("unknown sweep parameter: " + s);
}

inline const char* to_string(SweepObjective o) {
    switch (o) {
        case SweepObjective::p_u: return "p_u";
        case SweepObjective::p_g: return "p_g";
        case SweepObjective::p_cov: return "p_cov";
        case SweepObjective::V_u: return "V_u";
        case SweepObjective::all: return "all";
    }
    return "?";
}

inline SweepObjective sweep_objective_from_string(const std::string& s) {
    if (s == "p_u") return SweepObjective::p_u;
    if (s == "p_g") return SweepObjective::p_g;
    if (s == "p_cov") return SweepObjective::p_cov;
    if (s == "V_u") return SweepObjective::V_u;
    if (s == "all") return SweepObjective::all;
    throw std::invalid_argument("unknown sweep objective: " + s);
}

/// cfg with one swept knob replaced by `value`.
inline NetworkConfig apply_parameter(NetworkConfig cfg, SweepParameter p, double value) {
    switch (p) {
        case SweepParameter::h_o: cfg.placement.h_o = value; break;
        case SweepParameter::nu: cfg.placement.nu = value; break;
        case SweepParameter::lambda_ratio: cfg.lambda_u = value * cfg.lambda_g; break;
        case SweepParameter::beta: cfg.beta = value; break;
        case SweepParameter::n_antennas_u:
        case SweepParameter::n_antennas_g: {
            const double r = std::round(value);
            if (!(r >= 1.0) || std::abs(value - r) > 1e-9)
                throw std::invalid_argument("antenna counts must be positive integers");
            if (p == SweepParameter::n_antennas_u)
                cfg.uav.n_antennas = static_cast<int>(r);
            else
                cfg.ground.n_antennas = static_cast<int>(r);
            break;
        }
    }
    return cfg;
}

}  // namespace aerocov
