#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace aerocov {

/// Environment constants of the low-altitude-platform sigmoid LoS model.
struct Environment {
    double c1 = 0.43;
    double c2 = 4.88;
};

/// Height law H = h_o * d^(-nu) plus the maximum altitude used to normalize
/// volume spectral efficiency.
struct UavPlacement {
    double h_o = 40.0;   // meters
    double nu = 0.0;     // height-law exponent
    double h_max = 200;  // meters
};

/// Per-tier radio parameters. Intercepts are linear; psi_nlos may be the
/// +infinity sentinel, meaning NLoS signals of this tier are undetectable.
struct TierRadio {
    double tx_power = 1.0;   // watts
    double alpha = 4.0;      // path-loss exponent, must exceed 2
    double psi_los = 1.0;    // linear intercept
    double psi_nlos = 1.0;   // linear intercept, or +inf sentinel
    int n_antennas = 1;
};

/// Two-level sectored array pattern of the UAV tier.
struct AntennaPattern {
    double theta0 = 2.0 * std::numbers::pi / 3.0;  // azimuth main-lobe width
    double phi0 = std::numbers::pi / 3.0;          // inclination main-lobe width
    double delta_m = 1.0;                          // main-lobe gain
    double delta_s = 0.1;                          // side-lobe gain
};

struct NetworkConfig {
    double lambda_g = 1e-6;  // ground BSs per m^2
    double lambda_u = 6e-5;  // UAV projections per m^2
    TierRadio ground;
    TierRadio uav;
    AntennaPattern pattern;
    UavPlacement placement;
    Environment env;
    double beta = 1.0;       // SINR threshold
    double noise_uav = 0.0;  // sigma^2 in the mmWave band, watts
};

inline double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

/// LoS probability of a link with height/ground-distance ratio `ratio`.
inline double los_probability(const Environment& env, double ratio) {
    if (!(ratio >= 0.0))
        throw std::domain_error("los_probability: ratio must be nonnegative");
    constexpr double deg = 180.0 / std::numbers::pi;
    return 1.0 / (1.0 + env.c2 * std::exp(env.c1 * (env.c2 - deg * std::atan(ratio))));
}

/// LoS probability at zero elevation, 1/(1 + c2 exp(c1 c2)).
inline double rho0(const Environment& env) { return los_probability(env, 0.0); }

/// Height of a UAV whose ground projection is `ground_distance` away.
inline double uav_height(const UavPlacement& p, double ground_distance) {
    if (ground_distance < 0.0)
        throw std::domain_error("uav_height: negative ground distance");
    if (ground_distance == 0.0) {
        if (p.nu > 0.0)
            throw std::domain_error("uav_height: singular at zero distance for nu > 0");
        return p.nu == 0.0 ? p.h_o : 0.0;
    }
    if (p.nu == 0.0) return p.h_o;
    return p.h_o * std::pow(ground_distance, -p.nu);
}

/// psi * d^alpha. An infinite intercept propagates (undetectable signal).
inline double path_loss(double psi, double alpha, double distance) {
    if (!(distance > 0.0)) throw std::domain_error("path_loss: distance must be positive");
    if (std::isinf(psi)) return std::numeric_limits<double>::infinity();
    return psi * std::pow(distance, alpha);
}

/// Probability that an interfering UAV beam covers the typical user,
/// theta0 * phi0 / (2 pi^2).
inline double main_lobe_probability(const AntennaPattern& p) {
    return p.theta0 * p.phi0 / (2.0 * std::numbers::pi * std::numbers::pi);
}

/// Intensity of the intercept-transformed ground process,
/// lambda_g [rho0 psi_L^(-2/a) + (1-rho0) psi_N^(-2/a)].
inline double effective_ground_intensity(const NetworkConfig& cfg) {
    if (std::isinf(cfg.ground.psi_nlos))
        throw std::invalid_argument(
            "effective_ground_intensity: ground NLoS intercept must be finite");
    const double r0 = rho0(cfg.env);
    const double e = -2.0 / cfg.ground.alpha;
    return cfg.lambda_g *
           (r0 * std::pow(cfg.ground.psi_los, e) + (1.0 - r0) * std::pow(cfg.ground.psi_nlos, e));
}

namespace model_detail {
inline void require(bool ok, const char* invariant) {
    if (!ok) throw std::invalid_argument(std::string("invariant violated: ") + invariant);
}
}  // namespace model_detail

/// Validates every structural invariant; throws std::invalid_argument naming
/// the violated one.
inline void validate(const NetworkConfig& cfg) {
    using model_detail::require;
    require(cfg.env.c1 > 0.0, "env.c1 > 0");
    require(cfg.env.c2 > 0.0, "env.c2 > 0");
    require(cfg.lambda_g > 0.0, "lambda_g > 0");
    require(cfg.lambda_u > 0.0, "lambda_u > 0");
    require(cfg.beta > 0.0, "beta > 0");
    require(cfg.noise_uav >= 0.0, "noise_uav >= 0");
    require(cfg.placement.h_o >= 0.0, "placement.h_o >= 0");
    require(cfg.placement.h_max > 0.0, "placement.h_max > 0");
    require(std::isfinite(cfg.placement.nu), "placement.nu finite");
    for (const auto* tier : {&cfg.ground, &cfg.uav}) {
        const bool is_ground = tier == &cfg.ground;
        require(tier->tx_power > 0.0, is_ground ? "ground.tx_power > 0" : "uav.tx_power > 0");
        require(tier->alpha > 2.0, is_ground ? "ground.alpha > 2" : "uav.alpha > 2");
        require(tier->psi_los > 0.0 && std::isfinite(tier->psi_los),
                is_ground ? "ground.psi_los finite and > 0" : "uav.psi_los finite and > 0");
        require(tier->psi_nlos >= tier->psi_los,
                is_ground ? "ground.psi_nlos >= psi_los" : "uav.psi_nlos >= psi_los");
        require(tier->n_antennas >= 1,
                is_ground ? "ground.n_antennas >= 1" : "uav.n_antennas >= 1");
    }
    require(cfg.pattern.delta_m > 0.0, "pattern.delta_m > 0");
    require(cfg.pattern.delta_s >= 0.0, "pattern.delta_s >= 0");
    require(cfg.pattern.delta_s <= cfg.pattern.delta_m, "pattern.delta_s <= delta_m");
    require(cfg.pattern.theta0 >= 0.0 && cfg.pattern.theta0 <= 2.0 * std::numbers::pi,
            "pattern.theta0 in [0, 2pi]");
    require(cfg.pattern.phi0 >= 0.0 && cfg.pattern.phi0 <= std::numbers::pi,
            "pattern.phi0 in [0, pi]");
    const double mlp = main_lobe_probability(cfg.pattern);
    require(mlp >= 0.0 && mlp <= 1.0, "main-lobe probability in [0, 1]");
}

/// Copy of cfg with the UAV NLoS intercept forced to the infinity sentinel,
/// the modeling assumption behind every analytic operation. Callers holding a
/// finite measured intercept (kept for Monte Carlo) use this to enter the
/// analytic path explicitly.
inline NetworkConfig analytic_view(const NetworkConfig& cfg) {
    NetworkConfig out = cfg;
    out.uav.psi_nlos = std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace aerocov
