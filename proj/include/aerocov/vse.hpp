#pragma once

#include <cmath>
#include <stdexcept>

#include "aerocov/coverage.hpp"
#include "aerocov/netmodel.hpp"
#include "aerocov/quad.hpp"
#include "aerocov/shotprocess.hpp"

namespace aerocov {

enum class VseMethod { finite_antenna, massive_limit };

struct VseResult {
    double value = 0.0;     // nats/sec/Hz/m^3
    double p_g_used = 0.0;  // ground coverage factor entering the rate
    VseMethod method = VseMethod::finite_antenna;
};

struct VseOptions {
    QuadratureSettings s_quad{1e-7, 1e-12, 2000};
    CoverageOptions coverage;
    VseOptions() {
        // The rate integrals carry no derivative amplification, so the
        // interference quadrature can run looser than the coverage contours.
        coverage.interference_quad = QuadratureSettings{1e-9, 1e-13, 2000};
    }
};

/// (1 - (N/(N+s))^N) / s, the Shannon-transform factor of a Gamma(N, N)
/// beamforming gain. Evaluated through expm1/log1p so the s -> 0 limit (=1)
/// is reached without cancellation.
inline double shannon_gain_factor(int n_antennas, double s) {
    if (s <= 0.0) return 1.0;
    return -std::expm1(-n_antennas * std::log1p(s / n_antennas)) / s;
}

/// Massive-array limit of the factor above: (1 - e^-s)/s.
inline double shannon_gain_factor_limit(double s) {
    if (s <= 0.0) return 1.0;
    return -std::expm1(-s) / s;
}

namespace vse_detail {

/// E[log(1 + gamma_u)] as the Shannon-transform integral of the inverse-SINR
/// Laplace transform. The fixed-elevation placement (nu = -1) uses the
/// distance-free kernel.
inline double expected_log_rate(const NetworkConfig& cfg, bool massive, const VseOptions& opts) {
    const int n = cfg.uav.n_antennas;
    if (cfg.placement.nu == -1.0 && cfg.noise_uav == 0.0) {
        auto integrand = [&](double s) {
            const double fac = massive ? shannon_gain_factor_limit(s) : shannon_gain_factor(n, s);
            if (fac == 0.0) return 0.0;
            const double g = fixed_elevation_interference(
                s, cfg.uav.alpha, cfg.pattern, opts.coverage.interference_quad);
            return fac / (1.0 + g);
        };
        return integrate_semi_infinite(integrand, 0.0, opts.s_quad);
    }
    cov_detail::UavSirKernel kernel(cfg, opts.coverage.interference_quad);
    auto integrand = [&](double s) {
        const double fac = massive ? shannon_gain_factor_limit(s) : shannon_gain_factor(n, s);
        if (fac == 0.0) return 0.0;
        const double lx = kernel.evaluate(s);
        return fac * lx;
    };
    return integrate_semi_infinite(integrand, 0.0, opts.s_quad);
}

}  // namespace vse_detail

/// Mean channel rate of the data link, p_g * E[log(1 + gamma_u)]
/// (nats/sec/Hz): the control link must be covered for the data link to
/// carry anything.
inline double mean_link_rate(const NetworkConfig& cfg, const VseOptions& opts = {}) {
    validate(cfg);
    const double pg = ground_coverage(cfg, opts.coverage);
    return pg * vse_detail::expected_log_rate(cfg, /*massive=*/false, opts);
}

/// Volume spectral efficiency lambda_u p_g E[log(1+gamma_u)] / h_max.
inline VseResult volume_spectral_efficiency(const NetworkConfig& cfg, const VseOptions& opts = {}) {
    validate(cfg);
    VseResult r;
    r.p_g_used = ground_coverage(cfg, opts.coverage);
    r.value = cfg.lambda_u / cfg.placement.h_max * r.p_g_used *
              vse_detail::expected_log_rate(cfg, /*massive=*/false, opts);
    r.method = VseMethod::finite_antenna;
    return r;
}

/// Massive-array limit of the volume spectral efficiency: deterministic unit
/// serving gain and the limiting ground coverage.
inline VseResult volume_spectral_efficiency_limit(const NetworkConfig& cfg,
                                                  const VseOptions& opts = {}) {
    validate(cfg);
    VseResult r;
    r.p_g_used = ground_coverage_limit(cfg, opts.coverage);
    r.value = cfg.lambda_u / cfg.placement.h_max * r.p_g_used *
              vse_detail::expected_log_rate(cfg, /*massive=*/true, opts);
    r.method = VseMethod::massive_limit;
    return r;
}

/// Cross-check route for the mean rate: p_g * int_0^inf P[gamma_u >= x]/(1+x) dx
/// evaluated on a coarse log-stretched grid of coverage calls. Slow; used by
/// tests to confirm the Shannon-transform route.
inline double mean_link_rate_ccdf(const NetworkConfig& cfg, int grid_points = 24,
                                  const VseOptions& opts = {}) {
    validate(cfg);
    if (grid_points < 4) throw std::invalid_argument("mean_link_rate_ccdf: grid too coarse");
    const double pg = ground_coverage(cfg, opts.coverage);
    // x = expm1(v), v = t/(1-t); composite midpoint on t keeps the call count
    // at exactly grid_points.
    const double dt = 1.0 / grid_points;
    double acc = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double t = (i + 0.5) * dt;
        const double v = t / (1.0 - t);
        if (v > 30.0) continue;
        const double x = std::expm1(v);
        const double jac = (x + 1.0) / ((1.0 - t) * (1.0 - t));
        NetworkConfig at_x = cfg;
        at_x.beta = std::max(x, 1e-12);
        acc += dt * jac * uav_coverage(at_x, opts.coverage) / (1.0 + x);
    }
    return pg * acc;
}

}  // namespace aerocov
