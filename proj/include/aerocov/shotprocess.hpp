#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "aerocov/netmodel.hpp"
#include "aerocov/quad.hpp"

namespace aerocov {

namespace shot_detail {

/// rho evaluated along the squared-distance axis: rho(h_o * r^(-(nu+1)/2)),
/// with the r -> 0 and r -> inf limits made explicit.
inline double los_along_sqdist(const Environment& env, double h_o, double nu, double r) {
    if (h_o == 0.0) return rho0(env);
    const double e = -(nu + 1.0) / 2.0;
    if (r <= 0.0) {
        if (e < 0.0) return los_probability(env, std::numeric_limits<double>::infinity());
        if (e == 0.0) return los_probability(env, h_o);
        return rho0(env);
    }
    const double arg = h_o * std::pow(r, e);
    if (!std::isfinite(arg)) return los_probability(env, std::numeric_limits<double>::infinity());
    return los_probability(env, arg);
}

/// r + h_o^2 * r^(-nu); +inf when the height term diverges at r = 0.
inline double horizon_term(double h2, double nu, double r) {
    if (nu == 0.0) return r + h2;
    if (nu == -1.0) return r * (1.0 + h2);
    if (r <= 0.0) {
        if (h2 == 0.0) return 0.0;
        return nu > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return r + h2 * std::pow(r, -nu);
}

}  // namespace shot_detail

/// Precomputed state for the K-th incomplete shot-process transforms of one
/// network configuration: the LoS intensity measure on a grid, its quantiles,
/// and the effective ground intensity. Immutable after construction; all
/// members are safe to call concurrently.
class ShotContext {
  public:
    explicit ShotContext(NetworkConfig cfg, int order = 1, int grid_nodes = 4096)
        : cfg_(std::move(cfg)), k_(order) {
        validate(cfg_);
        if (k_ < 1) throw std::invalid_argument("ShotContext: incompleteness order must be >= 1");
        if (!std::isinf(cfg_.uav.psi_nlos))
            throw std::invalid_argument(
                "ShotContext: analytic operations require the infinite UAV NLoS intercept "
                "(undetectable NLoS); use the Monte Carlo path for finite intercepts");
        lambda_tilde_g_ = effective_ground_intensity(cfg_);

        auto density = [this](double r) {
            return shot_detail::los_along_sqdist(cfg_.env, cfg_.placement.h_o, cfg_.placement.nu, r);
        };
        // Grid out to the 1 - e^-25 mass quantile of the nearest-LoS law.
        double z_max = 25.0 / (std::numbers::pi * cfg_.lambda_u);
        for (int pass = 0; pass < 8; ++pass) {
            zeta_ = CumulativeInterpolant(density, z_max, grid_nodes);
            const double mass = std::numbers::pi * cfg_.lambda_u * zeta_.total();
            if (mass >= 25.0) break;
            z_max *= 1.6 * 25.0 / mass;
        }
    }

    const NetworkConfig& config() const { return cfg_; }
    int incompleteness_order() const { return k_; }
    double lambda_tilde_g() const { return lambda_tilde_g_; }

    /// Integral of the LoS-thinning probability over squared distance,
    /// int_0^z rho(h_o r^(-(nu+1)/2)) dr. Nondecreasing, bounded by z.
    double los_measure(double z) const {
        if (z < 0.0) throw std::domain_error("los_measure: negative argument");
        return zeta_(z);
    }

    /// d/dz of los_measure.
    double los_measure_density(double z) const {
        return shot_detail::los_along_sqdist(cfg_.env, cfg_.placement.h_o, cfg_.placement.nu, z);
    }

    /// PDF of the squared horizontal distance of the K-th smallest-path-loss
    /// LoS UAV.
    double sqdist_pdf(double z) const {
        if (!(z > 0.0)) return 0.0;
        const double pil = std::numbers::pi * cfg_.lambda_u;
        const double zeta = los_measure(z);
        double poly = 1.0;
        for (int j = 1; j < k_; ++j) poly *= pil * zeta / j;
        return pil * poly * los_measure_density(z) * std::exp(-pil * zeta);
    }

    /// Quantile of the serving (K = 1) squared distance law,
    /// 1 - exp(-pi lambda_u los_measure(z)) = q.
    double serving_sqdist_quantile(double q) const {
        if (!(q >= 0.0 && q < 1.0))
            throw std::domain_error("serving_sqdist_quantile: q must lie in [0, 1)");
        const double target = -std::log1p(-q) / (std::numbers::pi * cfg_.lambda_u);
        return zeta_.solve(target);
    }

    /// Interference integral of the UAV tier (semi-infinite in squared
    /// distance, lobe mixture included). Analytic in x off the negative real
    /// axis; evaluable at complex x.
    template <class T>
    T uav_interference_integral(T x, double y, const QuadratureSettings& qs = {1e-10, 1e-14, 2000}) const {
        using std::abs;
        if (y < 0.0) throw std::domain_error("uav_interference_integral: negative y");
        const double ax = static_cast<double>(abs(x));
        if (ax == 0.0) return T{};
        const double a2 = cfg_.uav.alpha / 2.0;
        const double kappa = cfg_.pattern.delta_s / cfg_.pattern.delta_m;
        const double q = main_lobe_probability(cfg_.pattern);
        const double h2 = cfg_.placement.h_o * cfg_.placement.h_o;
        const double nu = cfg_.placement.nu;
        const double scale = std::max({y, std::pow(ax, 2.0 / cfg_.uav.alpha), 1.0});
        // Log-stretched variable r = y + scale (e^v - 1): turns the algebraic
        // r^(-alpha/2) tail into exponential decay in v, so the compactifying
        // map downstream sees no endpoint singularity.
        auto integrand = [&](double v) -> T {
            if (v > 690.0) return T{};
            const double ev = std::exp(v);
            const double r = y + scale * std::expm1(v);
            if (!std::isfinite(r)) return T{};
            const double w = shot_detail::horizon_term(h2, nu, r);
            if (!std::isfinite(w)) return T{};
            const double bigw = std::pow(w, a2);
            if (!std::isfinite(bigw)) return T{};
            const double rho = shot_detail::los_along_sqdist(cfg_.env, cfg_.placement.h_o, nu, r);
            const double jac = rho * scale * ev;
            if (kappa == 0.0) return (jac * q) * (x / (x + bigw));
            const T a = x / (kappa * x + bigw);
            const T b = kappa + q * (1.0 - kappa) * (bigw / (x + bigw));
            return jac * a * b;
        };
        return integrate_semi_infinite(integrand, 0.0, qs);
    }

    /// Laplace transform of the K-th incomplete UAV shot process conditioned
    /// on the K-th squared distance, exp(-pi lambda_u I_u(s dm P/psi_L, y)).
    double uav_interference_laplace(double s, double y,
                                    const QuadratureSettings& qs = {1e-10, 1e-14, 2000}) const {
        if (s < 0.0) throw std::domain_error("uav_interference_laplace: s must be nonnegative");
        if (s == 0.0) return 1.0;
        const double x = s * cfg_.pattern.delta_m * cfg_.uav.tx_power / cfg_.uav.psi_los;
        return std::exp(-std::numbers::pi * cfg_.lambda_u * uav_interference_integral(x, y, qs));
    }

    /// Laplace transform of the K-th incomplete ground shot process for a
    /// given effective squared distance y_gk.
    double ground_interference_laplace(double s, double y_gk) const;

  private:
    NetworkConfig cfg_;
    int k_ = 1;
    double lambda_tilde_g_ = 0.0;
    CumulativeInterpolant zeta_;
};

/// Interference integral of the ground tier (real form: direct integral from
/// x^-y; the sinc-based second form is asserted against it in debug builds).
inline double ground_interference_integral(double x, double y,
                                           const QuadratureSettings& qs = {1e-10, 1e-14, 2000});

/// Complex continuation of the ground interference integral, via the
/// sinc-based form x^y/sinc(y) - int_0^1 x/(x + u^(1/y)) du.
template <class T>
T ground_interference_integral_analytic(T x, double y,
                                        const QuadratureSettings& qs = {1e-10, 1e-14, 2000}) {
    using std::abs;
    if (!(y > 0.0 && y < 1.0))
        throw std::domain_error("ground_interference_integral: y must lie in (0, 1)");
    if (static_cast<double>(abs(x)) == 0.0) return T{};
    const double pi = std::numbers::pi;
    const double sinc = std::sin(pi * y) / (pi * y);
    const double inv_y = 1.0 / y;
    auto integrand = [&](double u) -> T { return x / (x + std::pow(u, inv_y)); };
    return std::pow(x, y) / sinc - integrate_finite(integrand, 0.0, 1.0, qs);
}

inline double ground_interference_integral(double x, double y, const QuadratureSettings& qs) {
    if (!(y > 0.0 && y < 1.0))
        throw std::domain_error("ground_interference_integral: y must lie in (0, 1)");
    if (x < 0.0) throw std::domain_error("ground_interference_integral: x must be nonnegative");
    if (x == 0.0) return 0.0;
    const double lower = std::pow(x, -y);
    const double xy = std::pow(x, y);
    const double inv_y = 1.0 / y;
    // t = lower * e^v: exponential tail decay in v for any 1/y > 1.
    auto integrand = [&](double v) {
        if (v > 690.0) return 0.0;
        const double t = lower * std::exp(v);
        if (!std::isfinite(t)) return 0.0;
        return t * xy / (1.0 + std::pow(t, inv_y));
    };
    const double direct = integrate_semi_infinite(integrand, 0.0, qs);
#ifndef NDEBUG
    const double alt = ground_interference_integral_analytic(x, y, qs);
    if (std::abs(direct - alt) > 1e-8 * std::max(1.0, std::abs(direct)))
        throw std::logic_error("ground_interference_integral: algebraic forms disagree");
#endif
    return direct;
}

inline double ShotContext::ground_interference_laplace(double s, double y_gk) const {
    if (s < 0.0) throw std::domain_error("ground_interference_laplace: s must be nonnegative");
    if (!(y_gk > 0.0)) throw std::domain_error("ground_interference_laplace: y_gk must be positive");
    if (s == 0.0) return 1.0;
    const double arg = s * cfg_.ground.tx_power / std::pow(y_gk, cfg_.ground.alpha / 2.0);
    const double frak = ground_interference_integral(arg, 2.0 / cfg_.ground.alpha);
    return std::exp(-std::numbers::pi * lambda_tilde_g_ * y_gk * frak);
}

/// Normalized UAV interference integral of the fixed-elevation placement
/// (nu = -1): the h_o-free kernel g(c) with the serving distance scaled out.
/// Equals uav_interference_integral(c (1+h_o^2)^(a/2), 1) / rho(h_o).
template <class T>
T fixed_elevation_interference(T c, double alpha_u, const AntennaPattern& pattern,
                               const QuadratureSettings& qs = {1e-10, 1e-14, 2000}) {
    using std::abs;
    if (!(alpha_u > 2.0)) throw std::domain_error("fixed_elevation_interference: alpha_u must exceed 2");
    const double ac = static_cast<double>(abs(c));
    if (ac == 0.0) return T{};
    const double a2 = alpha_u / 2.0;
    const double kappa = pattern.delta_s / pattern.delta_m;
    const double q = main_lobe_probability(pattern);
    const double scale = std::max(1.0, std::pow(ac, 2.0 / alpha_u));
    auto integrand = [&](double v) -> T {
        if (v > 690.0) return T{};
        const double ev = std::exp(v);
        const double t = 1.0 + scale * std::expm1(v);
        if (!std::isfinite(t)) return T{};
        const double bigw = std::pow(t, a2);
        if (!std::isfinite(bigw)) return T{};
        const double jac = scale * ev;
        if (kappa == 0.0) return (jac * q) * (c / (c + bigw));
        const T a = c / (kappa * c + bigw);
        const T b = kappa + q * (1.0 - kappa) * (bigw / (c + bigw));
        return jac * a * b;
    };
    return integrate_semi_infinite(integrand, 0.0, qs);
}

/// Closed form of the UAV shot-process Laplace transform at the self-scaled
/// argument (fixed elevation, negligible side lobe):
/// (1 + mlp * int_1^inf dz/(1+z^(a/2)))^(-K); exactly (1 + t0*f0/(8 pi))^(-K)
/// at alpha_u = 4.
inline double uav_scaled_laplace_closed(int order, double alpha_u, const AntennaPattern& pattern) {
    if (order < 0) throw std::domain_error("uav_scaled_laplace_closed: negative order");
    if (!(alpha_u > 2.0)) throw std::domain_error("uav_scaled_laplace_closed: alpha_u must exceed 2");
    if (order == 0) return 1.0;
    double tail;
    if (alpha_u == 4.0) {
        tail = std::numbers::pi / 4.0;
    } else {
        // z = e^v turns the z^(-alpha/2) tail into exponential decay.
        const double a2 = alpha_u / 2.0;
        tail = integrate_semi_infinite(
            [a2](double v) {
                if (v > 690.0) return 0.0;
                const double z = std::exp(v);
                return std::isfinite(z) ? z / (1.0 + std::pow(z, a2)) : 0.0;
            },
            0.0, QuadratureSettings{1e-13, 1e-16, 2000});
    }
    return std::pow(1.0 + main_lobe_probability(pattern) * tail, -order);
}

/// Closed form of the ground shot-process Laplace transform at the
/// self-scaled argument: (1 + I_g(1, 2/alpha_g))^(-K). Independent of the
/// ground intensity.
inline double ground_scaled_laplace_closed(int order, double alpha_g) {
    if (order < 0) throw std::domain_error("ground_scaled_laplace_closed: negative order");
    if (!(alpha_g > 2.0)) throw std::domain_error("ground_scaled_laplace_closed: alpha_g must exceed 2");
    if (order == 0) return 1.0;
    return std::pow(1.0 + ground_interference_integral(1.0, 2.0 / alpha_g,
                                                       QuadratureSettings{1e-13, 1e-16, 2000}),
                    -order);
}

}  // namespace aerocov
