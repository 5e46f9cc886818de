#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <iterator>
#include <stdexcept>
#include <vector>

#include "aerocov/netmodel.hpp"
#include "aerocov/quad.hpp"
#include "aerocov/shotprocess.hpp"

namespace aerocov {

enum class CoverageMethod { finite_antenna, siso_closed_form, massive_limit };

struct CoverageResult {
    double p_u = 0.0;
    double p_g = 0.0;
    double p_cov = 0.0;
    CoverageMethod method = CoverageMethod::finite_antenna;
};

struct CoverageOptions {
    ContourSettings contour{0.0, 32, 1e-6};      // radius 0 -> 0.4/beta
    int series_threshold = 16;                   // antenna count above which the
                                                 // Gamma-tail series route is used
    QuadratureSettings interference_quad{1e-10, 1e-14, 2000};
    QuadratureSettings limit_interference_quad{1e-8, 1e-12, 2000};
    LaplaceSettings laplace{24, 1e-3, 1e-7};
    QuadratureSettings limit_tau_quad{1e-3, 1e-5, 24};
};

namespace cov_detail {

/// Fixed quadrature rule for expectations over the serving squared distance,
/// parameterized by the quantile q of Y_{u,1}: nodes never move once built, so
/// downstream contour differentiation sees an analytic function of its
/// parameter. The q axis is capped at 1 - 1e-9 (truncation of the density
/// tail).
struct ServingDistanceRule {
    std::vector<double> z;       // squared-distance nodes
    std::vector<double> weight;  // dq weights
    std::vector<double> path;    // (z + h^2 z^-nu)^(alpha/2) at the nodes

    ServingDistanceRule() = default;
    ServingDistanceRule(const ShotContext& ctx, int splits_per_panel) {
        // Panels shrink geometrically toward both ends: near q = 1 the
        // integrands behave like powers of (1-q); at large transform
        // arguments their mass concentrates in a q-layer near 0 of width
        // shrinking with the argument. One decade per panel keeps either
        // shape polynomial-like inside every panel.
        static constexpr double edges[] = {
            0.0,       1e-8,      1e-7,      1e-6,       1e-5,      1e-4,
            1e-3,      1e-2,      0.1,       0.5,        0.9,       0.99,
            0.999,     0.9999,    0.99999,   0.999999,   0.9999999, 0.99999999,
            1.0 - 1e-9};
        const double a2 = ctx.config().uav.alpha / 2.0;
        const double h2 = ctx.config().placement.h_o * ctx.config().placement.h_o;
        const double nu = ctx.config().placement.nu;
        for (std::size_t p = 0; p + 1 < std::size(edges); ++p) {
            const double width = (edges[p + 1] - edges[p]) / splits_per_panel;
            for (int sp = 0; sp < splits_per_panel; ++sp) {
                const double qa = edges[p] + sp * width;
                const double c = qa + 0.5 * width, hh = 0.5 * width;
                auto push = [&](double q, double w) {
                    const double zz = ctx.serving_sqdist_quantile(q);
                    z.push_back(zz);
                    weight.push_back(w * hh);
                    path.push_back(std::pow(shot_detail::horizon_term(h2, nu, zz), a2));
                };
                // 7-point Gauss per (sub-)panel: the Gauss subset of the
                // Kronrod node family.
                for (int i = 0; i < 3; ++i) {
                    push(c - hh * quad_detail::kGk15Nodes[2 * i + 1], quad_detail::kG7Weights[i]);
                    push(c + hh * quad_detail::kGk15Nodes[2 * i + 1], quad_detail::kG7Weights[i]);
                }
                push(c, quad_detail::kG7Weights[3]);
            }
        }
    }
};

/// Laplace transform of the inverse unit-gain SINR of the UAV link,
/// L(s) = E[exp(-s a W - pi lambda I_u(s W, Y))], the kernel behind the
/// coverage and rate expressions.
class UavSirKernel {
  public:
    UavSirKernel(const NetworkConfig& cfg, const QuadratureSettings& iq)
        : ctx_(analytic_required(cfg)), iq_(iq) {
        noise_scale_ = cfg.uav.psi_los * cfg.noise_uav /
                       (cfg.uav.tx_power * cfg.pattern.delta_m);
        // Refine the quantile panels until a doubled rule agrees at a
        // representative real argument, then keep the coarsest converged rule.
        const double probe = cfg.uav.n_antennas * cfg.beta;
        int splits = 1;
        rule_ = ServingDistanceRule(ctx_, splits);
        double prev = evaluate(probe);
        while (splits < 16) {
            ServingDistanceRule finer(ctx_, 2 * splits);
            std::swap(rule_, finer);
            const double cur = evaluate(probe);
            if (std::abs(cur - prev) <= 1e-9 * std::max(std::abs(cur), 1e-12)) {
                std::swap(rule_, finer);  // the coarser rule already agrees
                break;
            }
            prev = cur;
            splits *= 2;
        }
    }

    const ShotContext& context() const { return ctx_; }

    template <class T>
    T evaluate(T s) const {
        const double lam = ctx_.config().lambda_u;
        T total{};
        for (std::size_t i = 0; i < rule_.z.size(); ++i) {
            if (!std::isfinite(rule_.path[i])) continue;
            const T x = s * rule_.path[i];
            T expo = -std::numbers::pi * lam * ctx_.uav_interference_integral(x, rule_.z[i], iq_);
            if (noise_scale_ > 0.0) expo -= noise_scale_ * x;
            total += rule_.weight[i] * std::exp(expo);
        }
        return total;
    }

  private:
    static NetworkConfig analytic_required(const NetworkConfig& cfg) {
        validate(cfg);
        if (!std::isinf(cfg.uav.psi_nlos))
            throw std::invalid_argument(
                "uav coverage/rate analytics require the infinite UAV NLoS intercept; "
                "use the Monte Carlo path for finite intercepts");
        return cfg;
    }

    ShotContext ctx_;
    QuadratureSettings iq_;
    double noise_scale_ = 0.0;
    ServingDistanceRule rule_;
};

/// P[G * gamma >= beta] for G ~ Gamma(N, N) independent of gamma, given the
/// Laplace transform L of 1/gamma. Two algebraically identical routes:
///  - N <= threshold: the (N-1)-th tau-derivative of tau^(N-1) L(N/tau) / (N-1)!
///    at tau = 1/beta, taken on a Cauchy contour;
///  - larger N: the Gamma-tail series sum_{k<N} (N beta)^k/k! (-1)^k L^(k)(N beta),
///    whose terms are nonnegative (L is completely monotone), with all
///    derivatives read off one contour around s0 = N beta. The contour route
///    loses ~(N-1) log10((tau0+R)/R) digits to cancellation, which is why it
///    is not used for large antenna counts.
template <class LFun>
double coverage_from_laplace(LFun&& transform, int n_antennas, double beta,
                             const CoverageOptions& opts) {
    const int n = n_antennas;
    if (n <= opts.series_threshold) {
        double fact = 1.0;
        for (int k = 2; k < n; ++k) fact *= k;
        auto f = [&](std::complex<double> tau) {
            return std::pow(tau, n - 1) / fact *
                   transform(std::complex<double>(static_cast<double>(n), 0.0) / tau);
        };
        ContourSettings cs = opts.contour;
        if (cs.radius <= 0.0) cs.radius = 0.4 / beta;
        const double p = cauchy_derivative(f, n - 1, 1.0 / beta, cs);
        return std::min(1.0, std::max(0.0, p));
    }

    const double s0 = n * beta;
    const double eta = std::clamp(std::exp(-12.0 / n), 0.5, 0.97);
    const double radius = eta * s0;
    int m = std::max(128, 8 * n);
    if (m % 2) ++m;
    std::vector<std::complex<double>> vals(static_cast<std::size_t>(m));
    const double dtheta = 2.0 * std::numbers::pi / m;
    for (int j = 0; j <= m / 2; ++j)
        vals[static_cast<std::size_t>(j)] = transform(s0 + std::polar(radius, dtheta * j));
    for (int j = m / 2 + 1; j < m; ++j)
        vals[static_cast<std::size_t>(j)] = std::conj(vals[static_cast<std::size_t>(m - j)]);

    double p = 0.0;
    double eta_pow = 1.0;  // eta^-k
    for (int k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (int j = 0; j < m; ++j)
            acc += vals[static_cast<std::size_t>(j)] * std::polar(1.0, -dtheta * k * j);
        const double term = (k % 2 ? -1.0 : 1.0) * (acc.real() / m) * eta_pow;
        if (term > 0.0) p += term;
        eta_pow /= eta;
    }
    return std::min(1.0, p);
}

inline void require_interference_limited(const NetworkConfig& cfg, const char* who) {
    if (cfg.noise_uav != 0.0)
        throw std::invalid_argument(std::string(who) + ": requires noise_uav == 0");
}

}  // namespace cov_detail

/// UAV coverage through the general finite-antenna expression (expectation
/// over the serving distance, order-(N_u - 1) transform in tau), with no
/// special-case dispatch. Exposed so the dispatching front end can be checked
/// against it.
inline double uav_coverage_general(const NetworkConfig& cfg, const CoverageOptions& opts = {}) {
    cov_detail::UavSirKernel kernel(cfg, opts.interference_quad);
    return cov_detail::coverage_from_laplace(
        [&](std::complex<double> s) { return kernel.evaluate(s); }, cfg.uav.n_antennas, cfg.beta,
        opts);
}

/// UAV coverage p_u = P[gamma_u >= beta]. Fixed-elevation placements
/// (nu = -1, interference-limited) collapse to the distance-free kernel; all
/// other placements evaluate the general path. Requires the UAV NLoS
/// infinity sentinel.
inline double uav_coverage(const NetworkConfig& cfg, const CoverageOptions& opts = {}) {
    validate(cfg);
    if (!std::isinf(cfg.uav.psi_nlos))
        throw std::invalid_argument(
            "uav_coverage: analytic path requires the infinite UAV NLoS intercept; "
            "use the Monte Carlo path for finite intercepts");
    if (cfg.placement.nu == -1.0 && cfg.noise_uav == 0.0) {
        auto transform = [&](std::complex<double> s) {
            return 1.0 / (1.0 + fixed_elevation_interference(s, cfg.uav.alpha, cfg.pattern,
                                                             opts.interference_quad));
        };
        return cov_detail::coverage_from_laplace(transform, cfg.uav.n_antennas, cfg.beta, opts);
    }
    return uav_coverage_general(cfg, opts);
}

/// Single-antenna, interference-limited UAV coverage (one integral, no
/// transform machinery).
inline double uav_coverage_siso(const NetworkConfig& cfg, const CoverageOptions& opts = {}) {
    if (cfg.uav.n_antennas != 1)
        throw std::invalid_argument("uav_coverage_siso: requires n_antennas == 1");
    cov_detail::require_interference_limited(cfg, "uav_coverage_siso");
    cov_detail::UavSirKernel kernel(cfg, opts.interference_quad);
    return std::min(1.0, std::max(0.0, kernel.evaluate(cfg.beta)));
}

/// Ground coverage p_g = P[gamma_g >= beta]. Independent of both
/// intensities by construction.
inline double ground_coverage(const NetworkConfig& cfg, const CoverageOptions& opts = {}) {
    validate(cfg);
    const double y = 2.0 / cfg.ground.alpha;
    auto transform = [&](std::complex<double> s) {
        return 1.0 / (1.0 + ground_interference_integral_analytic(s, y, opts.interference_quad));
    };
    return cov_detail::coverage_from_laplace(transform, cfg.ground.n_antennas, cfg.beta, opts);
}

/// Multi-cell coverage: both links must clear beta; the two SINRs are
/// independent, so p_cov is the product.
inline CoverageResult multicell_coverage(const NetworkConfig& cfg, const CoverageOptions& opts = {}) {
    CoverageResult r;
    r.p_u = uav_coverage(cfg, opts);
    r.p_g = ground_coverage(cfg, opts);
    r.p_cov = r.p_u * r.p_g;
    r.method = CoverageMethod::finite_antenna;
    return r;
}

/// Massive-array limit of the UAV coverage: the serving beamforming gain
/// concentrates at 1, so the limit is the CDF of the inverse unit-gain SINR
/// at 1/beta. The finite integral of the inverted density over (0, 1/beta] is
/// folded into the transform through the 1/s factor, and the inversion runs
/// on a right-half-plane Bromwich line: this transform's continuation past
/// the imaginary axis is unbounded (the interference integral acquires
/// near-poles), which rules the deformed contour out.
inline double uav_coverage_limit(const NetworkConfig& cfg, const CoverageOptions& opts = {}) {
    cov_detail::UavSirKernel kernel(cfg, opts.limit_interference_quad);
    std::function<std::complex<double>(std::complex<double>)> cdf_transform =
        [&](std::complex<double> s) { return kernel.evaluate(s) / s; };
    const double p = bromwich_euler_inverse(cdf_transform, 1.0 / cfg.beta);
    return std::min(1.0, std::max(0.0, p));
}

/// Massive-array limit of the ground coverage.
inline double ground_coverage_limit(const NetworkConfig& cfg, const CoverageOptions& opts = {}) {
    validate(cfg);
    const double y = 2.0 / cfg.ground.alpha;
    std::function<std::complex<double>(std::complex<double>)> transform =
        [&](std::complex<double> s) {
            return 1.0 / (1.0 + ground_interference_integral_analytic(s, y, opts.interference_quad));
        };
    const double p = integrate_finite(
        [&](double tau) { return inverse_laplace(transform, tau, opts.laplace); }, 0.0,
        1.0 / cfg.beta, opts.limit_tau_quad);
    return std::min(1.0, std::max(0.0, p));
}

inline double multicell_coverage_limit(const NetworkConfig& cfg, const CoverageOptions& opts = {}) {
    return uav_coverage_limit(cfg, opts) * ground_coverage_limit(cfg, opts);
}

}  // namespace aerocov
