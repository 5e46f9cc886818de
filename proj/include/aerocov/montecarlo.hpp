#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "aerocov/netmodel.hpp"
#include "aerocov/quad.hpp"
#include "aerocov/shotprocess.hpp"

namespace aerocov {

struct RngSeed {
    std::uint64_t seed = 1;
};

/// Sample statistic with its 95% normal-approximation confidence half-width.
struct Estimate {
    double mean = 0.0;
    double half_width_95 = 0.0;
    long trials = 0;
};

struct CoverageEstimates {
    Estimate p_u, p_g, p_cov;
};

struct McOptions {
    double radius_uav = 0.0;     // meters; 0 selects the default
    double radius_ground = 0.0;  // meters; 0 selects the default
    bool analytic_matching = false;        // force the UAV NLoS infinity sentinel
    bool deterministic_serving_gain = false;  // serving gains fixed at 1 (massive-array oracle)
    bool far_field_compensation = true;    // add the mean interference beyond the disc
    int threads = 0;                       // 0 = hardware concurrency
};

namespace mc_detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Substream seed for one trial: trials are order-independent, so any subset
/// of trial indices reproduces bit-identically regardless of threading.
inline std::uint64_t trial_seed(std::uint64_t seed, long trial) {
    return splitmix64(seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(trial + 1));
}

/// Deterministic pairwise sum (fixed reduction order for any thread count).
inline double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

inline Estimate reduce(const std::vector<double>& samples) {
    Estimate e;
    e.trials = static_cast<long>(samples.size());
    const double n = static_cast<double>(samples.size());
    e.mean = pairwise_sum(samples, 0, samples.size()) / n;
    double ss = 0.0;
    for (double v : samples) ss += (v - e.mean) * (v - e.mean);
    const double sd = n > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    e.half_width_95 = 1.96 * sd / std::sqrt(n);
    return e;
}

}  // namespace mc_detail

/// Default simulation radii. The UAV disc follows the serving-distance scale
/// with a 5 km floor (the LoS transition of the sigmoid extends to ~1 km for
/// Table-I heights); the ground disc maps the effective-process scale back to
/// real space through the smallest intercept. Interference beyond the discs
/// is restored in the mean by far-field compensation.
inline std::pair<double, double> default_radii(const NetworkConfig& cfg) {
    const double pi = std::numbers::pi;
    const double ru = std::max(10.0 / std::sqrt(pi * std::max(cfg.lambda_u, 1e-300)), 5000.0);
    const double lt = effective_ground_intensity(cfg);
    const double psi_min = std::min(cfg.ground.psi_los, cfg.ground.psi_nlos);
    const double rg = std::max(
        10.0 / std::sqrt(pi * lt) * std::pow(psi_min, -1.0 / cfg.ground.alpha), 5000.0);
    return {ru, rg};
}

/// Points of a homogeneous PPP of the given intensity on a disc centered at
/// the origin (the typical user's vantage point).
template <class Rng>
std::vector<std::array<double, 2>> sample_ppp_disc(double intensity, double radius, Rng& rng) {
    if (intensity < 0.0) throw std::domain_error("sample_ppp_disc: negative intensity");
    if (!(radius > 0.0)) throw std::domain_error("sample_ppp_disc: radius must be positive");
    std::vector<std::array<double, 2>> pts;
    const double mean = intensity * std::numbers::pi * radius * radius;
    if (mean <= 0.0) return pts;
    std::poisson_distribution<long> pois(mean);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const long n = pois(rng);
    pts.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const double r = radius * std::sqrt(uni(rng));
        const double th = 2.0 * std::numbers::pi * uni(rng);
        pts.push_back({r * std::cos(th), r * std::sin(th)});
    }
    return pts;
}

/// One UAV of a realization. `fading` holds the raw small-scale draw:
/// Gamma(N_u, N_u) for the serving UAV (the main-lobe gain delta_m is applied
/// in the SINR), exp(1) times the lobe gain for interferers.
struct UavMark {
    double x = 0.0, y = 0.0;  // ground projection, meters
    double height = 0.0;      // meters
    bool los = false;
    bool main_lobe = false;   // interferer beam orientation
    double fading = 0.0;
};

struct GroundMark {
    double x = 0.0, y = 0.0;
    double intercept = 1.0;  // psi_L or psi_N mark
    double fading = 0.0;     // Gamma(N_g, N_g) if serving, exp(1) otherwise
};

struct Realization {
    std::vector<UavMark> uavs;
    std::vector<GroundMark> ground_bs;
    std::optional<std::size_t> serving_uav;
    std::optional<std::size_t> serving_gbs;
};

namespace mc_detail {

inline double uav_path_loss(const NetworkConfig& cfg, const UavMark& u) {
    const double psi = u.los ? cfg.uav.psi_los : cfg.uav.psi_nlos;
    if (std::isinf(psi)) return std::numeric_limits<double>::infinity();
    const double d3sq = u.x * u.x + u.y * u.y + u.height * u.height;
    return psi * std::pow(d3sq, cfg.uav.alpha / 2.0);
}

inline double ground_path_loss(const NetworkConfig& cfg, const GroundMark& g) {
    const double d2 = g.x * g.x + g.y * g.y;
    return g.intercept * std::pow(std::max(d2, 1e-12), cfg.ground.alpha / 2.0);
}

}  // namespace mc_detail

/// Minimum-path-loss association per tier. Undetectable candidates (infinite
/// path loss) never serve; an empty candidate set yields nullopt, counted as
/// outage by the estimators.
inline std::pair<std::optional<std::size_t>, std::optional<std::size_t>> associate(
    Realization& real, const NetworkConfig& cfg) {
    double best_u = std::numeric_limits<double>::infinity();
    double best_g = std::numeric_limits<double>::infinity();
    real.serving_uav.reset();
    real.serving_gbs.reset();
    for (std::size_t i = 0; i < real.uavs.size(); ++i) {
        const double pl = mc_detail::uav_path_loss(cfg, real.uavs[i]);
        if (pl < best_u) {
            best_u = pl;
            real.serving_uav = i;
        }
    }
    for (std::size_t i = 0; i < real.ground_bs.size(); ++i) {
        const double pl = mc_detail::ground_path_loss(cfg, real.ground_bs[i]);
        if (pl < best_g) {
            best_g = pl;
            real.serving_gbs = i;
        }
    }
    return {real.serving_uav, real.serving_gbs};
}

/// Draws one network realization on the given disc: positions, heights per
/// the placement law, LoS marks from the elevation-angle sigmoid, ground
/// intercept marks, association, and small-scale fading (serving links get
/// the beamforming Gamma draw, interferers the exp(1) draw; interfering UAVs
/// additionally carry the main/side-lobe Bernoulli).
template <class Rng>
Realization realize_network(const NetworkConfig& cfg, double radius, Rng& rng) {
    Realization real;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::exponential_distribution<double> exp1(1.0);
    const double q = main_lobe_probability(cfg.pattern);
    const double r0 = rho0(cfg.env);

    auto upts = sample_ppp_disc(cfg.lambda_u, radius, rng);
    real.uavs.reserve(upts.size());
    for (const auto& p : upts) {
        UavMark u;
        u.x = p[0];
        u.y = p[1];
        const double d = std::max(std::hypot(p[0], p[1]), 1e-9);
        u.height = uav_height(cfg.placement, d);
        u.los = uni(rng) < los_probability(cfg.env, u.height / d);
        u.main_lobe = uni(rng) < q;
        u.fading = exp1(rng);
        real.uavs.push_back(u);
    }
    auto gpts = sample_ppp_disc(cfg.lambda_g, radius, rng);
    real.ground_bs.reserve(gpts.size());
    for (const auto& p : gpts) {
        GroundMark g;
        g.x = p[0];
        g.y = p[1];
        g.intercept = uni(rng) < r0 ? cfg.ground.psi_los : cfg.ground.psi_nlos;
        g.fading = exp1(rng);
        real.ground_bs.push_back(g);
    }
    associate(real, cfg);
    if (real.serving_uav) {
        std::gamma_distribution<double> gu(cfg.uav.n_antennas, 1.0 / cfg.uav.n_antennas);
        real.uavs[*real.serving_uav].fading = gu(rng);
    }
    if (real.serving_gbs) {
        std::gamma_distribution<double> gg(cfg.ground.n_antennas, 1.0 / cfg.ground.n_antennas);
        real.ground_bs[*real.serving_gbs].fading = gg(rng);
    }
    return real;
}

/// SINRs of the two links per the association in `real`. gamma_u is nullopt
/// when no UAV serves; a zero-denominator link maps to the +infinity
/// sentinel (covered at any threshold).
inline std::pair<std::optional<double>, double> sample_sinrs(const Realization& real,
                                                             const NetworkConfig& cfg) {
    std::optional<double> gamma_u;
    if (real.serving_uav) {
        const std::size_t si = *real.serving_uav;
        double interference = 0.0;
        for (std::size_t i = 0; i < real.uavs.size(); ++i) {
            if (i == si) continue;
            const double pl = mc_detail::uav_path_loss(cfg, real.uavs[i]);
            if (std::isinf(pl)) continue;
            const double lobe = real.uavs[i].main_lobe ? cfg.pattern.delta_m : cfg.pattern.delta_s;
            interference += cfg.uav.tx_power * real.uavs[i].fading * lobe / pl;
        }
        const double denom =
            mc_detail::uav_path_loss(cfg, real.uavs[si]) * (interference + cfg.noise_uav);
        const double num = cfg.uav.tx_power * cfg.pattern.delta_m * real.uavs[si].fading;
        gamma_u = denom > 0.0 ? num / denom : std::numeric_limits<double>::infinity();
    }
    double gamma_g = 0.0;
    if (real.serving_gbs) {
        const std::size_t si = *real.serving_gbs;
        double interference = 0.0;
        for (std::size_t i = 0; i < real.ground_bs.size(); ++i) {
            if (i == si) continue;
            interference +=
                cfg.ground.tx_power * real.ground_bs[i].fading /
                mc_detail::ground_path_loss(cfg, real.ground_bs[i]);
        }
        const double denom = mc_detail::ground_path_loss(cfg, real.ground_bs[si]) * interference;
        const double num = cfg.ground.tx_power * real.ground_bs[si].fading;
        gamma_g = denom > 0.0 ? num / denom : std::numeric_limits<double>::infinity();
    }
    return {gamma_u, gamma_g};
}

namespace mc_detail {

/// Mean interference (watts) from sources beyond the simulated disc, by
/// Campbell's theorem. Restores the heavy far-field tail of the mmWave
/// exponent that no affordable disc can contain.
inline double uav_far_field_mean(const NetworkConfig& cfg, double radius, bool sentinel_nlos) {
    const double q = main_lobe_probability(cfg.pattern);
    const double mean_gain = q * cfg.pattern.delta_m + (1.0 - q) * cfg.pattern.delta_s;
    const double h2 = cfg.placement.h_o * cfg.placement.h_o;
    const double nu = cfg.placement.nu;
    const double a2 = cfg.uav.alpha / 2.0;
    const double r2 = radius * radius;
    // Squared-distance variable r = r2 e^v (log-stretched heavy tail).
    auto integrand = [&](double v) {
        if (v > 690.0) return 0.0;
        const double r = r2 * std::exp(v);
        if (!std::isfinite(r)) return 0.0;
        const double w = shot_detail::horizon_term(h2, nu, r);
        const double bigw = std::pow(w, a2);
        if (!std::isfinite(bigw) || bigw <= 0.0) return 0.0;
        const double rho = shot_detail::los_along_sqdist(cfg.env, cfg.placement.h_o, nu, r);
        double per_area = rho / cfg.uav.psi_los;
        if (!sentinel_nlos && !std::isinf(cfg.uav.psi_nlos))
            per_area += (1.0 - rho) / cfg.uav.psi_nlos;
        return r * per_area / bigw;
    };
    const double integral =
        integrate_semi_infinite(integrand, 0.0, QuadratureSettings{1e-9, 1e-14, 2000});
    return std::numbers::pi * cfg.lambda_u * mean_gain * cfg.uav.tx_power * integral;
}

inline double ground_far_field_mean(const NetworkConfig& cfg, double radius) {
    const double r0 = rho0(cfg.env);
    const double inv_psi = r0 / cfg.ground.psi_los + (1.0 - r0) / cfg.ground.psi_nlos;
    const double a2 = cfg.ground.alpha / 2.0;
    const double r2 = radius * radius;
    // int_{R^2}^inf r^-a2 dr = R^(2-alpha)/(a2-1)
    return std::numbers::pi * cfg.lambda_g * cfg.ground.tx_power * inv_psi *
           std::pow(r2, 1.0 - a2) / (a2 - 1.0);
}

struct TrialOutput {
    double cov_u = 0.0, cov_g = 0.0, cov_joint = 0.0;
    double rate = 0.0;
    bool rate_sentinel = false;
};

struct TrialContext {
    NetworkConfig cfg;
    double radius_u = 0.0, radius_g = 0.0;
    double tail_u = 0.0, tail_g = 0.0;
    double q = 0.0, r0 = 0.0;
    bool det_gain = false;
};

inline TrialContext make_trial_context(const NetworkConfig& cfg_in, const McOptions& opts) {
    TrialContext tc;
    tc.cfg = cfg_in;
    validate(tc.cfg);
    if (opts.analytic_matching)
        tc.cfg.uav.psi_nlos = std::numeric_limits<double>::infinity();
    auto [ru, rg] = default_radii(tc.cfg);
    tc.radius_u = opts.radius_uav > 0.0 ? opts.radius_uav : ru;
    tc.radius_g = opts.radius_ground > 0.0 ? opts.radius_ground : rg;
    if (opts.far_field_compensation) {
        tc.tail_u = uav_far_field_mean(tc.cfg, tc.radius_u, std::isinf(tc.cfg.uav.psi_nlos));
        tc.tail_g = ground_far_field_mean(tc.cfg, tc.radius_g);
    }
    tc.q = main_lobe_probability(tc.cfg.pattern);
    tc.r0 = rho0(tc.cfg.env);
    tc.det_gain = opts.deterministic_serving_gain;
    return tc;
}

/// One trial, written against the same marks/gains as realize_network but
/// without storing positions (isotropy around the typical user).
template <class Rng>
TrialOutput run_trial(const TrialContext& tc, Rng& rng) {
    const NetworkConfig& cfg = tc.cfg;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::exponential_distribution<double> exp1(1.0);
    TrialOutput out;

    // UAV tier.
    double best_pl_u = std::numeric_limits<double>::infinity();
    double sum_iu = tc.tail_u;  // watts
    double serving_contrib = 0.0;
    const double a2u = cfg.uav.alpha / 2.0;
    const bool sentinel = std::isinf(cfg.uav.psi_nlos);
    {
        const double mean = cfg.lambda_u * std::numbers::pi * tc.radius_u * tc.radius_u;
        long n = 0;
        if (mean > 0.0) {
            std::poisson_distribution<long> pois(mean);
            n = pois(rng);
        }
        const double r2 = tc.radius_u * tc.radius_u;
        for (long i = 0; i < n; ++i) {
            const double d2 = std::max(uni(rng) * r2, 1e-12);
            double height;
            if (cfg.placement.nu == 0.0)
                height = cfg.placement.h_o;
            else
                height = cfg.placement.h_o * std::pow(d2, -0.5 * cfg.placement.nu);
            const double ratio = height / std::sqrt(d2);
            const bool los = uni(rng) < los_probability(cfg.env, ratio);
            const bool main = uni(rng) < tc.q;
            const double fading = exp1(rng);
            if (!los && sentinel) continue;
            const double psi = los ? cfg.uav.psi_los : cfg.uav.psi_nlos;
            const double pl = psi * std::pow(d2 + height * height, a2u);
            const double lobe = main ? cfg.pattern.delta_m : cfg.pattern.delta_s;
            const double contrib = cfg.uav.tx_power * fading * lobe / pl;
            sum_iu += contrib;
            if (pl < best_pl_u) {
                best_pl_u = pl;
                serving_contrib = contrib;
            }
        }
    }
    std::optional<double> gamma_u;
    if (std::isfinite(best_pl_u)) {
        double g_star = 1.0;
        if (!tc.det_gain) {
            std::gamma_distribution<double> gu(cfg.uav.n_antennas, 1.0 / cfg.uav.n_antennas);
            g_star = gu(rng);
        }
        const double interference = sum_iu - serving_contrib;
        const double denom = best_pl_u * (interference + cfg.noise_uav);
        const double num = cfg.uav.tx_power * cfg.pattern.delta_m * g_star;
        gamma_u = denom > 0.0 ? num / denom : std::numeric_limits<double>::infinity();
    }

    // Ground tier.
    double best_pl_g = std::numeric_limits<double>::infinity();
    double sum_ig = tc.tail_g;
    double serving_contrib_g = 0.0;
    const double a2g = cfg.ground.alpha / 2.0;
    {
        const double mean = cfg.lambda_g * std::numbers::pi * tc.radius_g * tc.radius_g;
        long n = 0;
        if (mean > 0.0) {
            std::poisson_distribution<long> pois(mean);
            n = pois(rng);
        }
        const double r2 = tc.radius_g * tc.radius_g;
        for (long i = 0; i < n; ++i) {
            const double d2 = std::max(uni(rng) * r2, 1e-12);
            const double psi = uni(rng) < tc.r0 ? cfg.ground.psi_los : cfg.ground.psi_nlos;
            const double fading = exp1(rng);
            const double pl = psi * std::pow(d2, a2g);
            const double contrib = cfg.ground.tx_power * fading / pl;
            sum_ig += contrib;
            if (pl < best_pl_g) {
                best_pl_g = pl;
                serving_contrib_g = contrib;
            }
        }
    }
    double gamma_g = 0.0;
    if (std::isfinite(best_pl_g)) {
        double g_star = 1.0;
        if (!tc.det_gain) {
            std::gamma_distribution<double> gg(cfg.ground.n_antennas, 1.0 / cfg.ground.n_antennas);
            g_star = gg(rng);
        }
        const double interference = sum_ig - serving_contrib_g;
        const double denom = best_pl_g * interference;
        const double num = cfg.ground.tx_power * g_star;
        gamma_g = denom > 0.0 ? num / denom : std::numeric_limits<double>::infinity();
    }

    const bool cu = gamma_u && *gamma_u >= cfg.beta;
    const bool cg = gamma_g >= cfg.beta;
    out.cov_u = cu ? 1.0 : 0.0;
    out.cov_g = cg ? 1.0 : 0.0;
    out.cov_joint = (cu && cg) ? 1.0 : 0.0;
    if (gamma_u && std::isinf(*gamma_u)) {
        out.rate_sentinel = true;
    } else if (gamma_u && cg) {
        out.rate = std::log1p(*gamma_u);
    }
    return out;
}

struct TrialSums {
    std::vector<double> cov_u, cov_g, cov_joint, rate;
    std::vector<char> sentinel;
};

inline TrialSums run_all_trials(const NetworkConfig& cfg, long trials, std::uint64_t seed,
                                const McOptions& opts) {
    const TrialContext tc = make_trial_context(cfg, opts);
    TrialSums sums;
    sums.cov_u.resize(static_cast<std::size_t>(trials));
    sums.cov_g.resize(static_cast<std::size_t>(trials));
    sums.cov_joint.resize(static_cast<std::size_t>(trials));
    sums.rate.resize(static_cast<std::size_t>(trials));
    sums.sentinel.resize(static_cast<std::size_t>(trials), 0);

    unsigned nt = opts.threads > 0 ? static_cast<unsigned>(opts.threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
    nt = std::min<unsigned>(nt, static_cast<unsigned>(std::max<long>(trials, 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t)
        pool.emplace_back([&, t] {
            for (long i = static_cast<long>(t); i < trials; i += nt) {
                std::mt19937_64 rng(trial_seed(seed, i));
                const TrialOutput o = run_trial(tc, rng);
                const auto idx = static_cast<std::size_t>(i);
                sums.cov_u[idx] = o.cov_u;
                sums.cov_g[idx] = o.cov_g;
                sums.cov_joint[idx] = o.cov_joint;
                sums.rate[idx] = o.rate;
                sums.sentinel[idx] = o.rate_sentinel ? 1 : 0;
            }
        });
    for (auto& th : pool) th.join();
    return sums;
}

}  // namespace mc_detail

/// Empirical coverage probabilities with 95% confidence half-widths. The
/// joint coverage is estimated directly (not as the product), so the
/// independence factorization itself is testable.
inline CoverageEstimates estimate_coverage(const NetworkConfig& cfg, long trials, double radius,
                                           std::uint64_t seed, const McOptions& opts_in = {}) {
    if (trials < 100) throw std::domain_error("estimate_coverage: need at least 100 trials");
    McOptions opts = opts_in;
    if (radius > 0.0) {
        opts.radius_uav = radius;
        opts.radius_ground = radius;
    }
    const auto sums = mc_detail::run_all_trials(cfg, trials, seed, opts);
    return {mc_detail::reduce(sums.cov_u), mc_detail::reduce(sums.cov_g),
            mc_detail::reduce(sums.cov_joint)};
}

/// Coverage and rate estimates from one shared set of trials (identical
/// draws to calling the two estimators separately with the same seed).
struct AllEstimates {
    CoverageEstimates coverage;
    Estimate vse;
    long vse_sentinel_excluded = 0;
};

inline AllEstimates estimate_all(const NetworkConfig& cfg, long trials, double radius,
                                 std::uint64_t seed, const McOptions& opts_in = {}) {
    if (trials < 100) throw std::domain_error("estimate_all: need at least 100 trials");
    McOptions opts = opts_in;
    if (radius > 0.0) {
        opts.radius_uav = radius;
        opts.radius_ground = radius;
    }
    const auto sums = mc_detail::run_all_trials(cfg, trials, seed, opts);
    AllEstimates out;
    out.coverage = {mc_detail::reduce(sums.cov_u), mc_detail::reduce(sums.cov_g),
                    mc_detail::reduce(sums.cov_joint)};
    std::vector<double> kept;
    kept.reserve(sums.rate.size());
    for (std::size_t i = 0; i < sums.rate.size(); ++i) {
        if (sums.sentinel[i])
            ++out.vse_sentinel_excluded;
        else
            kept.push_back(sums.rate[i]);
    }
    Estimate e = kept.empty() ? Estimate{0.0, 0.0, 0} : mc_detail::reduce(kept);
    const double scale = cfg.lambda_u / cfg.placement.h_max;
    e.mean *= scale;
    e.half_width_95 *= scale;
    e.trials = trials;
    out.vse = e;
    return out;
}

/// Empirical volume spectral efficiency (lambda_u / h_max times the mean
/// ground-gated rate). Trials whose UAV SINR hit the +infinity sentinel are
/// excluded from the mean; their count is reported through
/// `sentinel_excluded` when provided.
inline Estimate estimate_vse(const NetworkConfig& cfg, long trials, double radius,
                             std::uint64_t seed, const McOptions& opts_in = {},
                             long* sentinel_excluded = nullptr) {
    if (trials < 100) throw std::domain_error("estimate_vse: need at least 100 trials");
    McOptions opts = opts_in;
    if (radius > 0.0) {
        opts.radius_uav = radius;
        opts.radius_ground = radius;
    }
    const auto sums = mc_detail::run_all_trials(cfg, trials, seed, opts);
    std::vector<double> kept;
    kept.reserve(sums.rate.size());
    long excluded = 0;
    for (std::size_t i = 0; i < sums.rate.size(); ++i) {
        if (sums.sentinel[i])
            ++excluded;
        else
            kept.push_back(sums.rate[i]);
    }
    if (sentinel_excluded) *sentinel_excluded = excluded;
    Estimate e = kept.empty() ? Estimate{0.0, 0.0, 0} : mc_detail::reduce(kept);
    const double scale = cfg.lambda_u / cfg.placement.h_max;
    e.mean *= scale;
    e.half_width_95 *= scale;
    e.trials = trials;
    return e;
}

}  // namespace aerocov
