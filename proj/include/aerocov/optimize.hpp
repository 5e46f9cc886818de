#pragma once

#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <vector>

#include "aerocov/coverage.hpp"
#include "aerocov/sweep.hpp"
#include "aerocov/vse.hpp"

namespace aerocov {

struct OptResult {
    double argmax = 0.0;
    double value = 0.0;
    int evaluations = 0;
    double lo = 0.0;  // final bracket
    double hi = 0.0;
};

namespace opt_detail {

class CachedObjective {
  public:
    explicit CachedObjective(std::function<double(double)> f) : f_(std::move(f)) {}
    double operator()(double x) {
        auto it = cache_.find(x);
        if (it != cache_.end()) return it->second;
        const double v = f_(x);
        cache_.emplace(x, v);
        ++evals_;
        return v;
    }
    int evaluations() const { return evals_; }

  private:
    std::function<double(double)> f_;
    std::unordered_map<double, double> cache_;
    int evals_ = 0;
};

}  // namespace opt_detail

/// Maximizes a continuous objective on [lo, hi]. A 17-point pre-scan locates
/// the dominant mode (and flags multimodality, falling back to refining the
/// best scanned bracket); golden-section then shrinks the bracket to `tol`.
/// Intended for unimodal objectives, where the result is the global maximum.
inline OptResult maximize_scalar(const std::function<double(double)>& objective, double lo,
                                 double hi, double tol) {
    if (!(lo < hi)) throw std::invalid_argument("maximize_scalar: requires lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("maximize_scalar: requires tol > 0");
    opt_detail::CachedObjective f(objective);

    constexpr int kScan = 17;
    std::vector<double> xs(kScan), vs(kScan);
    for (int i = 0; i < kScan; ++i) {
        xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (kScan - 1);
        vs[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]);
    }
    int best = 0;
    for (int i = 1; i < kScan; ++i)
        if (vs[static_cast<std::size_t>(i)] > vs[static_cast<std::size_t>(best)]) best = i;
    // Either way (clean unimodal scan or multimodal fallback) the refinement
    // happens inside the bracket surrounding the best scanned point.
    double a = xs[static_cast<std::size_t>(std::max(0, best - 1))];
    double b = xs[static_cast<std::size_t>(std::min(kScan - 1, best + 1))];

    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    OptResult r;
    r.lo = a;
    r.hi = b;
    r.argmax = f1 > f2 ? x1 : x2;
    r.value = std::max(f1, f2);
    // Endpoint of the original interval may dominate (monotone objectives).
    for (int i : {0, kScan - 1}) {
        if (vs[static_cast<std::size_t>(i)] > r.value) {
            r.argmax = xs[static_cast<std::size_t>(i)];
            r.value = vs[static_cast<std::size_t>(i)];
            r.lo = std::max(lo, r.argmax - tol);
            r.hi = std::min(hi, r.argmax + tol);
        }
    }
    r.evaluations = f.evaluations();
    return r;
}

/// Best common altitude for the UAV coverage at fixed intensity (height
/// control model, nu = 0).
inline OptResult maximize_coverage_over_height(const NetworkConfig& cfg, double h_lo, double h_hi,
                                               double tol = 1e-2,
                                               const CoverageOptions& opts = {}) {
    if (cfg.placement.nu == -1.0)
        throw std::invalid_argument(
            "maximize_coverage_over_height: under the fixed-elevation placement (nu == -1) "
            "the UAV coverage does not depend on h_o");
    if (cfg.placement.nu != 0.0)
        throw std::invalid_argument("maximize_coverage_over_height: requires nu == 0");
    return maximize_scalar(
        [&](double h) { return uav_coverage(apply_parameter(cfg, SweepParameter::h_o, h), opts); },
        h_lo, h_hi, tol);
}

/// Best UAV intensity for the UAV coverage at fixed height; the search runs
/// in log-space since intensities span decades.
inline OptResult maximize_coverage_over_intensity(const NetworkConfig& cfg, double l_lo,
                                                  double l_hi, double rel_tol = 1e-2,
                                                  const CoverageOptions& opts = {}) {
    if (cfg.placement.nu != 0.0)
        throw std::invalid_argument("maximize_coverage_over_intensity: requires nu == 0");
    if (!(l_lo > 0.0)) throw std::invalid_argument("maximize_coverage_over_intensity: l_lo must be > 0");
    if (!(l_lo < l_hi)) throw std::invalid_argument("maximize_coverage_over_intensity: requires l_lo < l_hi");
    auto obj = [&](double loglam) {
        NetworkConfig c = cfg;
        c.lambda_u = std::exp(loglam);
        return uav_coverage(c, opts);
    };
    OptResult r = maximize_scalar(obj, std::log(l_lo), std::log(l_hi), rel_tol);
    r.argmax = std::exp(r.argmax);
    r.lo = std::exp(r.lo);
    r.hi = std::exp(r.hi);
    return r;
}

enum class OptVariable { height, intensity };

/// Maximizer of the volume spectral efficiency over the chosen knob.
inline OptResult maximize_vse(const NetworkConfig& cfg, OptVariable variable, double lo, double hi,
                              double tol = 1e-2, const VseOptions& opts = {}) {
    if (variable == OptVariable::height && cfg.placement.nu != 0.0)
        throw std::invalid_argument("maximize_vse: height variable requires nu == 0");
    if (variable == OptVariable::height)
        return maximize_scalar(
            [&](double h) {
                return volume_spectral_efficiency(apply_parameter(cfg, SweepParameter::h_o, h), opts)
                    .value;
            },
            lo, hi, tol);
    if (!(lo > 0.0)) throw std::invalid_argument("maximize_vse: intensity lower bound must be > 0");
    auto obj = [&](double loglam) {
        NetworkConfig c = cfg;
        c.lambda_u = std::exp(loglam);
        return volume_spectral_efficiency(c, opts).value;
    };
    OptResult r = maximize_scalar(obj, std::log(lo), std::log(hi), tol);
    r.argmax = std::exp(r.argmax);
    r.lo = std::exp(r.lo);
    r.hi = std::exp(r.hi);
    return r;
}

enum class SurfaceObjective { p_u, p_cov, V_u };

struct GridSurface {
    std::vector<double> axis1, axis2;
    std::vector<double> values;        // row-major: values[i*axis2.size()+j]
    std::vector<std::string> status;   // "ok" or the per-cell error
    std::size_t argmax_i = 0, argmax_j = 0;
    double max_value = -std::numeric_limits<double>::infinity();

    double at(std::size_t i, std::size_t j) const { return values[i * axis2.size() + j]; }
};

/// Dense evaluation of an objective over a 2-D parameter grid. Cells that
/// fail carry NaN plus their error text; the rest of the surface is still
/// returned. Cells evaluate in parallel.
inline GridSurface grid_surface(const NetworkConfig& cfg, const SweepSpec& axis1,
                                const SweepSpec& axis2, SurfaceObjective objective,
                                int threads = 0) {
    axis1.check();
    axis2.check();
    GridSurface out;
    out.axis1 = axis1.grid;
    out.axis2 = axis2.grid;
    const std::size_t n1 = axis1.grid.size(), n2 = axis2.grid.size();
    out.values.assign(n1 * n2, std::numeric_limits<double>::quiet_NaN());
    out.status.assign(n1 * n2, "ok");

    auto eval_cell = [&](std::size_t i, std::size_t j) {
        const std::size_t idx = i * n2 + j;
        try {
            NetworkConfig c = apply_parameter(cfg, axis1.parameter, axis1.grid[i]);
            c = apply_parameter(c, axis2.parameter, axis2.grid[j]);
            switch (objective) {
                case SurfaceObjective::p_u: out.values[idx] = uav_coverage(c); break;
                case SurfaceObjective::p_cov: out.values[idx] = multicell_coverage(c).p_cov; break;
                case SurfaceObjective::V_u:
                    out.values[idx] = volume_spectral_efficiency(c).value;
                    break;
            }
        } catch (const std::exception& e) {
            out.status[idx] = e.what();
        }
    };

    unsigned nt = threads > 0 ? static_cast<unsigned>(threads)
                              : std::max(1u, std::thread::hardware_concurrency());
    nt = std::min<unsigned>(nt, static_cast<unsigned>(n1 * n2));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t idx = t; idx < n1 * n2; idx += nt) eval_cell(idx / n2, idx % n2);
        });
    for (auto& th : pool) th.join();

    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            if (out.status[i * n2 + j] == "ok" && out.at(i, j) > out.max_value) {
                out.max_value = out.at(i, j);
                out.argmax_i = i;
                out.argmax_j = j;
            }
    return out;
}

}  // namespace aerocov
