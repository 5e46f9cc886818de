#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace aerocov {

struct QuadratureSettings {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
};

struct ContourSettings {
    double radius = 0.0;  // 0 means 0.4 * |point|
    int nodes = 64;       // trapezoid points on the circle (even)
    double rel_tol = 1e-9;
};

struct LaplaceSettings {
    int nodes = 32;  // Talbot nodes; doubled once for the error estimate
    double rel_tol = 1e-6;
    double abs_tol = 1e-12;
};

/// Thrown when an iterative kernel cannot reach the requested tolerance.
/// Carries the best estimate (its magnitude for complex results) and the
/// residual error bound.
class convergence_error : public std::runtime_error {
  public:
    convergence_error(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what + " (best estimate " + std::to_string(estimate) +
                             ", error bound " + std::to_string(error_bound) + ")"),
          estimate_(estimate),
          error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

  private:
    double estimate_;
    double error_bound_;
};

namespace quad_detail {

// Gauss-Kronrod 7-15 abscissae/weights (positive half, last entry is the center).
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
double norm_of(const T& v) {
    using std::abs;
    return static_cast<double>(abs(v));
}

template <class T>
struct Cell {
    double a, b;
    T integral;
    double err;
};

// One Gauss-Kronrod 7-15 step on [a, b] with a QUADPACK-style damped error.
template <class F, class T>
Cell<T> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kGk15Nodes[i]);
        fv[14 - i] = f(c + h * kGk15Nodes[i]);
    }
    fv[7] = f(c);

    T kron = kGk15Weights[7] * fv[7];
    for (int i = 0; i < 7; ++i) kron += kGk15Weights[i] * (fv[i] + fv[14 - i]);
    T gauss = kG7Weights[3] * fv[7];
    for (int i = 0; i < 3; ++i) gauss += kG7Weights[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);

    kron = kron * h;
    gauss = gauss * h;

    double resabs = 0.0;
    for (int i = 0; i < 7; ++i)
        resabs += kGk15Weights[i] * (norm_of(fv[i]) + norm_of(fv[14 - i]));
    resabs += kGk15Weights[7] * norm_of(fv[7]);
    resabs *= std::abs(h);

    const T mean = kron * (0.5 / h);  // kron / (b - a)
    double resasc = kGk15Weights[7] * norm_of(fv[7] - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kGk15Weights[i] * (norm_of(fv[i] - mean) + norm_of(fv[14 - i] - mean));
    resasc *= std::abs(h);

    double err = norm_of(kron - gauss);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps50 = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    err = std::max(err, eps50);
    return {a, b, kron, err};
}

template <class F>
auto adaptive(F&& f, double a, double b, const QuadratureSettings& s, const char* what) {
    using T = std::decay_t<std::invoke_result_t<F&, double>>;
    if (!(a <= b)) throw std::invalid_argument(std::string(what) + ": lower bound exceeds upper bound");
    if (a == b) return T{};
    std::vector<Cell<T>> cells;
    cells.reserve(64);
    cells.push_back(gk15<F, T>(f, a, b));
    while (true) {
        T total = T{};
        double err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            total += cells[i].integral;
            err += cells[i].err;
            if (cells[i].err > cells[worst].err) worst = i;
        }
        if (err <= std::max(s.abs_tol, s.rel_tol * norm_of(total))) return total;
        if (static_cast<int>(cells.size()) >= s.max_subdivisions)
            throw convergence_error(std::string(what) + ": subdivision budget exhausted",
                                    norm_of(total), err);
        const Cell<T> cell = cells[worst];
        const double mid = 0.5 * (cell.a + cell.b);
        if (!(mid > cell.a && mid < cell.b))
            throw convergence_error(std::string(what) + ": interval collapsed below resolution",
                                    norm_of(total), err);
        cells[worst] = gk15<F, T>(f, cell.a, mid);
        cells.push_back(gk15<F, T>(f, mid, cell.b));
    }
}

}  // namespace quad_detail

/// Integrates f over [a, b] with adaptive Gauss-Kronrod refinement. Nodes are
/// interior, so integrable endpoint singularities are tolerated. Works for
/// real- or complex-valued integrands.
template <class F>
auto integrate_finite(F&& f, double a, double b, const QuadratureSettings& settings = {}) {
    if (a > b) throw std::invalid_argument("integrate_finite: a > b");
    return quad_detail::adaptive(std::forward<F>(f), a, b, settings, "integrate_finite");
}

/// Integrates f over [a, inf) via the compactifying substitution
/// t = a + u/(1-u), u in [0,1). Non-integrable tails surface as a
/// convergence_error.
template <class F>
auto integrate_semi_infinite(F&& f, double a, const QuadratureSettings& settings = {}) {
    using T = std::decay_t<std::invoke_result_t<F&, double>>;
    auto g = [&f, a](double u) -> T {
        const double omu = 1.0 - u;
        if (omu <= 0.0) return T{};
        const double t = a + u / omu;
        if (!std::isfinite(t)) return T{};
        return f(t) / (omu * omu);
    };
    return quad_detail::adaptive(g, 0.0, 1.0, settings, "integrate_semi_infinite");
}

/// order-th derivative of f at a real point via the Cauchy integral formula on
/// a circle, trapezoid rule. f must be analytic on the closed disc and
/// real-valued on the real axis (conjugate symmetry is exploited). The node
/// count is doubled once; disagreement beyond tolerance raises
/// convergence_error.
inline double cauchy_derivative(const std::function<std::complex<double>(std::complex<double>)>& f,
                                int order, double point, ContourSettings settings = {}) {
    if (order < 0) throw std::invalid_argument("cauchy_derivative: negative order");
    if (order == 0) return f(std::complex<double>(point, 0.0)).real();
    double radius = settings.radius;
    if (radius <= 0.0) radius = 0.4 * std::abs(point);
    if (radius <= 0.0)
        throw std::invalid_argument("cauchy_derivative: radius must be positive (point at origin)");
    int m = std::max(4, settings.nodes);
    if (m % 2) ++m;
    const int m2 = 2 * m;

    std::vector<std::complex<double>> vals(static_cast<std::size_t>(m2));
    const double dtheta = 2.0 * std::acos(-1.0) / m2;
    double famp = 0.0;
    for (int j = 0; j <= m2 / 2; ++j) {
        const double th = dtheta * j;
        vals[static_cast<std::size_t>(j)] =
            f(point + std::polar(radius, th));
        famp = std::max(famp, std::abs(vals[static_cast<std::size_t>(j)]));
    }
    for (int j = m2 / 2 + 1; j < m2; ++j)
        vals[static_cast<std::size_t>(j)] = std::conj(vals[static_cast<std::size_t>(m2 - j)]);

    auto coeff = [&](int count) {
        std::complex<double> acc(0.0, 0.0);
        const int stride = m2 / count;
        for (int j = 0; j < count; ++j) {
            const double th = dtheta * stride * j;
            acc += vals[static_cast<std::size_t>(j * stride)] *
                   std::polar(1.0, -order * th);
        }
        return acc / static_cast<double>(count);
    };

    double fact = 1.0;
    for (int k = 2; k <= order; ++k) fact *= k;
    const double scale = fact / std::pow(radius, order);
    const double coarse = coeff(m).real() * scale;
    const double fine = coeff(m2).real() * scale;

    const double noise_floor = 1e3 * std::numeric_limits<double>::epsilon() * famp * scale;
    const double diff = std::abs(fine - coarse);
    if (diff > std::max(settings.rel_tol * std::abs(fine), noise_floor))
        throw convergence_error("cauchy_derivative: node doubling disagreement", fine, diff);
    return fine;
}

/// Inverse Laplace transform at t > 0 via the fixed Talbot deformed contour.
/// Evaluated at `nodes` and 2x`nodes` points; disagreement beyond tolerance
/// raises convergence_error.
inline double inverse_laplace(const std::function<std::complex<double>(std::complex<double>)>& F,
                              double t, LaplaceSettings settings = {}) {
    if (!(t > 0.0)) throw std::invalid_argument("inverse_laplace: t must be positive");
    // The exp(r t) scaling of the contour amplifies roundoff as the node
    // count grows, so the base evaluation is returned and the doubled one
    // serves only as the error probe; `mag` tracks the summand magnitudes to
    // give the comparison its intrinsic roundoff floor.
    auto talbot = [&](int m, double& mag) {
        const double pi = std::acos(-1.0);
        const double r = 2.0 * m / (5.0 * t);
        const double head = std::exp(r * t) * F(std::complex<double>(r, 0.0)).real();
        double total = 0.5 * head;
        mag = 0.5 * std::abs(head);
        for (int k = 1; k < m; ++k) {
            const double th = k * pi / m;
            const double cot = std::cos(th) / std::sin(th);
            const std::complex<double> s(r * th * cot, r * th);
            const double sigma = th + (th * cot - 1.0) * cot;
            const std::complex<double> term =
                std::exp(s * t) * F(s) * std::complex<double>(1.0, sigma);
            total += term.real();
            mag += std::abs(term);
        }
        mag *= r / m;
        return total * r / m;
    };
    const int m = std::max(8, settings.nodes);
    double mag1 = 0.0, mag2 = 0.0;
    const double v1 = talbot(m, mag1);
    const double v2 = talbot(2 * m, mag2);
    if (!std::isfinite(v1) || !std::isfinite(v2))
        throw convergence_error(
            "inverse_laplace: transform not evaluable on the deformed contour", 0.0,
            std::numeric_limits<double>::infinity());
    const double diff = std::abs(v2 - v1);
    const double floor =
        100.0 * std::numeric_limits<double>::epsilon() * std::max(mag1, mag2);
    if (diff > std::max({settings.abs_tol, settings.rel_tol * std::abs(v1), floor}))
        throw convergence_error("inverse_laplace: node doubling disagreement", v1, diff);
    return v1;
}

/// Inverse Laplace transform at t > 0 through Euler summation of the
/// Bromwich series on the vertical line Re s = a/(2t). Slower convergence
/// than the deformed contour but touches only the open right half-plane, so
/// it applies to transforms whose continuation left of the axis is
/// unavailable or unbounded. `terms` is the averaging order; the tail
/// parameter a sets the aliasing error floor e^-a.
inline double bromwich_euler_inverse(
    const std::function<std::complex<double>(std::complex<double>)>& F, double t,
    int terms = 22, double a = 18.4, double rel_tol = 1e-4) {
    if (!(t > 0.0)) throw std::invalid_argument("bromwich_euler_inverse: t must be positive");
    const int m = std::max(8, terms);
    const double pi = std::acos(-1.0);
    const int total = 2 * m + 6;
    std::vector<double> partial(static_cast<std::size_t>(total) + 1);
    double acc = 0.5 * F(std::complex<double>(a / (2.0 * t), 0.0)).real();
    partial[0] = acc;
    for (int k = 1; k <= total; ++k) {
        const std::complex<double> s(a / (2.0 * t), k * pi / t);
        const double b = (k % 2 ? -1.0 : 1.0) * F(s).real();
        acc += b;
        partial[static_cast<std::size_t>(k)] = acc;
    }
    auto averaged = [&](int order) {
        double sum = 0.0;
        double binom = 1.0;  // C(order, j)
        for (int j = 0; j <= order; ++j) {
            sum += binom * partial[static_cast<std::size_t>(order + j)];
            binom *= static_cast<double>(order - j) / (j + 1);
        }
        return std::exp(a / 2.0) / t * std::ldexp(sum, -order);
    };
    const double v1 = averaged(m - 3);
    const double v2 = averaged(m);
    if (!std::isfinite(v1) || !std::isfinite(v2))
        throw convergence_error("bromwich_euler_inverse: transform not evaluable", 0.0,
                                std::numeric_limits<double>::infinity());
    const double diff = std::abs(v2 - v1);
    const double floor = std::exp(-a) * std::max(1.0, std::abs(v2)) + 1e-13;
    if (diff > std::max(rel_tol * std::abs(v2), 10.0 * floor))
        throw convergence_error("bromwich_euler_inverse: averaging disagreement", v2, diff);
    return v2;
}

/// Monotone interpolant of z -> int_0^z f for f >= 0, built on a uniform grid.
/// Inside a cell a cubic Hermite with Fritsch-Carlson-clamped tangents is
/// used; beyond grid_max the last integrand value extrapolates linearly.
class CumulativeInterpolant {
  public:
    CumulativeInterpolant() = default;

    CumulativeInterpolant(const std::function<double(double)>& f, double grid_max,
                          int grid_points) {
        if (grid_points < 2)
            throw std::invalid_argument("cumulative_interpolant: need at least 2 grid points");
        if (!(grid_max > 0.0))
            throw std::invalid_argument("cumulative_interpolant: grid_max must be positive");
        n_ = grid_points;
        h_ = grid_max / (grid_points - 1);
        fvals_.resize(static_cast<std::size_t>(n_));
        cum_.resize(static_cast<std::size_t>(n_));
        tang_.resize(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) fvals_[static_cast<std::size_t>(i)] = f(i * h_);
        cum_[0] = 0.0;
        for (int i = 0; i + 1 < n_; ++i) {
            const double a = i * h_, c = a + 0.5 * h_, hh = 0.5 * h_;
            double cell = quad_detail::kG7Weights[3] * f(c);
            for (int k = 0; k < 3; ++k) {
                const double x = quad_detail::kGk15Nodes[2 * k + 1] * hh;
                cell += quad_detail::kG7Weights[k] * (f(c - x) + f(c + x));
            }
            cum_[static_cast<std::size_t>(i) + 1] = cum_[static_cast<std::size_t>(i)] + cell * hh;
        }
        // Fritsch-Carlson clamp keeps each Hermite cell monotone.
        for (int i = 0; i < n_; ++i) tang_[static_cast<std::size_t>(i)] = std::max(0.0, fvals_[static_cast<std::size_t>(i)]);
        for (int i = 0; i + 1 < n_; ++i) {
            const double d = (cum_[static_cast<std::size_t>(i) + 1] - cum_[static_cast<std::size_t>(i)]) / h_;
            auto& m0 = tang_[static_cast<std::size_t>(i)];
            auto& m1 = tang_[static_cast<std::size_t>(i) + 1];
            if (d <= 0.0) {
                m0 = 0.0;
                m1 = 0.0;
                continue;
            }
            const double alpha = m0 / d, beta = m1 / d;
            const double s2 = alpha * alpha + beta * beta;
            if (s2 > 9.0) {
                const double tau = 3.0 / std::sqrt(s2);
                m0 = tau * alpha * d;
                m1 = tau * beta * d;
            }
        }
    }

    double operator()(double z) const {
        if (z < 0.0) throw std::invalid_argument("cumulative interpolant: negative argument");
        if (z >= grid_max()) return cum_.back() + fvals_.back() * (z - grid_max());
        const int i = std::min(n_ - 2, static_cast<int>(z / h_));
        const double t = (z - i * h_) / h_;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        return h00 * cum_[static_cast<std::size_t>(i)] + h10 * h_ * tang_[static_cast<std::size_t>(i)] +
               h01 * cum_[static_cast<std::size_t>(i) + 1] + h11 * h_ * tang_[static_cast<std::size_t>(i) + 1];
    }

    /// Inverse map: smallest z with value(z) = target (monotone bisection).
    double solve(double target) const {
        if (target <= 0.0) return 0.0;
        if (target >= cum_.back()) {
            if (fvals_.back() <= 0.0)
                throw std::domain_error("cumulative interpolant: cannot invert beyond a flat tail");
            return grid_max() + (target - cum_.back()) / fvals_.back();
        }
        const auto it = std::lower_bound(cum_.begin(), cum_.end(), target);
        int i = static_cast<int>(it - cum_.begin());
        if (i > 0) --i;
        double lo = i * h_, hi = lo + h_;
        for (int k = 0; k < 60; ++k) {
            const double mid = 0.5 * (lo + hi);
            if ((*this)(mid) < target)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    double grid_max() const { return (n_ - 1) * h_; }
    double total() const { return cum_.back(); }
    double tail_slope() const { return fvals_.back(); }

  private:
    int n_ = 0;
    double h_ = 0.0;
    std::vector<double> fvals_, cum_, tang_;
};

inline CumulativeInterpolant cumulative_interpolant(const std::function<double(double)>& f,
                                                    double grid_max, int grid_points) {
    return CumulativeInterpolant(f, grid_max, grid_points);
}

}  // namespace aerocov
