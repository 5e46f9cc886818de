#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "aerocov/coverage.hpp"
#include "aerocov/montecarlo.hpp"
#include "aerocov/vse.hpp"

using namespace aerocov;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using std::numbers::pi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

NetworkConfig table_cfg(double lambda_u = 6e-5, double h_o = 40.0, double nu = 0.0) {
    NetworkConfig cfg;
    cfg.lambda_g = 1e-6;
    cfg.lambda_u = lambda_u;
    cfg.ground.tx_power = 25.0;
    cfg.ground.alpha = 4.0;
    cfg.ground.psi_los = db_to_linear(37.2);
    cfg.ground.psi_nlos = db_to_linear(38.7);
    cfg.ground.n_antennas = 16;
    cfg.uav.tx_power = 2.0;
    cfg.uav.alpha = 2.5;
    cfg.uav.psi_los = db_to_linear(61.4);
    cfg.uav.psi_nlos = db_to_linear(100.0);  // Monte Carlo default: finite
    cfg.uav.n_antennas = 8;
    cfg.placement = UavPlacement{h_o, nu, 200.0};
    cfg.beta = 1.0;
    return cfg;
}

}  // namespace

TEST_CASE("PPP disc sampling") {
    std::mt19937_64 rng(123);
    SECTION("count statistics") {
        const double lam = 1e-4, radius = 1000.0;
        const double want = lam * pi * radius * radius;  // ~314.16
        double total = 0.0;
        const int draws = 10000;
        for (int i = 0; i < draws; ++i) total += sample_ppp_disc(lam, radius, rng).size();
        const double mean = total / draws;
        CHECK_THAT(mean, WithinAbs(want, 3.0 * std::sqrt(want / draws)));
    }
    SECTION("zero intensity gives an empty set") {
        CHECK(sample_ppp_disc(0.0, 500.0, rng).empty());
    }
    SECTION("points land inside the disc") {
        const auto pts = sample_ppp_disc(1e-4, 800.0, rng);
        for (const auto& p : pts) CHECK(std::hypot(p[0], p[1]) <= 800.0 + 1e-9);
    }
    SECTION("identical seed reproduces the point set") {
        std::mt19937_64 r1(77), r2(77);
        const auto a = sample_ppp_disc(5e-5, 1200.0, r1);
        const auto b = sample_ppp_disc(5e-5, 1200.0, r2);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i][0] == b[i][0]);
            CHECK(a[i][1] == b[i][1]);
        }
    }
}

TEST_CASE("network realization marks") {
    const NetworkConfig cfg = table_cfg();
    std::mt19937_64 rng(5);
    SECTION("height law holds exactly") {
        const Realization real = realize_network(cfg, 3000.0, rng);
        for (const auto& u : real.uavs) CHECK(u.height == cfg.placement.h_o);
        NetworkConfig angled = cfg;
        angled.placement.nu = -1.0;
        angled.placement.h_o = 0.7;
        const Realization real2 = realize_network(angled, 3000.0, rng);
        for (const auto& u : real2.uavs) {
            const double d = std::max(std::hypot(u.x, u.y), 1e-9);
            CHECK_THAT(u.height / d, WithinRel(0.7, 1e-9));
        }
    }
    SECTION("LoS fraction near the 45-degree ring matches the sigmoid") {
        NetworkConfig c45 = table_cfg(3e-4, 100.0, 0.0);
        long los = 0, total = 0;
        for (int rep = 0; rep < 400; ++rep) {
            const Realization real = realize_network(c45, 400.0, rng);
            for (const auto& u : real.uavs) {
                const double d = std::hypot(u.x, u.y);
                if (std::abs(d - c45.placement.h_o) < 15.0) {
                    ++total;
                    if (u.los) ++los;
                }
            }
        }
        REQUIRE(total > 2000);
        const double frac = static_cast<double>(los) / total;
        const double want = los_probability(c45.env, 1.0);  // ~0.9999 at 45 deg
        CHECK_THAT(frac, WithinAbs(want, 3.0 / std::sqrt(static_cast<double>(total)) + 0.01));
    }
    SECTION("serving fading draws average to the unit-mean beamforming gain") {
        double sum = 0.0;
        long n = 0;
        for (int rep = 0; rep < 3000; ++rep) {
            const Realization real = realize_network(cfg, 1500.0, rng);
            if (real.serving_uav) {
                sum += real.uavs[*real.serving_uav].fading;
                ++n;
            }
        }
        REQUIRE(n > 2000);
        CHECK_THAT(sum / n, WithinAbs(1.0, 0.03));
    }
}

TEST_CASE("association picks the minimum path loss per tier") {
    NetworkConfig cfg = table_cfg();
    cfg.uav.psi_nlos = kInf;
    Realization real;
    SECTION("single LoS UAV serves") {
        real.uavs = {{100.0, 0.0, 40.0, true, false, 1.0}};
        const auto [u, g] = associate(real, cfg);
        REQUIRE(u.has_value());
        CHECK(*u == 0);
        CHECK_FALSE(g.has_value());
    }
    SECTION("undetectable NLoS UAV never serves, regardless of distance") {
        real.uavs = {{50.0, 0.0, 40.0, false, false, 1.0},
                     {300.0, 0.0, 40.0, true, false, 1.0}};
        const auto [u, g] = associate(real, cfg);
        REQUIRE(u.has_value());
        CHECK(*u == 1);
    }
    SECTION("equal intercepts: nearer ground BS serves") {
        real.ground_bs = {{20.0, 0.0, cfg.ground.psi_los, 1.0},
                          {10.0, 0.0, cfg.ground.psi_los, 1.0}};
        const auto [u, g] = associate(real, cfg);
        REQUIRE(g.has_value());
        CHECK(*g == 1);
    }
    SECTION("empty candidate sets yield no server") {
        const auto [u, g] = associate(real, cfg);
        CHECK_FALSE(u.has_value());
        CHECK_FALSE(g.has_value());
    }
}

TEST_CASE("SINR sampling reproduces hand-computed cases") {
    NetworkConfig cfg = table_cfg();
    cfg.uav.psi_nlos = kInf;
    SECTION("lone UAV with no noise hits the infinity sentinel") {
        Realization real;
        real.uavs = {{100.0, 0.0, 40.0, true, false, 0.7}};
        associate(real, cfg);
        const auto [gu, gg] = sample_sinrs(real, cfg);
        REQUIRE(gu.has_value());
        CHECK(std::isinf(*gu));
    }
    SECTION("two-UAV ratio with matched intercepts") {
        // gamma_u = (g * d'^a) / (g' * d^a) at sigma = 0, delta_m lobe.
        Realization real;
        real.uavs = {{30.0, 0.0, 40.0, true, false, 0.0},
                     {0.0, 90.0, 40.0, true, true, 0.8}};
        associate(real, cfg);
        REQUIRE(real.serving_uav.has_value());
        REQUIRE(*real.serving_uav == 0);
        real.uavs[0].fading = 1.3;
        const auto [gu, gg] = sample_sinrs(real, cfg);
        const double d2s = 30.0 * 30.0 + 40.0 * 40.0;
        const double d2i = 90.0 * 90.0 + 40.0 * 40.0;
        const double want = (1.3 * std::pow(d2i, 1.25)) / (0.8 * std::pow(d2s, 1.25));
        REQUIRE(gu.has_value());
        CHECK_THAT(*gu, WithinRel(want, 1e-12));
    }
    SECTION("ground SIR with one interferer") {
        Realization real;
        real.ground_bs = {{100.0, 0.0, cfg.ground.psi_los, 0.0},
                          {0.0, 400.0, cfg.ground.psi_nlos, 0.9}};
        associate(real, cfg);
        REQUIRE(real.serving_gbs.has_value());
        REQUIRE(*real.serving_gbs == 0);
        real.ground_bs[0].fading = 1.1;
        const auto [gu, gg] = sample_sinrs(real, cfg);
        const double pls = cfg.ground.psi_los * std::pow(100.0 * 100.0, 2.0);
        const double pli = cfg.ground.psi_nlos * std::pow(400.0 * 400.0, 2.0);
        const double want = (1.1 / pls) / (0.9 / pli);
        CHECK_THAT(gg, WithinRel(want, 1e-12));
    }
}

TEST_CASE("coverage estimation basics") {
    const NetworkConfig cfg = table_cfg();
    CHECK_THROWS_AS(estimate_coverage(cfg, 50, 0.0, 1), std::domain_error);

    SECTION("determinism across repeated calls and thread counts") {
        McOptions one;
        one.threads = 1;
        McOptions two;
        two.threads = 2;
        const CoverageEstimates a = estimate_coverage(cfg, 2000, 0.0, 42, one);
        const CoverageEstimates b = estimate_coverage(cfg, 2000, 0.0, 42, one);
        const CoverageEstimates c = estimate_coverage(cfg, 2000, 0.0, 42, two);
        CHECK(a.p_u.mean == b.p_u.mean);
        CHECK(a.p_cov.mean == b.p_cov.mean);
        CHECK(a.p_u.mean == c.p_u.mean);
        CHECK(a.p_g.half_width_95 == c.p_g.half_width_95);
    }
    SECTION("a vanishing threshold covers every trial") {
        NetworkConfig easy = cfg;
        easy.beta = 1e-12;
        const CoverageEstimates e = estimate_coverage(easy, 500, 0.0, 7);
        CHECK(e.p_u.mean == 1.0);
        CHECK(e.p_g.mean == 1.0);
        CHECK(e.p_cov.mean == 1.0);
    }
}

TEST_CASE("estimates agree with the analytic oracle") {
    McOptions opts;
    opts.threads = 2;
    SECTION("single-antenna ground tier against the closed form") {
        NetworkConfig cfg = table_cfg();
        cfg.ground.n_antennas = 1;
        const CoverageEstimates e = estimate_coverage(cfg, 30000, 0.0, 11, opts);
        const double want = 1.0 / (1.0 + pi / 4.0);
        CHECK_THAT(e.p_g.mean, WithinAbs(want, std::max(0.01, 3.0 * e.p_g.half_width_95)));
    }
    SECTION("UAV coverage near the height-control optimum") {
        const NetworkConfig cfg = table_cfg(5e-5, 15.0, 0.0);
        const CoverageEstimates e = estimate_coverage(cfg, 20000, 0.0, 13, opts);
        CHECK_THAT(e.p_u.mean, WithinAbs(uav_coverage(analytic_view(cfg)), 0.02));
    }
    SECTION("joint coverage factorizes within its confidence band") {
        const NetworkConfig cfg = table_cfg(5e-5, 15.0, 0.0);
        const CoverageEstimates e = estimate_coverage(cfg, 20000, 0.0, 17, opts);
        const double combined = 3.0 * (e.p_cov.half_width_95 +
                                       e.p_u.half_width_95 + e.p_g.half_width_95);
        CHECK_THAT(e.p_cov.mean, WithinAbs(e.p_u.mean * e.p_g.mean, combined));
    }
    SECTION("ground estimate is invariant to the ground intensity") {
        NetworkConfig a = table_cfg();
        NetworkConfig b = table_cfg();
        b.lambda_g *= 10.0;
        const CoverageEstimates ea = estimate_coverage(a, 20000, 0.0, 19, opts);
        const CoverageEstimates eb = estimate_coverage(b, 20000, 0.0, 23, opts);
        CHECK_THAT(ea.p_g.mean, WithinAbs(eb.p_g.mean,
                                          3.0 * (ea.p_g.half_width_95 + eb.p_g.half_width_95)));
    }
    SECTION("doubling the simulation radius moves estimates less than their bands") {
        const NetworkConfig cfg = table_cfg(5e-5, 15.0, 0.0);
        const auto [ru, rg] = default_radii(cfg);
        McOptions big = opts;
        big.radius_uav = 2.0 * ru;
        big.radius_ground = 2.0 * rg;
        const CoverageEstimates e1 = estimate_coverage(cfg, 20000, 0.0, 29, opts);
        const CoverageEstimates e2 = estimate_coverage(cfg, 20000, 0.0, 29, big);
        CHECK(std::abs(e1.p_u.mean - e2.p_u.mean) <=
              e1.p_u.half_width_95 + e2.p_u.half_width_95);
        CHECK(std::abs(e1.p_g.mean - e2.p_g.mean) <=
              e1.p_g.half_width_95 + e2.p_g.half_width_95);
    }
    SECTION("deterministic serving gain estimates the massive-array limit") {
        const NetworkConfig cfg = table_cfg(5e-5, 40.0, 0.0);
        McOptions det = opts;
        det.deterministic_serving_gain = true;
        const CoverageEstimates e = estimate_coverage(cfg, 20000, 0.0, 31, det);
        CHECK_THAT(e.p_u.mean, WithinAbs(uav_coverage_limit(analytic_view(cfg)), 0.02));
        CHECK_THAT(e.p_g.mean, WithinAbs(ground_coverage_limit(cfg), 0.02));
    }
}

TEST_CASE("rate estimation") {
    McOptions opts;
    opts.threads = 2;
    SECTION("tiny intensity gives vanishing throughput") {
        // The automatic radius keeps ~100 points per trial at any intensity,
        // so the per-trial rate stays order one; the intensity prefactor
        // drives the efficiency itself to zero.
        const Estimate e = estimate_vse(table_cfg(1e-14, 40.0, 0.0), 500, 0.0, 3, opts);
        CHECK(e.mean >= 0.0);
        CHECK(e.mean < 1e-12);
    }
    SECTION("fixed-elevation linearity in the intensity") {
        const NetworkConfig cfg = table_cfg(6e-5, 1.0, -1.0);
        NetworkConfig twice = cfg;
        twice.lambda_u *= 2.0;
        const Estimate e1 = estimate_vse(cfg, 20000, 0.0, 37, opts);
        const Estimate e2 = estimate_vse(twice, 20000, 0.0, 41, opts);
        CHECK_THAT(e2.mean, WithinAbs(2.0 * e1.mean,
                                      3.0 * (e2.half_width_95 + 2.0 * e1.half_width_95)));
    }
    SECTION("matches the analytic efficiency within ten percent") {
        const NetworkConfig cfg = table_cfg(6e-5, 9.5, 0.0);
        const Estimate e = estimate_vse(cfg, 20000, 0.0, 43, opts);
        const double want = volume_spectral_efficiency(analytic_view(cfg)).value;
        CHECK_THAT(e.mean, WithinRel(want, 0.10));
    }
    SECTION("confidence interval formula") {
        const Estimate e = estimate_vse(table_cfg(), 1000, 0.0, 47, opts);
        CHECK(e.trials == 1000);
        CHECK(e.half_width_95 >= 0.0);
    }
}
