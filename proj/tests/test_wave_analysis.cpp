#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "crimewave/kinetics.hpp"
#include "crimewave/pde_solver.hpp"
#include "crimewave/rootfind.hpp"
#include "crimewave/steady_state.hpp"
#include "crimewave/wave_analysis.hpp"

using namespace crimewave;

namespace {
const KineticsParams kP = KineticsParams::normalized(3.0, 0.2);
const double kA = classify(kP).a;

FieldState step_profile(double jump_x, double dx = 0.1) {
    SolverConfig cfg;
    cfg.dx = dx;
    cfg.x_min = -10.0;
    cfg.x_max = 10.0;
    Grid g = Grid::from_config(cfg);
    FieldState st{g, std::vector<double>(g.n), std::vector<double>(g.n, 0.0), 0.0};
    for (int i = 0; i < g.n; ++i) st.s[i] = g.x(i) < jump_x ? 1.0 : 0.0;
    return st;
}
}  // namespace

TEST_CASE("front position on constructed profiles") {
    FieldState st = step_profile(3.0);
    auto fx = front_position(st, 0.5);
    REQUIRE(fx.has_value());
    CHECK(std::abs(*fx - 3.0) <= 0.1 + 1e-12);

    FieldState flat = step_profile(-100.0);
    for (auto& v : flat.s) v = 0.0;
    CHECK_FALSE(front_position(flat, 0.5).has_value());

    FieldState shifted = step_profile(5.0);
    auto fx2 = front_position(shifted, 0.5);
    REQUIRE(fx2.has_value());
    CHECK(std::abs((*fx2 - *fx) - 2.0) <= 0.1 + 1e-12);
    CHECK_THROWS_AS(front_position(st, 1.5), std::invalid_argument);
}

TEST_CASE("speed estimation on exact data") {
    std::vector<double> ts, xs;
    for (int i = 0; i < 40; ++i) {
        ts.push_back(0.5 * i);
        xs.push_back(3.0);
    }
    auto fit0 = estimate_speed(ts, xs, 0.0, 20.0);
    CHECK(fit0.c == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(fit0.residual == doctest::Approx(0.0).epsilon(1e-14));

    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = 3.0 + 0.7 * ts[i];
    auto fit = estimate_speed(ts, xs, 0.0, 20.0);
    CHECK(fit.c == doctest::Approx(0.7).epsilon(1e-12));

    CHECK_THROWS_AS(estimate_speed(ts, xs, 0.0, 2.0), std::invalid_argument);   // < 10 samples
    CHECK_THROWS_AS(estimate_speed(ts, xs, 5.0, 5.0), std::invalid_argument);   // empty window
}

TEST_CASE("decay rates: closed forms and the rate ordering") {
    auto dr1 = decay_rates(1.0, kP);
    CHECK(dr1.lambda == doctest::Approx(0.5 * (1.0 + std::sqrt(5.0))).epsilon(1e-12));

    auto dr2 = decay_rates(2.0, kP);  // roots sorted ascending
    CHECK(dr2.roots_zero[0] == doctest::Approx(-1.0 - std::sqrt(2.0)).epsilon(1e-12));
    CHECK(dr2.roots_zero[1] == doctest::Approx(-1.0 + std::sqrt(2.0)).epsilon(1e-12));
    CHECK(dr2.roots_zero[2] == doctest::Approx(0.5).epsilon(1e-12));

    for (auto [beta, sb] : {std::pair{2.0, 0.15}, {3.0, 0.2}, {5.0, 0.25}}) {
        auto p = KineticsParams::normalized(beta, sb);
        for (double c : {0.1, 0.3, 0.5, 1.0, 2.0}) {
            auto dr = decay_rates(c, p);
            CHECK(dr.lambda > dr.mu);
            CHECK(dr.mu > 0.0);
            const double k = p.alpha * g_shifted_prime(1.0, p) / c;
            for (double r : dr.roots_hotspot) {
                const double q = (r - 1.0 / c) * (r * r + c * r - 1.0) - k;
                CHECK(std::abs(q) < 1e-10);
            }
        }
    }
    CHECK_THROWS_AS(decay_rates(0.0, kP), std::invalid_argument);
    CHECK_THROWS_AS(decay_rates(-1.0, kP), std::invalid_argument);
}

TEST_CASE("scalar shooting speed against the regression oracle") {
    // oracle values from an independent shooting implementation
    CHECK(scalar_wave_speed(kP) == doctest::Approx(0.24851461).epsilon(2e-4));
    CHECK(scalar_wave_speed(KineticsParams::normalized(2.0, 0.15)) ==
          doctest::Approx(0.24496232).epsilon(2e-4));
    CHECK(scalar_wave_speed(KineticsParams::normalized(5.0, 0.25)) ==
          doctest::Approx(0.32113339).epsilon(2e-4));
}

TEST_CASE("scalar speed sign tracks the potential at 1") {
    CHECK(scalar_wave_speed(KineticsParams::normalized(3.0, 0.22)) > 0.0);
    // s_b at the sign boundary of F(1): speed nearly zero
    double sb_zero = bisect_root(
        [](double sb) { return potential_F(1.0, KineticsParams::normalized(3.0, sb)); }, 0.2,
        0.28, 1e-12);
    auto p0 = KineticsParams::normalized(3.0, sb_zero);
    CHECK(std::abs(scalar_wave_speed(p0)) < 2e-3);
}

TEST_CASE("tail exponent fit recovers a synthetic rate") {
    SolverConfig cfg;
    cfg.dx = 0.01;
    cfg.x_min = -5.0;
    cfg.x_max = 30.0;
    Grid g = Grid::from_config(cfg);
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = std::exp(-1.3 * (g.x(i) - 5.0));
    auto rate = fit_tail_exponent(g, v, 5.0);
    REQUIRE(rate.has_value());
    CHECK(*rate == doctest::Approx(1.3).epsilon(1e-6));
    CHECK_FALSE(fit_tail_exponent(g, std::vector<double>(g.n, 0.5), 0.0).has_value());
}

TEST_CASE("gapless wave: stabilized moving-frame profile and measured tails") {
    SolverConfig cfg;
    cfg.dx = 0.01;
    cfg.x_min = -30.0;
    cfg.x_max = 45.0;
    cfg.t_end = 120.0;
    FieldState init = make_front_initial(cfg, kP, -10.0, kA, GapLayout::none());
    ProbeConfig pc;
    pc.level = kA;
    pc.sample_dt = 0.25;
    pc.snapshot_dt = 30.0;
    Trajectory traj = simulate(init, cfg, kP, GapLayout::none(), pc);
    FrontDiagnostics diag = diagnose(traj, kP, GapLayout::none());

    CHECK(diag.speed > 0.0);
    CHECK(diag.residual < 1e-3);

    // measured tail rates against the moving-frame eigenvalues
    auto dr = decay_rates(diag.speed, kP);
    REQUIRE(diag.lambda_fit.has_value());
    CHECK(*diag.lambda_fit == doctest::Approx(dr.lambda).epsilon(0.05));
    REQUIRE(diag.mu_fit.has_value());
    CHECK(*diag.mu_fit == doctest::Approx(dr.mu).epsilon(0.15));

    // profiles recentered at the front agree after the transient
    const auto& sn1 = traj.snapshots[traj.snapshots.size() - 2];
    const auto& sn2 = traj.snapshots.back();
    const Grid& g = traj.final_state.grid;
    auto f1 = rightmost_crossing(g, sn1.s, kA, g.x_min);
    auto f2 = rightmost_crossing(g, sn2.s, kA, g.x_min);
    REQUIRE(f1.has_value());
    REQUIRE(f2.has_value());
    auto lerp = [&](const std::vector<double>& v, double x) {
        double r = (x - g.x_min) / g.dx;
        int i = std::clamp(static_cast<int>(std::floor(r)), 0, g.n - 2);
        double w = r - i;
        return (1.0 - w) * v[i] + w * v[i + 1];
    };
    double sup = 0.0;
    int decreasing_violations = 0;
    double prev = 2.0;
    for (double z = -15.0; z <= 15.0; z += 0.05) {
        sup = std::max(sup, std::abs(lerp(sn1.s, *f1 + z) - lerp(sn2.s, *f2 + z)));
        double cur = lerp(sn2.s, *f2 + z);
        if (cur > prev + 1e-12 && cur > 1e-3 && cur < 1.0 - 1e-3) ++decreasing_violations;
        prev = cur;
    }
    CHECK(sup < 1e-3);
    CHECK(decreasing_violations == 0);
}

TEST_CASE("verdict classification on short and monostable runs") {
    // monostable with a wide gap still propagates
    auto pm = KineticsParams::normalized(3.0, 0.0);
    SolverConfig cfg;
    cfg.dx = 0.02;
    cfg.x_min = -25.0;
    cfg.x_max = 35.0;
    cfg.t_end = 120.0;
    GapLayout wide = GapLayout::single(3.0);
    FieldState init = make_front_initial(cfg, pm, -13.0, 0.5, wide);
    ProbeConfig pc;
    pc.level = 0.5;
    pc.sentinel_x = 13.0;
    pc.stop_on_sentinel = true;
    Trajectory traj = simulate(init, cfg, pm, wide, pc);
    CHECK(classify_outcome(traj, wide, pm) == Verdict::Propagated);

    // a run far too short to quiesce stays undecided
    SolverConfig short_cfg = cfg;
    short_cfg.t_end = 4.0;
    GapLayout g1 = GapLayout::single(1.0);
    FieldState init2 = make_front_initial(short_cfg, kP, -13.0, kA, g1);
    ProbeConfig pc2;
    pc2.level = kA;
    pc2.sentinel_x = 11.0;
    Trajectory traj2 = simulate(init2, short_cfg, kP, g1, pc2);
    CHECK(classify_outcome(traj2, g1, kP) == Verdict::Undecided);
}

TEST_CASE("numerical threshold bisection rejects a monostable bracket") {
    auto pm = KineticsParams::normalized(3.0, 0.0);
    SolverConfig cfg;
    cfg.dx = 0.05;
    cfg.x_min = -25.0;
    cfg.x_max = 25.0;
    BisectOptions opts;
    opts.t_end_base = 60.0;
    opts.t_end_cap_factor = 1.0;
    // no blocking length exists: the upper bracket precondition must fail
    CHECK_THROWS_AS(bisect_numerical_Lstar(pm, cfg, 0.5, 8.0, opts), NumericalError);
}
