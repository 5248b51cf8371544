#include "crimewave/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "crimewave/format.hpp"
#include "crimewave/rootfind.hpp"
#include "crimewave/steady_state.hpp"
#include "crimewave/wave_analysis.hpp"

namespace crimewave {

namespace {

namespace fs = std::filesystem;

class Summary {
  public:
    void add(const std::string& key, const std::string& value) { rows_.push_back({key, value}); }
    void add(const std::string& key, double value) { add(key, fmt_g(value)); }
    void add(const std::string& key, bool value) { add(key, std::string(value ? "1" : "0")); }
    void write(const fs::path& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open " + path.string());
        for (const auto& [k, v] : rows_) out << k << '=' << v << '\n';
    }

  private:
    std::vector<std::pair<std::string, std::string>> rows_;
};

void echo_config(Summary& sm, const Scenario& sc, const KineticsParams& p) {
    sm.add("experiment", sc.experiment);
    sm.add("beta", sc.beta);
    sm.add("s_b", sc.s_b);
    sm.add("alpha", p.alpha);
    sm.add("dx", sc.solver.dx);
    sm.add("dt", sc.solver.dt_effective());
    sm.add("x_min", sc.solver.x_min);
    sm.add("x_max", sc.solver.x_max);
    sm.add("t_end", sc.solver.t_end);
    sm.add("mode", std::string(sc.solver.mode == SolveMode::Scalar ? "scalar" : "system"));
    switch (sc.layout.kind) {
        case GapLayout::Kind::None: sm.add("gap.kind", std::string("none")); break;
        case GapLayout::Kind::Single:
            sm.add("gap.kind", std::string("single"));
            sm.add("gap.L", sc.layout.L);
            break;
        case GapLayout::Kind::Double:
            sm.add("gap.kind", std::string("double"));
            sm.add("gap.L1", sc.layout.L1);
            sm.add("gap.L2", sc.layout.L2);
            sm.add("gap.d", sc.layout.d);
            break;
    }
}

double front_level(const KineticsParams& p) {
    const Classification cls = classify(p);
    return cls.kind == StabilityKind::Bistable ? cls.a : 0.5;
}

/// Gapless reference run used by wave-speed and decay-rates.
Trajectory run_gapless(const Scenario& sc, const KineticsParams& p) {
    const GapLayout layout = GapLayout::none();
    FieldState init = make_front_initial(sc.solver, p, -10.0, front_level(p), layout);
    ProbeConfig pc;
    pc.level = front_level(p);
    pc.sentinel_x = 10.0;
    pc.sample_dt = 0.25;
    return simulate(init, sc.solver, p, layout, pc);
}

void write_aligned_profile(const fs::path& path, const FieldState& state, double align_level) {
    auto xc = rightmost_crossing(state.grid, state.s, align_level, state.grid.x_min);
    const double shift = xc ? *xc : 0.0;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << "x,s,u\n";
    for (int i = 0; i < state.grid.n; ++i)
        out << fmt_g(state.grid.x(i) - shift) << ',' << fmt_g(state.s[i]) << ','
            << fmt_g(state.u[i]) << '\n';
}

// --------------------------------------------------------------------------

void exp_classify(const Scenario& sc, const KineticsParams& p, Summary& sm) {
    const Classification cls = classify(p);
    sm.add("kind", std::string(to_string(cls.kind)));
    sm.add("F1", cls.F1);
    if (cls.kind == StabilityKind::Bistable) {
        sm.add("a", cls.a);
        if (cls.b) sm.add("b", *cls.b);
    }
    (void)sc;
}

void exp_critical_length(const Scenario&, const KineticsParams& p, Summary& sm) {
    const double b = find_b(p);
    const BaseLength bl = base_length_L0(b);
    const double Ls = critical_length(p);
    sm.add("b", b);
    sm.add("L0", bl.L0);
    sm.add("L0.A", bl.A);
    sm.add("L0.B", bl.B);
    sm.add("Lstar", Ls);
}

void exp_wave_speed(const Scenario& sc, const KineticsParams& p, Summary& sm,
                    const fs::path& dir) {
    Trajectory traj = run_gapless(sc, p);
    FrontDiagnostics diag = diagnose(traj, p, GapLayout::none());
    write_front_series_csv((dir / "front_series.csv").string(), diag);
    write_probe_csv((dir / "probes.csv").string(), traj);
    const double align = p.s_b > 0.0 ? 0.5 * p.s_b : 0.5;
    write_aligned_profile(dir / "wave_profile.csv", traj.final_state, align);
    sm.add("c", diag.speed);
    sm.add("fit_residual", diag.residual);
    sm.add("verdict", std::string(to_string(diag.verdict)));
    if (diag.lambda_fit) sm.add("lambda_fit", *diag.lambda_fit);
    if (diag.mu_fit) sm.add("mu_fit", *diag.mu_fit);
    if (sc.solver.mode == SolveMode::Scalar) {
        const double c_shoot = scalar_wave_speed(p);
        sm.add("c_shooting", c_shoot);
        sm.add("c_rel_diff", std::abs(diag.speed - c_shoot) / std::max(1e-12, std::abs(c_shoot)));
    }
}

void exp_decay_rates(const Scenario& sc, const KineticsParams& p, Summary& sm,
                     const fs::path& dir) {
    Trajectory traj = run_gapless(sc, p);
    FrontDiagnostics diag = diagnose(traj, p, GapLayout::none());
    write_front_series_csv((dir / "front_series.csv").string(), diag);
    if (!(diag.speed > 0.0))
        throw NumericalError("decay-rates: measured wave speed is not positive");
    const DecayRates dr = decay_rates(diag.speed, p);
    sm.add("c", dr.c);
    sm.add("lambda", dr.lambda);
    sm.add("mu", dr.mu);
    sm.add("lambda_gt_mu", dr.lambda > dr.mu);
    for (int i = 0; i < 3; ++i) sm.add("root_zero." + std::to_string(i), dr.roots_zero[i]);
    for (int i = 0; i < 3; ++i) sm.add("root_hotspot." + std::to_string(i), dr.roots_hotspot[i]);
    if (diag.lambda_fit) {
        sm.add("lambda_fit", *diag.lambda_fit);
        sm.add("lambda_fit_rel_err", std::abs(*diag.lambda_fit - dr.lambda) / dr.lambda);
    }
    if (diag.mu_fit) sm.add("mu_fit", *diag.mu_fit);
}

void exp_simulate(const Scenario& sc, const KineticsParams& p, Summary& sm,
                  const fs::path& dir) {
    const double edge = sc.layout.right_edge();
    FieldState init = make_front_initial(sc.solver, p, -12.0, front_level(p), sc.layout);
    ProbeConfig pc;
    pc.level = front_level(p);
    pc.sentinel_x = edge + 10.0;
    Trajectory traj = simulate(init, sc.solver, p, sc.layout, pc);
    FrontDiagnostics diag = diagnose(traj, p, sc.layout);
    write_snapshot_csv((dir / "snapshot_final.csv").string(), traj.final_state);
    write_probe_csv((dir / "probes.csv").string(), traj);
    write_front_series_csv((dir / "front_series.csv").string(), diag);
    sm.add("verdict", std::string(to_string(diag.verdict)));
    sm.add("c", diag.speed);
    sm.add("fit_residual", diag.residual);
    sm.add("early_stopped", traj.early_stopped);
    sm.add("boundary_warning", traj.boundary_warning);
}

void exp_bisect_gap(const Scenario& sc, const KineticsParams& p, Summary& sm,
                    const fs::path& dir) {
    const double Ls = critical_length(p);
    BisectOptions opts;
    opts.t_end_base = sc.solver.t_end;
    const BisectResult res = bisect_numerical_Lstar(p, sc.solver, 0.5 * Ls, 1.5 * Ls, opts);
    {
        std::ofstream out(dir / "bisect_probes.csv");
        out << "L,verdict,t_end\n";
        for (const auto& pr : res.probes)
            out << fmt_g(pr.L) << ',' << to_string(pr.verdict) << ',' << fmt_g(pr.t_end_used)
                << '\n';
    }
    // Shortest length at which the matching system already admits a
    // decaying profile; reported because the dynamics pin to this fold.
    double fold = Ls;
    if (detail::matching_root_exists(0.999 * Ls, p)) {
        double lo = 0.01 * Ls, hi = Ls;
        if (!detail::matching_root_exists(lo, p)) {
            for (int i = 0; i < 40; ++i) {
                const double mid = 0.5 * (lo + hi);
                (detail::matching_root_exists(mid, p) ? hi : lo) = mid;
            }
            fold = hi;
        } else {
            fold = lo;
        }
    }
    sm.add("L_num", res.L_num);
    sm.add("bracket_lo", res.L_lo);
    sm.add("bracket_hi", res.L_hi);
    sm.add("Lstar_analytic", Ls);
    sm.add("abs_diff", std::abs(res.L_num - Ls));
    sm.add("first_matching_length", fold);
}

void exp_split_gap(const Scenario& sc, const KineticsParams& p, Summary& sm,
                   const fs::path& dir) {
    if (sc.layout.kind != GapLayout::Kind::Double)
        throw ConfigError("split-gap requires gap.kind=double (gap.d is the sweep maximum)");
    const double L1 = sc.layout.L1;
    const double L2 = sc.layout.L2;
    const double d_max = sc.layout.d > 0.0 ? sc.layout.d : 5.0;
    const double Ls = critical_length(p);
    if (!(L1 + L2 < Ls))
        throw NumericalError("split-gap: requires L1 + L2 < the critical length");

    std::ofstream out(dir / "split_sweep.csv");
    out << "d,analytic_check,verdict,t_end\n";
    int n_prop = 0, n_block = 0, n_undec = 0;
    const double level = front_level(p);
    for (int k = 0;; ++k) {
        const double d = 0.1 * k;
        if (d > d_max + 1e-9) break;
        const GapLayout layout = d > 0.0 ? GapLayout::split(L1, L2, d)
                                         : GapLayout::single(L1 + L2);
        std::string analytic = "DeferToSimulation";
        if (d <= Ls - (L1 + L2) + 1e-12)
            analytic = to_string(double_gap_subsolution_check(L1, L2, d, p));

        SolverConfig cfg = sc.solver;
        cfg.x_max = std::max(cfg.x_max, layout.right_edge() + 30.0);
        double t_end = sc.solver.t_end;
        Verdict v = Verdict::Undecided;
        for (int attempt = 0; attempt < 3; ++attempt) {
            cfg.t_end = t_end;
            FieldState init = make_front_initial(cfg, p, -12.0, level, layout);
            ProbeConfig pc;
            pc.level = level;
            pc.sentinel_x = layout.right_edge() + 10.0;
            pc.stop_on_sentinel = true;
            Trajectory traj = simulate(init, cfg, p, layout, pc);
            v = classify_outcome(traj, layout, p);
            if (v != Verdict::Undecided) break;
            t_end *= 2.0;
        }
        out << fmt_g(d) << ',' << analytic << ',' << to_string(v) << ',' << fmt_g(cfg.t_end)
            << '\n';
        if (v == Verdict::Propagated) ++n_prop;
        else if (v == Verdict::Blocked) ++n_block;
        else ++n_undec;
    }
    sm.add("L1", L1);
    sm.add("L2", L2);
    sm.add("d_max", d_max);
    sm.add("Lstar", Ls);
    sm.add("n_propagated", static_cast<double>(n_prop));
    sm.add("n_blocked", static_cast<double>(n_block));
    sm.add("n_undecided", static_cast<double>(n_undec));
    sm.add("all_propagated", n_block == 0 && n_undec == 0);
}

void exp_steady_profile(const Scenario& sc, const KineticsParams& p, Summary& sm,
                        const fs::path& dir) {
    if (sc.layout.kind == GapLayout::Kind::Double)
        throw ConfigError("steady-profile requires gap.kind=single or none");
    const double L = sc.layout.kind == GapLayout::Kind::Single ? sc.layout.L : 0.0;
    const double Ls = critical_length(p);
    SteadyProfile prof;
    std::string kind;
    if (L >= Ls - 1e-9) {
        prof = build_blocking_profile(L, p);
        kind = "blocking";
        auto gm = gap_match_solve(L, p);
        sm.add("A", gm->A);
        sm.add("B", gm->B);
        sm.add("entry", gm->entry());
        sm.add("exit", gm->exit());
    } else {
        prof = symmetric_profile(L, p);
        kind = "symmetric";
    }
    sm.add("profile_kind", kind);
    sm.add("L", L);
    sm.add("Lstar", Ls);
    sm.add("residual_max", prof.max_abs_residual(p));
    const auto jm = prof.max_junction_mismatch();
    sm.add("junction_value", jm.value);
    sm.add("junction_slope", jm.slope);
    sm.add("left_limit", prof.left_limit);
    sm.add("right_limit", prof.right_limit);
    sm.add("monotone", prof.monotone);

    const Grid grid = Grid::from_config(sc.solver);
    std::ofstream out(dir / "profile.csv");
    if (!out) throw std::runtime_error("cannot open profile.csv");
    out << "x,s\n";
    for (int i = 0; i < grid.n; ++i)
        out << fmt_g(grid.x(i)) << ',' << fmt_g(prof.value(grid.x(i))) << '\n';
}

}  // namespace

int run_experiment(const Scenario& scenario) {
    try {
        if (scenario.experiment.empty())
            throw ConfigError("no experiment selected (config key or CLI subcommand)");
        const KineticsParams p = scenario.params();
        const fs::path dir(scenario.out_dir);
        fs::create_directories(dir);

        Summary sm;
        echo_config(sm, scenario, p);
        if (scenario.experiment == "classify")
            exp_classify(scenario, p, sm);
        else if (scenario.experiment == "critical-length")
            exp_critical_length(scenario, p, sm);
        else if (scenario.experiment == "wave-speed")
            exp_wave_speed(scenario, p, sm, dir);
        else if (scenario.experiment == "decay-rates")
            exp_decay_rates(scenario, p, sm, dir);
        else if (scenario.experiment == "simulate")
            exp_simulate(scenario, p, sm, dir);
        else if (scenario.experiment == "bisect-gap")
            exp_bisect_gap(scenario, p, sm, dir);
        else if (scenario.experiment == "split-gap")
            exp_split_gap(scenario, p, sm, dir);
        else if (scenario.experiment == "steady-profile")
            exp_steady_profile(scenario, p, sm, dir);
        else
            throw ConfigError("unknown experiment '" + scenario.experiment + "'");
        sm.write(dir / "summary.txt");
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace crimewave
