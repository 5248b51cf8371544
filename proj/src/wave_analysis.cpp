#include "crimewave/wave_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>

#include "crimewave/format.hpp"

namespace crimewave {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Blocked: return "Blocked";
        case Verdict::Propagated: return "Propagated";
        case Verdict::Undecided: return "Undecided";
    }
    return "?";
}

std::optional<double> front_position(const FieldState& state, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("front_position: level must lie in (0,1)");
    return rightmost_crossing(state.grid, state.s, level, state.grid.x_min);
}

SpeedFit estimate_speed(const std::vector<double>& times, const std::vector<double>& positions,
                        double t_a, double t_b) {
    if (times.size() != positions.size())
        throw std::invalid_argument("estimate_speed: size mismatch");
    if (!(t_b > t_a)) throw std::invalid_argument("estimate_speed: empty window");
    std::vector<double> ts, xs;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] >= t_a && times[i] <= t_b && std::isfinite(positions[i])) {
            ts.push_back(times[i]);
            xs.push_back(positions[i]);
        }
    }
    if (ts.size() < 10)
        throw std::invalid_argument("estimate_speed: fewer than 10 samples in window");
    double mt = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        mt += ts[i];
        mx += xs[i];
    }
    mt /= ts.size();
    mx /= ts.size();
    double stt = 0.0, stx = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - mt) * (ts[i] - mt);
        stx += (ts[i] - mt) * (xs[i] - mx);
    }
    SpeedFit fit;
    fit.c = stx / stt;
    fit.intercept = mx - fit.c * mt;
    fit.n = static_cast<int>(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
        fit.residual = std::max(fit.residual, std::abs(xs[i] - (fit.c * ts[i] + fit.intercept)));
    return fit;
}

namespace {

enum class ShotEvent { Overshoot, TurnBack };

// Integrates S'' + c S' + f(S) = 0 from just off the 1-state along its
// unstable eigendirection; reports whether the orbit overshoots below 0
// (c too small) or turns back upward inside (0, a) (c too large).
ShotEvent shoot_scalar(double c, const KineticsParams& p, double a_level) {
    const double fp1 = reaction_f_prime(1.0, p);
    const double nu = 0.5 * (-c + std::sqrt(c * c - 4.0 * fp1));
    const double eps = 1e-8;
    double S = 1.0 - eps;
    double P = -eps * nu;
    const double dz = 1e-3;
    const long max_steps = 500000;
    auto acc = [&](double s, double q) { return -c * q - reaction_f(s, p); };
    for (long i = 0; i < max_steps; ++i) {
        const double k1s = P, k1p = acc(S, P);
        const double k2s = P + 0.5 * dz * k1p, k2p = acc(S + 0.5 * dz * k1s, P + 0.5 * dz * k1p);
        const double k3s = P + 0.5 * dz * k2p, k3p = acc(S + 0.5 * dz * k2s, P + 0.5 * dz * k2p);
        const double k4s = P + dz * k3p, k4p = acc(S + dz * k3s, P + dz * k3p);
        S += (dz / 6.0) * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
        P += (dz / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        if (S < -1e-10) return ShotEvent::Overshoot;
        if (P > 1e-12 && S < a_level) return ShotEvent::TurnBack;
    }
    return (S < 0.5 * a_level) ? ShotEvent::Overshoot : ShotEvent::TurnBack;
}

}  // namespace

double scalar_wave_speed(const KineticsParams& p) {
    const Classification cls = classify(p);
    if (cls.kind != StabilityKind::Bistable)
        throw std::domain_error("scalar_wave_speed: requires bistable kinetics");
    const double a = cls.a;
    double lo = -10.0, hi = 10.0;
    if (shoot_scalar(lo, p, a) != ShotEvent::Overshoot ||
        shoot_scalar(hi, p, a) != ShotEvent::TurnBack)
        throw NumericalError("scalar_wave_speed: no sign change in c within [-10, 10]");
    while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        if (shoot_scalar(mid, p, a) == ShotEvent::Overshoot)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// Real roots of x^3 + a2 x^2 + a1 x + a0, Cardano/trigonometric form with
// one Newton polish per root.
std::vector<double> cubic_real_roots(double a2, double a1, double a0) {
    const double p = a1 - a2 * a2 / 3.0;
    const double q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    const double disc = 0.25 * q * q + p * p * p / 27.0;
    std::vector<double> roots;
    if (disc > 1e-14) {
        const double sq = std::sqrt(disc);
        const double u = std::cbrt(-0.5 * q + sq);
        const double v = std::cbrt(-0.5 * q - sq);
        roots.push_back(u + v - a2 / 3.0);
    } else {
        const double r = std::sqrt(std::max(-p / 3.0, 0.0));
        const double arg = std::clamp(-0.5 * q / std::max(r * r * r, 1e-300), -1.0, 1.0);
        const double phi = std::acos(arg);
        for (int k = 0; k < 3; ++k)
            roots.push_back(2.0 * r * std::cos((phi + 2.0 * M_PI * k) / 3.0) - a2 / 3.0);
    }
    auto poly = [&](double x) { return ((x + a2) * x + a1) * x + a0; };
    auto dpoly = [&](double x) { return (3.0 * x + 2.0 * a2) * x + a1; };
    for (double& r : roots)
        for (int it = 0; it < 4; ++it) {
            const double d = dpoly(r);
            if (std::abs(d) > 1e-14) r -= poly(r) / d;
        }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace

DecayRates decay_rates(double c, const KineticsParams& p) {
    if (!(c > 0.0)) throw std::invalid_argument("decay_rates: requires c > 0");
    DecayRates dr;
    dr.c = c;
    const double root_disc = std::sqrt(c * c + 4.0);
    dr.roots_zero = {0.5 * (-c - root_disc), 0.5 * (-c + root_disc), 1.0 / c};
    std::sort(dr.roots_zero.begin(), dr.roots_zero.end());
    dr.lambda = 0.5 * (c + root_disc);

    // hotspot: (l - 1/c)(l^2 + c l - 1) - k = 0 with k = alpha g'(1)/c
    const double k = p.alpha * g_shifted_prime(1.0, p) / c;
    const double a2 = c - 1.0 / c;
    const double a1 = -2.0;
    const double a0 = 1.0 / c - k;
    auto roots = cubic_real_roots(a2, a1, a0);
    if (roots.size() != 3)
        throw NumericalError("decay_rates: hotspot characteristic roots are not all real");
    std::copy(roots.begin(), roots.end(), dr.roots_hotspot.begin());
    double mu = 0.0;
    for (double r : roots)
        if (r > 1e-12 && (mu == 0.0 || r < mu)) mu = r;
    if (mu == 0.0) throw NumericalError("decay_rates: no positive hotspot rate found");
    dr.mu = mu;
    return dr;
}

std::optional<double> fit_tail_exponent(const Grid& grid, const std::vector<double>& values,
                                        double x_cut, double window_lo, double window_hi) {
    std::vector<double> xs, ys;
    for (int i = 0; i < grid.n; ++i) {
        const double v = values[i];
        if (grid.x(i) > x_cut && v >= window_lo && v <= window_hi) {
            xs.push_back(grid.x(i));
            ys.push_back(std::log(v));
        }
    }
    if (xs.size() < 10) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= xs.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return -sxy / sxx;
}

Verdict classify_outcome(const Trajectory& traj, const GapLayout& layout,
                         const KineticsParams& params, const VerdictConfig& vc) {
    for (const auto& smp : traj.samples)
        if (smp.s_sentinel > 1.0 - vc.epsilon) return Verdict::Propagated;
    if (traj.early_stopped) return Verdict::Propagated;

    const Classification cls = classify(params);
    if (cls.kind != StabilityKind::Bistable || !cls.b) return Verdict::Undecided;
    const double b = *cls.b;

    const double t_last_quarter = 0.75 * traj.t_end;
    const double foot_edge = layout.right_edge() + vc.foot_clearance;
    bool front_formed = false;
    bool sup_ok = true;
    for (const auto& smp : traj.samples) {
        if (std::isfinite(smp.front_after_gap) && smp.front_after_gap > foot_edge)
            front_formed = true;
        if (smp.t >= t_last_quarter && smp.sup_after_gap >= b + vc.sup_margin) sup_ok = false;
    }
    if (front_formed || !sup_ok) return Verdict::Undecided;

    // quiescence: sup-norm change between the snapshot nearest 0.75 t_end
    // and the final state
    const Trajectory::Snapshot* ref = nullptr;
    for (const auto& sn : traj.snapshots) {
        if (sn.t >= t_last_quarter - 1e-9) {
            ref = &sn;
            break;
        }
    }
    if (!ref) return Verdict::Undecided;
    double change = 0.0;
    for (std::size_t i = 0; i < ref->s.size(); ++i)
        change = std::max(change, std::abs(traj.final_state.s[i] - ref->s[i]));
    return change < vc.quiescence ? Verdict::Blocked : Verdict::Undecided;
}

FrontDiagnostics diagnose(const Trajectory& traj, const KineticsParams& params,
                          const GapLayout& layout, const VerdictConfig& vc) {
    FrontDiagnostics d;
    for (const auto& smp : traj.samples) {
        d.times.push_back(smp.t);
        d.positions.push_back(smp.front_x);
    }
    const double t_hi = traj.samples.empty() ? traj.t_end : traj.samples.back().t;
    try {
        SpeedFit fit = estimate_speed(d.times, d.positions, 0.5 * t_hi, t_hi);
        d.speed = fit.c;
        d.residual = fit.residual;
    } catch (const std::invalid_argument&) {
        d.speed = 0.0;
        d.residual = 0.0;
    }

    // pick the latest snapshot whose tail window fits inside the domain
    const Grid& grid = traj.final_state.grid;
    for (auto it = traj.snapshots.rbegin(); it != traj.snapshots.rend(); ++it) {
        auto fx = rightmost_crossing(grid, it->s, 0.5, grid.x_min);
        if (!fx) continue;
        const double need = 14.0 + 8.0;  // window extent + boundary margin, rate ~ 1
        if (*fx + need > grid.x_max()) continue;
        d.lambda_fit = fit_tail_exponent(grid, it->s, *fx);
        std::vector<double> one_minus(it->s.size());
        for (std::size_t i = 0; i < one_minus.size(); ++i) one_minus[i] = 1.0 - it->s[i];
        // left tail: 1-s decays toward the left, i.e. grows like e^{mu x}
        std::vector<double> xs, ys;
        for (int i = 0; i < grid.n; ++i) {
            const double v = one_minus[i];
            if (grid.x(i) < *fx && v >= 1e-6 && v <= 1e-3 && grid.x(i) > grid.x_min + 8.0) {
                xs.push_back(grid.x(i));
                ys.push_back(std::log(v));
            }
        }
        if (xs.size() >= 10) {
            double mx = 0.0, my = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                mx += xs[i];
                my += ys[i];
            }
            mx /= xs.size();
            my /= xs.size();
            double sxx = 0.0, sxy = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                sxx += (xs[i] - mx) * (xs[i] - mx);
                sxy += (xs[i] - mx) * (ys[i] - my);
            }
            d.mu_fit = sxy / sxx;
        }
        break;
    }
    d.verdict = classify_outcome(traj, layout, params, vc);
    return d;
}

BisectResult bisect_numerical_Lstar(const KineticsParams& params, const SolverConfig& base,
                                    double L_lo, double L_hi, const BisectOptions& opts) {
    const Classification cls = classify(params);
    const double level = cls.kind == StabilityKind::Bistable ? cls.a : 0.5;

    auto probe = [&](double L, BisectResult& out) {
        SolverConfig cfg = base;
        cfg.x_max = std::max(base.x_max, L + 30.0);
        double t_end = opts.t_end_base;
        while (true) {
            cfg.t_end = t_end;
            GapLayout layout = GapLayout::single(L);
            FieldState init = make_front_initial(cfg, params, -12.0, level, layout);
            ProbeConfig pc;
            pc.level = level;
            pc.sentinel_x = L + 10.0;
            pc.sample_dt = opts.probe_sample_dt;
            pc.stop_on_sentinel = true;
            Trajectory traj = simulate(init, cfg, params, layout, pc);
            Verdict v = classify_outcome(traj, layout, params);
            if (v != Verdict::Undecided) {
                out.probes.push_back({L, v, t_end});
                return v;
            }
            if (t_end >= opts.t_end_base * opts.t_end_cap_factor - 1e-9) {
                out.probes.push_back({L, v, t_end});
                std::ostringstream os;
                os << "bisect_numerical_Lstar: probe at L=" << L
                   << " still Undecided at the t_end cap (" << t_end << ")";
                throw NumericalError(os.str());
            }
            t_end *= 2.0;
        }
    };

    BisectResult res;
    if (probe(L_lo, res) != Verdict::Propagated)
        throw NumericalError("bisect_numerical_Lstar: lower bracket end did not propagate");
    if (probe(L_hi, res) != Verdict::Blocked)
        throw NumericalError("bisect_numerical_Lstar: upper bracket end did not block");
    while (L_hi - L_lo > 2.0 * base.dx) {
        const double mid = 0.5 * (L_lo + L_hi);
        if (probe(mid, res) == Verdict::Propagated)
            L_lo = mid;
        else
            L_hi = mid;
    }
    res.L_lo = L_lo;
    res.L_hi = L_hi;
    res.L_num = 0.5 * (L_lo + L_hi);
    return res;
}

void write_front_series_csv(const std::string& path, const FrontDiagnostics& diag) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "t,front_x\n";
    for (std::size_t i = 0; i < diag.times.size(); ++i)
        out << fmt_g(diag.times[i]) << ',' << fmt_g(diag.positions[i]) << '\n';
}

}  // namespace crimewave
