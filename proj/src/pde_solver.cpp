#include "crimewave/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "crimewave/format.hpp"

namespace crimewave {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

GapLayout GapLayout::none() { return {}; }

GapLayout GapLayout::single(double L) {
    if (!(L >= 0.0)) throw std::invalid_argument("GapLayout: L must be >= 0");
    GapLayout g;
    g.kind = Kind::Single;
    g.L = L;
    return g;
}

GapLayout GapLayout::split(double L1, double L2, double d) {
    if (!(L1 >= 0.0) || !(L2 >= 0.0) || !(d >= 0.0))
        throw std::invalid_argument("GapLayout: lengths and distance must be >= 0");
    GapLayout g;
    g.kind = Kind::Double;
    g.L1 = L1;
    g.L2 = L2;
    g.d = d;
    return g;
}

std::vector<std::pair<double, double>> GapLayout::intervals() const {
    switch (kind) {
        case Kind::None: return {};
        case Kind::Single: return L > 0.0 ? std::vector<std::pair<double, double>>{{0.0, L}}
                                          : std::vector<std::pair<double, double>>{};
        case Kind::Double: {
            std::vector<std::pair<double, double>> out;
            if (L1 > 0.0) out.push_back({0.0, L1});
            if (L2 > 0.0) out.push_back({L1 + d, L1 + L2 + d});
            return out;
        }
    }
    return {};
}

double GapLayout::right_edge() const {
    switch (kind) {
        case Kind::None: return 0.0;
        case Kind::Single: return L;
        case Kind::Double: return L1 + L2 + d;
    }
    return 0.0;
}

double alpha_profile(const GapLayout& layout, double x, double alpha) {
    for (const auto& g : layout.intervals())
        if (x >= g.first && x <= g.second) return 0.0;
    return alpha;
}

Grid Grid::from_config(const SolverConfig& c) {
    if (!(c.dx > 0.0)) throw std::invalid_argument("Grid: dx must be > 0");
    if (!(c.x_min < 0.0 && c.x_max > 0.0))
        throw std::invalid_argument("Grid: need x_min < 0 < x_max");
    Grid g;
    g.dx = c.dx;
    g.x_min = -std::round(-c.x_min / c.dx) * c.dx;  // keep the origin on a node
    g.n = static_cast<int>(std::round((c.x_max - g.x_min) / c.dx)) + 1;
    if (g.n < 3) throw std::invalid_argument("Grid: fewer than 3 nodes");
    return g;
}

int Grid::index_near(double xq) const {
    int i = static_cast<int>(std::round((xq - x_min) / dx));
    return std::clamp(i, 0, n - 1);
}

std::optional<double> rightmost_crossing(const Grid& g, const std::vector<double>& s,
                                         double level, double min_x) {
    for (int i = g.n - 2; i >= 0; --i) {
        if (g.x(i) < min_x) break;
        if (s[i] > level && s[i + 1] <= level) {
            const double frac = (s[i] - level) / (s[i] - s[i + 1]);
            return g.x(i) + frac * g.dx;
        }
    }
    return std::nullopt;
}

Stepper::Stepper(const SolverConfig& config, const KineticsParams& params,
                 const GapLayout& layout)
    : grid_(Grid::from_config(config)), params_(params), config_(config) {
    dt_ = config.dt_effective();
    if (!(dt_ > 0.0)) throw std::invalid_argument("Stepper: dt must be > 0");
    exp_mdt_ = std::exp(-dt_);

    const int n = grid_.n;
    alpha_.assign(n, params.alpha);
    // Gap edges are snapped to nodes; interior nodes carry zero payoff and
    // the edge nodes the cell-average alpha/2, which keeps the effective
    // interface centered on the node to second order.
    for (const auto& gp : layout.intervals()) {
        const int i_lo = static_cast<int>(std::round((gp.first - grid_.x_min) / grid_.dx));
        const int i_hi = static_cast<int>(std::round((gp.second - grid_.x_min) / grid_.dx));
        for (int i = std::max(0, i_lo); i <= std::min(n - 1, i_hi); ++i) {
            if (i == i_lo || i == i_hi)
                alpha_[i] = std::min(alpha_[i], 0.5 * params.alpha);
            else
                alpha_[i] = 0.0;
        }
    }

    // Thomas prefactorization of ((1+dt) I - r D2), r = dt/dx^2.
    const double r = dt_ / (grid_.dx * grid_.dx);
    std::vector<double> diag(n, 1.0 + dt_ + 2.0 * r);
    std::vector<double> upper(n, -r);
    lower_.assign(n, -r);
    upper[0] = -2.0 * r;       // zero-flux mirror
    lower_[n - 1] = -2.0 * r;
    if (config.boundary == BoundaryKind::DirichletLimits) {
        diag[0] = 1.0;
        upper[0] = 0.0;
        diag[n - 1] = 1.0;
        lower_[n - 1] = 0.0;
    }
    lower_[0] = 0.0;
    upper[n - 1] = 0.0;

    cp_.assign(n, 0.0);
    inv_.assign(n, 0.0);
    inv_[0] = 1.0 / diag[0];
    cp_[0] = upper[0] * inv_[0];
    for (int i = 1; i < n; ++i) {
        inv_[i] = 1.0 / (diag[i] - lower_[i] * cp_[i - 1]);
        cp_[i] = upper[i] * inv_[i];
    }
    rhs_.assign(n, 0.0);
    gbuf_.assign(n, 0.0);
}

void Stepper::step(FieldState& state) const {
    const int n = grid_.n;
    if (static_cast<int>(state.s.size()) != n || static_cast<int>(state.u.size()) != n)
        throw std::invalid_argument("step: state size does not match the grid");

    for (int i = 0; i < n; ++i) gbuf_[i] = g_shifted(state.s[i], params_);

    const bool scalar = config_.mode == SolveMode::Scalar;
    for (int i = 0; i < n; ++i)
        rhs_[i] = state.s[i] + dt_ * alpha_[i] * (scalar ? gbuf_[i] : state.u[i]);
    if (config_.boundary == BoundaryKind::DirichletLimits) {
        rhs_[0] = config_.dirichlet_left;
        rhs_[n - 1] = config_.dirichlet_right;
    }

    // forward sweep / back substitution with the cached factorization
    rhs_[0] *= inv_[0];
    for (int i = 1; i < n; ++i) rhs_[i] = (rhs_[i] - lower_[i] * rhs_[i - 1]) * inv_[i];
    for (int i = n - 2; i >= 0; --i) rhs_[i] -= cp_[i] * rhs_[i + 1];

    state.s.swap(rhs_);
    if (scalar) {
        for (int i = 0; i < n; ++i) state.u[i] = g_shifted(state.s[i], params_);
    } else {
        for (int i = 0; i < n; ++i)
            state.u[i] = state.u[i] * exp_mdt_ + (1.0 - exp_mdt_) * gbuf_[i];
    }
    state.t += dt_;

    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(state.s[i]) || !std::isfinite(state.u[i])) {
            std::ostringstream os;
            os << "step: non-finite value at x=" << grid_.x(i) << ", t=" << state.t
               << " (diverged state)";
            throw NumericalError(os.str());
        }
    }
}

void step(FieldState& state, const SolverConfig& config, const KineticsParams& params,
          const GapLayout& layout) {
    Stepper(config, params, layout).step(state);
}

FieldState make_front_initial(const SolverConfig& config, const KineticsParams& params,
                              double front_x, double level, const GapLayout& layout) {
    const Grid grid = Grid::from_config(config);
    if (!(front_x > grid.x_min + 2.0 && front_x < grid.x_max() - 2.0))
        throw std::invalid_argument("make_front_initial: front_x outside the domain");
    for (const auto& gp : layout.intervals())
        if (front_x > gp.first - 10.0)
            throw std::invalid_argument(
                "make_front_initial: front must start at least 10 units left of the gap");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("make_front_initial: level must lie in (0,1)");

    const double k = 2.0;
    const double x0 = front_x - std::log((1.0 - level) / level) / k;
    FieldState st;
    st.grid = grid;
    st.t = 0.0;
    st.s.resize(grid.n);
    st.u.resize(grid.n);
    for (int i = 0; i < grid.n; ++i) {
        st.s[i] = 1.0 / (1.0 + std::exp(k * (grid.x(i) - x0)));
        st.u[i] = g_shifted(st.s[i], params);
    }
    return st;
}

Trajectory simulate(const FieldState& initial, const SolverConfig& config,
                    const KineticsParams& params, const GapLayout& layout,
                    const ProbeConfig& probes) {
    const double g1 = g_shifted(1.0, params);
    for (std::size_t i = 0; i < initial.s.size(); ++i) {
        if (initial.s[i] < -1e-9 || initial.s[i] > 1.0 + 1e-9 || initial.u[i] < -1e-9 ||
            initial.u[i] > g1 + 1e-9)
            throw std::invalid_argument("simulate: initial data outside [0,1] x [0,g(1)]");
    }

    Stepper stepper(config, params, layout);
    const Grid& grid = stepper.grid();
    const double dt = stepper.dt();
    const long n_steps = std::lround(config.t_end / dt);
    const long sample_stride = std::max(1L, std::lround(probes.sample_dt / dt));
    const double snap_dt = probes.snapshot_dt > 0.0 ? probes.snapshot_dt : config.t_end / 8.0;
    const long snap_stride = std::max(1L, std::lround(snap_dt / dt));

    const double edge = layout.right_edge();
    const int i_sent = grid.index_near(probes.sentinel_x);
    const int i_edge = grid.index_near(edge);

    Trajectory traj;
    traj.t_end = config.t_end;
    FieldState state = initial;
    std::vector<double> prev_s;

    bool warned = false;
    for (long k = 1; k <= n_steps; ++k) {
        prev_s = state.s;
        stepper.step(state);

        if (k % snap_stride == 0 && k != n_steps)
            traj.snapshots.push_back({state.t, state.s, state.u});

        if (k % sample_stride == 0 || k == n_steps) {
            Trajectory::Sample smp;
            smp.t = state.t;
            auto fx = rightmost_crossing(grid, state.s, probes.level, grid.x_min);
            auto fg = rightmost_crossing(grid, state.s, probes.level, edge);
            smp.front_x = fx ? *fx : kNaN;
            smp.front_after_gap = (fg && *fg > edge) ? *fg : kNaN;
            smp.s_sentinel = state.s[i_sent];
            smp.u_sentinel = state.u[i_sent];
            double sup = 0.0;
            for (int i = i_edge; i < grid.n; ++i) sup = std::max(sup, state.s[i]);
            smp.sup_after_gap = sup;
            double dmax = 0.0;
            for (int i = 0; i < grid.n; ++i)
                dmax = std::max(dmax, std::abs(state.s[i] - prev_s[i]));
            smp.max_step_delta = dmax;
            traj.samples.push_back(smp);

            if (fx && !warned &&
                (*fx > grid.x_max() - 5.0 || *fx < grid.x_min + 5.0)) {
                warned = true;
                traj.boundary_warning = true;
                std::cerr << "simulate: warning, front within 5 units of the domain boundary (t="
                          << state.t << ")\n";
            }
            if (probes.stop_on_sentinel && smp.s_sentinel > probes.sentinel_threshold) {
                traj.early_stopped = true;
                break;
            }
        }
    }
    traj.snapshots.push_back({state.t, state.s, state.u});
    traj.final_state = std::move(state);
    return traj;
}

void write_snapshot_csv(const std::string& path, const FieldState& state) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "x,s,u\n";
    for (int i = 0; i < state.grid.n; ++i)
        out << fmt_g(state.grid.x(i)) << ',' << fmt_g(state.s[i]) << ',' << fmt_g(state.u[i])
            << '\n';
}

void write_probe_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "t,front_x,s_probe,u_probe\n";
    for (const auto& smp : traj.samples)
        out << fmt_g(smp.t) << ',' << fmt_g(smp.front_x) << ',' << fmt_g(smp.s_sentinel) << ','
            << fmt_g(smp.u_sentinel) << '\n';
}

}  // namespace crimewave
