#pragma once
// Semi-implicit time integration of the two-component system on a
// truncated 1D grid with a heterogeneous payoff coefficient: diffusion
// and linear decay are implicit (tridiagonal solve), the crime-average
// equation uses its exact exponential integrator. A scalar mode solves
// the single parabolic equation with the same machinery.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crimewave/kinetics.hpp"

namespace crimewave {

/// Raised when a simulation leaves the finite range or a numerical
/// routine cannot meet its contract.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Payoff-zero geometry. The first gap's left edge sits at the origin.
struct GapLayout {
    enum class Kind { None, Single, Double };
    Kind kind = Kind::None;
    double L = 0.0;            // Single
    double L1 = 0.0, L2 = 0.0, d = 0.0;  // Double: [0,L1] and [L1+d, L1+L2+d]

    static GapLayout none();
    static GapLayout single(double L);
    static GapLayout split(double L1, double L2, double d);

    /// Payoff-zero intervals, possibly empty.
    std::vector<std::pair<double, double>> intervals() const;
    /// Right edge of the last gap (0 when there is none).
    double right_edge() const;
};

/// Payoff coefficient at a point: alpha outside the gap intervals, 0 on
/// the closed intervals (the boundary choice is immaterial on the grid).
double alpha_profile(const GapLayout& layout, double x, double alpha);

enum class SolveMode { System, Scalar };
enum class BoundaryKind { NeumannZeroFlux, DirichletLimits };

struct SolverConfig {
    double dx = 0.01;
    double dt = 0.0;       // 0 means "use dx"
    double x_min = -40.0;
    double x_max = 40.0;
    double t_end = 200.0;
    BoundaryKind boundary = BoundaryKind::NeumannZeroFlux;
    double dirichlet_left = 1.0;
    double dirichlet_right = 0.0;
    SolveMode mode = SolveMode::System;

    double dt_effective() const { return dt > 0.0 ? dt : dx; }
};

/// Uniform grid with the origin snapped onto a node, so gap edges land
/// on nodes exactly.
struct Grid {
    double x_min = 0.0;
    double dx = 0.0;
    int n = 0;

    static Grid from_config(const SolverConfig& c);
    double x(int i) const { return x_min + dx * i; }
    double x_max() const { return x(n - 1); }
    int index_near(double xq) const;
};

struct FieldState {
    Grid grid;
    std::vector<double> s;  // propensity
    std::vector<double> u;  // crime moving average
    double t = 0.0;
};

/// Rightmost location where the field crosses `level` from above, by
/// linear interpolation; restricted to x >= min_x.
std::optional<double> rightmost_crossing(const Grid& g, const std::vector<double>& s,
                                         double level, double min_x);

/// One time step: reusable across steps (factorized tridiagonal solve and
/// node payoff vector are precomputed).
class Stepper {
  public:
    Stepper(const SolverConfig& config, const KineticsParams& params, const GapLayout& layout);

    /// Advances the state by one dt. Throws NumericalError when a
    /// non-finite value appears.
    void step(FieldState& state) const;

    const Grid& grid() const { return grid_; }
    double dt() const { return dt_; }
    const std::vector<double>& alpha_nodes() const { return alpha_; }

  private:
    Grid grid_;
    KineticsParams params_;
    SolverConfig config_;
    double dt_ = 0.0;
    double exp_mdt_ = 0.0;
    std::vector<double> alpha_;
    // prefactored Thomas coefficients for ((1+dt)I - dt D2)
    std::vector<double> cp_;   // modified upper diagonal
    std::vector<double> inv_;  // 1 / (b_i - a_i c'_{i-1})
    std::vector<double> lower_;
    mutable std::vector<double> rhs_, gbuf_;
};

/// Single-step convenience wrapper around a freshly built Stepper.
void step(FieldState& state, const SolverConfig& config, const KineticsParams& params,
          const GapLayout& layout);

struct ProbeConfig {
    double level = 0.5;            // front-tracking level (a for bistable runs)
    double sentinel_x = 10.0;      // fixed probe location
    double sample_dt = 0.5;        // probe cadence
    double snapshot_dt = 0.0;      // 0 means t_end / 8
    bool stop_on_sentinel = false; // early exit once the sentinel exceeds the threshold
    double sentinel_threshold = 0.95;
};

struct Trajectory {
    struct Sample {
        double t = 0.0;
        double front_x = 0.0;         // NaN when no crossing
        double front_after_gap = 0.0; // NaN when no crossing right of the gap
        double s_sentinel = 0.0;
        double u_sentinel = 0.0;
        double sup_after_gap = 0.0;
        double max_step_delta = 0.0;  // max |s^{n+1}-s^n| at this sampled step
    };
    struct Snapshot {
        double t = 0.0;
        std::vector<double> s, u;
    };

    std::vector<Sample> samples;
    std::vector<Snapshot> snapshots;  // sparse; always includes the final state
    FieldState final_state;
    double t_end = 0.0;
    bool early_stopped = false;
    bool boundary_warning = false;
};

/// Runs the scheme to t_end (or an early stop), sampling probe series and
/// sparse snapshots. Initial data must lie inside the invariant region
/// [0,1] x [0, g(1)] up to 1e-9.
Trajectory simulate(const FieldState& initial, const SolverConfig& config,
                    const KineticsParams& params, const GapLayout& layout,
                    const ProbeConfig& probes);

/// Smooth monotone front-like data: a logistic step in s crossing `level`
/// at front_x, with u = g(s), tending to (1, g(1)) on the left and (0,0)
/// on the right. front_x must sit inside the domain and at least 10 units
/// left of the first gap.
FieldState make_front_initial(const SolverConfig& config, const KineticsParams& params,
                              double front_x, double level, const GapLayout& layout);

/// CSV export, header `x,s,u`, 12 significant digits.
void write_snapshot_csv(const std::string& path, const FieldState& state);
/// CSV export, header `t,front_x,s_probe,u_probe`.
void write_probe_csv(const std::string& path, const Trajectory& traj);

}  // namespace crimewave
