#pragma once
// Front extraction, wave-speed estimation, the scalar traveling-wave
// shooting solver, moving-frame decay-rate eigenvalues, and the
// blocked/propagated verdict logic built on trajectory probes.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "crimewave/kinetics.hpp"
#include "crimewave/pde_solver.hpp"

namespace crimewave {

enum class Verdict { Blocked, Propagated, Undecided };
const char* to_string(Verdict v);

/// Rightmost x where linear interpolation of s crosses `level` from
/// above, or nullopt when the field never crosses it.
std::optional<double> front_position(const FieldState& state, double level);

struct SpeedFit {
    double c = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // max |position - fit|
    int n = 0;
};

/// Least-squares slope of front position over samples with t in
/// [t_a, t_b]. Requires at least 10 samples in the window.
SpeedFit estimate_speed(const std::vector<double>& times, const std::vector<double>& positions,
                        double t_a, double t_b);

/// Unique bistable traveling-wave speed of the scalar equation, by
/// shooting from the unstable manifold of the 1-state and bisecting on
/// the overshoot/turn-back event; |c| resolved to 1e-8.
double scalar_wave_speed(const KineticsParams& p);

struct DecayRates {
    double c = 0.0;
    double lambda = 0.0;  // right-tail rate at the zero state, (c+sqrt(c^2+4))/2
    double mu = 0.0;      // rate of approach to the hotspot, smallest positive root
    std::array<double, 3> roots_zero{};    // eigenvalues at (0, 0)
    std::array<double, 3> roots_hotspot{}; // eigenvalues at (1, g(1))
};

/// Moving-frame linearization rates for wave speed c > 0. The zero-state
/// roots are closed-form {1/c, (-c±sqrt(c^2+4))/2}; the hotspot roots
/// solve (l - 1/c)(l^2 + c l - 1) = alpha g'(1)/c, polished below 1e-12.
DecayRates decay_rates(double c, const KineticsParams& p);

/// Log-linear tail-exponent fit over nodes where `values` lies in
/// [window_lo, window_hi] and x > x_cut; returns the decay rate of
/// `values` ~ exp(-rate * x) (so a positive rate for a decaying right
/// tail), or nullopt when fewer than 10 nodes qualify.
std::optional<double> fit_tail_exponent(const Grid& grid, const std::vector<double>& values,
                                        double x_cut, double window_lo = 1e-6,
                                        double window_hi = 1e-3);

struct VerdictConfig {
    double epsilon = 0.05;        // "invaded" when sentinel s > 1 - epsilon
    double sup_margin = 0.02;     // blocked requires sup_after_gap < b + margin
    double quiescence = 1e-5;     // and total field change below this in the last quarter
    double foot_clearance = 3.0;  // level crossings within this distance of the gap
                                  // exit belong to the pinned profile's foot (whose
                                  // value b exceeds the front level a), not to a
                                  // re-formed front
};

/// Propagated when the sentinel value exceeded 1 - epsilon; Blocked when
/// no front ever formed clear of the gap foot, the after-gap field stayed
/// below b + margin over the last quarter, and the field change across
/// that window is below the quiescence threshold; Undecided otherwise.
Verdict classify_outcome(const Trajectory& traj, const GapLayout& layout,
                         const KineticsParams& params, const VerdictConfig& vc = {});

struct FrontDiagnostics {
    std::vector<double> times;
    std::vector<double> positions;
    double speed = 0.0;
    double residual = 0.0;
    std::optional<double> lambda_fit;  // right tail of s
    std::optional<double> mu_fit;      // left tail of 1 - s
    Verdict verdict = Verdict::Undecided;
};

/// Extracts positions, fits the speed over the post-transient window
/// [t_end/2, t_end], fits the tail exponents from the latest usable
/// snapshot, and attaches the verdict.
FrontDiagnostics diagnose(const Trajectory& traj, const KineticsParams& params,
                          const GapLayout& layout, const VerdictConfig& vc = {});

struct BisectOptions {
    double t_end_base = 400.0;
    double t_end_cap_factor = 4.0;  // Undecided probes re-run up to this factor
    double probe_sample_dt = 0.5;
};

struct BisectResult {
    double L_num = 0.0;
    double L_lo = 0.0;
    double L_hi = 0.0;
    struct Probe {
        double L = 0.0;
        Verdict verdict = Verdict::Undecided;
        double t_end_used = 0.0;
    };
    std::vector<Probe> probes;
};

/// Bisects the gap length between a propagating and a blocking probe to
/// within 2 dx; each probe runs simulate + classify_outcome from
/// front-like data. Throws NumericalError when the bracket preconditions
/// fail or a probe stays Undecided at the t_end cap.
BisectResult bisect_numerical_Lstar(const KineticsParams& params, const SolverConfig& base,
                                    double L_lo, double L_hi, const BisectOptions& opts = {});

/// CSV export of the front-position series, header `t,front_x`.
void write_front_series_csv(const std::string& path, const FrontDiagnostics& diag);

}  // namespace crimewave
