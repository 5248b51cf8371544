#pragma once
// Steady states of s'' + f_L(x, s) = 0 built analytically by phase-plane
// quadrature: the base length L0, the critical gap length Lstar, gap
// matching coefficients (A, B), blocking profiles, the symmetric profile
// connecting the hotspot to itself, and the double-gap subsolution check.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "crimewave/kinetics.hpp"

namespace crimewave {

/// Orbit tabulation: nodes sorted by x with exact orbit values and the
/// first two derivatives; evaluation by piecewise quintic Hermite, which
/// keeps the tabulated representation C2 and its second derivative
/// accurate enough for the 1e-6 residual bound.
struct TabulatedBranch {
    std::vector<double> x;
    std::vector<double> s;
    std::vector<double> ds;
    std::vector<double> d2s;

    double x_front() const { return x.front(); }
    double x_back() const { return x.back(); }
    double value(double xq) const;
    double deriv(double xq) const;
    double second(double xq) const;
    void shift_x(double dx);
    /// Reflection about x = center: reverses node order, negates slopes.
    TabulatedBranch mirrored(double center) const;
};

enum class OrbitKind { HeteroclinicToOne, HomoclinicAtZero };

/// Tabulates x(s) along a first-integral orbit, anchored at x = 0 where
/// s = s_from, with s decreasing as x increases.
///   HeteroclinicToOne: 0.5 s'^2 = F(1) - F(s), the branch whose tail
///     approaches 1 (requires s_from < 1, nonnegative energy en route).
///   HomoclinicAtZero: 0.5 s'^2 = -F(s), decaying to 0; s_from may be at
///     most b (the orbit apex), where the integrable turning-point
///     singularity is handled by a square-root substitution.
/// Tails truncate once |s - limit| < 1e-10. Throws std::domain_error for
/// a non-integrable configuration (energy negative in range).
TabulatedBranch quadrature_branch(double s_from, double s_to, const KineticsParams& p,
                                  OrbitKind orbit);

/// Gap matching data for a blocking steady state: s(x) = A e^-x + B e^x
/// on [0, L], decaying to s_inf on the right.
struct GapMatch {
    double A = 0.0;
    double B = 0.0;
    double L = 0.0;
    double s_inf = 0.0;

    double entry() const;        // s(0) = A + B
    double entry_slope() const;  // s'(0) = B - A
    double exit() const;         // s(L)
    double exit_slope() const;   // s'(L)
};

struct BaseLength {
    double L0 = 0.0;
    double A = 0.0;  // (b/2) e^{ L0}
    double B = 0.0;  // (b/2) e^{-L0}
};

/// L0 = arccosh(1/b) with the exponential coefficients that pin the gap
/// entry at 1 and the apex value b at the exit. Rejects b outside (0,1).
BaseLength base_length_L0(double b);

/// The critical gap length: unique L in (0, L0) with
/// 0.5 (b sinh L)^2 = F(1) - F(b cosh L), bisected to 1e-12 with residual
/// verified below 1e-10. Requires bistable kinetics with F(1) > 0.
double critical_length(const KineticsParams& p);

/// Solves the two C1 matching identities for the decaying profile.
/// Returns the coefficients for L >= Lstar (the exact critical pair at
/// L = Lstar) and std::nullopt (no blocking solution) for L < Lstar.
std::optional<GapMatch> gap_match_solve(double L, const KineticsParams& p);

/// A piecewise-analytic steady state. Pieces are ordered in x; queries
/// outside the covered span return the corresponding limit.
struct SteadyProfile {
    enum class PieceKind { Exponential, Tabulated, Constant };
    struct Piece {
        double x_lo = 0.0;
        double x_hi = 0.0;
        PieceKind kind = PieceKind::Constant;
        double A = 0.0;   // Exponential: A e^-x + B e^x
        double B = 0.0;
        double c0 = 0.0;  // Constant value
        TabulatedBranch tab;
    };

    std::vector<Piece> pieces;
    double left_limit = 0.0;
    double right_limit = 0.0;
    bool monotone = false;
    std::vector<std::pair<double, double>> gaps;  // payoff-zero intervals

    double value(double x) const;
    double deriv(double x) const;
    double second(double x) const;

    /// max |s'' + f_L(x, s)| sampled at n interior points per piece.
    double max_abs_residual(const KineticsParams& p, int n_per_piece = 1000) const;

    struct JunctionMismatch {
        double value = 0.0;
        double slope = 0.0;
    };
    /// Worst one-sided value/derivative disagreement across junctions.
    JunctionMismatch max_junction_mismatch() const;
};

/// Monotone decreasing blocking profile for L >= Lstar: heteroclinic
/// branch down to the gap entry, exact exponential across the gap,
/// homoclinic branch decaying to 0. Throws std::domain_error for
/// L < Lstar.
SteadyProfile build_blocking_profile(double L, const KineticsParams& p);

/// Symmetric steady state connecting 1 to itself across the gap, from
/// the largest root z of 0.5 z^2 tanh^2(L/2) = F(1) - F(z). For L = 0
/// this degenerates to the constant 1.
SteadyProfile symmetric_profile(double L, const KineticsParams& p);

enum class SplitVerdict { PropagationForced, DeferToSimulation };
const char* to_string(SplitVerdict v);

/// Step-1 analytic check of the double-gap problem: for
/// d <= Lstar - (L1 + L2) the critical single-gap profile is a strict
/// subsolution of the split problem (pointwise reaction inequality,
/// confirmed on a fine grid). Requires L1 + L2 < Lstar.
SplitVerdict double_gap_subsolution_check(double L1, double L2, double d,
                                          const KineticsParams& p);

namespace detail {
/// True when the C1 matching system admits a decaying-profile root at
/// this L, ignoring the L >= Lstar gate. Diagnostic only: the public
/// contract of gap_match_solve stays as documented.
bool matching_root_exists(double L, const KineticsParams& p);
}  // namespace detail

}  // namespace crimewave
