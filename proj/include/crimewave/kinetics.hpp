#pragma once
// Reaction kinetics for the two-component criminal-activity model:
// sigmoid crime response, shifted reaction f(s) = -s + alpha*g(s), its
// potential, parameter normalization, and the bistable/monostable
// classification used by every other module.

#include <optional>
#include <string>

namespace crimewave {

/// Model parameters in shifted coordinates. `alpha` is the payoff
/// coefficient, `beta` the sigmoid steepness, `s_b` the activation
/// threshold (s_b > 0: anti-crime tendency / candidate bistable,
/// s_b = 0: indifference / candidate monostable).
struct KineticsParams {
    double alpha = 0.0;
    double beta = 0.0;
    double s_b = 0.0;

    /// Picks alpha so that the reaction vanishes at s = 1 (hotspot pinned
    /// at 1). Throws std::invalid_argument on an inadmissible domain.
    static KineticsParams normalized(double beta, double s_b);

    /// Explicit alpha (e.g. CLI override). Validates the same domain and
    /// steepness constraints as normalized(); does not force f(1) = 0.
    static KineticsParams with_alpha(double alpha, double beta, double s_b);
};

/// Fraction of the population committing crime at propensity s:
/// 0 for s < 0, 1 - exp(-beta*s) for s >= 0. Nondecreasing, in [0, 1).
double lambda_fraction(double s, double beta);

/// Shifted crime response g(s) = lambda_fraction(s - s_b); vanishes for
/// s <= s_b.
double g_shifted(double s, const KineticsParams& p);

/// dg/ds; zero below the threshold, beta at s_b+.
double g_shifted_prime(double s, const KineticsParams& p);

/// Homogeneous reaction f(s) = -s + alpha * g(s).
double reaction_f(double s, const KineticsParams& p);

/// df/ds.
double reaction_f_prime(double s, const KineticsParams& p);

/// d2f/ds2 (used by the quadrature turning-point expansions).
double reaction_f_second(double s, const KineticsParams& p);

/// Closed-form alpha with f(1) = 0: alpha = 1 / (1 - exp(-beta*(1-s_b))).
/// Requires beta > 0 and 0 <= s_b < 1.
double normalize_alpha(double beta, double s_b);

/// Potential F(s) = integral_0^s f(v) dv, from the exact piecewise
/// antiderivative: -s^2/2 below the threshold, plus the closed-form
/// exponential integral above it.
double potential_F(double s, const KineticsParams& p);

enum class StabilityKind { Bistable, Monostable, Degenerate };

/// Root/stability structure of f on [0, 1].
struct Classification {
    StabilityKind kind = StabilityKind::Degenerate;
    double a = 0.0;              // middle root in (s_b, 1); bistable only
    double F1 = 0.0;             // potential at s = 1
    std::optional<double> b;     // root of the potential in (0,1), when
                                 // bistable with F1 > 0
};

const char* to_string(StabilityKind k);

/// Classifies params: Bistable(a) for s_b > 0 with the three-root sign
/// pattern, Monostable for s_b = 0 with alpha*beta > 1, Degenerate
/// otherwise. Degenerate is a valid result, not an error.
Classification classify(const KineticsParams& p);

/// Unique b in (0,1) with F(b) = 0, located by sign scan + bisection to
/// 1e-12. Throws std::domain_error unless bistable with F(1) > 0.
double find_b(const KineticsParams& p);

}  // namespace crimewave
