#pragma once
// Bracketed scalar root finding: sign scan to locate a bracket, then
// plain bisection. Bisection is preferred over faster iterations here
// because every caller hands in cheap closed-form residuals and the
// roots feed regression-tested constants.

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>

namespace crimewave {

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

/// Walks [lo, hi] in steps of `step` and returns the first subinterval
/// with a sign change (or a zero hit).
template <typename F>
std::optional<Bracket> scan_first_bracket(F&& f, double lo, double hi, double step) {
    double x0 = lo;
    double f0 = f(x0);
    if (f0 == 0.0) return Bracket{x0, x0};
    while (x0 < hi) {
        double x1 = std::min(x0 + step, hi);
        double f1 = f(x1);
        if (f1 == 0.0 || std::signbit(f0) != std::signbit(f1)) return Bracket{x0, x1};
        x0 = x1;
        f0 = f1;
        if (x1 >= hi) break;
    }
    return std::nullopt;
}

/// Bisects a sign-changing bracket down to `tol` width (absolute).
template <typename F>
double bisect_root(F&& f, double lo, double hi, double tol = 1e-14, int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw std::invalid_argument("bisect_root: endpoints do not bracket a sign change");
    for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace crimewave
