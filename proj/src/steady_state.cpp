#include "crimewave/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "crimewave/rootfind.hpp"

namespace crimewave {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr int kGL = 16;
constexpr double kGLx[kGL] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
constexpr double kGLw[kGL] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

template <typename F>
double gl16(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < kGL; ++i) acc += kGLw[i] * f(c + h * kGLx[i]);
    return h * acc;
}

constexpr double kTailCut = 1e-10;  // |s - limit| where tabulation stops
constexpr int kBranchNodes = 4096;

// F(1) - F(s) grouped so the two O(1-s) terms cancel in extended style
// rather than catastrophically: each factor is itself O(1-s), keeping the
// relative error of the tail energy bounded down to 1-s ~ 1e-10.
double energy_to_one(double s, const KineticsParams& p, double F1) {
    if (s <= p.s_b) return F1 + 0.5 * s * s;
    const double oms = 1.0 - s;
    return oms * (p.alpha - 0.5 * (1.0 + s)) -
           (p.alpha / p.beta) * std::exp(-p.beta * (1.0 - p.s_b)) * std::expm1(p.beta * oms);
}

double energy_homoclinic(double s, const KineticsParams& p) { return -potential_F(s, p); }

// Geometric node ladder in distance-to-equilibrium, optionally splicing in
// the threshold s_b as an exact node (f' jumps there; keeping it nodal
// preserves the quintic interpolant's O(h^4) second-derivative accuracy).
std::vector<double> descending_values(double hi, double lo, double equil, double s_b, int n) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n) + 2);
    const double d_hi = std::abs(hi - equil);
    const double d_lo = std::abs(lo - equil);
    if (!(d_lo > 0.0) || !(d_hi > 0.0) || n < 2) {
        out = {hi, lo};
        return out;
    }
    const double ratio = std::pow(d_lo / d_hi, 1.0 / n);
    double d = d_hi;
    for (int k = 0; k <= n; ++k) {
        double sval = (equil > hi) ? equil - d : equil + d;  // equil above: s = 1 - d; below: s = d
        out.push_back(sval);
        d *= ratio;
    }
    out.front() = hi;
    out.back() = lo;
    // make strictly descending and insert s_b if crossed
    std::sort(out.begin(), out.end(), std::greater<double>());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double c) { return a - c < 1e-13; }),
              out.end());
    if (out.size() < 2 || out.back() > lo) out.push_back(lo);
    if (s_b > lo + 1e-12 && s_b < hi - 1e-12) {
        auto it = std::lower_bound(out.begin(), out.end(), s_b, std::greater<double>());
        if (it == out.end() || std::abs(*it - s_b) > 1e-13) out.insert(it, s_b);
    }
    return out;
}

struct GapResidual {
    double G = 0.0;   // 0.5 p^2 + F(w); zero at a matching root
    double w = 0.0;   // gap exit value
    double pr = 0.0;  // gap exit slope
    double A = 0.0;
    double B = 0.0;
};

GapResidual gap_residual(double v, double L, const KineticsParams& p, double F1) {
    GapResidual r;
    const double E1 = std::max(0.0, energy_to_one(v, p, F1));
    const double D = std::sqrt(2.0 * E1);
    r.A = 0.5 * (v + D);
    r.B = 0.5 * (v - D);
    r.w = v * std::cosh(L) - D * std::sinh(L);
    r.pr = v * std::sinh(L) - D * std::cosh(L);
    r.G = 0.5 * r.pr * r.pr + potential_F(r.w, p);
    return r;
}

// Scans the gap-entry value for matching roots with a decaying, monotone
// exit (w in [0, b], exit slope <= 0). The admissible root is unique for
// L > Lstar; if several appear the largest entry value is taken.
std::optional<GapResidual> scan_matching_root(double L, const KineticsParams& p, double F1,
                                              double b) {
    std::optional<GapResidual> best;
    const double step = 1e-3;
    double v0 = 1e-4;
    double g0 = gap_residual(v0, L, p, F1).G;
    for (double v1 = v0 + step; v0 < 1.0 - 1e-7; v1 = std::min(v1 + step, 1.0 - 1e-7)) {
        v1 = std::min(v1, 1.0 - 1e-7);
        double g1 = gap_residual(v1, L, p, F1).G;
        if (g1 == 0.0 || std::signbit(g0) != std::signbit(g1)) {
            double vr = bisect_root(
                [&](double v) { return gap_residual(v, L, p, F1).G; }, v0, v1, 1e-15);
            GapResidual r = gap_residual(vr, L, p, F1);
            if (r.pr <= 1e-10 && r.w >= -1e-10 && r.w <= b + 1e-9) {
                if (!best || r.A + r.B > best->A + best->B) best = r;
            }
        }
        v0 = v1;
        g0 = g1;
        if (v1 >= 1.0 - 1e-7) break;
    }
    return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// TabulatedBranch: piecewise quintic Hermite over exact orbit data.

namespace {

struct Quintic {
    double f0, d0, c0, f1, d1, c1, h, t;
};

Quintic locate(const TabulatedBranch& b, double xq) {
    double x = std::clamp(xq, b.x.front(), b.x.back());
    auto it = std::upper_bound(b.x.begin(), b.x.end(), x);
    std::size_t i = (it == b.x.begin()) ? 0 : static_cast<std::size_t>(it - b.x.begin()) - 1;
    if (i >= b.x.size() - 1) i = b.x.size() - 2;
    const double h = b.x[i + 1] - b.x[i];
    return {b.s[i],  b.ds[i] * h,  b.d2s[i] * h * h,
            b.s[i + 1], b.ds[i + 1] * h, b.d2s[i + 1] * h * h,
            h, (x - b.x[i]) / h};
}

}  // namespace

double TabulatedBranch::value(double xq) const {
    const Quintic q = locate(*this, xq);
    const double t = q.t, t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double H00 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    const double H10 = t - 6 * t3 + 8 * t4 - 3 * t5;
    const double H20 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    const double H01 = 10 * t3 - 15 * t4 + 6 * t5;
    const double H11 = -4 * t3 + 7 * t4 - 3 * t5;
    const double H21 = 0.5 * t3 - t4 + 0.5 * t5;
    return q.f0 * H00 + q.d0 * H10 + q.c0 * H20 + q.f1 * H01 + q.d1 * H11 + q.c1 * H21;
}

double TabulatedBranch::deriv(double xq) const {
    const Quintic q = locate(*this, xq);
    const double t = q.t, t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    const double dH00 = -30 * t2 + 60 * t3 - 30 * t4;
    const double dH10 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    const double dH20 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
    const double dH01 = 30 * t2 - 60 * t3 + 30 * t4;
    const double dH11 = -12 * t2 + 28 * t3 - 15 * t4;
    const double dH21 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
    return (q.f0 * dH00 + q.d0 * dH10 + q.c0 * dH20 + q.f1 * dH01 + q.d1 * dH11 +
            q.c1 * dH21) / q.h;
}

double TabulatedBranch::second(double xq) const {
    const Quintic q = locate(*this, xq);
    const double t = q.t, t2 = t * t, t3 = t2 * t;
    const double sH00 = -60 * t + 180 * t2 - 120 * t3;
    const double sH10 = -36 * t + 96 * t2 - 60 * t3;
    const double sH20 = 1 - 9 * t + 18 * t2 - 10 * t3;
    const double sH01 = 60 * t - 180 * t2 + 120 * t3;
    const double sH11 = -24 * t + 84 * t2 - 60 * t3;
    const double sH21 = 3 * t - 12 * t2 + 10 * t3;
    return (q.f0 * sH00 + q.d0 * sH10 + q.c0 * sH20 + q.f1 * sH01 + q.d1 * sH11 +
            q.c1 * sH21) / (q.h * q.h);
}

void TabulatedBranch::shift_x(double dx) {
    for (double& xi : x) xi += dx;
}

TabulatedBranch TabulatedBranch::mirrored(double center) const {
    TabulatedBranch out;
    const std::size_t n = x.size();
    out.x.resize(n);
    out.s.resize(n);
    out.ds.resize(n);
    out.d2s.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = n - 1 - i;
        out.x[i] = 2.0 * center - x[j];
        out.s[i] = s[j];
        out.ds[i] = -ds[j];
        out.d2s[i] = d2s[j];
    }
    return out;
}

// ---------------------------------------------------------------------------

TabulatedBranch quadrature_branch(double s_from, double s_to, const KineticsParams& p,
                                  OrbitKind orbit) {
    if (!(s_to >= 0.0) || !(s_to < s_from))
        throw std::domain_error("quadrature_branch: need 0 <= s_to < s_from");

    const double F1 = potential_F(1.0, p);
    TabulatedBranch br;

    if (orbit == OrbitKind::HeteroclinicToOne) {
        if (!(s_from < 1.0)) throw std::domain_error("quadrature_branch: s_from must be < 1");
        const double hi = std::min(s_from, 1.0 - kTailCut);
        auto energy = [&](double s) { return energy_to_one(s, p, F1); };
        for (double s = s_to; s < hi; s += 0.01 * (hi - s_to) + 1e-12)
            if (energy(s) < -1e-14)
                throw std::domain_error("quadrature_branch: orbit energy negative in range");
        std::vector<double> svals = descending_values(hi, s_to, 1.0, p.s_b, kBranchNodes);
        br.x.reserve(svals.size());
        double xcur = 0.0;
        for (std::size_t k = 0; k < svals.size(); ++k) {
            const double s = svals[k];
            if (k > 0)
                xcur += gl16([&](double th) { return 1.0 / std::sqrt(2.0 * std::max(energy(th), 1e-300)); },
                             svals[k], svals[k - 1]);
            br.x.push_back(xcur);
            br.s.push_back(s);
            br.ds.push_back(-std::sqrt(2.0 * std::max(energy(s), 0.0)));
            br.d2s.push_back(-reaction_f(s, p));
        }
        return br;
    }

    // HomoclinicAtZero
    const double b = find_b(p);
    if (s_from > b + 1e-12)
        throw std::domain_error("quadrature_branch: homoclinic orbit does not reach above the apex");
    auto energy = [&](double s) { return energy_homoclinic(s, p); };
    const double lo = std::max(s_to, kTailCut);
    const bool from_apex = std::abs(s_from - b) <= 1e-9;

    double xcur = 0.0;
    double geo_hi = s_from;
    if (from_apex) {
        // s = b - t^2 removes the inverse-square-root turning-point
        // singularity; rho(t) = energy/t^2 stays regular through t = 0.
        double h0 = std::min({0.05, 0.5 * (b - lo), 0.5 * (b - p.s_b)});
        auto rho = [&](double t) {
            const double u = t * t;
            if (u < 1e-6) {
                return reaction_f(b, p) - 0.5 * reaction_f_prime(b, p) * u +
                       reaction_f_second(b, p) * u * u / 6.0;
            }
            return energy(b - u) / u;
        };
        const int n_apex = 192;
        const double tmax = std::sqrt(h0);
        br.x.push_back(0.0);
        br.s.push_back(b);
        br.ds.push_back(0.0);
        br.d2s.push_back(-reaction_f(b, p));
        for (int k = 1; k <= n_apex; ++k) {
            const double t0 = tmax * (k - 1) / n_apex;
            const double t1 = tmax * k / n_apex;
            xcur += gl16([&](double t) { return std::sqrt(2.0) / std::sqrt(std::max(rho(t), 1e-300)); },
                         t0, t1);
            const double s = b - t1 * t1;
            br.x.push_back(xcur);
            br.s.push_back(s);
            br.ds.push_back(-t1 * std::sqrt(2.0 * std::max(rho(t1), 0.0)));
            br.d2s.push_back(-reaction_f(s, p));
        }
        geo_hi = b - h0;
    } else {
        for (double s = lo; s < s_from; s += 0.01 * (s_from - lo) + 1e-12)
            if (energy(s) < -1e-14)
                throw std::domain_error("quadrature_branch: orbit energy negative in range");
    }

    std::vector<double> svals = descending_values(geo_hi, lo, 0.0, p.s_b, kBranchNodes - 192);
    for (std::size_t k = 0; k < svals.size(); ++k) {
        const double s = svals[k];
        if (k == 0) {
            if (!br.x.empty()) continue;  // apex segment already placed geo_hi
        } else {
            xcur += gl16([&](double th) { return 1.0 / std::sqrt(2.0 * std::max(energy(th), 1e-300)); },
                         svals[k], svals[k - 1]);
        }
        br.x.push_back(xcur);
        br.s.push_back(s);
        br.ds.push_back(-std::sqrt(2.0 * std::max(energy(s), 0.0)));
        br.d2s.push_back(-reaction_f(s, p));
    }
    return br;
}

// ---------------------------------------------------------------------------

double GapMatch::entry() const { return A + B; }
double GapMatch::entry_slope() const { return B - A; }
double GapMatch::exit() const { return A * std::exp(-L) + B * std::exp(L); }
double GapMatch::exit_slope() const { return -A * std::exp(-L) + B * std::exp(L); }

BaseLength base_length_L0(double b) {
    if (!(b > 0.0 && b < 1.0)) throw std::domain_error("base_length_L0: b must lie in (0,1)");
    const double L0 = std::acosh(1.0 / b);
    return {L0, 0.5 * b * std::exp(L0), 0.5 * b * std::exp(-L0)};
}

double critical_length(const KineticsParams& p) {
    const double b = find_b(p);
    const double F1 = potential_F(1.0, p);
    const double L0 = base_length_L0(b).L0;
    auto resid = [&](double L) {
        const double sh = b * std::sinh(L);
        return 0.5 * sh * sh - (F1 - potential_F(b * std::cosh(L), p));
    };
    const double Ls = bisect_root(resid, 0.0, L0, 1e-13);
    if (std::abs(resid(Ls)) > 1e-10)
        throw std::runtime_error("critical_length: residual tolerance not met");
    return Ls;
}

std::optional<GapMatch> gap_match_solve(double L, const KineticsParams& p) {
    const Classification cls = classify(p);
    if (cls.kind != StabilityKind::Bistable || !(cls.F1 > 0.0))
        throw std::domain_error("gap_match_solve: requires bistable kinetics with positive F(1)");
    const double b = *cls.b;
    const double Ls = critical_length(p);
    if (L < Ls - 1e-9) return std::nullopt;
    if (std::abs(L - Ls) <= 1e-9)
        return GapMatch{0.5 * b * std::exp(L), 0.5 * b * std::exp(-L), L, 0.0};
    auto root = scan_matching_root(L, p, cls.F1, b);
    if (!root) throw std::runtime_error("gap_match_solve: no admissible matching root found");
    return GapMatch{root->A, root->B, L, 0.0};
}

namespace detail {
bool matching_root_exists(double L, const KineticsParams& p) {
    const Classification cls = classify(p);
    if (cls.kind != StabilityKind::Bistable || !(cls.F1 > 0.0)) return false;
    return scan_matching_root(L, p, cls.F1, *cls.b).has_value();
}
}  // namespace detail

// ---------------------------------------------------------------------------
// SteadyProfile

namespace {

double piece_value(const SteadyProfile::Piece& pc, double x) {
    switch (pc.kind) {
        case SteadyProfile::PieceKind::Exponential:
            return pc.A * std::exp(-x) + pc.B * std::exp(x);
        case SteadyProfile::PieceKind::Tabulated:
            return pc.tab.value(x);
        case SteadyProfile::PieceKind::Constant:
            return pc.c0;
    }
    return 0.0;
}

double piece_deriv(const SteadyProfile::Piece& pc, double x) {
    switch (pc.kind) {
        case SteadyProfile::PieceKind::Exponential:
            return -pc.A * std::exp(-x) + pc.B * std::exp(x);
        case SteadyProfile::PieceKind::Tabulated:
            return pc.tab.deriv(x);
        case SteadyProfile::PieceKind::Constant:
            return 0.0;
    }
    return 0.0;
}

double piece_second(const SteadyProfile::Piece& pc, double x) {
    switch (pc.kind) {
        case SteadyProfile::PieceKind::Exponential:
            return pc.A * std::exp(-x) + pc.B * std::exp(x);
        case SteadyProfile::PieceKind::Tabulated:
            return pc.tab.second(x);
        case SteadyProfile::PieceKind::Constant:
            return 0.0;
    }
    return 0.0;
}

}  // namespace

double SteadyProfile::value(double x) const {
    if (pieces.empty() || x < pieces.front().x_lo) return left_limit;
    for (const auto& pc : pieces)
        if (x <= pc.x_hi) return piece_value(pc, x);
    return right_limit;
}

double SteadyProfile::deriv(double x) const {
    if (pieces.empty() || x < pieces.front().x_lo) return 0.0;
    for (const auto& pc : pieces)
        if (x <= pc.x_hi) return piece_deriv(pc, x);
    return 0.0;
}

double SteadyProfile::second(double x) const {
    if (pieces.empty() || x < pieces.front().x_lo) return 0.0;
    for (const auto& pc : pieces)
        if (x <= pc.x_hi) return piece_second(pc, x);
    return 0.0;
}

double SteadyProfile::max_abs_residual(const KineticsParams& p, int n_per_piece) const {
    auto in_gap = [&](double x) {
        for (const auto& g : gaps)
            if (x >= g.first && x <= g.second) return true;
        return false;
    };
    double worst = 0.0;
    for (const auto& pc : pieces) {
        const double span = pc.x_hi - pc.x_lo;
        if (!(span > 0.0)) continue;
        for (int i = 0; i < n_per_piece; ++i) {
            const double x = pc.x_lo + span * (i + 0.5) / n_per_piece;
            const double s = piece_value(pc, x);
            const double fl = in_gap(x) ? -s : reaction_f(s, p);
            worst = std::max(worst, std::abs(piece_second(pc, x) + fl));
        }
    }
    return worst;
}

SteadyProfile::JunctionMismatch SteadyProfile::max_junction_mismatch() const {
    JunctionMismatch jm;
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
        const double x = pieces[i].x_hi;
        jm.value = std::max(jm.value,
                            std::abs(piece_value(pieces[i], x) - piece_value(pieces[i + 1], x)));
        jm.slope = std::max(jm.slope,
                            std::abs(piece_deriv(pieces[i], x) - piece_deriv(pieces[i + 1], x)));
    }
    return jm;
}

SteadyProfile build_blocking_profile(double L, const KineticsParams& p) {
    auto gm = gap_match_solve(L, p);
    if (!gm)
        throw std::domain_error("build_blocking_profile: gap is shorter than the critical length");
    const double b = find_b(p);
    const double v = gm->entry();
    const double w = gm->exit();

    SteadyProfile prof;
    prof.left_limit = 1.0;
    prof.right_limit = 0.0;
    prof.monotone = true;
    prof.gaps = {{0.0, L}};

    TabulatedBranch left = quadrature_branch(1.0 - kTailCut, v, p, OrbitKind::HeteroclinicToOne);
    left.shift_x(-left.x_back());
    SteadyProfile::Piece pl;
    pl.x_lo = left.x_front();
    pl.x_hi = 0.0;
    pl.kind = SteadyProfile::PieceKind::Tabulated;
    pl.tab = std::move(left);
    prof.pieces.push_back(std::move(pl));

    SteadyProfile::Piece pg;
    pg.x_lo = 0.0;
    pg.x_hi = L;
    pg.kind = SteadyProfile::PieceKind::Exponential;
    pg.A = gm->A;
    pg.B = gm->B;
    prof.pieces.push_back(pg);

    const double w_start = (std::abs(w - b) <= 1e-9) ? b : w;
    TabulatedBranch right = quadrature_branch(w_start, kTailCut, p, OrbitKind::HomoclinicAtZero);
    right.shift_x(L);
    SteadyProfile::Piece pr;
    pr.x_lo = L;
    pr.x_hi = right.x_back();
    pr.kind = SteadyProfile::PieceKind::Tabulated;
    pr.tab = std::move(right);
    prof.pieces.push_back(std::move(pr));
    return prof;
}

SteadyProfile symmetric_profile(double L, const KineticsParams& p) {
    const Classification cls = classify(p);
    if (cls.kind != StabilityKind::Bistable || !(cls.F1 > 0.0))
        throw std::domain_error("symmetric_profile: requires bistable kinetics with positive F(1)");
    if (!(L >= 0.0)) throw std::domain_error("symmetric_profile: L must be >= 0");

    SteadyProfile prof;
    prof.left_limit = 1.0;
    prof.right_limit = 1.0;
    prof.monotone = false;
    prof.gaps = {{0.0, L}};

    auto make_constant_one = [&]() {
        SteadyProfile::Piece pc;
        pc.x_lo = -1.0;
        pc.x_hi = 1.0;
        pc.kind = SteadyProfile::PieceKind::Constant;
        pc.c0 = 1.0;
        prof.pieces.push_back(pc);
        return prof;
    };
    if (L < 1e-12) {
        prof.gaps.clear();
        return make_constant_one();
    }

    // 0.5 z^2 tanh^2(L/2) = F(1) - F(z); the largest root in (0, 1] is the
    // branch continuous with z = 1 at L = 0 (tie-break when several exist).
    const double th = std::tanh(0.5 * L);
    auto hres = [&](double z) {
        return 0.5 * z * z * th * th - (cls.F1 - potential_F(z, p));
    };
    double z = 1.0;
    {
        const double step = 1e-3;
        double z1 = 1.0;
        double h1 = hres(z1);  // positive for L > 0
        bool found = false;
        while (z1 > 1e-6) {
            const double z0 = std::max(z1 - step, 1e-6);
            const double h0 = hres(z0);
            if (h0 == 0.0 || std::signbit(h0) != std::signbit(h1)) {
                z = bisect_root(hres, z0, z1, 1e-15);
                found = true;
                break;
            }
            z1 = z0;
            h1 = h0;
        }
        if (!found) throw std::runtime_error("symmetric_profile: no matching root for z");
    }
    if (z >= 1.0 - 1e-9) return make_constant_one();

    const double Ac = z / (2.0 * std::cosh(0.5 * L));
    TabulatedBranch left = quadrature_branch(1.0 - kTailCut, z, p, OrbitKind::HeteroclinicToOne);
    left.shift_x(-left.x_back());

    SteadyProfile::Piece pl;
    pl.x_lo = left.x_front();
    pl.x_hi = 0.0;
    pl.kind = SteadyProfile::PieceKind::Tabulated;
    pl.tab = left;  // keep a copy; the mirror reuses the node data
    prof.pieces.push_back(std::move(pl));

    SteadyProfile::Piece pg;
    pg.x_lo = 0.0;
    pg.x_hi = L;
    pg.kind = SteadyProfile::PieceKind::Exponential;
    pg.A = Ac * std::exp(0.5 * L);   // 2 Ac cosh(x - L/2)
    pg.B = Ac * std::exp(-0.5 * L);
    prof.pieces.push_back(pg);

    TabulatedBranch right = left.mirrored(0.5 * L);
    SteadyProfile::Piece pr;
    pr.x_lo = L;
    pr.x_hi = right.x_back();
    pr.kind = SteadyProfile::PieceKind::Tabulated;
    pr.tab = std::move(right);
    prof.pieces.push_back(std::move(pr));
    return prof;
}

const char* to_string(SplitVerdict v) {
    return v == SplitVerdict::PropagationForced ? "PropagationForced" : "DeferToSimulation";
}

SplitVerdict double_gap_subsolution_check(double L1, double L2, double d,
                                          const KineticsParams& p) {
    if (!(L1 >= 0.0) || !(L2 >= 0.0) || !(d >= 0.0))
        throw std::domain_error("double_gap_subsolution_check: lengths must be nonnegative");
    const double Ls = critical_length(p);
    if (L1 + L2 >= Ls)
        throw std::domain_error("double_gap_subsolution_check: requires L1 + L2 < critical length");
    if (d > Ls - (L1 + L2) + 1e-12) return SplitVerdict::DeferToSimulation;

    // Confirm pointwise f_crit(x, s*) <= f_split(x, s*) on a fine grid:
    // where the two reactions differ the split problem has full reaction
    // and -s <= f(s) since alpha*g >= 0.
    const SteadyProfile sstar = build_blocking_profile(Ls, p);
    auto in = [](double x, double lo, double hi) { return x >= lo && x <= hi; };
    const int n = 4000;
    const double xa = -5.0, xb = Ls + 5.0;
    for (int i = 0; i <= n; ++i) {
        const double x = xa + (xb - xa) * i / n;
        const double s = sstar.value(x);
        const double f_crit = in(x, 0.0, Ls) ? -s : reaction_f(s, p);
        const double f_split =
            (in(x, 0.0, L1) || in(x, L1 + d, L1 + L2 + d)) ? -s : reaction_f(s, p);
        if (f_crit > f_split + 1e-12)
            throw std::runtime_error("double_gap_subsolution_check: pointwise inequality failed");
    }
    return SplitVerdict::PropagationForced;
}

}  // namespace crimewave
