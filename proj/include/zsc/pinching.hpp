#pragma once

// Constrained optimization on {R = 0} on S^2 and the pinching-constant
// chain: the 4/27 bound on -K/H^3, the eigenvalue-ratio maximum c0(c),
// and the window/constant bookkeeping C1, C2, C3, Lambda1, Lambda2.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "zsc/constraint_set.hpp"
#include "zsc/errors.hpp"
#include "zsc/invariants.hpp"

namespace zsc {

namespace detail {

// Euclidean gradient of F = -K/H^3.
inline Vec3 pinching_gradient(const Vec3& x) {
    const double h = x.sum();
    const double h3 = h * h * h;
    const double k = x[0] * x[1] * x[2];
    const Vec3 gk(x[1] * x[2], x[0] * x[2], x[0] * x[1]);
    return -gk / h3 + (3.0 * k / (h3 * h)) * Vec3::Ones();
}

// One projected-ascent polish of F = -K/H^3 along the constraint curve.
// Phase 1 is backtracking gradient ascent; once value improvements fall
// below roundoff it switches to bisection on the projected gradient, whose
// analytic evaluation has no cancellation and reaches the 1e-12 tolerance.
struct PolishResult {
    Vec3 point;
    double value;
    double slope;   // projected gradient at exit
    bool converged;
};

inline Vec3 walk_curve(const Vec3& x, double alpha) {
    const auto y = project_onto_r0((x + alpha * curve_tangent(x)).normalized());
    return y ? *y : x;
}

inline double curve_slope(const Vec3& x) { return pinching_gradient(x).dot(curve_tangent(x)); }

inline PolishResult polish_pinching_max(Vec3 x, double grad_tol = 1e-12, int max_iter = 200) {
    double fx = curve_pinching(x);
    for (int it = 0; it < max_iter; ++it) {
        const double slope = curve_slope(x);
        if (std::abs(slope) <= grad_tol) return {x, fx, slope, true};
        const double dir = slope > 0 ? 1.0 : -1.0;
        double step = 0.25;
        bool moved = false;
        while (step > 1e-12) {
            const Vec3 cand = walk_curve(x, dir * step);
            const double fc = curve_pinching(cand);
            if (fc > fx + 1e-4 * step * std::abs(slope)) {
                x = cand;
                fx = fc;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;  // value noise floor reached; refine on the slope
    }

    // bracket a sign change of the projected gradient along the curve
    double s0 = curve_slope(x);
    if (std::abs(s0) <= grad_tol) return {x, curve_pinching(x), s0, true};
    const double dir = s0 > 0 ? 1.0 : -1.0;
    double hi = 1e-6;
    double s_hi = curve_slope(walk_curve(x, dir * hi));
    while (s_hi * s0 > 0 && hi < 0.2) {
        hi *= 2.0;
        s_hi = curve_slope(walk_curve(x, dir * hi));
    }
    if (s_hi * s0 > 0) return {x, curve_pinching(x), s0, false};
    double lo = 0.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Vec3 xm = walk_curve(x, dir * mid);
        const double sm = curve_slope(xm);
        if (std::abs(sm) <= grad_tol) return {xm, curve_pinching(xm), sm, true};
        if (sm * s0 > 0)
            lo = mid;
        else
            hi = mid;
    }
    const Vec3 xf = walk_curve(x, dir * 0.5 * (lo + hi));
    const double sf = curve_slope(xf);
    return {xf, curve_pinching(xf), sf, std::abs(sf) <= grad_tol};
}

}  // namespace detail

// Refined maximizers of -K/H^3 on the constraint curve, one per multi-start
// basin. There are three on each circle (a sign-and-permutation orbit of
// (2,2,-1)/3), so a handful of spread starts finds them all.
inline std::vector<Vec3> pinching_maximizers(int starts = 16) {
    starts = std::max(starts, 16);
    std::vector<Vec3> pts = dense_constraint_points(200 * starts);
    std::sort(pts.begin(), pts.end(),
              [](const Vec3& a, const Vec3& b) { return curve_pinching(a) > curve_pinching(b); });
    std::vector<Vec3> seeds;
    for (const Vec3& p : pts) {
        bool close = false;
        for (const Vec3& s : seeds)
            if ((p - s).norm() < 0.2 || (p + s).norm() < 0.2) { close = true; break; }
        if (!close) seeds.push_back(p);
        if (static_cast<int>(seeds.size()) >= starts) break;
    }
    std::vector<Vec3> out;
    for (const Vec3& s : seeds) {
        const auto r = detail::polish_pinching_max(s);
        if (!r.converged) continue;
        bool dup = false;
        for (const Vec3& m : out)
            if ((m - r.point).norm() < 1e-6 || (m + r.point).norm() < 1e-6) { dup = true; break; }
        if (!dup && r.value > kMaxPinching - 1e-6) out.push_back(r.point);
    }
    return out;
}

struct PinchingMaximum {
    double value;
    Vec3 argmax;
};

// Multi-start constrained maximization of -K/H^3 over {R=0} on S^2:
// dense sampling followed by projected-gradient polish with backtracking,
// tolerance 1e-12 on the projected gradient. Tie-break: first-found among
// values within 1e-12.
inline PinchingMaximum max_pinching_ratio(int starts = 16, int dense_n = 20000) {
    starts = std::max(starts, 16);
    std::vector<Vec3> pts = dense_constraint_points(std::max(dense_n, 10000));
    std::sort(pts.begin(), pts.end(),
              [](const Vec3& a, const Vec3& b) { return curve_pinching(a) > curve_pinching(b); });
    std::vector<Vec3> seeds;
    for (const Vec3& p : pts) {
        bool close = false;
        for (const Vec3& s : seeds)
            if ((p - s).norm() < 0.2 || (p + s).norm() < 0.2) { close = true; break; }
        if (!close) seeds.push_back(p);
        if (static_cast<int>(seeds.size()) >= starts) break;
    }
    bool any = false;
    PinchingMaximum best{-1.0, Vec3::Zero()};
    double worst_slope = 0.0;
    for (const Vec3& s : seeds) {
        const auto r = detail::polish_pinching_max(s);
        worst_slope = std::max(worst_slope, std::abs(r.slope));
        if (!r.converged) continue;
        any = true;
        if (r.value > best.value + 1e-12) best = {r.value, r.point};
    }
    if (!any) {
        std::ostringstream msg;
        msg << "max_pinching_ratio: no start met the gradient tolerance (worst residual slope "
            << worst_slope << ")";
        throw OptimizerDidNotConverge(msg.str());
    }
    return best;
}

// Polish of -K/H^3 from a caller-chosen start (used to demonstrate escape
// from the K = 0 saddle neighborhoods).
inline PinchingMaximum max_pinching_from(const Vec3& start) {
    const auto proj = project_onto_r0(start);
    if (!proj) throw OptimizerDidNotConverge("max_pinching_from: start did not project onto R=0");
    const auto r = detail::polish_pinching_max(*proj);
    return {r.value, r.point};
}

// Largest squared ratio of P1 eigenvalues, g(x) = max_{i != j} ((H-l_i)/(H-l_j))^2.
inline double g_ratio_max(const Vec3& x) {
    const auto spec = p1_spectrum(normalize_orientation(to_eigenvalues(x)));
    double best = 1.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            const double r = spec[i] / spec[j];
            best = std::max(best, r * r);
        }
    return best;
}

namespace detail {

// Bisect along the constraint curve between points a (pinching >= c) and
// b (pinching < c) to the level set {pinching = c}.
inline Vec3 bisect_to_level(Vec3 a, Vec3 b, double c, int iters = 80) {
    for (int it = 0; it < iters; ++it) {
        const auto mid = project_onto_r0((a + b).normalized());
        if (!mid) break;
        if (curve_pinching(*mid) >= c)
            a = *mid;
        else
            b = *mid;
        if ((a - b).norm() < 1e-15) break;
    }
    return a;
}

// Hill-climb g along the curve from a start, staying inside {pinching >= c}.
inline double climb_g(Vec3 x, double c, int max_iter = 200) {
    double gx = g_ratio_max(x);
    double step = 1e-3;
    for (int it = 0; it < max_iter && step > 1e-12; ++it) {
        bool moved = false;
        const Vec3 tang = curve_tangent(x);
        for (const double sgn : {1.0, -1.0}) {
            const auto cand = project_onto_r0((x + sgn * step * tang).normalized());
            if (!cand || curve_pinching(*cand) < c) continue;
            const double gc = g_ratio_max(*cand);
            if (gc > gx) {
                x = *cand;
                gx = gc;
                moved = true;
                break;
            }
        }
        if (!moved) step *= 0.5;
    }
    return gx;
}

}  // namespace detail

// c0(c): maximum over {x in N : pinching(x) >= c} of the squared P1
// eigenvalue ratios. Dense sampling plus boundary bisection plus local
// climbing; monotone non-increasing in c. The ratios blow up as c -> 0+
// because the feasible set then reaches the K = 0 points where a P1
// eigenvalue vanishes.
inline double c0_of_c(double c, int dense_n = 30000) {
    if (!(c > 0.0) || c > kMaxPinching + 1e-12)
        throw DomainError("c0_of_c: pinching floor must lie in (0, 4/27]");

    const auto maxima = pinching_maximizers(16);
    double fmax = 0.0;
    for (const Vec3& m : maxima) fmax = std::max(fmax, curve_pinching(m));

    double best = 1.0;
    for (const Vec3& m : maxima)
        if (curve_pinching(m) >= c - 1e-12) best = std::max(best, g_ratio_max(m));

    if (c >= fmax - 1e-12) {
        // feasible set collapses to the maximizer orbit
        return best;
    }

    // order curve points by circle and angle so neighbors are adjacent
    std::vector<Vec3> pts = dense_constraint_points(std::max(dense_n, 10000));
    const Vec3 axis = Vec3(1.0, 1.0, 1.0).normalized();
    const Vec3 u = Vec3(1.0, -1.0, 0.0).normalized();
    const Vec3 v = axis.cross(u);
    auto angle_key = [&](const Vec3& p) {
        const double side = p.sum() > 0 ? 0.0 : 10.0;
        return side + std::atan2(p.dot(v), p.dot(u));
    };
    std::sort(pts.begin(), pts.end(),
              [&](const Vec3& a, const Vec3& b) { return angle_key(a) < angle_key(b); });

    std::vector<Vec3> interior;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec3& a = pts[i];
        const Vec3& b = pts[(i + 1) % pts.size()];
        const bool fa = curve_pinching(a) >= c;
        const bool fb = curve_pinching(b) >= c;
        if (fa) {
            interior.push_back(a);
            best = std::max(best, g_ratio_max(a));
        }
        if (fa != fb && (a - b).norm() < 0.5) {
            const Vec3 edge = fa ? detail::bisect_to_level(a, b, c) : detail::bisect_to_level(b, a, c);
            best = std::max(best, g_ratio_max(edge));
        }
    }

    // local climb from the best interior candidates
    std::sort(interior.begin(), interior.end(),
              [](const Vec3& a, const Vec3& b) { return g_ratio_max(a) > g_ratio_max(b); });
    for (std::size_t i = 0; i < std::min<std::size_t>(interior.size(), 8); ++i)
        best = std::max(best, detail::climb_g(interior[i], c));

    return best;
}

// Full constant chain of the curvature-estimate machinery.
struct PinchingConstants {
    double c = 0.0;           // pinching floor
    double c0 = 0.0;          // max of the squared P1 eigenvalue ratios on the floor set
    int c0_exponent = 2;      // exponent e in the weight 1 + 2*c0^e
    double q = 0.0;
    double q_max = 0.0;       // open upper end of the q window
    double beta = 0.0;
    double beta_max = 0.0;    // open upper end of the beta window
    double C1 = 0.0, C2 = 0.0, C3 = 0.0;
    double Lambda1 = 0.0, Lambda2 = 0.0;
    double p = 0.0;           // 2p = 5 + 2q
    std::optional<double> delta;  // free Young's-inequality parameter, stored alongside
};

inline double c0_weight(double c0, int exponent) {
    return 1.0 + 2.0 * std::pow(c0, exponent);
}

// Admissible window (0, beta_max) for beta given q and c0.
inline double beta_window_max(double q, double c0, int c0_exponent = 2) {
    if (!(c0 >= 1.0)) throw DomainError("beta_window: c0 must be >= 1");
    const double w = 1.0 / c0_weight(c0, c0_exponent);
    if (!(q > 0.0) || !(q < std::sqrt(w)))
        throw DomainError("beta_window: q outside (0, sqrt(1/(1+2 c0^e)))");
    return (w - q * q) / (q + 2.0);
}

// Constants C1..C3, Lambda1, Lambda2 from (c0, q, beta). The beta window
// is exactly what makes C1 < 1.
inline PinchingConstants constants_from_c0(double c, double c0, double q,
                                           std::optional<double> beta_in = std::nullopt,
                                           int c0_exponent = 2) {
    PinchingConstants k;
    k.c = c;
    k.c0 = c0;
    k.c0_exponent = c0_exponent;
    const double w = 1.0 / c0_weight(c0, c0_exponent);
    k.q_max = std::sqrt(w);
    k.beta_max = beta_window_max(q, c0, c0_exponent);  // validates q
    k.q = q;
    k.beta = beta_in.value_or(0.5 * k.beta_max);
    if (!(k.beta > 0.0) || !(k.beta < k.beta_max))
        throw DomainError("constants: beta outside (0, beta_max)");

    const double denom = 1.0 + w + 2.0 * q - k.beta;
    const double qa = (1.0 + q) * (1.0 + q) + k.beta * (1.0 + q);
    k.C1 = qa / denom;
    k.C2 = 1.0 + (1.0 + q) / k.beta + qa / (k.beta * denom);
    k.C3 = 2.0 * k.C2 / (3.0 * (1.0 - k.C1));
    k.p = 0.5 * (5.0 + 2.0 * q);
    k.Lambda1 = (3.0 + 2.0 * q) / (5.0 + 2.0 * q) * k.p * k.p * k.C3;
    k.Lambda2 = 2.0 * k.p * k.p / (5.0 + 2.0 * q) * k.C3;
    return k;
}

// Evaluate the whole chain from the pinching floor.
inline PinchingConstants proposition_constants(double c, double q,
                                               std::optional<double> beta = std::nullopt,
                                               int c0_exponent = 2, int dense_n = 30000) {
    const double c0 = c0_of_c(c, dense_n);
    return constants_from_c0(c, c0, q, beta, c0_exponent);
}

// Largest delta keeping the pinching margin c - Lambda1 * delta^{(5+2q)/(3+2q)}
// positive.
inline double delta_margin_max(const PinchingConstants& k) {
    const double e = (5.0 + 2.0 * k.q) / (3.0 + 2.0 * k.q);
    return std::pow(k.c / k.Lambda1, 1.0 / e);
}

// Window (5/2, 5/2 + sqrt(1/(1+2 c0^e))) for the exponent p of the
// Sobolev-type inequality in |A|.
inline std::array<double, 2> sobolev_p_window(double c0, int c0_exponent = 2) {
    const double w = 1.0 / c0_weight(c0, c0_exponent);
    return {2.5, 2.5 + std::sqrt(w)};
}

// Sample {R = 0} on S^2 from an n-point Fibonacci lattice. If c_floor is
// given the result is filtered to pinching >= c_floor (with a 1e-9 slack);
// when the floor touches the supremum 4/27 the surviving points are the
// refined maximizers themselves.
inline std::vector<ConstraintSample> sample_constraint_set(
    int n, std::optional<double> c_floor = std::nullopt) {
    if (n < 8) throw DomainError("sample_constraint_set: grid resolution must be >= 8");
    constexpr double kSlack = 1e-9;
    if (c_floor && *c_floor > kMaxPinching + kSlack)
        throw EmptyConstraintSet("sample_constraint_set: pinching floor exceeds 4/27");

    std::vector<ConstraintSample> out;
    out.reserve(n);
    for (const Vec3& p : dense_constraint_points(n)) {
        if (c_floor && curve_pinching(p) < *c_floor - kSlack) continue;
        out.push_back(make_constraint_sample(p));
    }
    if (c_floor && out.empty()) {
        for (const Vec3& m : pinching_maximizers(16))
            if (curve_pinching(m) >= *c_floor - kSlack) out.push_back(make_constraint_sample(m));
    }
    if (out.empty()) throw EmptyConstraintSet("sample_constraint_set: no feasible samples");
    return out;
}

}  // namespace zsc
