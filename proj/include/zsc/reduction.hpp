#pragma once

// Symmetry-reduced integration over intrinsic balls. Rotational models
// reduce to one dimension in the profile parameter; flat product models
// reduce to nested one-dimensional integrals over spherical shells
// (radius rho) and the curve coordinate (arc s), using the slab area
// element dA = 2 pi rho ds of the Euclidean sphere.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "zsc/errors.hpp"
#include "zsc/models.hpp"
#include "zsc/quadrature.hpp"

namespace zsc {

// Closed-form curvature data along the reduction coordinate.
struct RadialCurvatures {
    double h = 0.0;              // mean curvature
    double k_gauss = 0.0;        // Gauss-Kronecker curvature
    double norm_a = 0.0;         // |A|
    double lambda_radial = 0.0;  // principal curvature of the radial direction
};

namespace reduction {

inline RadialCurvatures rotational_curvatures(const RotationalModel& rm, double t) {
    const double ls = rm.lambda_sphere(t);
    const double lm = rm.lambda_meridian(t);
    RadialCurvatures c;
    c.h = 2.0 * ls + lm;
    c.k_gauss = ls * ls * lm;
    c.norm_a = std::sqrt(2.0 * ls * ls + lm * lm);
    c.lambda_radial = lm;
    return c;
}

// Curve curvature as a function of arc length for the product models.
inline double product_k_of_arc(const ImmersionModel& m, double s) {
    if (m.kind() == ModelKind::cylinder) return static_cast<const CylinderModel&>(m).k();
    const auto& gm = static_cast<const GraphModel&>(m);
    return gm.curve_curvature(gm.t_of_arc(s));
}

// Reachable arc interval of the curve coordinate.
inline std::array<double, 2> product_s_range(const ImmersionModel& m) {
    if (m.kind() == ModelKind::cylinder) {
        const double half = 0.5 * static_cast<const CylinderModel&>(m).circumference();
        return {-half, half};
    }
    return static_cast<const GraphModel&>(m).arc_range();
}

// Margin of the flat (u, v) box around the base; infinite for cylinders.
inline double product_uv_margin(const ImmersionModel& m) {
    if (m.kind() == ModelKind::cylinder) return std::numeric_limits<double>::infinity();
    const auto& ax = m.axes();
    return std::min(std::min(-ax[0].lo, ax[0].hi), std::min(-ax[1].lo, ax[1].hi));
}

// Ensure the ball B_R about the base point lies inside the chart.
inline void require_ball_in_domain(const ImmersionModel& m, double radius) {
    if (m.kind() == ModelKind::rotational) {
        const auto& rm = static_cast<const RotationalModel&>(m);
        if (radius > rm.s_reach())
            throw DomainExceeded("ball exceeds the rotational chart's arc reach");
        return;
    }
    if (m.kind() == ModelKind::cylinder) return;  // u, v unbounded, arc wraps
    const auto sr = product_s_range(m);
    if (radius > product_uv_margin(m) || radius > -sr[0] || radius > sr[1])
        throw DomainExceeded("ball exceeds the graph chart box");
}

// Integrate fn(t) * dM over B_R of a rotational model; sbreaks are
// integrand kinks expressed in the arc coordinate. A geometric ladder of
// initial panels keeps the integrator's first-pass magnitude estimate
// honest when the integrand concentrates near t = 0 on a huge range.
template <class F>
QuadResult integrate_ball_rotational(const RotationalModel& rm, double radius, F&& fn,
                                     const std::vector<double>& sbreaks = {},
                                     double rel_tol = 1e-8) {
    const double t_hi = rm.t_of_s(radius);
    QuadOptions opts;
    opts.rel_tol = rel_tol;
    for (double s : sbreaks)
        if (s > 0.0 && s < radius) opts.breakpoints.push_back(rm.t_of_s(s));
    for (double t = 1.0; t < t_hi; t *= 2.0) opts.breakpoints.push_back(t);
    return integrate([&](double t) { return fn(t) * rm.weight(t); }, 0.0, t_hi, opts);
}

// Integrate fn(s, rho) * dM over B_R of a flat product model, via
// spherical shells; rbreaks are kinks in rho.
template <class F>
QuadResult integrate_ball_product(const ImmersionModel& m, double radius, F&& fn,
                                  const std::vector<double>& rbreaks = {},
                                  double rel_tol = 1e-8) {
    const auto sr = product_s_range(m);
    QuadOptions outer;
    outer.rel_tol = rel_tol;
    outer.breakpoints = rbreaks;
    if (-sr[0] < radius) outer.breakpoints.push_back(-sr[0]);
    if (sr[1] < radius) outer.breakpoints.push_back(sr[1]);

    QuadResult out;
    auto shell = [&](double rho) {
        const double lo = std::max(-rho, sr[0]);
        const double hi = std::min(rho, sr[1]);
        if (!(hi > lo)) return 0.0;
        QuadOptions inner;
        inner.rel_tol = 0.1 * rel_tol;
        const auto res = integrate([&](double s) { return fn(s, rho); }, lo, hi, inner);
        return 2.0 * std::numbers::pi * rho * res.value;
    };
    const auto res = integrate(shell, 0.0, radius, outer);
    out = res;
    return out;
}

// Integrate fn(s) over the ball using the closed-form disk area of the
// flat factor (for integrands independent of rho).
template <class F>
QuadResult integrate_ball_product_s(const ImmersionModel& m, double radius, F&& fn,
                                    const std::vector<double>& sbreaks = {},
                                    double rel_tol = 1e-8) {
    const auto sr = product_s_range(m);
    const double lo = std::max(-radius, sr[0]);
    const double hi = std::min(radius, sr[1]);
    QuadOptions opts;
    opts.rel_tol = rel_tol;
    opts.breakpoints = sbreaks;
    return integrate(
        [&](double s) { return fn(s) * std::numbers::pi * (radius * radius - s * s); }, lo, hi,
        opts);
}

}  // namespace reduction
}  // namespace zsc
