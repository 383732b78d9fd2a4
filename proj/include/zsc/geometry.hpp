#pragma once

// Intrinsic radii, geodesic-ball volumes and volume-growth exponents via
// the symmetry reduction of each catalog model. Rotational models use the
// profile arc length from the t = 0 slice; cylinder/graph models are flat
// products, where the radius is a Pythagorean combination of the plane
// offset and the curve arc length.

#include <cmath>
#include <numbers>
#include <vector>

#include "zsc/errors.hpp"
#include "zsc/models.hpp"
#include "zsc/quadrature.hpp"

namespace zsc {

// Intrinsic distance from the model's base point, by symmetry reduction.
inline double geodesic_radius(const ImmersionModel& m, const Vec3& p) {
    if (!m.in_domain(p)) throw DomainError("geodesic_radius: parameters outside domain");
    switch (m.kind()) {
        case ModelKind::rotational: {
            const auto& rm = static_cast<const RotationalModel&>(m);
            return rm.s_of_t(p[0]);
        }
        case ModelKind::cylinder: {
            const auto& cm = static_cast<const CylinderModel&>(m);
            const double s = cm.arc_from_base(p[2]);
            return std::sqrt(p[0] * p[0] + p[1] * p[1] + s * s);
        }
        default: {
            const auto& gm = static_cast<const GraphModel&>(m);
            const double s = gm.arc_from_base(p[2]);
            return std::sqrt(p[0] * p[0] + p[1] * p[1] + s * s);
        }
    }
}

namespace geo_detail {

// Reach of the arc coordinate and of the flat factor; used for domain
// containment checks of intrinsic balls.
inline void product_ranges(const ImmersionModel& m, double& s_lo, double& s_hi,
                           double& uv_margin) {
    if (m.kind() == ModelKind::cylinder) {
        const auto& cm = static_cast<const CylinderModel&>(m);
        s_hi = 0.5 * cm.circumference();
        s_lo = -s_hi;
        uv_margin = std::numeric_limits<double>::infinity();
        return;
    }
    const auto& gm = static_cast<const GraphModel&>(m);
    const auto r = gm.arc_range();
    s_lo = r[0];
    s_hi = r[1];
    const auto& ax = gm.axes();
    uv_margin = std::min(std::min(-ax[0].lo, ax[0].hi), std::min(-ax[1].lo, ax[1].hi));
}

}  // namespace geo_detail

// Volume of the intrinsic ball B_r about the base point.
inline double ball_volume(const ImmersionModel& m, double r, double rel_tol = 1e-8) {
    if (!(r > 0.0)) throw DomainError("ball_volume: radius must be positive");
    QuadOptions opts;
    opts.rel_tol = rel_tol;
    switch (m.kind()) {
        case ModelKind::rotational: {
            const auto& rm = static_cast<const RotationalModel&>(m);
            if (r > rm.s_reach())
                throw DomainExceeded("ball_volume: radius exceeds the profile arc reach");
            const double t_r = rm.t_of_s(r);
            return integrate([&](double t) { return rm.weight(t); }, 0.0, t_r, opts).value;
        }
        case ModelKind::cylinder: {
            double s_lo, s_hi, margin;
            geo_detail::product_ranges(m, s_lo, s_hi, margin);
            const double a = std::max(-r, s_lo), b = std::min(r, s_hi);
            return integrate([&](double s) { return std::numbers::pi * (r * r - s * s); }, a, b,
                             opts)
                .value;
        }
        default: {
            double s_lo, s_hi, margin;
            geo_detail::product_ranges(m, s_lo, s_hi, margin);
            if (r > margin || r > -s_lo || r > s_hi)
                throw DomainExceeded("ball_volume: ball is not contained in the chart box");
            return integrate([&](double s) { return std::numbers::pi * (r * r - s * s); }, -r, r,
                             opts)
                .value;
        }
    }
}

struct GrowthFit {
    double alpha = 0.0;
    double stderr_alpha = 0.0;
    std::vector<double> volumes;
};

// Least-squares slope of log vol(B_r) against log r.
inline GrowthFit growth_exponent(const ImmersionModel& m, const std::vector<double>& r_list) {
    if (r_list.size() < 4) throw DomainError("growth_exponent: need at least 4 radii");
    for (std::size_t i = 1; i < r_list.size(); ++i)
        if (!(r_list[i] > r_list[i - 1]))
            throw DomainError("growth_exponent: radii must be increasing");

    GrowthFit fit;
    std::vector<double> xs, ys;
    for (double r : r_list) {
        const double v = ball_volume(m, r);
        fit.volumes.push_back(v);
        xs.push_back(std::log(r));
        ys.push_back(std::log(v));
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    fit.alpha = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double pred = my + fit.alpha * (xs[i] - mx);
        ss_res += (ys[i] - pred) * (ys[i] - pred);
    }
    fit.stderr_alpha = xs.size() > 2 ? std::sqrt(ss_res / (n - 2.0) / sxx) : 0.0;
    return fit;
}

// Path-length upper bound for the intrinsic distance between two points;
// exact for the flat product models, a meridian-plus-slice bound for
// rotational ones. Ambient distance never exceeds it.
inline double intrinsic_distance_bound(const ImmersionModel& m, const Vec3& p, const Vec3& q) {
    switch (m.kind()) {
        case ModelKind::rotational: {
            const auto& rm = static_cast<const RotationalModel&>(m);
            const double ds = std::abs(rm.s_of_t(p[0]) - rm.s_of_t(q[0]));
            auto dir = [](const Vec3& x) {
                return Vec3{std::sin(x[1]) * std::cos(x[2]), std::sin(x[1]) * std::sin(x[2]),
                            std::cos(x[1])};
            };
            const double ang = std::acos(std::clamp(dir(p).dot(dir(q)), -1.0, 1.0));
            const double f_at = std::min(rm.profile().f(p[0]), rm.profile().f(q[0]));
            return ds + f_at * ang;
        }
        case ModelKind::cylinder: {
            const auto& cm = static_cast<const CylinderModel&>(m);
            const double L = cm.circumference();
            const double ds = std::abs(std::remainder((p[2] - q[2]) / cm.k(), L));
            return std::sqrt((p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]) +
                             ds * ds);
        }
        default: {
            const auto& gm = static_cast<const GraphModel&>(m);
            const double ds = gm.arc_from_base(p[2]) - gm.arc_from_base(q[2]);
            return std::sqrt((p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]) +
                             ds * ds);
        }
    }
}

}  // namespace zsc
