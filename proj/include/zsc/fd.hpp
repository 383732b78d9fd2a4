#pragma once

// Finite differences on chart parameters with boundary-aware stencils.
// Central stencils are used wherever the domain leaves room, one-sided
// second-order stencils otherwise. A Richardson combination of two step
// sizes raises the order; it can be switched off to expose the plain
// O(h^2) truncation (used by convergence-order checks).

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include <Eigen/Dense>

namespace zsc {

using Vec3 = Eigen::Vector3d;

namespace fd {

struct Axis {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool periodic = false;  // periodic axes are treated as unbounded
};

struct Options {
    double step_scale = 1e-3;  // h = step_scale * max(1, |x|), per axis
    bool richardson = true;
};

inline double step_for(double x, const Axis& ax, double scale) {
    double h = scale * std::max(1.0, std::abs(x));
    if (!ax.periodic && std::isfinite(ax.lo) && std::isfinite(ax.hi))
        h = std::min(h, (ax.hi - ax.lo) / 8.0);
    return h;
}

namespace detail {

template <class F>
using result_t = std::decay_t<decltype(std::declval<F&>()(0.0))>;

// f is a 1-argument slice: offset along the axis -> value.
template <class F>
result_t<F> d1_central(F&& f, double h) {
    result_t<F> r = (f(h) - f(-h)) * (0.5 / h);
    return r;
}

template <class F>
result_t<F> d1_onesided(F&& f, double h, double sgn) {
    result_t<F> r = (f(0.0) * -3.0 + f(sgn * h) * 4.0 - f(2.0 * sgn * h)) * (sgn * 0.5 / h);
    return r;
}

template <class F>
result_t<F> d2_central(F&& f, double h) {
    result_t<F> r = (f(h) - f(0.0) * 2.0 + f(-h)) * (1.0 / (h * h));
    return r;
}

template <class F>
result_t<F> d2_onesided(F&& f, double h, double sgn) {
    result_t<F> r = (f(0.0) * 2.0 - f(sgn * h) * 5.0 + f(2.0 * sgn * h) * 4.0 - f(3.0 * sgn * h)) *
                    (1.0 / (h * h));
    return r;
}

template <class Fh>
auto richardson2(Fh&& stencil, double h) {
    // stencil(h) has error c*h^2 + O(h^3); combine h and h/2
    auto dh = stencil(h);
    auto dh2 = stencil(0.5 * h);
    std::decay_t<decltype(dh)> r = (dh2 * 4.0 - dh) * (1.0 / 3.0);
    return r;
}

}  // namespace detail

// First derivative of f along `axis` at x.
template <class F>
auto d1(F&& f, const Vec3& x, int axis, const Axis& ax, const Options& o = {}) {
    const double h = step_for(x[axis], ax, o.step_scale);
    auto slice = [&](double dx) {
        Vec3 y = x;
        y[axis] += dx;
        return f(y);
    };
    const bool room_minus = ax.periodic || (x[axis] - h >= ax.lo);
    const bool room_plus = ax.periodic || (x[axis] + h <= ax.hi);
    if (room_minus && room_plus) {
        auto stencil = [&](double hh) { return detail::d1_central(slice, hh); };
        return o.richardson ? detail::richardson2(stencil, h) : stencil(h);
    }
    const double sgn = room_plus ? 1.0 : -1.0;
    auto stencil = [&](double hh) { return detail::d1_onesided(slice, hh, sgn); };
    return o.richardson ? detail::richardson2(stencil, h) : stencil(h);
}

// Second derivative of f along `axis` at x.
template <class F>
auto d2(F&& f, const Vec3& x, int axis, const Axis& ax, const Options& o = {}) {
    const double h = step_for(x[axis], ax, o.step_scale);
    auto slice = [&](double dx) {
        Vec3 y = x;
        y[axis] += dx;
        return f(y);
    };
    const bool room_minus = ax.periodic || (x[axis] - h >= ax.lo);
    const bool room_plus = ax.periodic || (x[axis] + h <= ax.hi);
    if (room_minus && room_plus) {
        auto stencil = [&](double hh) { return detail::d2_central(slice, hh); };
        return o.richardson ? detail::richardson2(stencil, h) : stencil(h);
    }
    const double sgn = room_plus ? 1.0 : -1.0;
    auto stencil = [&](double hh) { return detail::d2_onesided(slice, hh, sgn); };
    return o.richardson ? detail::richardson2(stencil, h) : stencil(h);
}

// Mixed second derivative along two distinct axes. Central cross stencil
// in the interior; nested one-sided first derivatives near boundaries.
template <class F>
auto dmixed(F&& f, const Vec3& x, int ai, int aj, const Axis& axi, const Axis& axj,
            const Options& o = {}) {
    const double hi = step_for(x[ai], axi, o.step_scale);
    const double hj = step_for(x[aj], axj, o.step_scale);
    const bool room_i = axi.periodic || (x[ai] - hi >= axi.lo && x[ai] + hi <= axi.hi);
    const bool room_j = axj.periodic || (x[aj] - hj >= axj.lo && x[aj] + hj <= axj.hi);
    if (room_i && room_j) {
        auto stencil = [&](double s) {
            Vec3 pp = x, pm = x, mp = x, mm = x;
            pp[ai] += s * hi; pp[aj] += s * hj;
            pm[ai] += s * hi; pm[aj] -= s * hj;
            mp[ai] -= s * hi; mp[aj] += s * hj;
            mm[ai] -= s * hi; mm[aj] -= s * hj;
            std::decay_t<decltype(f(x))> r =
                (f(pp) - f(pm) - f(mp) + f(mm)) * (1.0 / (4.0 * s * s * hi * hj));
            return r;
        };
        if (!o.richardson) return stencil(1.0);
        auto dh = stencil(1.0);
        auto dh2 = stencil(0.5);
        std::decay_t<decltype(dh)> r = (dh2 * 4.0 - dh) * (1.0 / 3.0);
        return r;
    }
    auto inner = [&](const Vec3& y) { return d1(f, y, aj, axj, o); };
    return d1(inner, x, ai, axi, o);
}

}  // namespace fd
}  // namespace zsc
