#pragma once

// Sampling primitives for the compact constraint set N = {R = 0} on the
// unit sphere of eigenvalue triples. The zero set of R is a cone; its
// intersection with S^2 is a pair of smooth circles, so Newton projection
// along the spherical gradient of R converges quadratically from generic
// starts.

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "zsc/errors.hpp"
#include "zsc/invariants.hpp"

namespace zsc {

using Vec3 = Eigen::Vector3d;

inline Eigenvalues to_eigenvalues(const Vec3& x) { return {x[0], x[1], x[2]}; }

inline double r_of(const Vec3& x) { return x[0] * x[1] + x[0] * x[2] + x[1] * x[2]; }

inline Vec3 grad_r(const Vec3& x) {
    const double s = x.sum();
    return Vec3(s - x[0], s - x[1], s - x[2]);
}

// Gradient of R restricted to the sphere at a unit vector x.
inline Vec3 sphere_grad_r(const Vec3& x) {
    const Vec3 g = grad_r(x);
    return g - g.dot(x) * x;
}

// Project a unit vector onto {R = 0} along the spherical gradient of R,
// renormalizing each step (R is homogeneous, so normalization preserves
// the constraint). Returns nullopt if the iteration stalls, which only
// happens from starts at critical points of R|_{S^2}.
inline std::optional<Vec3> project_onto_r0(Vec3 x, double tol = 1e-13, int max_iter = 80) {
    x.normalize();
    for (int it = 0; it < max_iter; ++it) {
        const double r = r_of(x);
        if (std::abs(r) <= tol) return x;
        Vec3 g = sphere_grad_r(x);
        double g2 = g.squaredNorm();
        if (g2 < 1e-14) {
            // critical point of R|_{S^2}; nudge in a non-radial direction
            const Vec3 axis = Vec3(1.0, 1.0, 1.0).normalized();
            const Vec3 d = std::abs(x.dot(axis)) < 0.9 ? axis : Vec3(1.0, -1.0, 0.0).normalized();
            x = (x + 0.25 * d).normalized();
            g = sphere_grad_r(x);
            g2 = g.squaredNorm();
        }
        x = (x - (r / g2) * g).normalized();
    }
    return std::nullopt;
}

// Unit tangent of the constraint curve {|x| = 1, R = 0} at a point of it.
inline Vec3 curve_tangent(const Vec3& x) {
    const Vec3 g = sphere_grad_r(x);
    return x.cross(g).normalized();
}

// Quasi-uniform spherical Fibonacci lattice.
inline std::vector<Vec3> fibonacci_sphere(int n) {
    std::vector<Vec3> pts;
    pts.reserve(n);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / n;
        const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        pts.emplace_back(rad * std::cos(phi), rad * std::sin(phi), z);
    }
    return pts;
}

// A point of {R = 0} on S^2 together with its curvature invariants.
struct ConstraintSample {
    Vec3 point;                      // unit vector, R(point) = 0 to 1e-12
    CurvatureInvariants invariants;  // of the orientation-normalized triple
};

inline ConstraintSample make_constraint_sample(const Vec3& x) {
    return {x, invariants_from_eigenvalues(normalize_orientation(to_eigenvalues(x)))};
}

// Pinching ratio -K/H^3 on the constraint curve. Even under x -> -x, so no
// orientation flip is needed; H = 0 only at isolated off-curve points.
inline double curve_pinching(const Vec3& x) {
    const double h = x.sum();
    return -x[0] * x[1] * x[2] / (h * h * h);
}

// Projected lattice points of the constraint curve (both circles).
inline std::vector<Vec3> dense_constraint_points(int n) {
    std::vector<Vec3> out;
    out.reserve(n);
    for (const Vec3& p : fibonacci_sphere(n))
        if (auto proj = project_onto_r0(p)) out.push_back(*proj);
    return out;
}

}  // namespace zsc
