#pragma once

// Chart-based differential geometry from position evaluations only: first
// and second fundamental forms, shape operator and its eigenvalues,
// Christoffel symbols, and the covariant derivative of the second form in
// an orthonormal frame. All derivatives are finite differences from
// fd.hpp; nothing here assumes closed-form curvatures, which makes the
// closed-form reductions of the model catalog usable as cross-checks.

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "zsc/errors.hpp"
#include "zsc/fd.hpp"
#include "zsc/invariants.hpp"
#include "zsc/models.hpp"

namespace zsc {

struct ChartSample {
    Vec3 params;
    Vec4 position;
    Vec4 normal;                          // oriented so H >= 0 where H != 0
    Eigen::Matrix3d metric;               // g_ij
    Eigen::Matrix3d second_form;          // b_ij
    Eigen::Matrix3d shape_operator;       // A = g^{-1} b
    Eigenvalues eigenvalues;              // ascending
    std::array<double, 27> christoffel{}; // Gamma^k_ij at [(k*3+i)*3+j]
    std::array<double, 27> gradA_frame{}; // h_abc (orthonormal frame) at [(a*3+b)*3+c]
    CurvatureInvariants invariants;
};

namespace chart_detail {

// Tangents by complex-step differentiation of the chart map: exact to
// machine precision, no subtractive cancellation.
inline Eigen::Matrix<double, 4, 3> tangents(const ImmersionModel& m, const Vec3& p) {
    constexpr double h = 1e-100;
    Eigen::Matrix<double, 4, 3> t;
    for (int i = 0; i < 3; ++i) {
        CVec3 z = p.cast<CScalar>();
        z[i] += CScalar(0.0, h);
        const CVec4 x = m.position_c(z);
        for (int mu = 0; mu < 4; ++mu) t(mu, i) = x[mu].imag() / h;
    }
    return t;
}

inline Eigen::Matrix3d metric_at(const ImmersionModel& m, const Vec3& p) {
    const auto t = tangents(m, p);
    return t.transpose() * t;
}

inline Vec4 raw_normal(const ImmersionModel& m, const Vec3& p) {
    const auto t = tangents(m, p);
    Vec4 n = cross4<double>(t.col(0), t.col(1), t.col(2));
    const double nn = n.norm();
    if (!(nn > 1e-14)) throw DegenerateChart("chart: tangents do not span a 3-plane");
    return n / nn;
}

struct PointForms {
    Eigen::Matrix3d g;
    Eigen::Matrix3d b;    // oriented so H >= 0
    Vec4 normal;
    Eigen::Matrix<double, 4, 3> tang;
};

// Second form from first derivatives of the unit normal (Weingarten):
// b_ij = <d_i d_j X, n> = -<T_i, d_j n> since <T_i, n> = 0. The normal is
// exact at every evaluation point, so one finite-difference level is the
// only error source here.
inline PointForms forms_at(const ImmersionModel& m, const Vec3& p, const fd::Options& o) {
    PointForms f;
    f.tang = tangents(m, p);
    f.g = f.tang.transpose() * f.tang;
    Vec4 n = cross4<double>(f.tang.col(0), f.tang.col(1), f.tang.col(2));
    const double nn = n.norm();
    if (!(nn > 1e-14)) throw DegenerateChart("chart: tangents do not span a 3-plane");
    n /= nn;

    auto n_fn = [&](const Vec3& y) { return raw_normal(m, y); };
    Eigen::Matrix<double, 4, 3> dn;
    for (int j = 0; j < 3; ++j) dn.col(j) = fd::d1(n_fn, p, j, m.axes()[j], o);

    Eigen::Matrix3d braw = -(f.tang.transpose() * dn);
    braw = 0.5 * (braw + braw.transpose()).eval();

    const double h_raw = f.g.ldlt().solve(braw).trace();
    const double flip = h_raw < 0.0 ? -1.0 : 1.0;
    f.b = flip * braw;
    f.normal = flip * n;
    return f;
}

inline double mean_curvature_at(const ImmersionModel& m, const Vec3& p, const fd::Options& o) {
    const auto f = forms_at(m, p, o);
    return f.g.ldlt().solve(f.b).trace();
}

// Components of an orthonormal frame: columns of E satisfy E^T g E = I.
inline Eigen::Matrix3d frame_of(const Eigen::Matrix3d& g) {
    const Eigen::Matrix3d l = g.llt().matrixL();
    return l.transpose().inverse();
}

}  // namespace chart_detail

inline ChartSample chart_sample(const ImmersionModel& m, const Vec3& p,
                                const fd::Options& opts = {}) {
    if (!m.in_domain(p)) throw DomainError("chart_sample: parameters outside the model domain");

    ChartSample s;
    s.params = p;
    s.position = m.position(p);

    const auto f = chart_detail::forms_at(m, p, opts);
    if (f.g.determinant() < 1e-14)
        throw DegenerateChart("chart_sample: metric determinant below 1e-14");
    s.metric = f.g;
    s.second_form = f.b;
    s.normal = f.normal;
    s.shape_operator = f.g.ldlt().solve(f.b);

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3d> es(f.b, f.g);
    if (es.info() != Eigen::Success)
        throw DegenerateChart("chart_sample: generalized eigensolver failed");
    s.eigenvalues = {es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]};
    s.invariants = invariants_from_eigenvalues(s.eigenvalues);

    // Christoffel symbols from metric derivatives
    std::array<Eigen::Matrix3d, 3> dg;
    auto metric_fn = [&](const Vec3& y) { return chart_detail::metric_at(m, y); };
    for (int l = 0; l < 3; ++l) dg[l] = fd::d1(metric_fn, p, l, m.axes()[l], opts);
    const Eigen::Matrix3d ginv = f.g.inverse();
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double acc = 0.0;
                for (int l = 0; l < 3; ++l)
                    acc += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                s.christoffel[(k * 3 + i) * 3 + j] = 0.5 * acc;
            }

    // covariant derivative of the second form, then orthonormal frame
    std::array<Eigen::Matrix3d, 3> db;
    auto b_fn = [&](const Vec3& y) { return chart_detail::forms_at(m, y, opts).b; };
    for (int k = 0; k < 3; ++k) db[k] = fd::d1(b_fn, p, k, m.axes()[k], opts);

    std::array<double, 27> t_cov{};
    auto gamma = [&](int k, int i, int j) { return s.christoffel[(k * 3 + i) * 3 + j]; };
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double acc = db[k](i, j);
                for (int l = 0; l < 3; ++l)
                    acc -= gamma(l, k, i) * f.b(l, j) + gamma(l, k, j) * f.b(i, l);
                t_cov[(i * 3 + j) * 3 + k] = acc;
            }

    const Eigen::Matrix3d e = chart_detail::frame_of(f.g);
    for (int a = 0; a < 3; ++a)
        for (int bb = 0; bb < 3; ++bb)
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        for (int k = 0; k < 3; ++k)
                            acc += t_cov[(i * 3 + j) * 3 + k] * e(i, a) * e(j, bb) * e(k, c);
                s.gradA_frame[(a * 3 + bb) * 3 + c] = acc;
            }

    return s;
}

// |grad A|^2 = sum of squared orthonormal-frame components of the
// covariant derivative of the second form.
inline double grad_a_norm2(const ChartSample& s) {
    double acc = 0.0;
    for (double h : s.gradA_frame) acc += h * h;
    return acc;
}

// Worst asymmetry of h_abc under index permutations; zero for immersions
// in flat ambient space up to finite-difference error.
inline double codazzi_asymmetry(const ChartSample& s) {
    auto h = [&](int a, int b, int c) { return s.gradA_frame[(a * 3 + b) * 3 + c]; };
    double worst = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                worst = std::max(worst, std::abs(h(a, b, c) - h(b, a, c)));
                worst = std::max(worst, std::abs(h(a, b, c) - h(a, c, b)));
            }
    return worst;
}

// Gradient of H in the orthonormal frame, and its squared norm.
inline Vec3 grad_h_frame(const ImmersionModel& m, const Vec3& p, const fd::Options& opts = {}) {
    auto h_fn = [&](const Vec3& y) { return chart_detail::mean_curvature_at(m, y, opts); };
    Vec3 dh;
    for (int i = 0; i < 3; ++i) dh[i] = fd::d1(h_fn, p, i, m.axes()[i], opts);
    const Eigen::Matrix3d e = chart_detail::frame_of(chart_detail::metric_at(m, p));
    return e.transpose() * dh;
}

inline double grad_h_norm2(const ImmersionModel& m, const Vec3& p, const fd::Options& opts = {}) {
    return grad_h_frame(m, p, opts).squaredNorm();
}

// Orthonormal-frame gradient of an arbitrary scalar chart function.
template <class F>
Vec3 frame_gradient(const ImmersionModel& m, const Vec3& p, F&& scalar,
                    const fd::Options& opts = {}) {
    Vec3 d;
    for (int i = 0; i < 3; ++i) d[i] = fd::d1(scalar, p, i, m.axes()[i], opts);
    const Eigen::Matrix3d e = chart_detail::frame_of(chart_detail::metric_at(m, p));
    return e.transpose() * d;
}

struct Prop21Report {
    Vec3 params;
    double grad_a2 = 0.0;     // |grad A|^2
    double grad_h2 = 0.0;     // |grad H|^2
    double lhs = 0.0;         // |grad A|^2 - |grad H|^2
    double rhs = 0.0;         // 2/(1+2 c0^2) |grad H|^2
    double margin = 0.0;      // lhs - rhs
    bool holds = false;
    double fd_budget = 0.0;
};

// Pointwise check of the gradient estimate
//   |grad A|^2 - |grad H|^2 >= 2/(1+2 c0^2) |grad H|^2
// on a zero-scalar-curvature sample.
inline Prop21Report verify_prop21_pointwise(const ImmersionModel& m, const Vec3& p, double c0,
                                            const fd::Options& opts = {},
                                            double fd_budget = 1e-5) {
    const auto s = chart_sample(m, p, opts);
    const double scale = std::max(1.0, s.invariants.normA2);
    if (std::abs(s.invariants.R) > 1e-6 * scale)
        throw NotApplicable("verify_prop21_pointwise: sample has R != 0");

    Prop21Report r;
    r.params = p;
    r.grad_a2 = grad_a_norm2(s);
    r.grad_h2 = grad_h_norm2(m, p, opts);
    r.lhs = r.grad_a2 - r.grad_h2;
    r.rhs = 2.0 / (1.0 + 2.0 * c0 * c0) * r.grad_h2;
    r.margin = r.lhs - r.rhs;
    r.fd_budget = fd_budget;
    r.holds = r.margin >= -fd_budget;
    return r;
}

namespace chart_detail {

// Distinguished axis along which H varies for the catalog models.
inline int radial_axis(const ImmersionModel& m) {
    switch (m.kind()) {
        case ModelKind::rotational: return 0;
        case ModelKind::cylinder: return 2;   // H is constant; any axis works
        default: return 2;
    }
}

}  // namespace chart_detail

struct L1IdentityReport {
    double l1h = 0.0;        // div(P1 grad H)
    double lhs = 0.0;        // -L1(H)
    double rhs = 0.0;        // |grad H|^2 - |grad A|^2 - 3 H K
    double residual = 0.0;   // relative to the identity's term scale
};

// Default steps for the L1 check. The divergence nests four difference
// levels (tangents -> normal derivative -> H derivative -> flux
// derivative), each of which divides the noise floor by the step, so the
// step sits well above the single-derivative default.
inline constexpr fd::Options kL1FdDefaults{2e-2, true};

// Check -L1(H) = |grad H|^2 - |grad A|^2 - 3 H K at a point, with the
// divergence reduced to the single chart axis along which H varies (the
// catalog charts are orthogonal and H is radial in them).
inline L1IdentityReport verify_l1_identity(const ImmersionModel& m, const Vec3& p,
                                           const fd::Options& opts = kL1FdDefaults) {
    const int ax = chart_detail::radial_axis(m);

    auto flux = [&](const Vec3& y) {
        const auto f = chart_detail::forms_at(m, y, opts);
        const Eigen::Matrix3d ginv = f.g.inverse();
        const Eigen::Matrix3d a = f.g.ldlt().solve(f.b);
        const double h = a.trace();
        auto h_fn = [&](const Vec3& z) { return chart_detail::mean_curvature_at(m, z, opts); };
        const double dh = fd::d1(h_fn, y, ax, m.axes()[ax], opts);
        const double p1_aa = h - a(ax, ax);
        return std::sqrt(f.g.determinant()) * p1_aa * ginv(ax, ax) * dh;
    };

    const auto s = chart_sample(m, p, opts);
    const double sqrtg = std::sqrt(s.metric.determinant());
    const double dflux = fd::d1(flux, p, ax, m.axes()[ax], opts);

    L1IdentityReport r;
    r.l1h = dflux / sqrtg;
    r.lhs = -r.l1h;
    const double gh2 = grad_h_norm2(m, p, opts);
    const double ga2 = grad_a_norm2(s);
    const double hk = 3.0 * s.invariants.H * s.invariants.K;
    r.rhs = gh2 - ga2 - hk;
    const double h4 = std::pow(std::abs(s.invariants.H), 4);
    const double scale = std::max({std::abs(r.lhs), std::abs(r.rhs), ga2, gh2, std::abs(hk),
                                   1e-12 * (1.0 + h4)});
    r.residual = std::abs(r.lhs - r.rhs) / scale;
    return r;
}

}  // namespace zsc
