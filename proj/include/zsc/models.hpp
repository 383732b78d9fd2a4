#pragma once

// Catalog of hypersurface models in R^4 with a one-parameter symmetry
// reduction: rotational hypersurfaces over a profile f(t), flat cylinders
// over a plane curve, and graphs of a height function of one variable.
// Each model carries its chart domain, a base point for intrinsic radii,
// closed-form principal curvatures along the reduction, and a cumulative
// arc-length table for the distinguished axis.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zsc/errors.hpp"
#include "zsc/fd.hpp"
#include "zsc/invariants.hpp"
#include "zsc/quadrature.hpp"

namespace zsc {

using Vec4 = Eigen::Vector4d;
using CScalar = std::complex<double>;
using CVec3 = Eigen::Matrix<CScalar, 3, 1>;
using CVec4 = Eigen::Matrix<CScalar, 4, 1>;

enum class ModelKind { rotational, cylinder, graph };

inline const char* to_string(ModelKind k) {
    switch (k) {
        case ModelKind::rotational: return "rotational";
        case ModelKind::cylinder: return "cylinder";
        default: return "graph";
    }
}

// Generalized cross product in R^4: the unique vector orthogonal to
// a, b, c with |n| = |det[a b c .]|, via cofactor expansion.
template <class Scalar>
Eigen::Matrix<Scalar, 4, 1> cross4(const Eigen::Matrix<Scalar, 4, 1>& a,
                                   const Eigen::Matrix<Scalar, 4, 1>& b,
                                   const Eigen::Matrix<Scalar, 4, 1>& c) {
    Eigen::Matrix<Scalar, 4, 1> n;
    for (int mu = 0; mu < 4; ++mu) {
        Eigen::Matrix<Scalar, 3, 3> m;
        int col = 0;
        for (int nu = 0; nu < 4; ++nu) {
            if (nu == mu) continue;
            m(0, col) = a[nu];
            m(1, col) = b[nu];
            m(2, col) = c[nu];
            ++col;
        }
        n[mu] = ((mu % 2) == 0 ? 1.0 : -1.0) * m.determinant();
    }
    return n;
}

// Scalar function of one variable with two derivatives plus its analytic
// continuation, used for profiles and height functions. The continuation
// enables complex-step tangents in the chart engine.
struct SmoothFn {
    std::function<double(double)> f, df, d2f;
    std::function<CScalar(CScalar)> fc;
    std::string name;
};

// Cumulative arc length of a unit-less curve with speed(t) = sqrt(1 + df^2),
// tabulated on a uniform grid and corrected locally by fixed-order
// quadrature; inverse by bisection plus Newton.
class ArcLengthTable {
public:
    ArcLengthTable() = default;
    ArcLengthTable(std::function<double(double)> speed, double t_lo, double t_hi,
                   int per_unit = 8)
        : speed_(std::move(speed)), t_lo_(t_lo), t_hi_(t_hi) {
        const int n = std::clamp(static_cast<int>((t_hi - t_lo) * per_unit), 64, 262144);
        grid_.resize(n + 1);
        cum_.resize(n + 1);
        cum_[0] = 0.0;
        for (int i = 0; i <= n; ++i) grid_[i] = t_lo + (t_hi - t_lo) * i / n;
        for (int i = 1; i <= n; ++i)
            cum_[i] = cum_[i - 1] + gl_integrate(speed_, grid_[i - 1], grid_[i], 8);
    }

    double s_of_t(double t) const {
        t = std::clamp(t, t_lo_, t_hi_);
        const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
        const std::size_t i = std::min<std::size_t>(grid_.size() - 1, it - grid_.begin()) - 1;
        return cum_[i] + gl_integrate(speed_, grid_[i], t, 8);
    }

    double t_of_s(double s) const {
        if (s <= 0.0) return t_lo_;
        if (s >= cum_.back()) return t_hi_;
        auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
        std::size_t i = std::min<std::size_t>(cum_.size() - 1, it - cum_.begin()) - 1;
        double t = grid_[i] + (s - cum_[i]) / std::max(1e-300, speed_(grid_[i]));
        for (int k = 0; k < 60; ++k) {
            const double r = s_of_t(t) - s;
            if (std::abs(r) < 1e-13 * std::max(1.0, s)) break;
            t = std::clamp(t - r / speed_(t), t_lo_, t_hi_);
        }
        return t;
    }

    double total() const { return cum_.empty() ? 0.0 : cum_.back(); }

private:
    std::function<double(double)> speed_;
    double t_lo_ = 0.0, t_hi_ = 0.0;
    std::vector<double> grid_;
    std::vector<double> cum_;
};

class ImmersionModel {
public:
    virtual ~ImmersionModel() = default;
    virtual ModelKind kind() const = 0;
    virtual std::string name() const = 0;
    virtual Vec4 position(const Vec3& params) const = 0;
    // analytic continuation of the chart map, for complex-step derivatives
    virtual CVec4 position_c(const CVec3& params) const = 0;
    virtual const std::array<fd::Axis, 3>& axes() const = 0;
    virtual Vec3 base_params() const = 0;

    // +1/-1 applied to the raw cross-product normal so H >= 0 on the model
    double orientation() const { return orient_; }

    bool in_domain(const Vec3& p) const {
        for (int i = 0; i < 3; ++i) {
            const auto& ax = axes()[i];
            if (!ax.periodic && (p[i] < ax.lo || p[i] > ax.hi)) return false;
        }
        return true;
    }

protected:
    double orient_ = 1.0;
};

// Rotational hypersurface X(t, theta, phi) = (f(t) w(theta, phi), t) with
// w the unit sphere direction; profile f > 0 on [0, t_max].
class RotationalModel : public ImmersionModel {
public:
    RotationalModel(SmoothFn profile, double t_max, std::string label)
        : profile_(std::move(profile)), label_(std::move(label)) {
        axes_[0] = {0.0, t_max, false};
        axes_[1] = {0.0, std::numbers::pi, false};   // polar angle
        axes_[2] = {0.0, 0.0, true};                 // azimuth, periodic
        arc_ = ArcLengthTable(
            [this](double t) { return std::sqrt(1.0 + profile_.df(t) * profile_.df(t)); }, 0.0,
            t_max);
        calibrate();
    }

    // Profile f(t) = t^2/(4m) + m; principal curvatures sqrt(m)/f^{3/2}
    // (twice) and -sqrt(m)/(2 f^{3/2}).
    static std::shared_ptr<RotationalModel> schwarzschild(double m, double t_max = 4000.0) {
        if (!(m > 0.0)) throw ConfigInvalid("schwarzschild model: m must be positive");
        SmoothFn prof{[m](double t) { return t * t / (4.0 * m) + m; },
                      [m](double t) { return t / (2.0 * m); },
                      [m](double) { return 1.0 / (2.0 * m); },
                      [m](CScalar t) { return t * t / (4.0 * m) + m; },
                      "schwarzschild"};
        return std::make_shared<RotationalModel>(std::move(prof), t_max, "schwarzschild");
    }

    ModelKind kind() const override { return ModelKind::rotational; }
    std::string name() const override { return label_; }

    Vec4 position(const Vec3& p) const override {
        const double t = p[0], th = p[1], ph = p[2];
        const double f = profile_.f(t);
        return {f * std::sin(th) * std::cos(ph), f * std::sin(th) * std::sin(ph),
                f * std::cos(th), t};
    }

    CVec4 position_c(const CVec3& p) const override {
        const CScalar t = p[0], th = p[1], ph = p[2];
        const CScalar f = profile_.fc(t);
        CVec4 x;
        x << f * std::sin(th) * std::cos(ph), f * std::sin(th) * std::sin(ph), f * std::cos(th), t;
        return x;
    }

    const std::array<fd::Axis, 3>& axes() const override { return axes_; }
    Vec3 base_params() const override { return {0.0, std::numbers::pi / 2.0, 0.0}; }

    const SmoothFn& profile() const { return profile_; }
    double t_max() const { return axes_[0].hi; }

    double speed(double t) const {
        const double d = profile_.df(t);
        return std::sqrt(1.0 + d * d);
    }
    double s_of_t(double t) const { return arc_.s_of_t(t); }
    double t_of_s(double s) const { return arc_.t_of_s(s); }
    double s_reach() const { return arc_.total(); }

    // principal curvatures for the H >= 0 orientation
    double lambda_sphere(double t) const { return sign_ / (profile_.f(t) * speed(t)); }
    double lambda_meridian(double t) const {
        const double sp = speed(t);
        return -sign_ * profile_.d2f(t) / (sp * sp * sp);
    }
    // weight of the symmetry-reduced volume element: dM = w(t) dt
    double weight(double t) const {
        const double f = profile_.f(t);
        return 4.0 * std::numbers::pi * f * f * speed(t);
    }

private:
    void calibrate() {
        const double t_ref = std::min(1.0, 0.5 * t_max());
        const double h = 2.0 * lambda_sphere(t_ref) + lambda_meridian(t_ref);
        if (h < 0.0) sign_ = -1.0;
        // orientation of the chart normal is resolved against the closed
        // form in chart sampling; store the same parity for both
        orient_ = sign_;
    }

    SmoothFn profile_;
    std::string label_;
    std::array<fd::Axis, 3> axes_;
    ArcLengthTable arc_;
    double sign_ = 1.0;

public:
    // raw closed-form unit normal matching lambda_sphere/lambda_meridian
    Vec4 closed_form_normal(const Vec3& p) const {
        const double t = p[0], th = p[1], ph = p[2];
        const Vec3 w{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
        const double sp = speed(t);
        Vec4 n;
        n << -w[0], -w[1], -w[2], profile_.df(t);
        return sign_ * n / sp;
    }
};

// Flat cylinder R^2 x circle: x(u, v, a) = (u, v, Rc cos a, Rc sin a),
// curvature k = 1/Rc along the circle factor.
class CylinderModel : public ImmersionModel {
public:
    explicit CylinderModel(double k) : k_(k) {
        if (!(k > 0.0)) throw ConfigInvalid("cylinder model: curvature k must be positive");
        axes_[0] = {};  // u unbounded
        axes_[1] = {};  // v unbounded
        axes_[2] = {0.0, 0.0, true};  // angle, periodic
        // inward normal gives lambda3 = +k and H = k > 0
        orient_ = 1.0;
    }

    ModelKind kind() const override { return ModelKind::cylinder; }
    std::string name() const override { return "cylinder"; }

    Vec4 position(const Vec3& p) const override {
        const double rc = 1.0 / k_;
        return {p[0], p[1], rc * std::cos(p[2]), rc * std::sin(p[2])};
    }

    CVec4 position_c(const CVec3& p) const override {
        const double rc = 1.0 / k_;
        CVec4 x;
        x << p[0], p[1], rc * std::cos(p[2]), rc * std::sin(p[2]);
        return x;
    }

    const std::array<fd::Axis, 3>& axes() const override { return axes_; }
    Vec3 base_params() const override { return {0.0, 0.0, 0.0}; }

    double k() const { return k_; }
    double circumference() const { return 2.0 * std::numbers::pi / k_; }
    // signed arc distance from the base angle, wrapped to (-L/2, L/2]
    double arc_from_base(double a) const {
        const double L = circumference();
        double s = std::remainder(a / k_, L);
        return s;
    }

    Vec4 closed_form_normal(const Vec3& p) const {
        return {0.0, 0.0, -std::cos(p[2]), -std::sin(p[2])};
    }

private:
    double k_;
    std::array<fd::Axis, 3> axes_;
};

// Graph x(u, v, t) = (u, v, t, F(t)) over a box; a flat cylinder over the
// plane curve (t, F(t)).
class GraphModel : public ImmersionModel {
public:
    GraphModel(SmoothFn height, std::array<double, 2> u_box, std::array<double, 2> v_box,
               std::array<double, 2> t_box, std::string label)
        : height_(std::move(height)), label_(std::move(label)) {
        axes_[0] = {u_box[0], u_box[1], false};
        axes_[1] = {v_box[0], v_box[1], false};
        axes_[2] = {t_box[0], t_box[1], false};
        if (!(t_box[0] < 0.0 && t_box[1] > 0.0))
            throw ConfigInvalid("graph model: t box must contain the base t = 0");
        arc_ = ArcLengthTable(
            [this](double t) { return std::sqrt(1.0 + height_.df(t) * height_.df(t)); },
            t_box[0], t_box[1]);
        s0_ = arc_.s_of_t(0.0);
        const double h_ref = curve_curvature(0.5 * t_box[1]);
        if (h_ref < 0.0) orient_ = -1.0;
    }

    static std::shared_ptr<GraphModel> named(const std::string& which, double extent = 100.0) {
        SmoothFn f;
        if (which == "zero") {
            f = {[](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; },
                 [](CScalar) { return CScalar(0.0); }, "zero"};
        } else if (which == "t2") {
            f = {[](double t) { return t * t; }, [](double t) { return 2.0 * t; },
                 [](double) { return 2.0; }, [](CScalar t) { return t * t; }, "t2"};
        } else if (which == "sqrt1pt2") {
            f = {[](double t) { return std::sqrt(1.0 + t * t); },
                 [](double t) { return t / std::sqrt(1.0 + t * t); },
                 [](double t) { const double w = 1.0 + t * t; return 1.0 / (w * std::sqrt(w)); },
                 [](CScalar t) { return std::sqrt(CScalar(1.0) + t * t); }, "sqrt1pt2"};
        } else {
            throw ConfigInvalid("graph model: unknown height '" + which + "'");
        }
        return std::make_shared<GraphModel>(std::move(f), std::array{-extent, extent},
                                            std::array{-extent, extent}, std::array{-extent, extent},
                                            "graph-" + which);
    }

    ModelKind kind() const override { return ModelKind::graph; }
    std::string name() const override { return label_; }

    Vec4 position(const Vec3& p) const override { return {p[0], p[1], p[2], height_.f(p[2])}; }

    CVec4 position_c(const CVec3& p) const override {
        CVec4 x;
        x << p[0], p[1], p[2], height_.fc(p[2]);
        return x;
    }

    const std::array<fd::Axis, 3>& axes() const override { return axes_; }
    Vec3 base_params() const override { return {0.0, 0.0, 0.0}; }

    const SmoothFn& height() const { return height_; }

    double speed(double t) const {
        const double d = height_.df(t);
        return std::sqrt(1.0 + d * d);
    }
    // signed arc distance from t = 0 along the curve
    double arc_from_base(double t) const { return arc_.s_of_t(t) - s0_; }
    double t_of_arc(double s) const { return arc_.t_of_s(s + s0_); }
    std::array<double, 2> arc_range() const { return {-s0_, arc_.total() - s0_}; }

    // signed curvature of (t, F(t)) with respect to the oriented normal
    double curve_curvature(double t) const {
        const double sp = speed(t);
        return orient_ * height_.d2f(t) / (sp * sp * sp);
    }

    Vec4 closed_form_normal(const Vec3& p) const {
        const double sp = speed(p[2]);
        return orient_ * Vec4{0.0, 0.0, -height_.df(p[2]), 1.0} / sp;
    }

private:
    SmoothFn height_;
    std::string label_;
    std::array<fd::Axis, 3> axes_;
    ArcLengthTable arc_;
    double s0_ = 0.0;
};

using ModelPtr = std::shared_ptr<const ImmersionModel>;

}  // namespace zsc
