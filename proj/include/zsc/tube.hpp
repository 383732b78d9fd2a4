#pragma once

// Tubes around catalog models: signed tube-formula volumes, the pointwise
// bound K <= |A|^3/(3 sqrt 3), the Euclidean-ball comparison, and a
// one-sided self-intersection test on a point cloud of normal segments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <unordered_map>
#include <vector>

#include "zsc/chart.hpp"
#include "zsc/errors.hpp"
#include "zsc/geometry.hpp"
#include "zsc/models.hpp"
#include "zsc/reduction.hpp"

namespace zsc {

// volume of the unit ball in R^4
inline constexpr double kOmega4 = std::numbers::pi * std::numbers::pi / 2.0;

struct TubeSpec {
    enum class Radius { constant, subfocal, theorem_c };

    ModelPtr model;
    Radius radius_kind = Radius::constant;
    double h0 = 0.1;        // constant: h = h0
    double epsilon = 0.5;   // subfocal: h = epsilon/|A|, 0 < epsilon <= 1
    double b1 = 0.5;        // theorem_c: h = min(b1/|A|, b2 rho^delta)
    double b2 = 1.0;
    double delta_exp = 1.0;
    double region_r = 5.0;  // intrinsic ball radius of the base region

    void validate() const {
        if (!model) throw ConfigInvalid("tube: model missing");
        if (!(region_r > 0.0)) throw DomainError("tube: region radius must be positive");
        switch (radius_kind) {
            case Radius::constant:
                if (!(h0 > 0.0)) throw DomainError("tube: constant radius must be positive");
                break;
            case Radius::subfocal:
                if (!(epsilon > 0.0) || epsilon > 1.0)
                    throw DomainError("tube: subfocal epsilon must lie in (0, 1]");
                break;
            case Radius::theorem_c:
                if (!(b1 > 0.0) || b1 > 1.0 || !(b2 > 0.0) || !(delta_exp > 0.0))
                    throw DomainError("tube: need b1 in (0,1], b2 > 0, delta > 0");
                break;
        }
    }

    double h_of(double norm_a, double rho) const {
        switch (radius_kind) {
            case Radius::constant: return h0;
            case Radius::subfocal:
                if (!(norm_a > 1e-12))
                    throw SubfocalUndefined("tube: |A| vanishes on the region");
                return epsilon / norm_a;
            default: {
                const double focal = norm_a > 1e-300 ? b1 / norm_a
                                                     : std::numeric_limits<double>::infinity();
                return std::min(focal, b2 * std::pow(rho, delta_exp));
            }
        }
    }
};

namespace tube_detail {

inline double tube_integrand(double h, const RadialCurvatures& c) {
    const double h2 = h * h;
    return h - 0.5 * h2 * c.h - 0.25 * h2 * h2 * c.k_gauss;
}

// largest |A| over the base region, for the subfocal guard and the
// Euclidean-ball comparison
inline double sup_norm_a(const ImmersionModel& m, double radius) {
    const int n = 2048;
    double best = 0.0;
    if (m.kind() == ModelKind::rotational) {
        const auto& rm = static_cast<const RotationalModel&>(m);
        const double t_hi = rm.t_of_s(radius);
        for (int i = 0; i <= n; ++i) {
            const double t = t_hi * i / n;
            best = std::max(best, reduction::rotational_curvatures(rm, t).norm_a);
        }
        return best;
    }
    const auto sr = reduction::product_s_range(m);
    const double lo = std::max(-radius, sr[0]), hi = std::min(radius, sr[1]);
    for (int i = 0; i <= n; ++i) {
        const double s = lo + (hi - lo) * i / n;
        best = std::max(best, std::abs(reduction::product_k_of_arc(m, s)));
    }
    return best;
}

inline double inf_norm_a(const ImmersionModel& m, double radius) {
    const int n = 2048;
    double worst = std::numeric_limits<double>::infinity();
    if (m.kind() == ModelKind::rotational) {
        const auto& rm = static_cast<const RotationalModel&>(m);
        const double t_hi = rm.t_of_s(radius);
        for (int i = 0; i <= n; ++i) {
            const double t = t_hi * i / n;
            worst = std::min(worst, reduction::rotational_curvatures(rm, t).norm_a);
        }
        return worst;
    }
    const auto sr = reduction::product_s_range(m);
    const double lo = std::max(-radius, sr[0]), hi = std::min(radius, sr[1]);
    for (int i = 0; i <= n; ++i) {
        const double s = lo + (hi - lo) * i / n;
        worst = std::min(worst, std::abs(reduction::product_k_of_arc(m, s)));
    }
    return worst;
}

}  // namespace tube_detail

// Signed tube-formula volume
//   V = int_{B_r} h dM - 1/2 int h^2 H dM - 1/4 int h^4 K dM,
// the geometric volume of the one-sided tube when it is embedded.
inline double tube_volume(const TubeSpec& spec, double rel_tol = 1e-8) {
    spec.validate();
    const ImmersionModel& m = *spec.model;
    reduction::require_ball_in_domain(m, spec.region_r);
    if (spec.radius_kind == TubeSpec::Radius::subfocal &&
        tube_detail::inf_norm_a(m, spec.region_r) <= 1e-12)
        throw SubfocalUndefined("tube_volume: |A| vanishes on the region");

    if (m.kind() == ModelKind::rotational) {
        const auto& rm = static_cast<const RotationalModel&>(m);
        return reduction::integrate_ball_rotational(
                   rm, spec.region_r,
                   [&](double t) {
                       const auto c = reduction::rotational_curvatures(rm, t);
                       return tube_detail::tube_integrand(spec.h_of(c.norm_a, rm.s_of_t(t)), c);
                   },
                   {}, rel_tol)
            .value;
    }
    auto curv_at = [&](double s) {
        RadialCurvatures c;
        c.h = reduction::product_k_of_arc(m, s);
        c.k_gauss = 0.0;
        c.norm_a = std::abs(c.h);
        return c;
    };
    if (spec.radius_kind != TubeSpec::Radius::theorem_c) {
        return reduction::integrate_ball_product_s(
                   m, spec.region_r,
                   [&](double s) {
                       const auto c = curv_at(s);
                       return tube_detail::tube_integrand(spec.h_of(c.norm_a, 0.0), c);
                   },
                   {}, rel_tol)
            .value;
    }
    return reduction::integrate_ball_product(
               m, spec.region_r,
               [&](double s, double rho) {
                   const auto c = curv_at(s);
                   return tube_detail::tube_integrand(spec.h_of(c.norm_a, rho), c);
               },
               {}, rel_tol)
        .value;
}

struct KBound {
    double lhs = 0.0;  // K
    double rhs = 0.0;  // |A|^3 / (3 sqrt 3)
    bool holds = false;
};

inline KBound k_bound_of(const Eigenvalues& ev) {
    const auto inv = invariants_from_eigenvalues(ev);
    KBound b;
    b.lhs = inv.K;
    b.rhs = std::pow(inv.normA2, 1.5) / (3.0 * std::sqrt(3.0));
    b.holds = b.lhs <= b.rhs + 1e-12 * std::max(1.0, std::abs(b.rhs));
    return b;
}

// Pointwise check K <= |A|^3/(3 sqrt 3) from a chart sample.
inline KBound k_bound_check(const ImmersionModel& m, const Vec3& params) {
    return k_bound_of(chart_sample(m, params).eigenvalues);
}

struct BallBoundCheck {
    double tube_volume = 0.0;
    double bound = 0.0;     // omega4 (r + 2 b1 a)^4
    double a = 0.0;         // inf over the region of 1/|A|
    bool holds = false;
};

// Compare the tube of constant radius b1 * a around B_r with the volume of
// the Euclidean ball of radius r + 2 b1 a that contains it.
inline BallBoundCheck euclidean_ball_bound(const ImmersionModel& m, double b1, double r) {
    if (!(b1 > 0.0) || b1 > 1.0) throw DomainError("euclidean_ball_bound: b1 must lie in (0,1]");
    const double sup_a = tube_detail::sup_norm_a(m, r);
    if (!(sup_a > 0.0))
        throw SubfocalUndefined("euclidean_ball_bound: |A| vanishes identically on the region");
    BallBoundCheck out;
    out.a = 1.0 / sup_a;
    TubeSpec spec;
    spec.model = std::shared_ptr<const ImmersionModel>(&m, [](const ImmersionModel*) {});
    spec.radius_kind = TubeSpec::Radius::constant;
    spec.h0 = b1 * out.a;
    spec.region_r = r;
    out.tube_volume = tube_volume(spec);
    const double rr = r + 2.0 * b1 * out.a;
    out.bound = kOmega4 * rr * rr * rr * rr;
    out.holds = out.tube_volume <= out.bound;
    return out;
}

struct TubePoint {
    Vec3 params;
    double tau = 0.0;   // offset along the normal, in (0, h]
    Vec4 point;
    double spacing = 0.0;  // local base sample spacing estimate
};

struct TubeWitness {
    TubePoint a, b;
    double segment_distance = 0.0;  // refined distance of the full normal segments
    double base_distance = 0.0;     // intrinsic distance bound between base points
};

struct EmbeddingReport {
    bool embedded = true;
    int resolution = 0;
    std::size_t base_points = 0;
    std::size_t cloud_points = 0;
    std::size_t candidate_pairs = 0;
    double collision_tol = 0.0;
    std::optional<TubeWitness> witness;
};

namespace tube_detail {

inline Vec4 model_normal(const ImmersionModel& m, const Vec3& p) {
    switch (m.kind()) {
        case ModelKind::rotational:
            return static_cast<const RotationalModel&>(m).closed_form_normal(p);
        case ModelKind::cylinder:
            return static_cast<const CylinderModel&>(m).closed_form_normal(p);
        default:
            return static_cast<const GraphModel&>(m).closed_form_normal(p);
    }
}

struct BaseSample {
    Vec3 params;
    Vec4 position;
    Vec4 normal;
    double h = 0.0;
    double spacing = 0.0;
};

inline std::vector<BaseSample> base_grid(const TubeSpec& spec, int res) {
    const ImmersionModel& m = *spec.model;
    const double r = spec.region_r;
    std::vector<BaseSample> out;

    auto push = [&](const Vec3& p, double norm_a, double rho, double spacing) {
        BaseSample b;
        b.params = p;
        b.position = m.position(p);
        b.normal = model_normal(m, p);
        b.h = spec.h_of(norm_a, rho);
        b.spacing = spacing;
        out.push_back(b);
    };

    if (m.kind() == ModelKind::rotational) {
        const auto& rm = static_cast<const RotationalModel&>(m);
        const double t_hi = rm.t_of_s(r);
        const double dt = t_hi / res;
        const double dth = std::numbers::pi / res;
        const double dph = 2.0 * std::numbers::pi / res;
        for (int i = 0; i < res; ++i) {
            const double t = t_hi * (i + 0.5) / res;
            const auto c = reduction::rotational_curvatures(rm, t);
            const double f = rm.profile().f(t);
            for (int j = 0; j < res; ++j) {
                const double th = std::numbers::pi * (j + 0.5) / res;
                const double spacing =
                    std::max({dt * rm.speed(t), dth * f, dph * f * std::sin(th)});
                for (int k = 0; k < res; ++k)
                    push({t, th, dph * k}, c.norm_a, rm.s_of_t(t), spacing);
            }
        }
        return out;
    }

    const int res_even = res + (res % 2);
    const auto sr = reduction::product_s_range(m);
    const bool cyl = m.kind() == ModelKind::cylinder;
    const double du = 2.0 * r / (res - 1);
    for (int i = 0; i < res; ++i) {
        const double u = -r + du * i;
        for (int j = 0; j < res; ++j) {
            const double v = -r + du * j;
            for (int k = 0; k < res_even; ++k) {
                double third, s, norm_a, spacing;
                if (cyl) {
                    const auto& cm = static_cast<const CylinderModel&>(m);
                    third = 2.0 * std::numbers::pi * k / res_even;
                    s = cm.arc_from_base(third);
                    norm_a = cm.k();
                    spacing = std::max(du, 2.0 * std::numbers::pi / res_even / cm.k());
                } else {
                    const auto& gm = static_cast<const GraphModel&>(m);
                    const double s_lo = std::max(-r, sr[0]), s_hi = std::min(r, sr[1]);
                    s = s_lo + (s_hi - s_lo) * (k + 0.5) / res_even;
                    third = gm.t_of_arc(s);
                    norm_a = std::abs(gm.curve_curvature(third));
                    spacing = std::max(du, (s_hi - s_lo) / res_even);
                }
                const double rho2 = u * u + v * v + s * s;
                if (rho2 > r * r) continue;
                push({u, v, third}, norm_a, std::sqrt(rho2), spacing);
            }
        }
    }
    return out;
}

// Minimum distance between segments p0 + s*up (s in [0, sl]) and
// q0 + t*vq (t in [0, tl]) in R^4.
inline double segment_distance(const Vec4& p0, const Vec4& up, double sl, const Vec4& q0,
                               const Vec4& vq, double tl, double& s_out, double& t_out) {
    const Vec4 w0 = p0 - q0;
    const double a = up.dot(up) * sl * sl;
    const double b = up.dot(vq) * sl * tl;
    const double c = vq.dot(vq) * tl * tl;
    const double d = up.dot(w0) * sl;
    const double e = vq.dot(w0) * tl;
    const double det = a * c - b * b;
    double s, t;
    if (det > 1e-14 * a * c) {
        s = std::clamp((b * e - c * d) / det, 0.0, 1.0);
    } else {
        s = 0.0;  // near-parallel
    }
    t = c > 0.0 ? std::clamp((b * s + e) / c, 0.0, 1.0) : 0.0;
    s = a > 0.0 ? std::clamp((b * t - d) / a, 0.0, 1.0) : 0.0;
    // one refinement sweep after clamping
    t = c > 0.0 ? std::clamp((b * s + e) / c, 0.0, 1.0) : 0.0;
    s_out = s * sl;
    t_out = t * tl;
    return ((p0 + s * sl * up) - (q0 + t * tl * vq)).norm();
}

}  // namespace tube_detail

// One-sided embeddedness test: sample tube points p + tau * eta over a
// (chart x tau) grid, hash them with cell size min h / 2, and flag pairs
// from intrinsically distant base points whose normal segments come within
// the collision tolerance (1e-6 of the cloud diameter). An embedded
// verdict means "no collision found at this resolution"; a witness is a
// resolution-independent fact.
inline EmbeddingReport self_intersection_test(const TubeSpec& spec, int resolution) {
    spec.validate();
    if (resolution < 16) throw DomainError("self_intersection_test: resolution must be >= 16");
    const ImmersionModel& m = *spec.model;
    reduction::require_ball_in_domain(m, spec.region_r);

    const auto bases = tube_detail::base_grid(spec, resolution);
    EmbeddingReport rep;
    rep.resolution = resolution;
    rep.base_points = bases.size();

    double min_h = std::numeric_limits<double>::infinity();
    for (const auto& b : bases) min_h = std::min(min_h, b.h);
    if (!(min_h > 0.0) || !std::isfinite(min_h))
        throw DomainError("self_intersection_test: tube radius must be positive on the region");
    const double cell = 0.5 * min_h;

    struct CloudPoint {
        Vec4 x;
        std::uint32_t base;
        double tau;
    };
    std::vector<CloudPoint> cloud;
    cloud.reserve(bases.size() * resolution);
    Vec4 lo = Vec4::Constant(std::numeric_limits<double>::infinity());
    Vec4 hi = -lo;
    for (std::uint32_t ib = 0; ib < bases.size(); ++ib) {
        const auto& b = bases[ib];
        for (int j = 1; j <= resolution; ++j) {
            const double tau = b.h * j / resolution;
            const Vec4 x = b.position + tau * b.normal;
            cloud.push_back({x, ib, tau});
            lo = lo.cwiseMin(x);
            hi = hi.cwiseMax(x);
        }
    }
    rep.cloud_points = cloud.size();
    rep.collision_tol = 1e-6 * (hi - lo).norm();

    auto key_of = [&](const Vec4& x) {
        std::uint64_t key = 1469598103934665603ull;
        for (int d = 0; d < 4; ++d) {
            const auto c = static_cast<std::int64_t>(std::floor(x[d] / cell));
            key ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ull + (key << 6) + (key >> 2);
        }
        return key;
    };

    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> hash;
    hash.reserve(cloud.size() * 2);

    auto try_pair = [&](std::uint32_t ia, std::uint32_t ib_) -> bool {
        const auto& pa = cloud[ia];
        const auto& pb = cloud[ib_];
        if (pa.base == pb.base) return false;
        const auto& ba = bases[pa.base];
        const auto& bb = bases[pb.base];
        const double excl = 3.0 * std::max(ba.spacing, bb.spacing);
        const double base_dist = intrinsic_distance_bound(m, ba.params, bb.params);
        if (base_dist <= excl) return false;
        ++rep.candidate_pairs;
        double s = 0.0, t = 0.0;
        const double point_dist = (pa.x - pb.x).norm();
        double dist = point_dist;
        if (dist >= rep.collision_tol) {
            dist = tube_detail::segment_distance(ba.position, ba.normal, ba.h, bb.position,
                                                 bb.normal, bb.h, s, t);
        } else {
            s = pa.tau;
            t = pb.tau;
        }
        if (dist < rep.collision_tol) {
            TubeWitness w;
            w.a = {ba.params, s, ba.position + s * ba.normal, ba.spacing};
            w.b = {bb.params, t, bb.position + t * bb.normal, bb.spacing};
            w.segment_distance = dist;
            w.base_distance = base_dist;
            rep.witness = w;
            rep.embedded = false;
            return true;
        }
        return false;
    };

    for (std::uint32_t i = 0; i < cloud.size(); ++i) {
        // probe the 3^4 neighborhood for previously inserted points
        const Vec4& x = cloud[i].x;
        bool found = false;
        for (int d0 = -1; d0 <= 1 && !found; ++d0)
            for (int d1 = -1; d1 <= 1 && !found; ++d1)
                for (int d2 = -1; d2 <= 1 && !found; ++d2)
                    for (int d3 = -1; d3 <= 1 && !found; ++d3) {
                        Vec4 y = x;
                        y[0] += d0 * cell;
                        y[1] += d1 * cell;
                        y[2] += d2 * cell;
                        y[3] += d3 * cell;
                        const auto it = hash.find(key_of(y));
                        if (it == hash.end()) continue;
                        for (const auto j : it->second)
                            if (try_pair(i, j)) {
                                found = true;
                                break;
                            }
                    }
        if (found) return rep;
        hash[key_of(x)].push_back(i);
    }
    return rep;
}

}  // namespace zsc
