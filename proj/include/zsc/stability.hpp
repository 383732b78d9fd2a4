#pragma once

// Stability quadratic form Q1(f) = int <P1 grad f, grad f> + 3 int K f^2,
// destabilizing-direction search over radial test-function families, and
// the curvature-estimate inequality mechanics (weighted integrals of H
// and |grad psi| with the constant chain from pinching.hpp).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "zsc/errors.hpp"
#include "zsc/geometry.hpp"
#include "zsc/models.hpp"
#include "zsc/pinching.hpp"
#include "zsc/reduction.hpp"

namespace zsc {

// Radial test function of the intrinsic radius with compact support.
struct TestFunction {
    enum class Kind { ssy_cutoff, piecewise_linear, bump };
    Kind kind = Kind::ssy_cutoff;

    double r = 1.0;                        // ssy_cutoff: 1 on B_r, linear to 0 on B_2r
    std::vector<double> knots, values;     // piecewise_linear
    double center = 0.0, width = 1.0, amplitude = 1.0;  // bump, truncated at 6 widths

    static TestFunction ssy_cutoff(double r) {
        if (!(r > 0.0)) throw DomainError("ssy_cutoff: r must be positive");
        TestFunction f;
        f.kind = Kind::ssy_cutoff;
        f.r = r;
        return f;
    }

    static TestFunction piecewise_linear(std::vector<double> knots, std::vector<double> values) {
        if (knots.size() < 2 || knots.size() != values.size())
            throw DomainError("piecewise_linear: need matching knots/values, at least two");
        for (std::size_t i = 1; i < knots.size(); ++i)
            if (!(knots[i] > knots[i - 1]))
                throw DomainError("piecewise_linear: knots must be increasing");
        if (values.back() != 0.0)
            throw DomainError("piecewise_linear: last value must be 0 (compact support)");
        TestFunction f;
        f.kind = Kind::piecewise_linear;
        f.knots = std::move(knots);
        f.values = std::move(values);
        return f;
    }

    static TestFunction bump(double center, double width, double amplitude = 1.0) {
        if (!(width > 0.0) || !(center >= 0.0))
            throw DomainError("bump: need center >= 0 and width > 0");
        TestFunction f;
        f.kind = Kind::bump;
        f.center = center;
        f.width = width;
        f.amplitude = amplitude;
        return f;
    }

    double operator()(double rho) const {
        switch (kind) {
            case Kind::ssy_cutoff:
                if (rho <= r) return 1.0;
                if (rho >= 2.0 * r) return 0.0;
                return (2.0 * r - rho) / r;
            case Kind::piecewise_linear: {
                if (rho <= knots.front()) return values.front();
                if (rho >= knots.back()) return 0.0;
                const auto it = std::upper_bound(knots.begin(), knots.end(), rho);
                const std::size_t i = static_cast<std::size_t>(it - knots.begin()) - 1;
                const double w = (rho - knots[i]) / (knots[i + 1] - knots[i]);
                return values[i] + w * (values[i + 1] - values[i]);
            }
            default: {
                const double d = std::abs(rho - center);
                if (d >= 6.0 * width) return 0.0;
                const double u = d / width;
                return amplitude * std::exp(-u * u);
            }
        }
    }

    double deriv(double rho) const {
        switch (kind) {
            case Kind::ssy_cutoff:
                return (rho > r && rho < 2.0 * r) ? -1.0 / r : 0.0;
            case Kind::piecewise_linear: {
                if (rho <= knots.front() || rho >= knots.back()) return 0.0;
                const auto it = std::upper_bound(knots.begin(), knots.end(), rho);
                const std::size_t i = static_cast<std::size_t>(it - knots.begin()) - 1;
                return (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]);
            }
            default: {
                const double d = rho - center;
                if (std::abs(d) >= 6.0 * width) return 0.0;
                const double u = d / width;
                return amplitude * std::exp(-u * u) * (-2.0 * d / (width * width));
            }
        }
    }

    double support_radius() const {
        switch (kind) {
            case Kind::ssy_cutoff: return 2.0 * r;
            case Kind::piecewise_linear: return knots.back();
            default: return center + 6.0 * width;
        }
    }

    std::vector<double> breakpoints() const {
        switch (kind) {
            case Kind::ssy_cutoff: return {r, 2.0 * r};
            case Kind::piecewise_linear: return knots;
            default: {
                std::vector<double> b{center};
                if (center - 6.0 * width > 0.0) b.push_back(center - 6.0 * width);
                b.push_back(center + 6.0 * width);
                return b;
            }
        }
    }

    std::string describe() const {
        std::ostringstream os;
        switch (kind) {
            case Kind::ssy_cutoff: os << "ssy_cutoff(r=" << r << ")"; break;
            case Kind::piecewise_linear: os << "piecewise_linear(" << knots.size() << " knots)"; break;
            default:
                os << "bump(center=" << center << ", width=" << width
                   << ", amplitude=" << amplitude << ")";
        }
        return os.str();
    }
};

enum class StabilityVerdict { nonnegative, destabilizing };

inline const char* to_string(StabilityVerdict v) {
    return v == StabilityVerdict::nonnegative ? "nonnegative" : "destabilizing";
}

struct StabilityReport {
    double q1_value = 0.0;
    double gradient_term = 0.0;    // int <P1 grad f, grad f>
    double curvature_term = 0.0;   // 3 int K f^2
    double quad_error = 0.0;       // accumulated quadrature error estimate
    TestFunction test_function;
    StabilityVerdict verdict = StabilityVerdict::nonnegative;
    std::size_t evals = 0;
};

// Q1 over a radial test function. For the catalog models the gradient
// integrand diagonalizes: the radial direction contributes (H - lambda_rho)
// f'(rho)^2; on the flat product models the full weight is
// k(s) (1 - s^2/rho^2) f'(rho)^2 and the curvature term vanishes with K.
inline StabilityReport quadratic_form_q1(const ImmersionModel& m, const TestFunction& f,
                                         double rel_tol = 1e-8) {
    StabilityReport rep;
    rep.test_function = f;
    const double support = f.support_radius();
    reduction::require_ball_in_domain(m, support);

    if (m.kind() == ModelKind::rotational) {
        const auto& rm = static_cast<const RotationalModel&>(m);
        const auto grad = reduction::integrate_ball_rotational(
            rm, support,
            [&](double t) {
                const auto c = reduction::rotational_curvatures(rm, t);
                const double fp = f.deriv(rm.s_of_t(t));
                return (c.h - c.lambda_radial) * fp * fp;
            },
            f.breakpoints(), rel_tol);
        const auto curv = reduction::integrate_ball_rotational(
            rm, support,
            [&](double t) {
                const auto c = reduction::rotational_curvatures(rm, t);
                const double fv = f(rm.s_of_t(t));
                return 3.0 * c.k_gauss * fv * fv;
            },
            f.breakpoints(), rel_tol);
        rep.gradient_term = grad.value;
        rep.curvature_term = curv.value;
        rep.quad_error = grad.error + curv.error;
        rep.evals = grad.evals + curv.evals;
    } else {
        const auto grad = reduction::integrate_ball_product(
            m, support,
            [&](double s, double rho) {
                const double fp = f.deriv(rho);
                if (fp == 0.0) return 0.0;
                const double xi = s / rho;
                return reduction::product_k_of_arc(m, s) * (1.0 - xi * xi) * fp * fp;
            },
            f.breakpoints(), rel_tol);
        rep.gradient_term = grad.value;
        rep.curvature_term = 0.0;  // two flat directions force K = 0
        rep.quad_error = grad.error;
        rep.evals = grad.evals;
    }
    rep.q1_value = rep.gradient_term + rep.curvature_term;
    rep.verdict =
        rep.q1_value < 0.0 ? StabilityVerdict::destabilizing : StabilityVerdict::nonnegative;
    return rep;
}

// Two-parameter family of smooth bumps for the destabilizing search.
struct BumpFamily {
    std::array<double, 2> center_range{1.0, 50.0};
    std::array<double, 2> width_range{0.5, 30.0};
    double amplitude = 1.0;
};

// Minimize Q1 over the family: seeded uniform exploration followed by
// compass search from the best starts. Deterministic for a fixed seed and
// budget; returns the best report found even when nonnegative.
inline StabilityReport instability_search(const ImmersionModel& m, const BumpFamily& family,
                                          int budget, std::uint64_t seed) {
    if (budget < 100) throw DomainError("instability_search: budget must be >= 100");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uc(family.center_range[0], family.center_range[1]);
    std::uniform_real_distribution<double> uw(family.width_range[0], family.width_range[1]);

    int used = 0;
    auto evaluate = [&](double c, double w) {
        ++used;
        return quadratic_form_q1(m, TestFunction::bump(c, w, family.amplitude));
    };

    struct Cand {
        double c, w, q;
    };
    std::vector<Cand> pool;
    const int n_explore = std::max(16, budget / 4);
    StabilityReport best;
    bool have_best = false;
    for (int i = 0; i < n_explore && used < budget; ++i) {
        const double c = uc(rng), w = uw(rng);
        const auto rep = evaluate(c, w);
        pool.push_back({c, w, rep.q1_value});
        if (!have_best || rep.q1_value < best.q1_value) {
            best = rep;
            have_best = true;
        }
    }
    std::sort(pool.begin(), pool.end(), [](const Cand& a, const Cand& b) { return a.q < b.q; });

    const int n_starts = std::min<int>(4, pool.size());
    for (int k = 0; k < n_starts && used < budget; ++k) {
        double c = pool[k].c, w = pool[k].w, q = pool[k].q;
        double step_c = 0.25 * (family.center_range[1] - family.center_range[0]);
        double step_w = 0.25 * (family.width_range[1] - family.width_range[0]);
        while (used + 4 <= budget && (step_c > 1e-4 || step_w > 1e-4)) {
            bool improved = false;
            const double cands[4][2] = {{c + step_c, w}, {c - step_c, w}, {c, w + step_w},
                                        {c, w - step_w}};
            for (const auto& cd : cands) {
                const double cc = std::clamp(cd[0], family.center_range[0], family.center_range[1]);
                const double ww = std::clamp(cd[1], family.width_range[0], family.width_range[1]);
                const auto rep = evaluate(cc, ww);
                if (rep.q1_value < q - 1e-15) {
                    c = cc;
                    w = ww;
                    q = rep.q1_value;
                    improved = true;
                    if (rep.q1_value < best.q1_value) best = rep;
                }
                if (used >= budget) break;
            }
            if (!improved) {
                step_c *= 0.5;
                step_w *= 0.5;
            }
        }
    }
    best.evals = static_cast<std::size_t>(used);
    return best;
}

struct SobolevCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;            // lhs / rhs
    double margin = 0.0;           // c - Lambda1 delta^{(5+2q)/(3+2q)}
    double grad_integral = 0.0;    // int |grad psi|^{5+2q} dM
    double delta = 0.0;
    double r = 0.0;
};

namespace stab_detail {

// int G(H, K) psi^pow dM and int |psi'|^pow dM for the cutoff psi.
template <class G>
QuadResult weighted_h_integral(const ImmersionModel& m, const TestFunction& psi, double pow_psi,
                               G&& g_of_curv, double rel_tol = 1e-8) {
    const double support = psi.support_radius();
    reduction::require_ball_in_domain(m, support);
    if (m.kind() == ModelKind::rotational) {
        const auto& rm = static_cast<const RotationalModel&>(m);
        return reduction::integrate_ball_rotational(
            rm, support,
            [&](double t) {
                const auto c = reduction::rotational_curvatures(rm, t);
                return g_of_curv(c) * std::pow(psi(rm.s_of_t(t)), pow_psi);
            },
            psi.breakpoints(), rel_tol);
    }
    return reduction::integrate_ball_product(
        m, support,
        [&](double s, double rho) {
            RadialCurvatures c;
            c.h = reduction::product_k_of_arc(m, s);
            c.k_gauss = 0.0;
            c.norm_a = std::abs(c.h);
            return g_of_curv(c) * std::pow(psi(rho), pow_psi);
        },
        psi.breakpoints(), rel_tol);
}

inline QuadResult grad_psi_integral(const ImmersionModel& m, const TestFunction& psi,
                                    double pow_grad, double rel_tol = 1e-8) {
    const double support = psi.support_radius();
    reduction::require_ball_in_domain(m, support);
    if (m.kind() == ModelKind::rotational) {
        const auto& rm = static_cast<const RotationalModel&>(m);
        return reduction::integrate_ball_rotational(
            rm, support,
            [&](double t) { return std::pow(std::abs(psi.deriv(rm.s_of_t(t))), pow_grad); },
            psi.breakpoints(), rel_tol);
    }
    return reduction::integrate_ball_product(
        m, support,
        [&](double, double rho) { return std::pow(std::abs(psi.deriv(rho)), pow_grad); },
        psi.breakpoints(), rel_tol);
}

}  // namespace stab_detail

// Weighted inequality check with the cutoff psi = ssy_cutoff(r):
//   int H^{5+2q} ((-K)/H^3 - Lambda1 d^{(5+2q)/(3+2q)}) psi^{5+2q} dM
//     <= Lambda2 d^{-(5+2q)/2} int |grad psi|^{5+2q} dM.
inline SobolevCheck sobolev_check(const ImmersionModel& m, const PinchingConstants& k, double r,
                                  double delta, double rel_tol = 1e-8) {
    if (!(delta > 0.0)) throw DomainError("sobolev_check: delta must be positive");
    const double e1 = (5.0 + 2.0 * k.q) / (3.0 + 2.0 * k.q);
    const double margin = k.c - k.Lambda1 * std::pow(delta, e1);
    if (!(margin > 0.0))
        throw DeltaTooLarge("sobolev_check: pinching margin c - Lambda1 delta^e is nonpositive");

    const double pw = 5.0 + 2.0 * k.q;
    const auto psi = TestFunction::ssy_cutoff(r);
    const double lam1d = k.Lambda1 * std::pow(delta, e1);

    const auto lhs = stab_detail::weighted_h_integral(
        m, psi, pw,
        [&](const RadialCurvatures& c) {
            const double pinch = c.h > 0.0 ? (-c.k_gauss) / (c.h * c.h * c.h) : 0.0;
            return std::pow(c.h, pw) * (pinch - lam1d);
        },
        rel_tol);
    const auto grad = stab_detail::grad_psi_integral(m, psi, pw, rel_tol);

    SobolevCheck out;
    out.lhs = lhs.value;
    out.grad_integral = grad.value;
    out.rhs = k.Lambda2 * std::pow(delta, -pw / 2.0) * grad.value;
    out.ratio = out.rhs != 0.0 ? out.lhs / out.rhs : std::numeric_limits<double>::infinity();
    out.margin = margin;
    out.delta = delta;
    out.r = r;
    return out;
}

struct CorollaryCheck {
    double lhs = 0.0;  // int |A|^{2p} psi^{2p} dM
    double rhs = 0.0;  // int |grad psi|^{2p} dM
    double p = 0.0;
    double r = 0.0;
};

// Sobolev-type inequality data in |A| = H (valid on the R = 0 catalog):
// any uniform constant C(p) would need lhs <= C(p) rhs for all r.
// p must lie in (5/2, 5/2 + sqrt(1/(1+2 c0^e))); c0 defaults to 16, the
// smallest value the ratio maximum attains on the constraint set, which
// gives the widest admissible window.
inline CorollaryCheck ssy_corollary_check(const ImmersionModel& m, double p, double r,
                                          double c0 = 16.0, int c0_exponent = 2,
                                          double rel_tol = 1e-8) {
    const auto window = sobolev_p_window(c0, c0_exponent);
    if (!(p > window[0]) || !(p < window[1]))
        throw DomainError("ssy_corollary_check: p outside (5/2, 5/2 + sqrt(1/(1+2 c0^e)))");
    const double pw = 2.0 * p;
    const auto psi = TestFunction::ssy_cutoff(r);
    const auto lhs = stab_detail::weighted_h_integral(
        m, psi, pw,
        [&](const RadialCurvatures& c) { return std::pow(c.norm_a, pw); }, rel_tol);
    const auto rhs = stab_detail::grad_psi_integral(m, psi, pw, rel_tol);
    CorollaryCheck out;
    out.lhs = lhs.value;
    out.rhs = rhs.value;
    out.p = p;
    out.r = r;
    return out;
}

}  // namespace zsc
