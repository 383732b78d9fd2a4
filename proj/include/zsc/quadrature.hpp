#pragma once

// Adaptive Gauss-Legendre quadrature on an interval. Panels are split
// exactly at caller-supplied breakpoints (integrand kinks), refined by
// bisection with a two-half error estimate, and accumulated in interval
// order with pairwise summation so results do not depend on evaluation
// interleaving.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace zsc {

// Nodes/weights on [-1, 1], computed once per order by Newton iteration
// on the Legendre polynomial.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendreRule(int n) : nodes(n), weights(n) {
        const int m = (n + 1) / 2;
        for (int i = 1; i <= m; ++i) {
            double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
            double pp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p1 = 1.0, p2 = 0.0;
                for (int j = 1; j <= n; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
                }
                pp = n * (z * p1 - p2) / (z * z - 1.0);
                const double z1 = z;
                z = z1 - p1 / pp;
                if (std::abs(z - z1) <= 1e-15) break;
            }
            nodes[i - 1] = -z;
            nodes[n - i] = z;
            weights[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
            weights[n - i] = weights[i - 1];
        }
    }

    static const GaussLegendreRule& of(int n) {
        static const GaussLegendreRule r8(8), r16(16), r32(32);
        switch (n) {
            case 8: return r8;
            case 32: return r32;
            default: return r16;
        }
    }
};

template <class F>
double gl_integrate(F&& f, double a, double b, int order = 16) {
    const auto& rule = GaussLegendreRule::of(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

struct QuadOptions {
    double rel_tol = 1e-8;
    double abs_tol = 0.0;           // absolute error floor added to the relative target
    int max_depth = 48;
    std::size_t max_panels = 400000;
    int order = 16;
    std::vector<double> breakpoints;  // interior kinks; panels are split exactly here
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;     // accumulated panel error estimate
    std::size_t evals = 0;
    bool converged = true;
};

namespace detail {

inline double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

inline double pairwise_sum(const std::vector<double>& v) {
    return v.empty() ? 0.0 : pairwise_sum(v, 0, v.size());
}

}  // namespace detail

// Integrate f over [a, b]. The error target is
//   max(abs_tol, rel_tol * scale) distributed over panels by length,
// where scale is a first-pass magnitude estimate of the integral.
template <class F>
QuadResult integrate(F&& f, double a, double b, QuadOptions opts = {}) {
    QuadResult out;
    if (!(b > a)) return out;

    std::vector<double> edges{a, b};
    for (double x : opts.breakpoints)
        if (x > a && x < b) edges.push_back(x);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    struct Panel {
        double lo, hi, whole;
        int depth;
    };

    // first pass: rough magnitude
    double rough = 0.0;
    std::vector<Panel> stack;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double w = gl_integrate(f, edges[i], edges[i + 1], opts.order);
        out.evals += static_cast<std::size_t>(opts.order);
        rough += std::abs(w);
        stack.push_back({edges[i], edges[i + 1], w, 0});
    }
    const double scale = std::max({rough, opts.abs_tol, 1e-300});
    const double budget = std::max(opts.abs_tol, opts.rel_tol * scale);
    const double total_len = b - a;

    // depth-first, rightmost panel on top so accepted panels emerge left-to-right
    std::reverse(stack.begin(), stack.end());
    std::vector<double> accepted;
    std::size_t panels = 0;
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.lo + p.hi);
        const double left = gl_integrate(f, p.lo, mid, opts.order);
        const double right = gl_integrate(f, mid, p.hi, opts.order);
        out.evals += 2 * static_cast<std::size_t>(opts.order);
        const double refined = left + right;
        const double err = std::abs(refined - p.whole);
        const double local_budget = budget * ((p.hi - p.lo) / total_len);
        if (err <= local_budget || p.depth >= opts.max_depth || ++panels >= opts.max_panels) {
            accepted.push_back(refined);
            out.error += err;
            if (err > local_budget) out.converged = false;
        } else {
            stack.push_back({mid, p.hi, right, p.depth + 1});
            stack.push_back({p.lo, mid, left, p.depth + 1});
        }
    }
    out.value = detail::pairwise_sum(accepted);
    return out;
}

}  // namespace zsc
