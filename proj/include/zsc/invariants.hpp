#pragma once

// Pure algebra of the shape-operator eigenvalues of a hypersurface in R^4:
// curvature invariants, Newton-transformation spectrum, pinching ratio and
// orientation normalization. Everything here is a total function of a
// finite eigenvalue triple; no geometry is involved.

#include <array>
#include <cmath>
#include <optional>

#include "zsc/errors.hpp"

namespace zsc {

// Mean curvature below this magnitude is treated as zero when forming the
// pinching ratio -K/H^3, which would otherwise overflow.
inline constexpr double kPinchingHCutoff = 1e-13;

// Supremum of -K/H^3 over {R = 0, H > 0}; attained at permutations of
// (2,2,-1)/3 on the unit sphere.
inline constexpr double kMaxPinching = 4.0 / 27.0;

// Ordered triple of shape-operator eigenvalues, units 1/length.
struct Eigenvalues {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;

    bool finite() const {
        return std::isfinite(lambda1) && std::isfinite(lambda2) && std::isfinite(lambda3);
    }
};

// Scalar invariants at a point. H is the non-normalized mean curvature
// (sum of eigenvalues, no 1/3 factor); this convention is fixed repo-wide.
struct CurvatureInvariants {
    double R = 0.0;                              // lambda1*lambda2 + lambda1*lambda3 + lambda2*lambda3
    double H = 0.0;                              // lambda1 + lambda2 + lambda3
    double K = 0.0;                              // lambda1*lambda2*lambda3
    double normA2 = 0.0;                         // |A|^2 = sum of squares
    std::array<double, 3> p1_spectrum{};         // (H - lambda_i), spectrum of P1 = H*I - A
    std::optional<double> pinching;              // -K/H^3, absent when |H| < kPinchingHCutoff
};

inline double mean_curvature(const Eigenvalues& ev) {
    return ev.lambda1 + ev.lambda2 + ev.lambda3;
}

inline double scalar_curvature(const Eigenvalues& ev) {
    return ev.lambda1 * ev.lambda2 + ev.lambda1 * ev.lambda3 + ev.lambda2 * ev.lambda3;
}

inline double gauss_kronecker(const Eigenvalues& ev) {
    return ev.lambda1 * ev.lambda2 * ev.lambda3;
}

// Spectrum of the first Newton transformation P1 = H*I - A. Trace is 2H.
inline std::array<double, 3> p1_spectrum(const Eigenvalues& ev) {
    const double h = mean_curvature(ev);
    return {h - ev.lambda1, h - ev.lambda2, h - ev.lambda3};
}

// Flip the triple so H >= 0. Triples with H == 0 are returned unchanged;
// on {R=0, K!=0} that case cannot occur, so this is a boundary convention.
inline Eigenvalues normalize_orientation(const Eigenvalues& ev) {
    if (mean_curvature(ev) < 0.0)
        return {-ev.lambda1, -ev.lambda2, -ev.lambda3};
    return ev;
}

inline CurvatureInvariants invariants_from_eigenvalues(const Eigenvalues& ev) {
    if (!ev.finite())
        throw DomainError("invariants_from_eigenvalues: eigenvalues must be finite");
    CurvatureInvariants inv;
    inv.R = scalar_curvature(ev);
    inv.H = mean_curvature(ev);
    inv.K = gauss_kronecker(ev);
    inv.normA2 = ev.lambda1 * ev.lambda1 + ev.lambda2 * ev.lambda2 + ev.lambda3 * ev.lambda3;
    inv.p1_spectrum = p1_spectrum(ev);
    if (std::abs(inv.H) >= kPinchingHCutoff)
        inv.pinching = -inv.K / (inv.H * inv.H * inv.H);
    return inv;
}

// -K/H^3. Even under a global sign flip of the triple, so it does not
// depend on orientation where defined.
inline std::optional<double> pinching_ratio(const Eigenvalues& ev) {
    return invariants_from_eigenvalues(ev).pinching;
}

}  // namespace zsc
