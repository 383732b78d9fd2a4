#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "zsc/invariants.hpp"

using zsc::Eigenvalues;
using zsc::invariants_from_eigenvalues;
using zsc::normalize_orientation;
using zsc::p1_spectrum;

namespace {

// Algebraic projection onto {R = 0}: given lambda1, lambda2 with
// lambda1 + lambda2 != 0, the unique lambda3 with R = 0 is
// -lambda1*lambda2/(lambda1+lambda2). Used as an independent generator
// for zero-scalar-curvature triples.
Eigenvalues random_r0_triple(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (;;) {
        const double a = unif(rng), b = unif(rng);
        if (std::abs(a + b) < 0.1 || std::abs(a) < 1e-3 || std::abs(b) < 1e-3) continue;
        return {a, b, -a * b / (a + b)};
    }
}

double rel_scale(double x, double y) { return std::max({1.0, std::abs(x), std::abs(y)}); }

}  // namespace

TEST_CASE("invariants on the rotational example triple (1, 1, -1/2)") {
    const auto inv = invariants_from_eigenvalues({1.0, 1.0, -0.5});
    CHECK(inv.R == Catch::Approx(0.0).margin(1e-15));
    CHECK(inv.H == Catch::Approx(1.5));
    CHECK(inv.K == Catch::Approx(-0.5));
    CHECK(inv.normA2 == Catch::Approx(2.25));
    REQUIRE(inv.pinching.has_value());
    CHECK(*inv.pinching == Catch::Approx(4.0 / 27.0).epsilon(1e-14));
}

TEST_CASE("invariants on the cylinder triple (0, 0, 1)") {
    const auto inv = invariants_from_eigenvalues({0.0, 0.0, 1.0});
    CHECK(inv.R == 0.0);
    CHECK(inv.H == 1.0);
    CHECK(inv.K == 0.0);
    REQUIRE(inv.pinching.has_value());
    CHECK(*inv.pinching == 0.0);
}

TEST_CASE("invariants on the umbilic triple (1, 1, 1)") {
    const auto inv = invariants_from_eigenvalues({1.0, 1.0, 1.0});
    CHECK(inv.R == 3.0);
    CHECK(inv.H == 3.0);
    CHECK(inv.K == 1.0);
    CHECK(inv.normA2 == 3.0);
    CHECK(inv.H * inv.H == Catch::Approx(inv.normA2 + 2.0 * inv.R));
}

TEST_CASE("invariants rejects non-finite input") {
    CHECK_THROWS_AS(invariants_from_eigenvalues({std::nan(""), 0.0, 0.0}), zsc::DomainError);
    CHECK_THROWS_AS(invariants_from_eigenvalues({0.0, HUGE_VAL, 0.0}), zsc::DomainError);
}

TEST_CASE("P1 spectrum examples") {
    {
        const auto s = p1_spectrum({1.0, 1.0, -0.5});
        CHECK(s[0] == Catch::Approx(0.5));
        CHECK(s[1] == Catch::Approx(0.5));
        CHECK(s[2] == Catch::Approx(2.0));
    }
    {
        const auto s = p1_spectrum({0.0, 0.0, 1.0});
        CHECK(s[0] == Catch::Approx(1.0));
        CHECK(s[1] == Catch::Approx(1.0));
        CHECK(s[2] == Catch::Approx(0.0));
    }
    {
        // degree-1 homogeneity: (t, t, -t/2) at t = 2
        const auto s = p1_spectrum({2.0, 2.0, -1.0});
        CHECK(s[0] == Catch::Approx(1.0));
        CHECK(s[1] == Catch::Approx(1.0));
        CHECK(s[2] == Catch::Approx(4.0));
    }
    // trace of P1 equals 2H
    const Eigenvalues ev{0.3, -1.2, 0.7};
    const auto s = p1_spectrum(ev);
    CHECK(s[0] + s[1] + s[2] == Catch::Approx(2.0 * zsc::mean_curvature(ev)));
}

TEST_CASE("orientation normalization") {
    const auto a = normalize_orientation({-1.0, -1.0, 0.5});
    CHECK(a.lambda1 == 1.0);
    CHECK(a.lambda2 == 1.0);
    CHECK(a.lambda3 == -0.5);

    const auto b = normalize_orientation({1.0, 1.0, -0.5});
    CHECK(b.lambda1 == 1.0);
    CHECK(b.lambda3 == -0.5);

    // H = 0 boundary convention: unchanged
    const auto c = normalize_orientation({1.0, -1.0, 0.0});
    CHECK(c.lambda1 == 1.0);
    CHECK(c.lambda2 == -1.0);

    // idempotent
    const auto d = normalize_orientation(a);
    CHECK(d.lambda1 == a.lambda1);
    CHECK(d.lambda3 == a.lambda3);
}

TEST_CASE("property: H^2 = |A|^2 + 2R and HK <= R^2/2 on 1e5 random triples") {
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> unif(-10.0, 10.0);
    for (int i = 0; i < 100000; ++i) {
        const Eigenvalues ev{unif(rng), unif(rng), unif(rng)};
        const auto inv = invariants_from_eigenvalues(ev);
        const double lhs = inv.H * inv.H;
        const double rhs = inv.normA2 + 2.0 * inv.R;
        REQUIRE(std::abs(lhs - rhs) <= 1e-12 * rel_scale(lhs, rhs));
        const double hk = inv.H * inv.K;
        const double r2 = 0.5 * inv.R * inv.R;
        REQUIRE(hk - r2 <= 1e-12 * rel_scale(hk, r2));
    }
}

TEST_CASE("property: permutation invariance of R, H, K, |A|^2") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    for (int i = 0; i < 2000; ++i) {
        std::array<double, 3> v{unif(rng), unif(rng), unif(rng)};
        const auto base = invariants_from_eigenvalues({v[0], v[1], v[2]});
        // R, K are sums/products that can cancel; relative tolerance is
        // against the invariant's natural magnitude |A|^2-based scale
        const double s1 = std::max(1.0, std::sqrt(base.normA2));
        const double s2 = s1 * s1, s3 = s1 * s1 * s1;
        std::sort(v.begin(), v.end());
        do {
            const auto p = invariants_from_eigenvalues({v[0], v[1], v[2]});
            REQUIRE(std::abs(p.R - base.R) <= 1e-15 * s2);
            REQUIRE(std::abs(p.H - base.H) <= 1e-15 * s1);
            REQUIRE(std::abs(p.K - base.K) <= 1e-15 * s3);
            REQUIRE(std::abs(p.normA2 - base.normA2) <= 1e-15 * s2);
        } while (std::next_permutation(v.begin(), v.end()));
    }
}

TEST_CASE("property: homogeneity degrees of R, H, K and scale invariance of pinching") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int i = 0; i < 20000; ++i) {
        const Eigenvalues ev{unif(rng), unif(rng), unif(rng)};
        // keep the pinching ratio well conditioned: H^3 in the denominator
        if (std::abs(zsc::mean_curvature(ev)) < 0.1) continue;
        const double t = scale(rng);
        const auto a = invariants_from_eigenvalues(ev);
        const auto b = invariants_from_eigenvalues({t * ev.lambda1, t * ev.lambda2, t * ev.lambda3});
        REQUIRE(std::abs(b.R - t * t * a.R) <= 1e-12 * rel_scale(b.R, t * t * a.R));
        REQUIRE(std::abs(b.H - t * a.H) <= 1e-12 * rel_scale(b.H, t * a.H));
        REQUIRE(std::abs(b.K - t * t * t * a.K) <= 1e-12 * rel_scale(b.K, t * t * t * a.K));
        REQUIRE(a.pinching.has_value());
        REQUIRE(b.pinching.has_value());
        REQUIRE(std::abs(*b.pinching - *a.pinching) <=
                1e-12 * std::max({1.0, std::abs(*a.pinching), std::abs(*b.pinching)}));
    }
}

TEST_CASE("property: on {R=0, K!=0} the P1 spectrum is positive and pinching lies in (0, 4/27]") {
    std::mt19937_64 rng(20240812);
    for (int i = 0; i < 100000; ++i) {
        const auto ev = normalize_orientation(random_r0_triple(rng));
        const auto inv = invariants_from_eigenvalues(ev);
        REQUIRE(std::abs(inv.R) <= 1e-12 * std::max(1.0, inv.normA2));
        if (std::abs(inv.K) < 1e-12) continue;
        REQUIRE(inv.p1_spectrum[0] > 0.0);
        REQUIRE(inv.p1_spectrum[1] > 0.0);
        REQUIRE(inv.p1_spectrum[2] > 0.0);
        REQUIRE(inv.pinching.has_value());
        REQUIRE(*inv.pinching > 0.0);
        REQUIRE(*inv.pinching <= zsc::kMaxPinching + 1e-9);
    }
}
