#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "zsc/geometry.hpp"
#include "zsc/models.hpp"

using zsc::ball_volume;
using zsc::CylinderModel;
using zsc::geodesic_radius;
using zsc::GraphModel;
using zsc::growth_exponent;
using zsc::RotationalModel;
using zsc::Vec3;

namespace {

// closed-form arc length of the m=1 profile: int_0^t sqrt(1+s^2/4) ds
double schwarzschild_arc(double t) {
    return 0.25 * t * std::sqrt(4.0 + t * t) + std::asinh(0.5 * t);
}

}  // namespace

TEST_CASE("geodesic radius vanishes at the base point") {
    auto m = RotationalModel::schwarzschild(1.0);
    CHECK(geodesic_radius(*m, {0.0, 1.0, 2.0}) == 0.0);
    CylinderModel c(1.0);
    CHECK(geodesic_radius(c, {0.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("rotational radius matches the closed-form arc length at t = 2") {
    auto m = RotationalModel::schwarzschild(1.0);
    const double rho = geodesic_radius(*m, {2.0, 1.0, 0.0});
    CHECK(rho == Catch::Approx(schwarzschild_arc(2.0)).epsilon(1e-12));
}

TEST_CASE("cylinder distance between opposite points of the unit circle is pi") {
    CylinderModel c(1.0);
    CHECK(geodesic_radius(c, {0.0, 0.0, std::numbers::pi}) ==
          Catch::Approx(std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("cylinder ball volume is Euclidean for r < pi and matches Monte Carlo") {
    CylinderModel c(1.0);
    const double r = 2.0;
    const double v = ball_volume(c, r);
    CHECK(v == Catch::Approx(4.0 / 3.0 * std::numbers::pi * r * r * r).epsilon(1e-8));

    // Monte Carlo oracle in the flat product metric: sample the box, wrap s
    std::mt19937_64 rng(20240813);
    std::uniform_real_distribution<double> unif(-r, r);
    const int n = 400000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const double u = unif(rng), w = unif(rng), s = unif(rng);
        if (u * u + w * w + s * s <= r * r) ++hits;
    }
    const double mc = 8.0 * r * r * r * hits / n;
    CHECK(std::abs(v - mc) <= 0.01 * mc);
}

TEST_CASE("small-radius volume comparison with the Euclidean ball") {
    CylinderModel c(1.0);
    const double r = 0.05;
    const double v = ball_volume(c, r);
    CHECK(std::abs(v / (4.0 / 3.0 * std::numbers::pi * r * r * r) - 1.0) <= 0.02);
}

TEST_CASE("ball volume is monotone in the radius") {
    auto m = RotationalModel::schwarzschild(1.0);
    double prev = 0.0;
    for (double r : {1.0, 2.0, 5.0, 10.0, 20.0}) {
        const double v = ball_volume(*m, r);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("rotational volume growth exponent is 3") {
    auto m = RotationalModel::schwarzschild(1.0);
    std::vector<double> rs;
    for (double r = 5.0; r <= 50.0; r *= 1.3) rs.push_back(r);
    rs.push_back(50.0);
    const auto fit = growth_exponent(*m, rs);
    CHECK(std::abs(fit.alpha - 3.0) <= 0.1);
}

TEST_CASE("cylinder growth exponent saturates to 2 at large radii") {
    CylinderModel c(1.0);
    const auto fit = growth_exponent(c, {40.0, 60.0, 90.0, 140.0, 200.0});
    CHECK(std::abs(fit.alpha - 2.0) <= 0.1);
}

TEST_CASE("graph growth exponent is 3 inside the box") {
    auto g = GraphModel::named("t2");
    const auto fit = growth_exponent(*g, {2.0, 4.0, 8.0, 16.0});
    CHECK(std::abs(fit.alpha - 3.0) <= 0.1);
}

TEST_CASE("domain containment errors") {
    auto m = RotationalModel::schwarzschild(1.0, 10.0);  // short chart
    CHECK_THROWS_AS(ball_volume(*m, 1000.0), zsc::DomainExceeded);
    auto g = GraphModel::named("t2", 10.0);
    CHECK_THROWS_AS(ball_volume(*g, 50.0), zsc::DomainExceeded);
    CHECK_THROWS_AS(ball_volume(*g, -1.0), zsc::DomainError);
}

TEST_CASE("rotational quadrature volume matches Monte Carlo with the arc oracle") {
    auto m = RotationalModel::schwarzschild(1.0);
    const double r = 10.0;
    const double v = ball_volume(*m, r);

    // MC over the (t, theta) chart box with weight f^2 sqrt(1+f'^2) sin(theta),
    // membership via the closed-form arc length
    std::mt19937_64 rng(777);
    const double t_hi = m->t_of_s(r) * 1.05;
    std::uniform_real_distribution<double> ut(0.0, t_hi), uth(0.0, std::numbers::pi);
    const int n = 400000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = ut(rng), th = uth(rng);
        if (schwarzschild_arc(t) > r) continue;
        const double f = t * t / 4.0 + 1.0;
        acc += f * f * std::sqrt(1.0 + t * t / 4.0) * std::sin(th);
    }
    const double mc = 2.0 * std::numbers::pi * (t_hi * std::numbers::pi) * acc / n;
    CHECK(std::abs(v - mc) <= 0.01 * std::max(v, mc));
}

TEST_CASE("growth exponent rejects bad radius lists") {
    auto m = RotationalModel::schwarzschild(1.0);
    CHECK_THROWS_AS(growth_exponent(*m, {1.0, 2.0, 3.0}), zsc::DomainError);
    CHECK_THROWS_AS(growth_exponent(*m, {1.0, 2.0, 2.0, 3.0}), zsc::DomainError);
}

TEST_CASE("euclidean distance is bounded by the intrinsic distance bound") {
    auto m = RotationalModel::schwarzschild(1.0);
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> ut(0.0, 5.0), uth(0.3, 2.8), uph(0.0, 6.28);
    for (int i = 0; i < 500; ++i) {
        const Vec3 p{ut(rng), uth(rng), uph(rng)}, q{ut(rng), uth(rng), uph(rng)};
        const double amb = (m->position(p) - m->position(q)).norm();
        CHECK(amb <= zsc::intrinsic_distance_bound(*m, p, q) + 1e-9);
    }
    CylinderModel c(1.0);
    std::uniform_real_distribution<double> uu(-5.0, 5.0), ua(0.0, 6.28);
    for (int i = 0; i < 500; ++i) {
        const Vec3 p{uu(rng), uu(rng), ua(rng)}, q{uu(rng), uu(rng), ua(rng)};
        const double amb = (c.position(p) - c.position(q)).norm();
        CHECK(amb <= zsc::intrinsic_distance_bound(c, p, q) + 1e-9);
    }
}
