#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "zsc/quadrature.hpp"

using zsc::integrate;
using zsc::QuadOptions;

TEST_CASE("polynomials are integrated exactly") {
    auto r = integrate([](double x) { return 3.0 * x * x; }, 0.0, 2.0);
    CHECK(r.value == Catch::Approx(8.0).epsilon(1e-14));
    CHECK(r.converged);
}

TEST_CASE("smooth oscillatory integrand to relative 1e-8") {
    auto r = integrate([](double x) { return std::sin(10.0 * x) * std::exp(-x); }, 0.0, 5.0);
    // closed form: int sin(kx) e^{-x} dx = [e^{-x}(-sin(kx) - k cos(kx))/(1+k^2)]
    auto F = [](double x) {
        const double k = 10.0;
        return std::exp(-x) * (-std::sin(k * x) - k * std::cos(k * x)) / (1.0 + k * k);
    };
    CHECK(r.value == Catch::Approx(F(5.0) - F(0.0)).epsilon(1e-9));
}

TEST_CASE("kinked integrand with breakpoint split") {
    // |x - 1| on [0, 3]: exact 0.5 + 2 = 2.5
    QuadOptions opts;
    opts.breakpoints = {1.0};
    auto r = integrate([](double x) { return std::abs(x - 1.0); }, 0.0, 3.0, opts);
    CHECK(r.value == Catch::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("kinked integrand without declared breakpoint still converges") {
    auto r = integrate([](double x) { return std::abs(x - std::numbers::sqrt2); }, 0.0, 3.0);
    const double s = std::numbers::sqrt2;
    const double exact = s * s / 2.0 + (3.0 - s) * (3.0 - s) / 2.0;
    CHECK(r.value == Catch::Approx(exact).epsilon(1e-8));
}

TEST_CASE("zero integrand") {
    auto r = integrate([](double) { return 0.0; }, -1.0, 1.0);
    CHECK(r.value == 0.0);
    CHECK(r.converged);
}

TEST_CASE("empty interval") {
    auto r = integrate([](double x) { return x; }, 1.0, 1.0);
    CHECK(r.value == 0.0);
}

TEST_CASE("determinism: identical bits across repeated evaluation") {
    auto f = [](double x) { return std::cos(x * x) / (1.0 + x); };
    auto a = integrate(f, 0.0, 10.0);
    auto b = integrate(f, 0.0, 10.0);
    CHECK(a.value == b.value);
    CHECK(a.error == b.error);
}
