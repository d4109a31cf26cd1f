#include <cmath>

#include "biphoton/quadrature.hpp"
#include "biphoton/units.hpp"
#include "doctest.h"

using namespace biphoton;
using doctest::Approx;

TEST_SUITE("quadrature") {

TEST_CASE("a single Kronrod panel integrates degree-22 polynomials exactly") {
    const auto r = quad::gauss_kronrod15([](double x) { return std::pow(x, 22) + 3.0 * x; }, 0.0, 1.0);
    CHECK(r.value == Approx(1.0 / 23.0 + 1.5).epsilon(1e-14));
    CHECK(r.evaluations == 15);
    // the embedded Gauss rule is exact to degree 13
    const auto g = quad::gauss_kronrod15([](double x) { return std::pow(x, 13); }, -1.0, 2.0);
    CHECK(g.abs_error < 1e-10);
}

TEST_CASE("adaptive integration of standard integrals") {
    CHECK(quad::integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0).value ==
          Approx(std::sqrt(kPi)).epsilon(1e-13));
    CHECK(quad::integrate([](double x) { return std::sin(x) * std::sin(x); }, 0.0, 50.0 * kPi).value ==
          Approx(25.0 * kPi).epsilon(1e-12));
    const auto r = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {1e-8, 0.0, 500});
    CHECK(r.value == Approx(2.0).epsilon(1e-7));
    CHECK(r.converged);
}

TEST_CASE("budget exhaustion is reported") {
    const auto r = quad::integrate([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, {1e-14, 0.0, 4});
    CHECK_FALSE(r.converged);
}

TEST_CASE("results are reproducible to the bit") {
    const auto f = [](double x) { return std::cos(40.0 * x) / (1.0 + x * x); };
    const auto a = quad::integrate(f, -3.0, 7.0);
    const auto b = quad::integrate(f, -3.0, 7.0);
    CHECK(a.value == b.value);
    CHECK(a.abs_error == b.abs_error);
}

}  // TEST_SUITE
