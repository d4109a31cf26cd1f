#include <cmath>
#include <sstream>

#include "biphoton/crystal.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/units.hpp"
#include "doctest.h"

using namespace biphoton;
using doctest::Approx;

namespace {

const CrystalDispersion kBbo = CrystalDispersion::bbo();
constexpr double kLambda = 0.4047;

long digits5(double v) { return std::lround(v * 1e5); }

// Independent secant iteration on delta_n, started from the two ends of a
// bracket that straddles the root.
double secant_root(double a, double b) {
    const double ns = kBbo.index_ordinary(2.0 * kLambda);
    auto f = [&](double phi) {
        const double no = kBbo.index_ordinary(kLambda);
        const double ne = kBbo.index_extraordinary(kLambda);
        return no * ne / std::hypot(no * std::sin(phi), ne * std::cos(phi)) - ns;
    };
    double fa = f(a), fb = f(b);
    for (int i = 0; i < 100 && std::abs(b - a) > 1e-15; ++i) {
        const double c = b - fb * (b - a) / (fb - fa);
        a = b;
        fa = fb;
        b = c;
        fb = f(b);
    }
    return b;
}

}  // namespace

TEST_SUITE("crystal") {

TEST_CASE("Sellmeier values quoted for BBO at 0.4047 and 0.8094 um") {
    CHECK(digits5(kBbo.index_ordinary(0.4047)) == 169236);
    CHECK(digits5(kBbo.index_extraordinary(0.4047)) == 156801);
    CHECK(digits5(kBbo.index_ordinary(0.8094)) == 166109);
    CHECK(kBbo.index_ordinary(0.4047) > kBbo.index_ordinary(0.8094));
}

TEST_CASE("extraordinary index at the signal wavelength") {
    // n_e^2 = 2.3730 + 0.0128 / (0.8094^2 - 0.0156) - 0.0044 * 0.8094^2, by hand:
    // 0.8094^2 = 0.65512836; 0.0128 / 0.63952836 = 0.0200148...; 0.0044 * 0.65512836 = 0.0028826
    const double l2 = 0.65512836;
    const double expected = std::sqrt(2.3730 + 0.0128 / (l2 - 0.0156) - 0.0044 * l2);
    CHECK(kBbo.index_extraordinary(0.8094) == Approx(expected).epsilon(1e-15));
    CHECK(kBbo.index_extraordinary(0.8094) == Approx(1.5460052344140196).epsilon(1e-14));
}

TEST_CASE("negative uniaxial ordering across the valid range") {
    for (double l = 0.22; l <= 1.06; l += 0.01) {
        CHECK(kBbo.index_extraordinary(l) < kBbo.index_ordinary(l));
        CHECK(kBbo.index_extraordinary(l) > 1.0);
    }
}

TEST_CASE("out-of-range wavelengths raise RangeError") {
    CHECK_THROWS_AS(kBbo.index_ordinary(0.2), RangeError);
    CHECK_THROWS_AS(kBbo.index_extraordinary(1.1), RangeError);
    CHECK_THROWS_AS(kBbo.index_ordinary(-1.0), RangeError);
}

TEST_CASE("pump index limits and monotonicity") {
    CHECK(pump_index(kBbo, {0.0, kLambda}) == Approx(kBbo.index_ordinary(kLambda)).epsilon(1e-15));
    CHECK(pump_index(kBbo, {kPi / 2, kLambda}) ==
          Approx(kBbo.index_extraordinary(kLambda)).epsilon(1e-15));
    double prev = pump_index(kBbo, {0.0, kLambda});
    for (int i = 1; i <= 200; ++i) {
        const double n = pump_index(kBbo, {kPi / 2 * i / 200.0, kLambda});
        CHECK(n < prev);
        prev = n;
    }
}

TEST_CASE("phase matching at the two quoted cuts") {
    const auto a = phase_match(kBbo, {0.7, kLambda});
    REQUIRE(a.theta0.has_value());
    CHECK(*a.theta0 == Approx(0.28).epsilon(0.005 / 0.28));
    const auto b = phase_match(kBbo, {0.5275, kLambda});
    REQUIRE(b.theta0.has_value());
    CHECK(*b.theta0 == Approx(0.1).epsilon(0.05));
}

TEST_CASE("phase matching identities") {
    for (double phi : {0.3, 0.5, 0.55, 0.7, 0.9, 1.2}) {
        const auto r = phase_match(kBbo, {phi, kLambda});
        CHECK(r.delta_n == r.n_p - r.n_o_signal);
        CHECK(r.delta0 == Approx(2.0 * kPi / (kLambda * 1e-4) * r.delta_n).epsilon(1e-14));
        CHECK(r.theta0.has_value() == (r.delta_n < 0.0));
        if (r.theta0) {
            CHECK(*r.theta0 * *r.theta0 == Approx(-2.0 * r.n_o_signal * r.delta_n).epsilon(1e-14));
        }
    }
}

TEST_CASE("below the collinear cut there is no cone") {
    const auto r = phase_match(kBbo, {0.3, kLambda});
    CHECK(r.delta_n > 0.0);
    CHECK_FALSE(r.theta0.has_value());
}

TEST_CASE("collinear cut angle") {
    const double root = collinear_cut_angle(kBbo, kLambda);
    CHECK(root == Approx(0.5008).epsilon(0.001 / 0.5008));
    const auto r = phase_match(kBbo, {root, kLambda});
    CHECK(std::abs(r.delta_n) < 1e-10);

    SUBCASE("independent of the bracket") {
        CHECK(collinear_cut_angle(kBbo, kLambda, {0.3, 0.7}) == Approx(root).epsilon(1e-11));
        CHECK(collinear_cut_angle(kBbo, kLambda, {0.49, 1.2}) == Approx(root).epsilon(1e-11));
    }
    SUBCASE("agrees with a plain secant iteration") {
        CHECK(secant_root(0.45, 0.55) == Approx(root).epsilon(1e-11));
    }
    SUBCASE("no sign change") {
        CHECK_THROWS_AS(collinear_cut_angle(kBbo, kLambda, {0.6, 1.2}), NoSolutionError);
    }
}

TEST_CASE("opening angle interpolation") {
    CHECK(opening_angle_fit(0.7) == Approx(0.2812).epsilon(1e-4));
    CHECK(opening_angle_fit(0.5275) == Approx(0.1029).epsilon(1e-3));
    CHECK(opening_angle_fit(0.5008) == 0.0);
    CHECK_THROWS_AS(opening_angle_fit(0.5), DomainError);
    for (double phi = 0.51; phi <= 0.9 + 1e-12; phi += 0.005) {
        const double exact = *phase_match(kBbo, {phi, kLambda}).theta0;
        CHECK(std::abs(opening_angle_fit(phi) - exact) / exact < 0.05);
    }
}

TEST_CASE("crystal file round trip") {
    const auto shipped = load_crystal(std::string(BIPHOTON_DATA_DIR) + "/bbo.crystal");
    CHECK(shipped.name() == "BBO");
    for (double l : {0.3, 0.4047, 0.8094, 1.0}) {
        CHECK(shipped.index_ordinary(l) == kBbo.index_ordinary(l));
        CHECK(shipped.index_extraordinary(l) == kBbo.index_extraordinary(l));
    }
}

TEST_CASE("malformed crystal files report the offending line") {
    const auto line_of = [](const std::string& text) -> std::size_t {
        std::istringstream in(text);
        try {
            parse_crystal(in);
        } catch (const ConfigError& e) {
            return e.line();
        }
        return 0;
    };
    const std::string ok =
        "name = X\nsellmeier_o = 2.7, 0.01, 0.01, 0.01\nsellmeier_e = 2.3, 0.01, 0.01, 0.004\n"
        "valid_range = 0.2, 1.0\n";
    std::istringstream good(ok);
    CHECK(parse_crystal(good).name() == "X");
    CHECK(line_of("# comment\nname = X\ncolour = red\n") == 3);
    CHECK(line_of(ok + "name = Y\n") == 5);
    CHECK(line_of("name = X\nsellmeier_o = 2.7, 0.01, 0.01\n") == 2);
    CHECK(line_of("name = X\nsellmeier_o = 2.7, 0.01, abc, 0.01\n") == 2);
    CHECK(line_of("name = X\njust text\n") == 2);
    CHECK(line_of("name = X\nsellmeier_o = 2.7, 0.01, 0.01, 0.01\nvalid_range = 0.2, 1.0\n") > 0);
    CHECK_THROWS_AS(load_crystal("/nonexistent/crystal"), ConfigError);
}

}  // TEST_SUITE
