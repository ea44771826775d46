#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "colpitts/model.hpp"
#include "colpitts/rng.hpp"

using Catch::Approx;
using namespace colpitts;

TEST_CASE("parameter validation", "[model]") {
    OscillatorParams p = OscillatorParams::typical();
    REQUIRE_NOTHROW(p.validate());
    REQUIRE(p.a == 30.0);
    REQUIRE(p.b == 0.8);
    REQUIRE(p.c == 20.0);
    REQUIRE(p.d == 0.08);
    REQUIRE(p.e == 10.0);

    SECTION("rejects non-positive coefficients") {
        auto zeroed = [](auto mutate) {
            OscillatorParams bad = OscillatorParams::typical();
            mutate(bad);
            return bad;
        };
        REQUIRE_THROWS_AS(zeroed([](auto& q) { q.a = 0.0; }).validate(), std::invalid_argument);
        REQUIRE_THROWS_AS(zeroed([](auto& q) { q.b = -1.0; }).validate(), std::invalid_argument);
        REQUIRE_THROWS_AS(zeroed([](auto& q) { q.c = 0.0; }).validate(), std::invalid_argument);
        REQUIRE_THROWS_AS(zeroed([](auto& q) { q.d = 0.0; }).validate(), std::invalid_argument);
    }
    SECTION("rejects e <= 1") {
        p.e = 1.0;
        REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
    }
}

TEST_CASE("drive nonlinearity", "[model]") {
    const OscillatorParams p = OscillatorParams::typical();

    SECTION("breakpoint and branches") {
        REQUIRE(nonlinearity_F(9.0, p) == 0.0);
        REQUIRE(nonlinearity_F(100.0, p) == 0.0);
        REQUIRE(nonlinearity_F(0.0, p) == 9.0);
    }
    SECTION("non-increasing, non-negative on a sweep") {
        double prev = nonlinearity_F(-20.0, p);
        for (double z = -19.75; z <= 20.0; z += 0.25) {
            const double f = nonlinearity_F(z, p);
            REQUIRE(f >= 0.0);
            REQUIRE(f <= prev);
            prev = f;
        }
    }
    SECTION("continuous at the breakpoint") {
        const double eps = 1e-9;
        REQUIRE(nonlinearity_F(p.e - 1.0 - eps, p) == Approx(0.0).margin(2e-9));
        REQUIRE(nonlinearity_F(p.e - 1.0 + eps, p) == 0.0);
    }
}

TEST_CASE("master vector field", "[model]") {
    const OscillatorParams p = OscillatorParams::typical();

    SECTION("hand-evaluated points") {
        const State3 d0 = master_derivative({0.0, 0.0, 0.0}, p);
        REQUIRE(d0.x == -270.0);
        REQUIRE(d0.y == 20.0);
        REQUIRE(d0.z == 0.0);

        const State3 d9 = master_derivative({0.0, 0.0, 9.0}, p);
        REQUIRE(d9.x == 0.0);
        REQUIRE(d9.y == 11.0);
        REQUIRE(d9.z == Approx(-0.72).margin(1e-15));
    }
    SECTION("analytic equilibrium in the active branch") {
        const double z_eq = p.a * (p.e - 1.0) / (p.a + p.d);
        const double y_eq = p.d * z_eq;
        const double x_eq = p.c - p.b * y_eq - z_eq;
        REQUIRE(x_eq == Approx(10.449468085106384).margin(1e-12));
        REQUIRE(y_eq == Approx(0.7180851063829787).margin(1e-12));
        REQUIRE(z_eq == Approx(8.976063829787234).margin(1e-12));

        const State3 d = master_derivative({x_eq, y_eq, z_eq}, p);
        REQUIRE(std::fabs(d.x) < 1e-12);
        REQUIRE(std::fabs(d.y) < 1e-12);
        REQUIRE(std::fabs(d.z) < 1e-12);
    }
}

TEST_CASE("slave vector field", "[model]") {
    const OscillatorParams p = OscillatorParams::typical();
    std::mt19937_64 rng(42);

    SECTION("u = 0 reduces to the master field") {
        for (int i = 0; i < 100; ++i) {
            const State3 s{uniform_in(rng, -20, 20), uniform_in(rng, -20, 20),
                           uniform_in(rng, -20, 20)};
            const State3 dm = master_derivative(s, p);
            const State3 ds = slave_derivative(s, p, 0.0);
            REQUIRE(ds.x == dm.x);
            REQUIRE(ds.y == dm.y);
            REQUIRE(ds.z == dm.z);
        }
    }
    SECTION("hand-evaluated point with control") {
        const State3 d = slave_derivative({0.0, 0.0, 0.0}, p, 5.0);
        REQUIRE(d.x == -265.0);
        REQUIRE(d.y == 20.0);
        REQUIRE(d.z == 0.0);
    }
    SECTION("affine in u with unit coefficient on x only") {
        for (int i = 0; i < 100; ++i) {
            const State3 s{uniform_in(rng, -20, 20), uniform_in(rng, -20, 20),
                           uniform_in(rng, -20, 20)};
            const double u = uniform_in(rng, -50, 50);
            const State3 diff = slave_derivative(s, p, u) - slave_derivative(s, p, 0.0);
            // x picks up u exactly up to the one rounding in (y - aF) + u
            REQUIRE(diff.x == Approx(u).epsilon(1e-12));
            REQUIRE(diff.y == 0.0);
            REQUIRE(diff.z == 0.0);
        }
    }
}

TEST_CASE("error vector field", "[model]") {
    const OscillatorParams p = OscillatorParams::typical();

    SECTION("synchronized state is invariant") {
        const ErrorState d = error_derivative({0.0, 0.0, 0.0}, 1.234, p, 0.0);
        REQUIRE(d.e1 == 0.0);
        REQUIRE(d.e2 == 0.0);
        REQUIRE(d.e3 == 0.0);
    }
    SECTION("hand-evaluated point, both drive terms past the breakpoint") {
        const ErrorState d = error_derivative({1.0, 2.0, 3.0}, 20.0, p, 0.0);
        REQUIRE(d.e1 == 2.0);
        REQUIRE(d.e2 == Approx(-5.6).margin(1e-15));
        REQUIRE(d.e3 == Approx(1.76).margin(1e-15));
    }
    SECTION("matches the master-minus-slave subtraction oracle") {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 500; ++i) {
            const State3 m{uniform_in(rng, -15, 25), uniform_in(rng, -15, 25),
                           uniform_in(rng, -5, 15)};
            const ErrorState e{uniform_in(rng, -10, 10), uniform_in(rng, -10, 10),
                               uniform_in(rng, -10, 10)};
            const double u = uniform_in(rng, -100, 100);
            const State3 s = m - State3{e.e1, e.e2, e.e3};
            const State3 oracle = master_derivative(m, p) - slave_derivative(s, p, u);
            const ErrorState d = error_derivative(e, m.z, p, u);
            REQUIRE(d.e1 == Approx(oracle.x).margin(1e-12));
            REQUIRE(d.e2 == Approx(oracle.y).margin(1e-12));
            REQUIRE(d.e3 == Approx(oracle.z).margin(1e-12));
        }
    }
    SECTION("error_between is componentwise subtraction") {
        const ErrorState e = error_between({1.0, 2.0, 3.0}, {0.25, 4.0, -1.0});
        REQUIRE(e.e1 == 0.75);
        REQUIRE(e.e2 == -2.0);
        REQUIRE(e.e3 == 4.0);
    }
}
