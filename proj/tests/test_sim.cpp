#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "colpitts/integrate.hpp"
#include "colpitts/sim.hpp"

using Catch::Approx;
using namespace colpitts;

namespace {

const OscillatorParams kTypical = OscillatorParams::typical();

}  // namespace

TEST_CASE("rk4 single step", "[integrate]") {
    SECTION("constant field is exact") {
        const auto field = [](double, const State3&) { return State3{1.0, 0.0, 0.0}; };
        const State3 s = rk4_step(field, 0.0, State3{0.0, 0.0, 0.0}, 0.5);
        REQUIRE(s.x == 0.5);
        REQUIRE(s.y == 0.0);
        REQUIRE(s.z == 0.0);
    }
    SECTION("scalar exponential decay matches the one-step Taylor polynomial") {
        const auto field = [](double, double s) { return -s; };
        const double h = 0.1;
        const double got = rk4_step(field, 0.0, 1.0, h);
        const double expected = 1.0 - h + h * h / 2.0 - h * h * h / 6.0 + h * h * h * h / 24.0;
        REQUIRE(got == Approx(expected).margin(1e-15));
        REQUIRE(std::fabs(got - std::exp(-h)) < 1e-7);
    }
}

TEST_CASE("rk4 is fourth order on a linear system", "[integrate]") {
    const auto field = [](double, const State3& s) {
        return State3{-s.x, -2.0 * s.y, -0.5 * s.z};
    };
    const auto integrate = [&](double h) {
        State3 s{1.0, 1.0, 1.0};
        const long long n = std::llround(1.0 / h);
        for (long long i = 0; i < n; ++i) s = rk4_step(field, static_cast<double>(i) * h, s, h);
        const State3 exact{std::exp(-1.0), std::exp(-2.0), std::exp(-0.5)};
        return max_abs(s - exact);
    };
    const double coarse = integrate(0.02);
    const double fine = integrate(0.01);
    REQUIRE(coarse / fine > 12.0);
    REQUIRE(coarse / fine < 20.0);
}

TEST_CASE("simulation config validation", "[sim]") {
    SimConfig cfg;
    REQUIRE_NOTHROW(cfg.validate());

    SECTION("dt") {
        cfg.dt = 0.0;
        REQUIRE_THROWS_WITH(cfg.validate(), "dt must be positive");
        cfg.dt = -1.0;
        REQUIRE_THROWS_WITH(cfg.validate(), "dt must be positive");
    }
    SECTION("activation window") {
        cfg.t_activate = 71.0;
        REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg.t_activate = -1.0;
        REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SECTION("record stride") {
        cfg.record_stride = 0;
        REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SECTION("step counter range") {
        cfg.dt = 1e-300;
        REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
}

TEST_CASE("controlled pair simulation", "[sim]") {
    const Gains g = Gains::make(0.0, 2.4982, kTypical);

    SECTION("identical systems stay identical") {
        SimConfig cfg;
        cfg.t_final = 1.0;
        cfg.t_activate = 0.0;
        cfg.slave_ic = cfg.master_ic;
        cfg.record_stride = 1;
        const Trajectory traj = simulate_pair(kTypical, g, cfg);
        REQUIRE(traj.tss == 0.0);
        for (const ErrorState& e : traj.errors) {
            REQUIRE(e.e1 == 0.0);
            REQUIRE(e.e2 == 0.0);
            REQUIRE(e.e3 == 0.0);
        }
        for (const ControlSignal u : traj.control) REQUIRE(u == 0.0);
    }
    SECTION("activation at the horizon means a pure uncontrolled run") {
        SimConfig cfg;
        cfg.t_final = 2.0;
        cfg.t_activate = 2.0;
        const Trajectory traj = simulate_pair(kTypical, g, cfg);
        for (const ControlSignal u : traj.control) REQUIRE(u == 0.0);
        REQUIRE(traj.tss > 0.0);
    }
    SECTION("sample bookkeeping") {
        SimConfig cfg;
        cfg.dt = 0.1;
        cfg.t_final = 1.0;
        cfg.t_activate = 0.0;
        cfg.record_stride = 3;
        const Trajectory traj = simulate_pair(kTypical, g, cfg);
        REQUIRE(traj.times.size() == 4);  // steps 0, 3, 6, 9
        REQUIRE(traj.master.size() == 4);
        REQUIRE(traj.slave.size() == 4);
        REQUIRE(traj.errors.size() == 4);
        REQUIRE(traj.control.size() == 4);
        REQUIRE(traj.times[1] == Approx(0.3).margin(1e-15));
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const ErrorState direct = error_between(traj.master[i], traj.slave[i]);
            REQUIRE(traj.errors[i].e1 == direct.e1);
            REQUIRE(traj.errors[i].e2 == direct.e2);
            REQUIRE(traj.errors[i].e3 == direct.e3);
        }
    }
    SECTION("reference run synchronizes after activation and not before") {
        SimConfig cfg;  // defaults: dt 1e-3, horizon 70, activation 20
        const Trajectory traj = simulate_pair(kTypical, g, cfg);
        REQUIRE(max_abs(traj.errors.back()) < 1e-4);

        double worst_before = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            if (traj.times[i] >= 15.0 && traj.times[i] <= 20.0) {
                worst_before = std::max(worst_before, max_abs(traj.errors[i]));
            }
        }
        REQUIRE(worst_before > 1.0);
    }
    SECTION("diverging state reports the failure instead of propagating NaN") {
        SimConfig cfg;
        cfg.t_final = 1.0;
        cfg.t_activate = 0.0;
        cfg.master_ic = {1e308, 0.0, 0.0};
        REQUIRE_THROWS_AS(simulate_pair(kTypical, g, cfg), DivergenceError);
        try {
            (void)simulate_pair(kTypical, g, cfg);
        } catch (const DivergenceError& e) {
            REQUIRE(e.time_of_failure > 0.0);
            REQUIRE(e.time_of_failure <= 1.0);
        }
    }
    SECTION("invalid gains are rejected before integration") {
        SimConfig cfg;
        cfg.t_final = 0.1;
        REQUIRE_THROWS_AS(simulate_pair(kTypical, Gains{0.9, 0.0, 1.0}, cfg),
                          std::invalid_argument);
    }
}

TEST_CASE("trajectory cost", "[sim]") {
    SECTION("zero-error trajectory costs nothing") {
        Trajectory traj;
        for (int i = 0; i <= 8; ++i) {
            traj.times.push_back(0.25 * i);
            traj.errors.push_back({0.0, 0.0, 0.0});
        }
        REQUIRE(tss_cost(traj).tss == 0.0);
    }
    SECTION("constant unit error over two time units") {
        Trajectory traj;
        for (int i = 0; i <= 16; ++i) {
            traj.times.push_back(0.125 * i);
            traj.errors.push_back({1.0, 0.0, 0.0});
        }
        const CostResult c = tss_cost(traj);
        REQUIRE(c.tss == 2.0);
        REQUIRE(c.evals_time == 2.0);
    }
    SECTION("constant (1,2,3) error over one time unit") {
        Trajectory traj;
        for (int i = 0; i <= 8; ++i) {
            traj.times.push_back(0.125 * i);
            traj.errors.push_back({1.0, 2.0, 3.0});
        }
        REQUIRE(tss_cost(traj).tss == 14.0);
    }
    SECTION("matches the per-step accumulator at stride 1 on a dyadic grid") {
        SimConfig cfg;
        cfg.dt = 0.125;
        cfg.t_final = 4.0;
        cfg.t_activate = 4.0;
        cfg.record_stride = 1;
        const Trajectory traj = simulate_pair(kTypical, Gains::make(0.0, 1.0, kTypical), cfg);
        REQUIRE(tss_cost(traj).tss == traj.tss);
    }
}

TEST_CASE("cost accumulates consistently across a split horizon", "[sim]") {
    const Gains g = Gains::make(0.0, 2.4982, kTypical);

    SimConfig full;
    full.t_final = 30.0;
    full.t_activate = 20.0;
    full.record_stride = 1;
    const Trajectory whole = simulate_pair(kTypical, g, full);

    SimConfig first = full;
    first.t_final = 15.0;
    first.t_activate = 15.0;  // controller untouched on [0, 15]
    const Trajectory head = simulate_pair(kTypical, g, first);

    SimConfig second = full;
    second.t_final = 15.0;
    second.t_activate = 5.0;  // global t = 20 in continuation time
    second.master_ic = head.master.back();
    second.slave_ic = head.slave.back();
    const Trajectory tail = simulate_pair(kTypical, g, second);

    REQUIRE(whole.tss == Approx(head.tss + tail.tss).epsilon(1e-9));
    REQUIRE(head.tss <= whole.tss);

    const State3 drift = whole.master.back() - tail.master.back();
    REQUIRE(max_abs(drift) == 0.0);
    const State3 drift_slave = whole.slave.back() - tail.slave.back();
    REQUIRE(max_abs(drift_slave) == 0.0);
}

TEST_CASE("gain evaluation objective", "[sim]") {
    SimConfig cfg;
    cfg.dt = 5e-3;
    cfg.t_final = 70.0;
    cfg.t_activate = 0.0;

    SECTION("deterministic to the bit") {
        const double a = evaluate_gains(0.0, 2.4982, kTypical, cfg);
        const double b = evaluate_gains(0.0, 2.4982, kTypical, cfg);
        REQUIRE(a == b);
        REQUIRE(a > 0.0);
    }
    SECTION("agrees with the recorded-trajectory accumulator") {
        const Trajectory traj = simulate_pair(kTypical, Gains::make(0.0, 2.4982, kTypical), cfg);
        REQUIRE(evaluate_gains(0.0, 2.4982, kTypical, cfg) == traj.tss);
    }
    SECTION("identical initial conditions cost zero for any gains") {
        SimConfig same = cfg;
        same.t_final = 1.0;
        same.slave_ic = same.master_ic;
        REQUIRE(evaluate_gains(0.3, 7.0, kTypical, same) == 0.0);
    }
    SECTION("near-optimal gain pairs cost nearly the same") {
        const double row1 = evaluate_gains(2.8642e-05, 2.4988, kTypical, cfg);
        const double row5 = evaluate_gains(4.8248e-06, 2.4978, kTypical, cfg);
        REQUIRE(std::fabs(row1 - row5) < 0.001);
    }
    SECTION("cost is flat in k3 across the optimum shelf") {
        SimConfig shelf;
        shelf.t_final = 70.0;
        shelf.t_activate = 20.0;
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (double k3 : {2.0, 2.5, 3.0}) {
            const double tss = evaluate_gains(0.0, k3, kTypical, shelf);
            lo = std::min(lo, tss);
            hi = std::max(hi, tss);
        }
        REQUIRE((hi - lo) / lo < 0.005);
    }
    SECTION("divergent runs cost infinity instead of throwing") {
        SimConfig bad = cfg;
        bad.t_final = 5.0;
        bad.slave_ic = {1e200, 0.0, 0.0};
        REQUIRE(std::isinf(evaluate_gains(0.0, 2.4982, kTypical, bad)));
    }
    SECTION("out-of-domain gains are the caller's error") {
        REQUIRE_THROWS_AS(evaluate_gains(0.85, 1.0, kTypical, cfg), std::invalid_argument);
        REQUIRE_THROWS_AS(evaluate_gains(-0.1, 1.0, kTypical, cfg), std::invalid_argument);
    }
}

TEST_CASE("uncontrolled single run", "[sim]") {
    SECTION("bounded over a moderate horizon with the running sup-norm") {
        const SingleTrajectory traj = simulate_single(kTypical, {8.0, 2.0, 3.0}, 1e-3, 50.0, 10);
        REQUIRE(traj.times.size() == 5001);
        REQUIRE(traj.sup_norm < 100.0);
        REQUIRE(traj.sup_norm > 1.0);
    }
    SECTION("divergence is reported") {
        REQUIRE_THROWS_AS(simulate_single(kTypical, {1e308, 0.0, 0.0}, 1e-3, 1.0),
                          DivergenceError);
    }
}
