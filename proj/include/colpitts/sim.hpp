#pragma once

// Fixed-step simulation of the master-slave Colpitts pair with scheduled
// controller activation, trajectory recording, and the TSS synchronization
// cost.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "colpitts/backstepping.hpp"
#include "colpitts/integrate.hpp"
#include "colpitts/model.hpp"

namespace colpitts {

/// Thrown when a trajectory leaves the finite range of double. Population
/// optimizers never see it: evaluate_gains converts it to an infinite cost.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(double t)
        : std::runtime_error("state diverged (non-finite) at t = " + std::to_string(t)),
          time_of_failure(t) {}

    double time_of_failure;
};

/// Simulation protocol: horizon, step, activation schedule, initial
/// conditions, recording density. Defaults are the reference
/// synchronization experiment: 70 time units, controller off for the
/// first 20, master started near its equilibrium.
struct SimConfig {
    double dt = 1e-3;
    double t_final = 70.0;
    double t_activate = 20.0;
    State3 master_ic{10.45, 0.718, 8.89};
    State3 slave_ic{8.0, 2.0, 3.0};
    std::size_t record_stride = 10;
    ControlLawVariant law = ControlLawVariant::printed;

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
        if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
            throw std::invalid_argument("t_final must be finite and non-negative");
        }
        if (!(t_activate >= 0.0) || !(t_activate <= t_final)) {
            throw std::invalid_argument("t_activate must lie in [0, t_final]");
        }
        if (record_stride < 1) throw std::invalid_argument("record_stride must be at least 1");
        if (!is_finite(master_ic) || !is_finite(slave_ic)) {
            throw std::invalid_argument("initial conditions must be finite");
        }
        if (!(t_final / dt < 9.0e15)) {
            throw std::invalid_argument("t_final/dt exceeds the step counter range");
        }
    }

    [[nodiscard]] long long steps() const { return std::llround(t_final / dt); }
};

/// Time-indexed record of one controlled run. All sequences share one
/// length, floor(steps/record_stride)+1; errors[i] is exactly
/// master[i] - slave[i]. tss accumulates at every integration step over the
/// full horizon, independent of the recording stride.
struct Trajectory {
    std::vector<double> times;
    std::vector<State3> master;
    std::vector<State3> slave;
    std::vector<ErrorState> errors;
    std::vector<ControlSignal> control;
    double tss = 0.0;
};

struct CostResult {
    double tss = 0.0;
    double evals_time = 0.0;
};

namespace detail {

struct PairState {
    State3 m;
    State3 s;

    friend PairState operator+(PairState l, const PairState& r) {
        return {l.m + r.m, l.s + r.s};
    }
    friend PairState operator*(double c, const PairState& v) {
        return {c * v.m, c * v.s};
    }
};

}  // namespace detail

/// Integrates master and slave simultaneously. The control input is zero up
/// to and including t_activate and follows the backstepping law strictly
/// after it; the switch applies at every stage evaluation time inside a
/// step, so a step straddling t_activate is partially controlled.
/// TSS accumulates by the trapezoidal rule at every step over [0, t_final].
inline Trajectory simulate_pair(const OscillatorParams& p, const Gains& g, const SimConfig& cfg) {
    p.validate();
    g.validate(p);
    cfg.validate();

    const long long steps = cfg.steps();
    const auto control_at = [&](double t, const detail::PairState& ps) -> ControlSignal {
        if (!(t > cfg.t_activate)) return 0.0;
        return control_law(error_between(ps.m, ps.s), ps.m.z, g, p, cfg.law);
    };
    const auto field = [&](double t, const detail::PairState& ps) -> detail::PairState {
        const ControlSignal u = control_at(t, ps);
        return {master_derivative(ps.m, p), slave_derivative(ps.s, p, u)};
    };

    Trajectory traj;
    const std::size_t n_samples =
        static_cast<std::size_t>(steps / static_cast<long long>(cfg.record_stride)) + 1;
    traj.times.reserve(n_samples);
    traj.master.reserve(n_samples);
    traj.slave.reserve(n_samples);
    traj.errors.reserve(n_samples);
    traj.control.reserve(n_samples);

    detail::PairState state{cfg.master_ic, cfg.slave_ic};
    const auto record = [&](double t) {
        traj.times.push_back(t);
        traj.master.push_back(state.m);
        traj.slave.push_back(state.s);
        traj.errors.push_back(error_between(state.m, state.s));
        traj.control.push_back(control_at(t, state));
    };

    record(0.0);
    double prev_sq = squared_norm(error_between(state.m, state.s));
    for (long long i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) * cfg.dt;
        state = rk4_step(field, t, state, cfg.dt);
        const double t_next = static_cast<double>(i + 1) * cfg.dt;
        if (!is_finite(state.m) || !is_finite(state.s)) throw DivergenceError(t_next);
        const double sq = squared_norm(error_between(state.m, state.s));
        traj.tss += 0.5 * cfg.dt * (prev_sq + sq);
        prev_sq = sq;
        if ((i + 1) % static_cast<long long>(cfg.record_stride) == 0) record(t_next);
    }
    return traj;
}

/// Trapezoidal TSS over the recorded samples of a trajectory. Equals the
/// per-step traj.tss bit for bit when record_stride = 1; coarser strides
/// trade quadrature resolution for storage, so prefer traj.tss for costs.
[[nodiscard]] inline CostResult tss_cost(const Trajectory& traj) {
    if (traj.times.empty()) return {0.0, 0.0};
    double sum = 0.0;
    for (std::size_t i = 1; i < traj.times.size(); ++i) {
        const double dt = traj.times[i] - traj.times[i - 1];
        sum += 0.5 * dt * (squared_norm(traj.errors[i - 1]) + squared_norm(traj.errors[i]));
    }
    return {sum, traj.times.back()};
}

/// The gain-tuning objective: TSS of the reference protocol in cfg at gains
/// (k1, 0, k3). Pure and deterministic; identical arguments return identical
/// bits. Trajectory recording is skipped. A divergent run costs +infinity so
/// optimizers treat it as maximally bad; invalid gains are the caller's
/// error and throw.
[[nodiscard]] inline double evaluate_gains(double k1, double k3, const OscillatorParams& p,
                                           const SimConfig& cfg) {
    const Gains g = Gains::make(k1, k3, p);
    SimConfig lean = cfg;
    lean.record_stride = static_cast<std::size_t>(cfg.steps()) + 1;
    try {
        return simulate_pair(p, g, lean).tss;
    } catch (const DivergenceError&) {
        return std::numeric_limits<double>::infinity();
    }
}

/// Uncontrolled single-oscillator run (chaos portraits, boundedness checks).
/// sup_norm tracks the max-abs component over every integration step, not
/// only recorded samples.
struct SingleTrajectory {
    std::vector<double> times;
    std::vector<State3> states;
    double sup_norm = 0.0;
};

inline SingleTrajectory simulate_single(const OscillatorParams& p, const State3& ic, double dt,
                                        double t_final, std::size_t record_stride = 1) {
    p.validate();
    SimConfig probe;
    probe.dt = dt;
    probe.t_final = t_final;
    probe.t_activate = 0.0;
    probe.master_ic = ic;
    probe.record_stride = record_stride;
    probe.validate();

    const long long steps = probe.steps();
    const auto field = [&](double, const State3& s) { return master_derivative(s, p); };

    SingleTrajectory traj;
    const std::size_t n_samples =
        static_cast<std::size_t>(steps / static_cast<long long>(record_stride)) + 1;
    traj.times.reserve(n_samples);
    traj.states.reserve(n_samples);

    State3 state = ic;
    traj.times.push_back(0.0);
    traj.states.push_back(state);
    traj.sup_norm = max_abs(state);
    for (long long i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) * dt;
        state = rk4_step(field, t, state, dt);
        if (!is_finite(state)) throw DivergenceError(static_cast<double>(i + 1) * dt);
        traj.sup_norm = std::max(traj.sup_norm, max_abs(state));
        if ((i + 1) % static_cast<long long>(record_stride) == 0) {
            traj.times.push_back(static_cast<double>(i + 1) * dt);
            traj.states.push_back(state);
        }
    }
    return traj;
}

}  // namespace colpitts
