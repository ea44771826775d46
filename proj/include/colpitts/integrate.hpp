#pragma once

// Classical fixed-step 4th-order Runge-Kutta. Generic over the state type:
// anything with s + s and double * s (double itself qualifies, as do State3
// and ErrorState).

namespace colpitts {

/// One RK4 update of ds/dt = field(t, s) from t to t + dt. Deterministic;
/// evaluates the field exactly four times, at t, t + dt/2 (twice), t + dt.
template <typename State, typename Field>
[[nodiscard]] State rk4_step(Field&& field, double t, const State& s, double dt) {
    const double half = 0.5 * dt;
    const State k1 = field(t, s);
    const State k2 = field(t + half, s + half * k1);
    const State k3 = field(t + half, s + half * k2);
    const State k4 = field(t + dt, s + dt * k3);
    return s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace colpitts
