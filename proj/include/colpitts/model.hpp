#pragma once

// Dimensionless Colpitts oscillator model: the piecewise driving
// nonlinearity and the master / slave / error vector fields.
//
// All functions here are pure; they can be called concurrently from any
// number of threads.

#include <cmath>
#include <stdexcept>
#include <string>

namespace colpitts {

/// The five dimensionless coefficients of the oscillator.
/// Defaults are the standard chaotic operating point.
struct OscillatorParams {
    double a = 30.0;   ///< gain
    double b = 0.8;    ///< damping
    double c = 20.0;   ///< bias
    double d = 0.08;   ///< leak rate
    double e = 10.0;   ///< breakpoint coefficient; the drive kinks at z = e - 1

    /// a, b, c, d must be positive and e > 1 (so the breakpoint e-1 is positive).
    void validate() const {
        if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0) || !(d > 0.0)) {
            throw std::invalid_argument("oscillator parameters a, b, c, d must be positive");
        }
        if (!(e > 1.0)) {
            throw std::invalid_argument("oscillator parameter e must exceed 1");
        }
    }

    [[nodiscard]] static OscillatorParams typical() { return OscillatorParams{}; }
};

/// A phase-space point (capacitor-1 voltage, inductor current, capacitor-2
/// voltage, all dimensionless). Doubles as the value type for derivatives.
struct State3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend State3 operator+(State3 l, const State3& r) {
        return {l.x + r.x, l.y + r.y, l.z + r.z};
    }
    friend State3 operator-(State3 l, const State3& r) {
        return {l.x - r.x, l.y - r.y, l.z - r.z};
    }
    friend State3 operator*(double s, const State3& v) {
        return {s * v.x, s * v.y, s * v.z};
    }
};

[[nodiscard]] inline bool is_finite(const State3& s) {
    return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.z);
}

[[nodiscard]] inline double max_abs(const State3& s) {
    return std::max({std::fabs(s.x), std::fabs(s.y), std::fabs(s.z)});
}

/// Control input added to the first slave state equation.
using ControlSignal = double;

/// Master-minus-slave state difference.
struct ErrorState {
    double e1 = 0.0;
    double e2 = 0.0;
    double e3 = 0.0;

    friend ErrorState operator+(ErrorState l, const ErrorState& r) {
        return {l.e1 + r.e1, l.e2 + r.e2, l.e3 + r.e3};
    }
    friend ErrorState operator-(ErrorState l, const ErrorState& r) {
        return {l.e1 - r.e1, l.e2 - r.e2, l.e3 - r.e3};
    }
    friend ErrorState operator*(double s, const ErrorState& v) {
        return {s * v.e1, s * v.e2, s * v.e3};
    }
};

[[nodiscard]] inline bool is_finite(const ErrorState& e) {
    return std::isfinite(e.e1) && std::isfinite(e.e2) && std::isfinite(e.e3);
}

[[nodiscard]] inline double max_abs(const ErrorState& e) {
    return std::max({std::fabs(e.e1), std::fabs(e.e2), std::fabs(e.e3)});
}

[[nodiscard]] inline double squared_norm(const ErrorState& e) {
    return e.e1 * e.e1 + e.e2 * e.e2 + e.e3 * e.e3;
}

[[nodiscard]] inline ErrorState error_between(const State3& master, const State3& slave) {
    return {master.x - slave.x, master.y - slave.y, master.z - slave.z};
}

/// Piecewise-linear drive: e-1-z below the breakpoint, 0 at and above it.
/// Continuous, non-negative, non-increasing in z.
[[nodiscard]] inline double nonlinearity_F(double z, const OscillatorParams& p) {
    return std::max(p.e - 1.0 - z, 0.0);
}

/// Uncontrolled (master) vector field.
[[nodiscard]] inline State3 master_derivative(const State3& s, const OscillatorParams& p) {
    return {s.y - p.a * nonlinearity_F(s.z, p),
            p.c - s.x - p.b * s.y - s.z,
            s.y - p.d * s.z};
}

/// Controlled (slave) vector field; u enters only the first equation, linearly.
[[nodiscard]] inline State3 slave_derivative(const State3& s, const OscillatorParams& p,
                                             ControlSignal u) {
    return {s.y - p.a * nonlinearity_F(s.z, p) + u,
            p.c - s.x - p.b * s.y - s.z,
            s.y - p.d * s.z};
}

/// Error dynamics of the master-slave pair, written in the error variables.
/// Equals master_derivative(s_m) - slave_derivative(s_m - err, u) for every
/// master state s_m with z-component z_master.
[[nodiscard]] inline ErrorState error_derivative(const ErrorState& err, double z_master,
                                                 const OscillatorParams& p, ControlSignal u) {
    return {err.e2 - p.a * nonlinearity_F(z_master, p) +
                p.a * nonlinearity_F(z_master - err.e3, p) - u,
            -err.e1 - p.b * err.e2 - err.e3,
            err.e2 - p.d * err.e3};
}

}  // namespace colpitts
