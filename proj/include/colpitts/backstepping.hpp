#pragma once

// Backstepping synchronization controller for the Colpitts master-slave
// pair: gain container, the (e3, w2, w3) residual coordinates, the control
// law, the closed-loop linear system, and Lyapunov diagnostics.
//
// Two control-law variants are provided (see docs/control_law_variants.md
// for the derivation). They coincide when k1 = 0, and the closed loop is
// exactly the linear system of closed_loop_matrix() only at k1 = 0; that is
// also where gain tuning lands in practice.

#include <array>
#include <stdexcept>

#include "colpitts/model.hpp"

namespace colpitts {

/// Controller gains. k2 is part of the design but is pinned to zero: the
/// second backstepping step only admits k2 = 0 (k2 > 0 breaks negative
/// definiteness of the second Lyapunov derivative, k2 < 0 is excluded by
/// construction). It stays in the struct so the full gain triple is visible
/// in configs and manifests.
struct Gains {
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;

    /// Structural conditions, independent of any state: k1 in [0, b),
    /// k2 = 0, k3 >= 0. k1 < b is what makes the second-step Lyapunov
    /// derivative negative definite, so it is checked at construction,
    /// not at use.
    void validate(const OscillatorParams& p) const {
        if (!(k1 >= 0.0)) throw std::invalid_argument("gain k1 must be non-negative");
        if (!(k1 < p.b)) throw std::invalid_argument("gain k1 must be less than damping b");
        if (k2 != 0.0) throw std::invalid_argument("gain k2 must be exactly zero");
        if (!(k3 >= 0.0)) throw std::invalid_argument("gain k3 must be non-negative");
    }

    [[nodiscard]] static Gains make(double k1, double k3, const OscillatorParams& p) {
        Gains g{k1, 0.0, k3};
        g.validate(p);
        return g;
    }
};

/// Residual coordinates in which the controlled error dynamics become
/// linear: e3 unchanged, w2 = e2 + k1*e3, w3 = e1.
struct TransformedError {
    double e3 = 0.0;
    double w2 = 0.0;
    double w3 = 0.0;
};

[[nodiscard]] inline TransformedError transform_error(const ErrorState& err, const Gains& g) {
    return {err.e3, err.e2 + g.k1 * err.e3, err.e1};
}

/// Exact inverse of transform_error for any k1 (exact in floating point when
/// k1*e3 carries no rounding, e.g. dyadic k1).
[[nodiscard]] inline ErrorState inverse_transform(const TransformedError& t, const Gains& g) {
    return {t.w3, t.w2 - g.k1 * t.e3, t.e3};
}

/// Which algebraic form of the control law to apply. The two differ only in
/// the k1-weighted state feedback; at k1 = 0 they are identical.
enum class ControlLawVariant {
    /// The long-form expression with coefficients
    /// (k1^2 - b*k1 + d*k1) on w2 and
    /// (d*k1 - k1 + b*k1^2 - k1^3 - 2*d*k1^2 - d^2*k1) on e3.
    printed,
    /// The form that makes dw3/dt = w2 - k3*w3 hold identically for every
    /// admissible k1: U = -a*F(z_m) + a*F(z_m - e3) - k1*e3 + k3*w3.
    corrected,
};

/// Control input for the slave's first state equation. z_master is the
/// master's z component (the law needs it to cancel the drive nonlinearity).
/// Zero error yields exactly zero control for either variant.
[[nodiscard]] inline ControlSignal control_law(const ErrorState& err, double z_master,
                                               const Gains& g, const OscillatorParams& p,
                                               ControlLawVariant variant = ControlLawVariant::printed) {
    const TransformedError t = transform_error(err, g);
    const double f_cancel = -p.a * nonlinearity_F(z_master, p) +
                            p.a * nonlinearity_F(z_master - err.e3, p);
    const double k1 = g.k1;
    const double d = p.d;
    if (variant == ControlLawVariant::corrected) {
        return f_cancel - k1 * t.e3 + g.k3 * t.w3;
    }
    const double cw2 = k1 * k1 - p.b * k1 + d * k1;
    const double ce3 = d * k1 - k1 + p.b * k1 * k1 - k1 * k1 * k1 -
                       2.0 * d * k1 * k1 - d * d * k1;
    return f_cancel + g.k3 * t.w3 + cw2 * t.w2 + ce3 * t.e3;
}

/// Row-major 3x3 real matrix over the ordering (e3, w2, w3).
using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Closed-loop system matrix of the controlled error dynamics in residual
/// coordinates:
///   de3/dt = -(k1+d) e3 + w2
///   dw2/dt = -e3 + (k1-b) w2 - w3
///   dw3/dt = w2 - k3 w3
/// The controlled nonlinear error system matches this exactly at k1 = 0.
[[nodiscard]] inline Matrix3 closed_loop_matrix(const Gains& g, const OscillatorParams& p) {
    return {{{-(g.k1 + p.d), 1.0, 0.0},
             {-1.0, g.k1 - p.b, -1.0},
             {0.0, 1.0, -g.k3}}};
}

/// Nested Lyapunov energies of the three backstepping steps.
/// 0 <= v1 <= v2 <= v3, and v3 = 0 iff the residual is zero.
struct LyapunovValues {
    double v1 = 0.0;
    double v2 = 0.0;
    double v3 = 0.0;
};

[[nodiscard]] inline LyapunovValues lyapunov_values(const TransformedError& t) {
    const double v1 = 0.5 * t.e3 * t.e3;
    const double v2 = v1 + 0.5 * t.w2 * t.w2;
    const double v3 = v2 + 0.5 * t.w3 * t.w3;
    return {v1, v2, v3};
}

}  // namespace colpitts
