#pragma once

// Shark Smell Optimization over a box: a gradient-following forward move
// with a per-dimension velocity-ratio clamp, multiplicative rotational local
// search, and greedy selection.
//
// Orientation note: the textbook update climbs the odor gradient; here a
// minimization problem is assumed throughout, so the forward move follows
// the negated cost gradient (odor = -cost). The cost gradient of the
// simulation-based objective is realized by finite differences.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "colpitts/opt.hpp"
#include "colpitts/rng.hpp"

namespace colpitts {

struct SsoConfig {
    std::size_t np = 50;        ///< population size
    std::size_t m_stages = 30;  ///< number of stages
    std::size_t k_local = 4;    ///< rotational points per shark per stage
    double mu = 0.9;            ///< gradient coefficient, same for all stages
    double alpha = 0.1;         ///< velocity inertia coefficient
    double gamma = 4.0;         ///< velocity-ratio limiter
    double dt_stage = 1.0;      ///< time interval of the forward move
    double fd_step = 1e-3;      ///< finite-difference step per dimension
    /// Initial velocities are uniform in +/- this fraction of the bound
    /// range per dimension; zero initial velocity would stay frozen under
    /// the |gamma * v_prev| clamp.
    double init_velocity_scale = 0.1;
    Bounds bounds;
    std::uint64_t seed = 1;
    unsigned n_threads = 1;

    [[nodiscard]] std::size_t nd() const { return bounds.dims(); }

    void validate() const {
        bounds.validate();
        if (np < 1 || m_stages < 1 || k_local < 1) {
            throw std::invalid_argument("np, m_stages, k_local must be at least 1");
        }
        if (!(mu >= 0.0)) throw std::invalid_argument("mu must be non-negative");
        if (!(alpha >= 0.0) || !(alpha < 1.0)) {
            throw std::invalid_argument("alpha must lie in [0, 1)");
        }
        if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
        if (!(dt_stage > 0.0)) throw std::invalid_argument("dt_stage must be positive");
        if (!(fd_step > 0.0)) throw std::invalid_argument("fd_step must be positive");
        if (!(init_velocity_scale >= 0.0)) {
            throw std::invalid_argument("init_velocity_scale must be non-negative");
        }
    }
};

struct SharkPopulation {
    std::vector<std::vector<double>> positions;
    std::vector<std::vector<double>> velocities;
    std::vector<double> costs;
    std::size_t stage = 0;
};

struct GradientResult {
    std::vector<double> grad;
    /// True when a probe returned a non-finite cost; that component is 0.
    bool saw_non_finite = false;
};

/// Finite-difference gradient: central (f(x+h) - f(x-h)) / 2h per dimension,
/// falling back to the one-sided difference over h when a probe would leave
/// the box. Always exactly 2 objective calls per dimension.
[[nodiscard]] inline GradientResult fd_gradient(const Objective& objective,
                                                const std::vector<double>& x,
                                                const std::vector<double>& h,
                                                const Bounds& bounds) {
    GradientResult out{std::vector<double>(x.size(), 0.0), false};
    std::vector<double> hi = x;
    std::vector<double> lo = x;
    for (std::size_t j = 0; j < x.size(); ++j) {
        hi[j] = x[j] + h[j];
        lo[j] = x[j] - h[j];
        double denom = 2.0 * h[j];
        if (hi[j] > bounds.upper[j]) {
            hi[j] = x[j];
            denom = h[j];
        } else if (lo[j] < bounds.lower[j]) {
            lo[j] = x[j];
            denom = h[j];
        }
        const double f_hi = objective(hi);
        const double f_lo = objective(lo);
        if (std::isfinite(f_hi) && std::isfinite(f_lo)) {
            out.grad[j] = (f_hi - f_lo) / denom;
        } else {
            out.saw_non_finite = true;
        }
        hi[j] = x[j];
        lo[j] = x[j];
    }
    return out;
}

/// One velocity update: raw_j = mu*r1*(-grad_j) + alpha*r2*v_prev_j, then
/// the magnitude of each component is capped at |gamma * v_prev_j| with the
/// raw sign preserved.
[[nodiscard]] inline std::vector<double> sso_velocity(const std::vector<double>& grad,
                                                      const std::vector<double>& v_prev,
                                                      double mu, double alpha, double gamma,
                                                      double r1, double r2) {
    std::vector<double> v(grad.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double raw = mu * r1 * (-grad[j]) + alpha * r2 * v_prev[j];
        const double cap = std::fabs(gamma * v_prev[j]);
        v[j] = std::copysign(std::min(std::fabs(raw), cap), raw);
    }
    return v;
}

/// Advances every shark one stage: gradient at the current position,
/// velocity update, forward point Y = clamp(X + V*dt_stage), k_local
/// rotational points Z = clamp(Y + R3 .* Y) with fresh R3 in (-1,1) per
/// point per dimension, then greedy selection over {Y, Z...} (ties to the
/// lowest candidate index, Y first).
///
/// All draws come out of rng in shark order (r1, r2, then the R3 block)
/// before any objective call, so evaluation may be parallel.
inline SharkPopulation sso_stage(const SharkPopulation& pop, const Objective& objective,
                                 const SsoConfig& cfg, std::mt19937_64& rng) {
    const std::size_t np = pop.positions.size();
    const std::size_t nd = cfg.nd();
    const std::size_t nk = cfg.k_local;

    std::vector<double> r1(np);
    std::vector<double> r2(np);
    std::vector<std::vector<double>> r3(np);
    for (std::size_t i = 0; i < np; ++i) {
        r1[i] = uniform01(rng);
        r2[i] = uniform01(rng);
        r3[i].resize(nk * nd);
        for (auto& draw : r3[i]) draw = uniform_open_sym(rng);
    }

    SharkPopulation next;
    next.positions.assign(np, {});
    next.velocities.assign(np, {});
    next.costs.assign(np, 0.0);
    next.stage = pop.stage + 1;

    const std::vector<double> h(nd, cfg.fd_step);
    for_each_index(np, cfg.n_threads, [&](std::size_t i) {
        const GradientResult g = fd_gradient(objective, pop.positions[i], h, cfg.bounds);
        std::vector<double> v =
            sso_velocity(g.grad, pop.velocities[i], cfg.mu, cfg.alpha, cfg.gamma, r1[i], r2[i]);

        std::vector<std::vector<double>> cand;
        cand.reserve(1 + nk);
        std::vector<double> y(nd);
        for (std::size_t j = 0; j < nd; ++j) {
            y[j] = cfg.bounds.clamp(pop.positions[i][j] + v[j] * cfg.dt_stage, j);
        }
        cand.push_back(y);
        for (std::size_t k = 0; k < nk; ++k) {
            std::vector<double> z(nd);
            for (std::size_t j = 0; j < nd; ++j) {
                z[j] = cfg.bounds.clamp(y[j] + r3[i][k * nd + j] * y[j], j);
            }
            cand.push_back(std::move(z));
        }

        std::size_t best = 0;
        double best_cost = objective(cand[0]);
        for (std::size_t c = 1; c < cand.size(); ++c) {
            const double cost = objective(cand[c]);
            if (cost < best_cost) {
                best_cost = cost;
                best = c;
            }
        }
        next.positions[i] = std::move(cand[best]);
        next.velocities[i] = std::move(v);
        next.costs[i] = best_cost;
    });
    return next;
}

/// Full run: uniform initial positions, small random initial velocities,
/// m_stages stages. Deterministic given cfg.seed for any n_threads.
/// history has one best-so-far entry per stage; evals counts every
/// objective call (np init, then np*2*nd gradient + np*(1+k_local)
/// candidates per stage).
inline OptResult sso_optimize(const Objective& objective, const SsoConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    const std::size_t np = cfg.np;
    const std::size_t nd = cfg.nd();

    SharkPopulation pop;
    pop.positions.resize(np);
    pop.velocities.resize(np);
    pop.costs.assign(np, 0.0);
    for (std::size_t i = 0; i < np; ++i) {
        pop.positions[i].resize(nd);
        for (std::size_t j = 0; j < nd; ++j) {
            pop.positions[i][j] = uniform_in(rng, cfg.bounds.lower[j], cfg.bounds.upper[j]);
        }
    }
    for (std::size_t i = 0; i < np; ++i) {
        pop.velocities[i].resize(nd);
        for (std::size_t j = 0; j < nd; ++j) {
            const double scale =
                cfg.init_velocity_scale * (cfg.bounds.upper[j] - cfg.bounds.lower[j]);
            pop.velocities[i][j] = uniform_in(rng, -scale, scale);
        }
    }
    for_each_index(np, cfg.n_threads,
                   [&](std::size_t i) { pop.costs[i] = objective(pop.positions[i]); });

    OptResult res;
    res.seed = cfg.seed;
    res.evals = static_cast<long long>(np);
    res.best_cost = pop.costs[0];
    res.best_point = pop.positions[0];
    const auto absorb = [&]() {
        for (std::size_t i = 0; i < np; ++i) {
            if (pop.costs[i] < res.best_cost) {
                res.best_cost = pop.costs[i];
                res.best_point = pop.positions[i];
            }
        }
    };
    absorb();

    const long long per_stage =
        static_cast<long long>(np) * (2LL * static_cast<long long>(nd) + 1LL +
                                      static_cast<long long>(cfg.k_local));
    res.history.reserve(cfg.m_stages);
    for (std::size_t m = 1; m <= cfg.m_stages; ++m) {
        pop = sso_stage(pop, objective, cfg, rng);
        res.evals += per_stage;
        absorb();
        res.history.push_back({m, res.best_cost, res.best_point, res.evals});
    }
    return res;
}

}  // namespace colpitts
