#pragma once

// Global-best particle swarm optimization baseline: inertia, cognitive and
// social pulls, per-dimension speed cap, box-clamped positions. Same
// determinism contract as the shark optimizer (draws sequenced before
// dispatch, bit-identical for any thread count).

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "colpitts/opt.hpp"
#include "colpitts/rng.hpp"

namespace colpitts {

struct PsoConfig {
    std::size_t swarm = 50;
    std::size_t iters = 30;
    double inertia = 0.729;
    double c1 = 1.49445;  ///< cognitive weight
    double c2 = 1.49445;  ///< social weight
    /// Per-dimension speed cap as a fraction of (upper - lower).
    double vmax_fraction = 0.2;
    Bounds bounds;
    std::uint64_t seed = 1;
    unsigned n_threads = 1;

    void validate() const {
        bounds.validate();
        if (swarm < 1 || iters < 1) throw std::invalid_argument("swarm and iters must be at least 1");
        if (!(inertia >= 0.0) || !(inertia <= 1.0)) {
            throw std::invalid_argument("inertia must lie in [0, 1]");
        }
        if (!(c1 >= 0.0) || !(c2 >= 0.0)) throw std::invalid_argument("c1, c2 must be non-negative");
        if (!(vmax_fraction > 0.0)) throw std::invalid_argument("vmax_fraction must be positive");
    }
};

/// Full run. Particles start uniform in the box with zero velocity; r1, r2
/// are drawn per particle per dimension per iteration. history has one
/// global-best entry per iteration; evals = swarm * (1 + iters).
inline OptResult pso_optimize(const Objective& objective, const PsoConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    const std::size_t n = cfg.swarm;
    const std::size_t nd = cfg.bounds.dims();

    std::vector<double> vmax(nd);
    for (std::size_t j = 0; j < nd; ++j) {
        vmax[j] = cfg.vmax_fraction * (cfg.bounds.upper[j] - cfg.bounds.lower[j]);
    }

    std::vector<std::vector<double>> x(n, std::vector<double>(nd, 0.0));
    std::vector<std::vector<double>> v(n, std::vector<double>(nd, 0.0));
    std::vector<double> cost(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < nd; ++j) {
            x[i][j] = uniform_in(rng, cfg.bounds.lower[j], cfg.bounds.upper[j]);
        }
    }
    for_each_index(n, cfg.n_threads, [&](std::size_t i) { cost[i] = objective(x[i]); });

    std::vector<std::vector<double>> pbest = x;
    std::vector<double> pbest_cost = cost;
    std::size_t g = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (pbest_cost[i] < pbest_cost[g]) g = i;
    }

    OptResult res;
    res.seed = cfg.seed;
    res.evals = static_cast<long long>(n);
    res.best_point = pbest[g];
    res.best_cost = pbest_cost[g];
    res.history.reserve(cfg.iters);

    std::vector<std::vector<double>> r1(n, std::vector<double>(nd, 0.0));
    std::vector<std::vector<double>> r2(n, std::vector<double>(nd, 0.0));
    for (std::size_t it = 1; it <= cfg.iters; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < nd; ++j) {
                r1[i][j] = uniform01(rng);
                r2[i][j] = uniform01(rng);
            }
        }
        for_each_index(n, cfg.n_threads, [&](std::size_t i) {
            for (std::size_t j = 0; j < nd; ++j) {
                double vel = cfg.inertia * v[i][j] + cfg.c1 * r1[i][j] * (pbest[i][j] - x[i][j]) +
                             cfg.c2 * r2[i][j] * (res.best_point[j] - x[i][j]);
                if (vel > vmax[j]) vel = vmax[j];
                if (vel < -vmax[j]) vel = -vmax[j];
                v[i][j] = vel;
                x[i][j] = cfg.bounds.clamp(x[i][j] + vel, j);
            }
            cost[i] = objective(x[i]);
        });
        res.evals += static_cast<long long>(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (cost[i] < pbest_cost[i]) {
                pbest_cost[i] = cost[i];
                pbest[i] = x[i];
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (pbest_cost[i] < res.best_cost) {
                res.best_cost = pbest_cost[i];
                res.best_point = pbest[i];
            }
        }
        res.history.push_back({it, res.best_cost, res.best_point, res.evals});
    }
    return res;
}

}  // namespace colpitts
