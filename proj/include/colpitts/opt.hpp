#pragma once

// Shared optimizer plumbing: box bounds, the black-box objective type, the
// result/history records, and a deterministic parallel-evaluation helper.
//
// Determinism contract (both optimizers): every random draw an iteration
// needs is materialized sequentially from the seeded generator before any
// objective is evaluated, and each candidate's cost lands in a preassigned
// slot. Results are therefore bit-identical for any thread count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace colpitts {

/// Cost function over a point in R^ND. Must be pure and thread-safe; report
/// pathological inputs as +infinity rather than throwing.
using Objective = std::function<double(const std::vector<double>&)>;

/// Axis-aligned search box.
struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    [[nodiscard]] std::size_t dims() const { return lower.size(); }

    void validate() const {
        if (lower.size() != upper.size() || lower.empty()) {
            throw std::invalid_argument("bounds need matching, non-empty lower/upper");
        }
        for (std::size_t j = 0; j < lower.size(); ++j) {
            if (!(lower[j] < upper[j])) {
                throw std::invalid_argument("each lower bound must be below its upper bound");
            }
        }
    }

    [[nodiscard]] double clamp(double v, std::size_t j) const {
        if (v < lower[j]) return lower[j];
        if (v > upper[j]) return upper[j];
        return v;
    }

    void clamp_point(std::vector<double>& x) const {
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = clamp(x[j], j);
    }

    [[nodiscard]] bool contains(const std::vector<double>& x) const {
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (x[j] < lower[j] || x[j] > upper[j]) return false;
        }
        return true;
    }
};

/// Best-so-far snapshot after one optimizer stage/iteration.
struct HistoryEntry {
    std::size_t stage = 0;
    double best_cost = 0.0;
    std::vector<double> best_point;
    long long cumulative_evals = 0;
};

/// Outcome of one optimization run. history holds one entry per
/// stage/iteration, best-so-far, hence non-increasing in cost; evals counts
/// every objective call.
struct OptResult {
    std::vector<double> best_point;
    double best_cost = 0.0;
    std::vector<HistoryEntry> history;
    long long evals = 0;
    std::uint64_t seed = 0;
};

/// Runs fn(0..n-1) on up to n_threads worker threads (inline when
/// n_threads <= 1). fn must only touch state owned by its index.
template <typename Fn>
void for_each_index(std::size_t n, unsigned n_threads, Fn&& fn) {
    if (n_threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    const std::size_t workers = std::min<std::size_t>(n_threads, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace colpitts
