#pragma once

// Serialization: plot-grade CSV (9 significant digits, one header row, Unix
// newlines) and JSON run manifests (doubles round-trip exactly). Every CLI
// output file travels with a manifest that pins down what produced it.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "colpitts/backstepping.hpp"
#include "colpitts/model.hpp"
#include "colpitts/opt.hpp"
#include "colpitts/pso.hpp"
#include "colpitts/sim.hpp"
#include "colpitts/sso.hpp"
#include "colpitts/version.hpp"

namespace colpitts {

/// 9 significant digits, enough for plotting and far from parser-fragile.
[[nodiscard]] inline std::string format_csv(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    return out;
}

}  // namespace detail

inline void write_simulate_csv(const std::string& path, const SingleTrajectory& traj) {
    auto out = detail::open_output(path);
    out << "t,x,y,z\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const State3& s = traj.states[i];
        out << format_csv(traj.times[i]) << ',' << format_csv(s.x) << ',' << format_csv(s.y)
            << ',' << format_csv(s.z) << '\n';
    }
}

inline void write_sync_csv(const std::string& path, const Trajectory& traj, const Gains& g) {
    auto out = detail::open_output(path);
    out << "t,x_m,y_m,z_m,x_s,y_s,z_s,e1,e2,e3,u,v3\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const State3& m = traj.master[i];
        const State3& s = traj.slave[i];
        const ErrorState& e = traj.errors[i];
        const double v3 = lyapunov_values(transform_error(e, g)).v3;
        out << format_csv(traj.times[i]) << ',' << format_csv(m.x) << ',' << format_csv(m.y)
            << ',' << format_csv(m.z) << ',' << format_csv(s.x) << ',' << format_csv(s.y) << ','
            << format_csv(s.z) << ',' << format_csv(e.e1) << ',' << format_csv(e.e2) << ','
            << format_csv(e.e3) << ',' << format_csv(traj.control[i]) << ',' << format_csv(v3)
            << '\n';
    }
}

/// Best-so-far trace, one row per optimizer stage/iteration. Expects a
/// 2-dimensional decision vector (k1, k3).
inline void write_convergence_csv(const std::string& path, const OptResult& r) {
    auto out = detail::open_output(path);
    out << "stage,best_cost,best_k1,best_k3,cumulative_evals\n";
    for (const HistoryEntry& h : r.history) {
        out << h.stage << ',' << format_csv(h.best_cost) << ',' << format_csv(h.best_point.at(0))
            << ',' << format_csv(h.best_point.at(1)) << ',' << h.cumulative_evals << '\n';
    }
}

struct TableRow {
    std::size_t experiment = 0;
    double k1 = 0.0;
    double k3 = 0.0;
    double tss = 0.0;
};

inline void write_table_csv(const std::string& path, const std::vector<TableRow>& rows) {
    auto out = detail::open_output(path);
    out << "experiment,k1,k3,tss\n";
    for (const TableRow& r : rows) {
        out << r.experiment << ',' << format_csv(r.k1) << ',' << format_csv(r.k3) << ','
            << format_csv(r.tss) << '\n';
    }
}

struct TableAggregates {
    double min_tss = 0.0;
    double median_tss = 0.0;
    double max_tss = 0.0;
    double spread = 0.0;  ///< max - min
};

[[nodiscard]] inline TableAggregates aggregate_table(const std::vector<TableRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("cannot aggregate an empty table");
    std::vector<double> tss;
    tss.reserve(rows.size());
    for (const TableRow& r : rows) tss.push_back(r.tss);
    std::sort(tss.begin(), tss.end());
    const std::size_t n = tss.size();
    const double median = (n % 2 == 1) ? tss[n / 2] : 0.5 * (tss[n / 2 - 1] + tss[n / 2]);
    return {tss.front(), median, tss.back(), tss.back() - tss.front()};
}

inline void to_json(nlohmann::json& j, const OscillatorParams& p) {
    j = {{"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}, {"e", p.e}};
}

inline void to_json(nlohmann::json& j, const State3& s) {
    j = {{"x", s.x}, {"y", s.y}, {"z", s.z}};
}

inline void to_json(nlohmann::json& j, const Gains& g) {
    j = {{"k1", g.k1}, {"k2", g.k2}, {"k3", g.k3}};
}

inline void to_json(nlohmann::json& j, const SimConfig& cfg) {
    j = {{"dt", cfg.dt},
         {"t_final", cfg.t_final},
         {"t_activate", cfg.t_activate},
         {"master_ic", cfg.master_ic},
         {"slave_ic", cfg.slave_ic},
         {"record_stride", cfg.record_stride},
         {"control_law", cfg.law == ControlLawVariant::printed ? "printed" : "corrected"}};
}

inline void to_json(nlohmann::json& j, const Bounds& b) {
    j = {{"lower", b.lower}, {"upper", b.upper}};
}

inline void to_json(nlohmann::json& j, const SsoConfig& cfg) {
    j = {{"np", cfg.np},
         {"m_stages", cfg.m_stages},
         {"k_local", cfg.k_local},
         {"mu", cfg.mu},
         {"alpha", cfg.alpha},
         {"gamma", cfg.gamma},
         {"dt_stage", cfg.dt_stage},
         {"fd_step", cfg.fd_step},
         {"init_velocity_scale", cfg.init_velocity_scale},
         {"bounds", cfg.bounds},
         {"seed", cfg.seed},
         {"n_threads", cfg.n_threads}};
}

inline void to_json(nlohmann::json& j, const PsoConfig& cfg) {
    j = {{"swarm", cfg.swarm},
         {"iters", cfg.iters},
         {"inertia", cfg.inertia},
         {"c1", cfg.c1},
         {"c2", cfg.c2},
         {"vmax_fraction", cfg.vmax_fraction},
         {"bounds", cfg.bounds},
         {"seed", cfg.seed},
         {"n_threads", cfg.n_threads}};
}

inline void to_json(nlohmann::json& j, const OptResult& r) {
    nlohmann::json history = nlohmann::json::array();
    for (const HistoryEntry& h : r.history) {
        history.push_back({{"stage", h.stage},
                           {"best_cost", h.best_cost},
                           {"best_point", h.best_point},
                           {"cumulative_evals", h.cumulative_evals}});
    }
    j = {{"best_point", r.best_point},
         {"best_cost", r.best_cost},
         {"evals", r.evals},
         {"seed", r.seed},
         {"history", std::move(history)}};
}

/// The reproducibility record written next to every output: re-running the
/// same command with the embedded configuration reproduces the outputs
/// byte for byte (wall_clock_seconds aside).
[[nodiscard]] inline nlohmann::json make_manifest(const std::string& command, std::uint64_t seed,
                                                  nlohmann::json config,
                                                  std::vector<std::string> outputs,
                                                  double wall_clock_seconds,
                                                  nlohmann::json results) {
    return {{"command", command},
            {"version", kVersion},
            {"seed", seed},
            {"config", std::move(config)},
            {"outputs", std::move(outputs)},
            {"wall_clock_seconds", wall_clock_seconds},
            {"results", std::move(results)}};
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    auto out = detail::open_output(path);
    out << j.dump(2) << '\n';
}

}  // namespace colpitts
