#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cstdio>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "config.hpp"
#include "entanglement.hpp"
#include "evolution.hpp"
#include "oracle.hpp"

namespace subrad {

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fixed formatting contract: 12 significant digits, '.' decimal, '\n' rows.
inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    nlohmann::json meta;

    std::string to_csv() const {
        std::ostringstream out;
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << (i ? "," : "") << columns[i];
        out << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << row[i];
            out << '\n';
        }
        return out.str();
    }

    std::string to_json() const {
        nlohmann::json doc;
        doc["meta"] = meta;
        doc["columns"] = columns;
        doc["rows"] = rows;
        return doc.dump(2) + "\n";
    }
};

namespace detail {
inline nlohmann::json run_meta(const RunConfig& cfg) {
    const auto p = cfg.params();
    nlohmann::json meta;
    meta["version"] = "1.0.0";
    meta["gamma"] = cfg.gamma;
    meta["r"] = cfg.rate;
    meta["omega_sq"] = p.omega_sq();
    if (cfg.gamma > 0.0) {
        meta["R"] = p.big_r();
        meta["gamma_markov"] = p.markov_rate();
    }
    meta["time_units"] = to_string(cfg.units);
    return meta;
}
}  // namespace detail

/// Time series of the closed-form dynamics plus entanglement diagnostics.
inline Table simulate(const RunConfig& cfg) {
    const CouplingProfile profile = cfg.profile();
    if (profile.n() != 3)
        throw ConfigError("simulate: entanglement columns require n = 3");
    const SectorState state0 = cfg.initial_state().normalized();
    const PropagatorParams params = cfg.params();
    const double scale = cfg.time_scale();

    Table table;
    table.meta = detail::run_meta(cfg);
    table.columns = {"t", "Phi", "Q",
                     "Re_c1", "Im_c1", "Re_c2", "Im_c2", "Re_c3", "Im_c3",
                     "N1", "N2", "N3", "N3_geo", "Ncr_star", "Gamma_t",
                     "biseparable_flag"};

    for (int i = 0; i < cfg.steps; ++i) {
        const double tu = cfg.t_max * i / (cfg.steps - 1);
        const double t = tu * scale;
        const SectorState st = evolve(state0, profile, params, t);
        if (st.norm_sq() > 1.0 + 1e-8)
            throw NumericalError("simulate: norm exceeded 1");
        const auto rep = sector_report(st);
        const auto gamma_t = decay_rate(t, params);

        std::vector<std::string> row;
        row.push_back(format_value(tu));
        row.push_back(format_value(phi(t, params)));
        row.push_back(format_value(rep.q));
        for (int j = 0; j < 3; ++j) {
            row.push_back(format_value(st.a[j].real()));
            row.push_back(format_value(st.a[j].imag()));
        }
        for (int j = 0; j < 3; ++j) row.push_back(format_value(rep.n_cut[j]));
        row.push_back(format_value(rep.n_geo));
        row.push_back(format_value(rep.n_star));
        row.push_back(gamma_t ? format_value(*gamma_t) : "");
        row.push_back(rep.biseparable ? "1" : "0");
        table.rows.push_back(std::move(row));
    }
    return table;
}

struct SweepResult {
    Table table;
    double best_r1 = 0.0;
    double best_r2 = 0.0;
    double best_value = 0.0;
};

/// Asymptotic N*_CR over an (r1, r2) grid on the feasible quarter-disc.
/// Each cell is independent; rows are assembled in grid order regardless of
/// thread count.
inline SweepResult sweep(const RunConfig& cfg, int threads = 1) {
    if (!cfg.family_initial)
        throw ConfigError("sweep: requires the {p, theta, phi} initial form");
    const SectorState state0 = initial_coefficients(cfg.family);
    const int grid = cfg.sweep_grid;

    struct Cell {
        double r1, r2, value;
        bool feasible;
    };
    std::vector<Cell> cells(static_cast<std::size_t>(grid) * grid);

    auto work = [&](int begin, int end) {
        for (int idx = begin; idx < end; ++idx) {
            const int i = idx / grid, j = idx % grid;
            Cell& c = cells[idx];
            c.r1 = static_cast<double>(i) / (grid - 1);
            c.r2 = static_cast<double>(j) / (grid - 1);
            c.feasible = c.r1 * c.r1 + c.r2 * c.r2 <= 1.0 + 1e-12;
            c.value = 0.0;
            if (!c.feasible) continue;
            const auto profile = CouplingProfile::from_r1r2(c.r1, c.r2);
            c.value = ncr_star(asymptotic_state(state0, profile));
        }
    };

    const int total = grid * grid;
    if (threads <= 1) {
        work(0, total);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (total + threads - 1) / threads;
        for (int k = 0; k < threads; ++k)
            pool.emplace_back(work, k * chunk, std::min(total, (k + 1) * chunk));
        for (auto& th : pool) th.join();
    }

    SweepResult res;
    res.table.meta = detail::run_meta(cfg);
    res.table.meta["p"] = cfg.family.p;
    res.table.columns = {"r1", "r2", "ncr_star_inf"};
    for (const auto& c : cells) {
        if (!c.feasible) continue;
        res.table.rows.push_back({format_value(c.r1), format_value(c.r2),
                                  format_value(c.value)});
        if (c.value > res.best_value) {
            res.best_value = c.value;
            res.best_r1 = c.r1;
            res.best_r2 = c.r2;
        }
    }
    res.table.meta["argmax"] = {{"r1", res.best_r1}, {"r2", res.best_r2},
                                {"value", res.best_value}};
    return res;
}

/// CP-divisibility record: classification plus the sampled minimum of Gamma(t).
inline nlohmann::json markov_report(const RunConfig& cfg) {
    const PropagatorParams params = cfg.params();
    nlohmann::json rep;
    if (cfg.gamma > 0.0) rep["R"] = params.big_r();
    rep["cp_divisible"] = is_cp_divisible(params);

    const double scale = cfg.time_scale();
    double gmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 10000; ++i) {
        const auto g = decay_rate(cfg.t_max * scale * i / 10000.0, params);
        if (g) gmin = std::min(gmin, *g);
    }
    rep["gamma_t_min"] = gmin;
    const auto zero = first_phi_zero(params);
    if (zero) rep["first_phi_zero"] = *zero / scale;
    return rep;
}

/// Biseparability-time report for the configured scenario.
inline nlohmann::json tstar_report(const RunConfig& cfg) {
    const auto profile = cfg.profile();
    const auto state0 = cfg.initial_state().normalized();
    const auto params = cfg.params();
    nlohmann::json rep;
    const auto result = find_tstar(state0, profile, params);
    rep["found"] = result.has_value();
    if (result) {
        rep["t_star"] = result->t_star / cfg.time_scale();
        rep["phi_star"] = result->phi_star;
        rep["qubit"] = result->qubit + 1;  // 1-based in reports
    }
    return rep;
}

/// DFS audit for n qubits: basis quality plus the revival scenario
/// eta_+ psi_+ + eta_- psi_-(1,2), for which qubit 2 factors out at t*.
inline Table nqubit_report(const RunConfig& cfg) {
    const int n = cfg.nqubit_n;
    if (n < 2 || n > 12) throw ConfigError("nqubit: n must be in [2, 12]");
    std::vector<double> alphas = cfg.alphas;
    if (static_cast<int>(alphas.size()) != n)
        throw ConfigError("nqubit: couplings length must equal mode.n");
    const CouplingProfile profile(alphas);
    const PropagatorParams params = cfg.params();

    const auto basis = subradiant_basis(profile);
    const auto plus = superradiant_state(profile);
    double max_dark = 0.0, max_overlap = 0.0;
    for (const auto& b : basis) {
        max_dark = std::max(max_dark, verify_dark(b, profile));
        max_overlap = std::max(max_overlap, std::abs(plus.a.dot(b.a)));
    }

    Table table;
    table.meta = detail::run_meta(cfg);
    table.columns = {"key", "value"};
    table.rows.push_back({"n", std::to_string(n)});
    table.rows.push_back({"dfs_dimension", std::to_string(dfs_dimension(profile))});
    table.rows.push_back({"max_dark_residual", format_value(max_dark)});
    table.rows.push_back({"max_superradiant_overlap", format_value(max_overlap)});

    // Revival scenario: requires distinct, nonzero weights on qubits 1 and 2.
    if (profile.weight(0) > 0.0 || profile.weight(1) > 0.0) {
        const SectorState pair = subradiant_pair(profile, 0, 1);
        const double norm = std::hypot(cfg.eta_plus, cfg.eta_minus);
        SectorState scenario(n);
        scenario.a = (cfg.eta_plus / norm) * plus.a + (cfg.eta_minus / norm) * pair.a;
        const auto result = find_tstar(scenario, profile, params);
        table.rows.push_back({"tstar_found", result ? "1" : "0"});
        if (result) {
            table.rows.push_back({"t_star", format_value(result->t_star / cfg.time_scale())});
            table.rows.push_back({"phi_star", format_value(result->phi_star)});
            table.rows.push_back({"factored_qubit", std::to_string(result->qubit + 1)});
            const SectorState at = evolve(scenario, profile, params, result->t_star);
            const double x = std::norm(at.a[result->qubit]);
            table.rows.push_back({"reduced_purity_deficit", format_value(2.0 * x * (1.0 - x))});
        }
    }
    return table;
}

/// Oracle comparison: closed form against the RK4 integration (kind "ode") or
/// the discretized-bath propagation (kind "bath").
inline Table oracle_check(const RunConfig& cfg) {
    const PropagatorParams params = cfg.params();
    const double scale = cfg.time_scale();
    const double t_max = cfg.t_max * scale;

    Table table;
    table.meta = detail::run_meta(cfg);
    table.columns = {"t", "closed_form", "oracle", "abs_err"};

    if (cfg.oracle_kind == "ode") {
        double dt = cfg.oracle_dt;
        if (dt <= 0.0) {
            double fast = std::max(params.gamma, params.rate);
            dt = fast > 0.0 ? 1e-3 / fast : t_max / 1e6;
        }
        const auto res = oracle::solve_cplus_ode(params, t_max, dt);
        const std::size_t stride = std::max<std::size_t>(1, res.samples.size() / cfg.steps);
        for (std::size_t i = 0; i < res.samples.size(); i += stride) {
            const auto& s = res.samples[i];
            const double closed = phi(s.t, params);
            table.rows.push_back({format_value(s.t / scale), format_value(closed),
                                  format_value(s.value),
                                  format_value(std::abs(closed - s.value))});
        }
        return table;
    }

    const CouplingProfile profile = cfg.profile();
    const SectorState state0 = cfg.initial_state().normalized();
    // lambda follows from r and alpha_T
    BathSpec bath;
    bath.gamma = cfg.gamma;
    bath.lambda = (cfg.rate / profile.alpha_t()) * (cfg.rate / profile.alpha_t());
    const auto disc = oracle::DiscretizedBath::build(bath, cfg.oracle_modes, cfg.oracle_window);
    double dt = cfg.oracle_dt > 0.0 ? cfg.oracle_dt : 0.1 / cfg.oracle_window;
    const int stride = std::max(1, static_cast<int>(t_max / dt) / cfg.steps);
    const auto res = oracle::solve_discretized_bath(state0, profile, disc, t_max, dt, stride);
    for (const auto& w : res.warnings) table.meta["warnings"].push_back(w);
    table.meta["max_norm_drift"] = res.max_norm_drift;

    const SectorState plus = superradiant_state(profile);
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        const SectorState closed = evolve(state0, profile, params, res.times[i]);
        double err = 0.0;
        for (int j = 0; j < profile.n(); ++j)
            err = std::max(err, std::abs(closed.a[j] - res.qubit_amps[i][j]));
        const Complex cplus_disc = plus.a.dot(res.qubit_amps[i]);
        const Complex cplus_closed = plus.a.dot(closed.a);
        table.rows.push_back({format_value(res.times[i] / scale),
                              format_value(cplus_closed.real()),
                              format_value(cplus_disc.real()), format_value(err)});
    }
    return table;
}

}  // namespace subrad
