#pragma once

#include <cmath>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coupling.hpp"
#include "evolution.hpp"
#include "propagator.hpp"

namespace subrad {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class TimeUnits { InvR, InvGamma, Absolute };

inline std::string to_string(TimeUnits u) {
    switch (u) {
        case TimeUnits::InvR: return "inv_r";
        case TimeUnits::InvGamma: return "inv_gamma";
        default: return "absolute";
    }
}

/// Parsed run configuration. Couplings are stored as normalized weights;
/// `rate` already folds in sqrt(lambda) * alpha_T.
struct RunConfig {
    double gamma = 1.0;
    double rate = 0.1;              // effective collective rate r
    std::vector<double> weights;    // r_j, normalized
    std::vector<double> alphas;     // as given (equals weights when r-form used)

    bool family_initial = true;
    InitialFamily family;
    std::vector<Complex> amplitudes;  // explicit-initial form
    Complex g0 = 0.0;

    double t_max = 200.0;
    int steps = 400;
    TimeUnits units = TimeUnits::InvR;

    // mode-specific options
    int sweep_grid = 100;
    std::string oracle_kind = "ode";
    double oracle_dt = 0.0;  // 0: auto
    int oracle_modes = 4001;
    double oracle_window = 40.0;
    int nqubit_n = 3;
    double eta_plus = 0.8;
    double eta_minus = 0.6;

    PropagatorParams params() const { return {gamma, rate}; }
    CouplingProfile profile() const { return CouplingProfile(alphas); }

    SectorState initial_state() const {
        if (family_initial) return initial_coefficients(family);
        SectorState s(static_cast<int>(amplitudes.size()));
        for (std::size_t j = 0; j < amplitudes.size(); ++j) s.a[j] = amplitudes[j];
        s.g0 = g0;
        return s;
    }

    /// Conversion factor from configured time units to absolute time.
    double time_scale() const {
        switch (units) {
            case TimeUnits::InvR:
                if (rate <= 0.0) throw ConfigError("units inv_r require r > 0");
                return 1.0 / rate;
            case TimeUnits::InvGamma:
                if (gamma <= 0.0) throw ConfigError("units inv_gamma require gamma > 0");
                return 1.0 / gamma;
            default:
                return 1.0;
        }
    }
};

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, const std::vector<std::string>& allowed,
                           const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const auto& key : allowed)
            if (it.key() == key) { ok = true; break; }
        if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

inline double require_number(const nlohmann::json& obj, const std::string& key,
                             const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number())
        throw ConfigError("missing or non-numeric '" + key + "' in " + where);
    return obj[key].get<double>();
}

}  // namespace detail

/// Strict JSON parsing: unknown keys are rejected so typos fail loudly.
inline RunConfig parse_config(const nlohmann::json& doc) {
    using nlohmann::json;
    detail::reject_unknown(doc, {"bath", "couplings", "initial", "time", "mode"}, "config");
    RunConfig cfg;

    if (!doc.contains("bath") || !doc["bath"].is_object())
        throw ConfigError("config requires a 'bath' object");
    const json& bath = doc["bath"];
    const bool has_r = bath.contains("R");
    const bool has_pair = bath.contains("gamma") || bath.contains("lambda");
    if (has_r && has_pair)
        throw ConfigError("bath: give either {gamma, lambda} or {R}, not both");
    double lambda = 0.0;
    bool lambda_form = false;
    if (has_r) {
        detail::reject_unknown(bath, {"R"}, "bath");
        const double big_r = detail::require_number(bath, "R", "bath");
        if (big_r < 0.0) throw ConfigError("bath.R must be >= 0");
        cfg.gamma = 1.0;
        cfg.rate = big_r;
    } else {
        detail::reject_unknown(bath, {"gamma", "lambda"}, "bath");
        cfg.gamma = detail::require_number(bath, "gamma", "bath");
        lambda = detail::require_number(bath, "lambda", "bath");
        if (cfg.gamma < 0.0 || lambda < 0.0)
            throw ConfigError("bath: gamma and lambda must be >= 0");
        lambda_form = true;
    }

    if (!doc.contains("couplings") || !doc["couplings"].is_object())
        throw ConfigError("config requires a 'couplings' object");
    const json& coup = doc["couplings"];
    detail::reject_unknown(coup, {"alphas", "r", "r1r2"}, "couplings");
    int forms = coup.contains("alphas") + coup.contains("r") + coup.contains("r1r2");
    if (forms != 1)
        throw ConfigError("couplings: exactly one of 'alphas', 'r', 'r1r2'");
    try {
        if (coup.contains("alphas")) {
            cfg.alphas = coup["alphas"].get<std::vector<double>>();
            CouplingProfile p(cfg.alphas);
            cfg.weights = p.weights();
        } else if (coup.contains("r")) {
            CouplingProfile p(coup["r"].get<std::vector<double>>());
            cfg.weights = p.weights();
            cfg.alphas = cfg.weights;
        } else {
            auto pair = coup["r1r2"].get<std::vector<double>>();
            if (pair.size() != 2) throw ConfigError("couplings.r1r2 needs two entries");
            CouplingProfile p = CouplingProfile::from_r1r2(pair[0], pair[1]);
            cfg.weights = p.weights();
            cfg.alphas = cfg.weights;
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("couplings: ") + e.what());
    }

    if (lambda_form) {
        double alpha_t_sq = 0.0;
        for (double a : cfg.alphas) alpha_t_sq += a * a;
        cfg.rate = std::sqrt(lambda * alpha_t_sq);
    }

    if (!doc.contains("initial") || !doc["initial"].is_object())
        throw ConfigError("config requires an 'initial' object");
    const json& init = doc["initial"];
    const bool fam = init.contains("p");
    const bool expl = init.contains("amplitudes");
    if (fam == expl)
        throw ConfigError("initial: exactly one of the family form {p, theta, phi} "
                          "or the explicit form {amplitudes, g0}");
    if (fam) {
        detail::reject_unknown(init, {"p", "theta", "phi"}, "initial");
        cfg.family_initial = true;
        cfg.family.p = detail::require_number(init, "p", "initial");
        cfg.family.theta = init.value("theta", 0.0);
        cfg.family.phi = init.value("phi", 0.0);
        if (cfg.family.p < 0.0 || cfg.family.p > 1.0)
            throw ConfigError("initial.p must be in [0, 1]");
    } else {
        detail::reject_unknown(init, {"amplitudes", "g0"}, "initial");
        cfg.family_initial = false;
        for (const auto& entry : init["amplitudes"]) {
            if (entry.is_number()) {
                cfg.amplitudes.emplace_back(entry.get<double>(), 0.0);
            } else if (entry.is_array() && entry.size() == 2) {
                cfg.amplitudes.emplace_back(entry[0].get<double>(), entry[1].get<double>());
            } else {
                throw ConfigError("initial.amplitudes entries must be numbers or [re, im]");
            }
        }
        if (cfg.amplitudes.size() < 2) throw ConfigError("initial.amplitudes too short");
        if (init.contains("g0")) cfg.g0 = Complex(init["g0"].get<double>(), 0.0);
    }

    if (doc.contains("time")) {
        const json& time = doc["time"];
        detail::reject_unknown(time, {"t_max", "steps", "units"}, "time");
        cfg.t_max = detail::require_number(time, "t_max", "time");
        if (time.contains("steps")) cfg.steps = time["steps"].get<int>();
        if (cfg.steps < 2) throw ConfigError("time.steps must be >= 2");
        if (cfg.t_max <= 0.0) throw ConfigError("time.t_max must be > 0");
        if (time.contains("units")) {
            const std::string u = time["units"].get<std::string>();
            if (u == "inv_r") cfg.units = TimeUnits::InvR;
            else if (u == "inv_gamma") cfg.units = TimeUnits::InvGamma;
            else if (u == "absolute") cfg.units = TimeUnits::Absolute;
            else throw ConfigError("time.units must be inv_r | inv_gamma | absolute");
        }
    }

    if (doc.contains("mode")) {
        const json& mode = doc["mode"];
        detail::reject_unknown(mode,
                               {"grid", "kind", "dt", "K", "W", "n", "eta_plus", "eta_minus"},
                               "mode");
        if (mode.contains("grid")) cfg.sweep_grid = mode["grid"].get<int>();
        if (cfg.sweep_grid < 50) throw ConfigError("mode.grid must be >= 50");
        if (mode.contains("kind")) {
            cfg.oracle_kind = mode["kind"].get<std::string>();
            if (cfg.oracle_kind != "ode" && cfg.oracle_kind != "bath")
                throw ConfigError("mode.kind must be 'ode' or 'bath'");
        }
        if (mode.contains("dt")) cfg.oracle_dt = mode["dt"].get<double>();
        if (mode.contains("K")) cfg.oracle_modes = mode["K"].get<int>();
        if (mode.contains("W")) cfg.oracle_window = mode["W"].get<double>();
        if (mode.contains("n")) cfg.nqubit_n = mode["n"].get<int>();
        if (cfg.nqubit_n < 2 || cfg.nqubit_n > 12)
            throw ConfigError("mode.n must be in [2, 12]");
        if (mode.contains("eta_plus")) cfg.eta_plus = mode["eta_plus"].get<double>();
        if (mode.contains("eta_minus")) cfg.eta_minus = mode["eta_minus"].get<double>();
    }

    return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

/// Named scenarios for the four figure panels. Panels a/b are the bad cavity
/// (R = 0.1) with p = 1 and p = 0; panels c/d the good cavity (R = 10).
/// Line styles select the coupling configuration: solid = maximal asymptotic
/// entanglement, dashed = uniform, dashdot = only qubit 1 coupled.
inline std::optional<nlohmann::json> preset_config(const std::string& name) {
    using nlohmann::json;
    if (name.size() < 7 || name.compare(0, 4, "fig1") != 0 || name[5] != '_')
        return std::nullopt;
    const char panel = name[4];
    const std::string style = name.substr(6);

    double p, big_r;
    switch (panel) {
        case 'a': p = 1.0; big_r = 0.1; break;
        case 'b': p = 0.0; big_r = 0.1; break;
        case 'c': p = 1.0; big_r = 10.0; break;
        case 'd': p = 0.0; big_r = 10.0; break;
        default: return std::nullopt;
    }

    json coup;
    if (style == "solid") {
        coup = p == 1.0 ? json{{"r1r2", {0.53, 0.60}}} : json{{"r1r2", {0.11, 0.11}}};
    } else if (style == "dashed") {
        coup = json{{"r", {1.0, 1.0, 1.0}}};
    } else if (style == "dashdot") {
        coup = json{{"r", {1.0, 0.0, 0.0}}};
    } else {
        return std::nullopt;
    }

    const double t_max = big_r < 1.0 ? 200.0 : 10.0;
    const int steps = big_r < 1.0 ? 400 : 1000;
    return json{{"bath", {{"R", big_r}}},
                {"couplings", coup},
                {"initial", {{"p", p}, {"theta", 0.0}, {"phi", 0.0}}},
                {"time", {{"t_max", t_max}, {"steps", steps}, {"units", "inv_r"}}}};
}

}  // namespace subrad
