#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "coupling.hpp"
#include "propagator.hpp"
#include "sector.hpp"

namespace subrad::oracle {

struct CurvePoint {
    double t;
    double value;
};

/// Integrates the local form of the memory-kernel equation,
///   c'' + gamma c' + r^2 c = 0,  c(0) = 1, c'(0) = 0,
/// with fixed-step classical RK4. Independent check of the closed-form phi.
struct OdeResult {
    std::vector<CurvePoint> samples;
    bool step_size_ok = true;
};

inline OdeResult solve_cplus_ode(const PropagatorParams& params, double t_max, double dt) {
    if (dt <= 0.0 || t_max < 0.0)
        throw std::invalid_argument("solve_cplus_ode: need dt > 0, t_max >= 0");
    OdeResult res;
    double scale = 0.0;
    if (params.gamma > 0.0) scale = params.gamma;
    if (params.rate > 0.0) scale = std::max(scale, params.rate);
    if (scale > 0.0 && dt > 1e-3 / scale) res.step_size_ok = false;

    const double g = params.gamma;
    const double r2 = params.rate * params.rate;
    auto deriv = [g, r2](double c, double v, double& dc, double& dv) {
        dc = v;
        dv = -g * v - r2 * c;
    };

    double c = 1.0, v = 0.0, t = 0.0;
    res.samples.push_back({0.0, 1.0});
    const long steps = static_cast<long>(std::ceil(t_max / dt));
    for (long i = 0; i < steps; ++i) {
        double k1c, k1v, k2c, k2v, k3c, k3v, k4c, k4v;
        deriv(c, v, k1c, k1v);
        deriv(c + 0.5 * dt * k1c, v + 0.5 * dt * k1v, k2c, k2v);
        deriv(c + 0.5 * dt * k2c, v + 0.5 * dt * k2v, k3c, k3v);
        deriv(c + dt * k3c, v + dt * k3v, k4c, k4v);
        c += dt / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        t += dt;
        res.samples.push_back({t, c});
    }
    return res;
}

/// Lorentzian bath discretized on a uniform frequency grid with midpoint
/// weights: K modes over [omega0 - W, omega0 + W], g_k^2 = J(omega_k) dw.
struct DiscretizedBath {
    std::vector<double> deltas;  // omega0 - omega_k
    std::vector<double> gs;
    double delta_omega = 0.0;

    static DiscretizedBath build(const BathSpec& bath, int modes, double window) {
        if (modes < 1 || window <= 0.0)
            throw std::invalid_argument("DiscretizedBath: need modes >= 1, window > 0");
        DiscretizedBath b;
        b.delta_omega = 2.0 * window / modes;
        b.deltas.resize(modes);
        b.gs.resize(modes);
        for (int k = 0; k < modes; ++k) {
            const double detune = -window + (k + 0.5) * b.delta_omega;  // omega_k - omega0
            const double j_w = bath.lambda * bath.gamma /
                               (M_PI * (detune * detune + bath.gamma * bath.gamma));
            b.deltas[k] = -detune;
            b.gs[k] = std::sqrt(j_w * b.delta_omega);
        }
        return b;
    }

    double recurrence_time() const { return 2.0 * M_PI / delta_omega; }
};

struct BathRunResult {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> qubit_amps;  // c_j(t)
    double max_norm_drift = 0.0;
    double max_bath_population = 0.0;  // sum_k |c_k|^2 over the run
    std::vector<std::string> warnings;
};

/// Propagates the full (n + K)-amplitude system in the interaction picture:
///   c_j' = -i alpha_j sum_k g_k e^{ i delta_k t} c_k
///   c_k' = -i g_k sum_j alpha_j e^{-i delta_k t} c_j
/// Fixed-step RK4; stage phases are advanced incrementally.
inline BathRunResult solve_discretized_bath(const SectorState& state0,
                                            const CouplingProfile& profile,
                                            const DiscretizedBath& bath,
                                            double t_max, double dt,
                                            int sample_stride = 1) {
    const int n = profile.n();
    const int modes = static_cast<int>(bath.gs.size());
    if (state0.n() != n)
        throw std::invalid_argument("solve_discretized_bath: state/profile mismatch");

    BathRunResult res;
    if (bath.recurrence_time() < t_max)
        res.warnings.push_back("finite-bath recurrence time shorter than t_max");

    Eigen::VectorXcd cq = state0.a;
    Eigen::VectorXcd cb = Eigen::VectorXcd::Zero(modes);
    const double norm0 = cq.squaredNorm();

    // u_k = e^{i delta_k t}; h_k advances it by dt/2.
    Eigen::VectorXcd u(modes), h(modes);
    for (int k = 0; k < modes; ++k) {
        u[k] = 1.0;
        h[k] = std::exp(Complex(0.0, bath.deltas[k] * dt / 2.0));
    }

    const Complex minus_i(0.0, -1.0);
    Eigen::VectorXcd alphas(n), gvec(modes);
    for (int j = 0; j < n; ++j) alphas[j] = profile.alpha(j);
    for (int k = 0; k < modes; ++k) gvec[k] = bath.gs[k];

    auto deriv = [&](const Eigen::VectorXcd& q, const Eigen::VectorXcd& b,
                     const Eigen::VectorXcd& phase,
                     Eigen::VectorXcd& dq, Eigen::VectorXcd& db) {
        // s = sum_k g_k e^{i d_k t} c_k ; p = sum_j alpha_j c_j
        const Complex s = (gvec.array() * phase.array() * b.array()).sum();
        const Complex p = (alphas.array() * q.array()).sum();
        dq = minus_i * s * alphas;
        db = (minus_i * p) * (gvec.array() * phase.array().conjugate()).matrix();
    };

    const long steps = static_cast<long>(std::ceil(t_max / dt));
    res.times.push_back(0.0);
    res.qubit_amps.push_back(cq);

    Eigen::VectorXcd k1q(n), k2q(n), k3q(n), k4q(n);
    Eigen::VectorXcd k1b(modes), k2b(modes), k3b(modes), k4b(modes);
    Eigen::VectorXcd u_half(modes), u_full(modes), tmpq(n), tmpb(modes);

    for (long i = 0; i < steps; ++i) {
        u_half = u.cwiseProduct(h);
        u_full = u_half.cwiseProduct(h);

        deriv(cq, cb, u, k1q, k1b);
        tmpq = cq + 0.5 * dt * k1q; tmpb = cb + 0.5 * dt * k1b;
        deriv(tmpq, tmpb, u_half, k2q, k2b);
        tmpq = cq + 0.5 * dt * k2q; tmpb = cb + 0.5 * dt * k2b;
        deriv(tmpq, tmpb, u_half, k3q, k3b);
        tmpq = cq + dt * k3q; tmpb = cb + dt * k3b;
        deriv(tmpq, tmpb, u_full, k4q, k4b);

        cq += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        cb += dt / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        u = u_full;

        const double bath_pop = cb.squaredNorm();
        res.max_bath_population = std::max(res.max_bath_population, bath_pop);
        res.max_norm_drift = std::max(
            res.max_norm_drift, std::abs(cq.squaredNorm() + bath_pop - norm0));

        if ((i + 1) % sample_stride == 0 || i + 1 == steps) {
            res.times.push_back(dt * static_cast<double>(i + 1));
            res.qubit_amps.push_back(cq);
        }
    }
    return res;
}

/// Negativity by direct dense eigendecomposition, written without the Schmidt
/// shortcut or the library partial-transpose helper.
inline double brute_negativity(const Eigen::MatrixXcd& rho, const std::set<int>& subset, int n) {
    const int dim = 1 << n;
    if (rho.rows() != dim) throw std::invalid_argument("brute_negativity: dimension mismatch");
    int mask = 0;
    for (int q : subset) mask |= 1 << (n - 1 - q);

    Eigen::MatrixXcd pt(dim, dim);
    for (int row = 0; row < dim; ++row)
        for (int col = 0; col < dim; ++col) {
            const int r2 = (row & ~mask) | (col & mask);
            const int c2 = (col & ~mask) | (row & mask);
            pt(row, col) = rho(r2, c2);
        }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt, Eigen::EigenvaluesOnly);
    double neg = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()[i] < 0.0) neg -= es.eigenvalues()[i];
    return neg;
}

}  // namespace subrad::oracle
