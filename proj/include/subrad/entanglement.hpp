#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "coupling.hpp"
#include "dfs.hpp"
#include "evolution.hpp"
#include "propagator.hpp"
#include "sector.hpp"

namespace subrad {

constexpr double kBisepEps = 1e-9;
constexpr double kPurityTol = 1e-8;

/// Partial transpose over the given qubit subset (0-based indices).
inline Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& rho,
                                          const std::set<int>& subset, int n) {
    if (rho.rows() != (1 << n) || rho.cols() != (1 << n))
        throw std::invalid_argument("partial_transpose: dimension mismatch");
    if (subset.empty() || static_cast<int>(subset.size()) >= n)
        throw std::invalid_argument("partial_transpose: subset must be nonempty and proper");
    int mask = 0;
    for (int q : subset) {
        if (q < 0 || q >= n) throw std::invalid_argument("partial_transpose: bad qubit index");
        mask |= 1 << (n - 1 - q);
    }
    const int dim = 1 << n;
    Eigen::MatrixXcd out(dim, dim);
    for (int row = 0; row < dim; ++row) {
        for (int col = 0; col < dim; ++col) {
            const int r2 = (row & ~mask) | (col & mask);
            const int c2 = (col & ~mask) | (row & mask);
            out(r2, c2) = rho(row, col);
        }
    }
    return out;
}

/// Negativity N = (||rho^T||_1 - 1)/2, evaluated by Hermitian eigendecomposition.
/// Both the trace-norm route and the negative-eigenvalue sum are computed and
/// required to agree (the partial transpose is trace preserving).
inline double negativity(const Eigen::MatrixXcd& rho, const std::set<int>& subset, int n) {
    const Eigen::MatrixXcd pt = partial_transpose(rho, subset, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt, Eigen::EigenvaluesOnly);
    double abs_sum = 0.0, neg_sum = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double ev = es.eigenvalues()[i];
        abs_sum += std::abs(ev);
        if (ev < 0.0) neg_sum += -ev;
    }
    const double via_norm = (abs_sum - 1.0) / 2.0;
    if (std::abs(via_norm - neg_sum) > 1e-10)
        throw std::runtime_error("negativity: trace-norm and eigenvalue routes disagree");
    return std::max(0.0, neg_sum);
}

/// Schmidt shortcut for a pure sector state: the one-vs-rest negativity of
/// qubit j is sqrt(mu (1 - mu)) with mu = |a_j|^2 + (ground weight if j is
/// in the ground branch) -- for a pure state with g0 = 0, mu = |a_j|^2.
inline double pure_sector_negativity(const SectorState& state, int j) {
    state.require_normalized();
    // Reduced state of qubit j: P(e) = |a_j|^2; everything else leaves j in |g>.
    const double mu = std::norm(state.a[j]);
    return std::sqrt(std::max(0.0, mu * (1.0 - mu)));
}

/// Geometric mean of the three one-vs-rest negativities of a pure 3-qubit
/// sector state.
inline double tripartite_negativity(const SectorState& state) {
    if (state.n() != 3)
        throw std::invalid_argument("tripartite_negativity: defined for n = 3 only");
    double prod = 1.0;
    for (int j = 0; j < 3; ++j) {
        const double nj = pure_sector_negativity(state, j);
        // a cut negativity at the rounding floor means the state is
        // biseparable across that cut; the cube root would otherwise blow
        // an ulp-sized residue up to ~1e-6
        if (nj <= 1e-15) return 0.0;
        prod *= nj;
    }
    return std::cbrt(prod);
}

/// Upper bound on the convex-roof negativity: N*_CR = Q * N_(3)(psi~).
inline double ncr_star(const SectorState& state) {
    const auto cd = canonical_decomposition(state);
    if (cd.ground_only) return 0.0;
    return cd.q * tripartite_negativity(cd.pure_part);
}

/// Wootters concurrence of an arbitrary two-qubit density matrix.
inline double wootters_concurrence(const Eigen::Matrix4cd& rho) {
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    // sigma_y (x) sigma_y in the computational basis
    yy(0, 3) = -1.0; yy(1, 2) = 1.0; yy(2, 1) = 1.0; yy(3, 0) = -1.0;
    const Eigen::Matrix4cd m = rho * yy * rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(m, false);
    std::vector<double> roots;
    for (int i = 0; i < 4; ++i)
        roots.push_back(std::sqrt(std::max(0.0, es.eigenvalues()[i].real())));
    std::sort(roots.begin(), roots.end(), std::greater<double>());
    return std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
}

/// Concurrence of a two-qubit sector state (mixture of the one-excitation
/// pure part with |gg>): C = 2 |a_1| |a_2|.
inline double concurrence_two_qubit(const SectorState& state) {
    if (state.n() != 2)
        throw std::invalid_argument("concurrence_two_qubit: requires n = 2");
    return 2.0 * std::abs(state.a[0]) * std::abs(state.a[1]);
}

/// Asymptotic (Phi -> 0) state: the DFS projection of the initial amplitudes,
/// with the superradiant weight transferred to the collective ground state.
inline SectorState asymptotic_state(const SectorState& state0, const CouplingProfile& profile) {
    const SectorState plus = superradiant_state(profile);
    const Complex eta_plus = plus.a.dot(state0.a);
    SectorState out(profile.n());
    out.a = state0.a - eta_plus * plus.a;
    out.g0 = std::sqrt(std::max(0.0, 1.0 - out.a.squaredNorm()));
    return out;
}

/// Biseparability time: first t > 0 where some amplitude a_j(t) vanishes and
/// qubit j factors out of the pure part.
struct TStarResult {
    double t_star = 0.0;
    double phi_star = 0.0;
    int qubit = -1;
};

namespace detail {
// First t > 0 with phi(t) == target, assuming target in (0, 1).
inline std::optional<double> solve_phi_equals(double target, const PropagatorParams& params) {
    if (is_cp_divisible(params)) {
        // Phi decreases monotonically from 1 to 0; bracket by doubling.
        double hi = 1.0 / std::max(params.gamma, params.rate);
        while (phi(hi, params) > target) {
            hi *= 2.0;
            if (hi > 1e12) return std::nullopt;
        }
        double lo = 0.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (phi(mid, params) > target ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    // Oscillatory regime: grid scan for the first crossing, then bisect.
    const double t_max = 20.0 / std::max(params.gamma, params.rate);
    const int steps = 20000;
    double prev = 1.0 - target;
    for (int i = 1; i <= steps; ++i) {
        const double t = t_max * i / steps;
        const double cur = phi(t, params) - target;
        if (prev * cur <= 0.0) {
            double lo = t_max * (i - 1) / steps, hi = t;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                ((phi(mid, params) - target) * prev > 0.0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev = cur;
    }
    return std::nullopt;
}
}  // namespace detail

inline std::optional<TStarResult> find_tstar(const SectorState& state0,
                                             const CouplingProfile& profile,
                                             const PropagatorParams& params) {
    const SectorState plus = superradiant_state(profile);
    const Complex eta_plus = plus.a.dot(state0.a);
    const Eigen::VectorXcd d = state0.a - eta_plus * plus.a;

    std::optional<TStarResult> best;
    for (int j = 0; j < profile.n(); ++j) {
        // a DFS residual at rounding level means a_j(t) is proportional to
        // Phi(t) and never genuinely crosses zero
        if (std::abs(d[j]) <= 1e-12) continue;
        const Complex denom = eta_plus * profile.weight(j);
        if (std::abs(denom) < 1e-14) continue;
        const Complex ratio = -d[j] / denom;  // Phi* solving a_j(t) = 0
        if (std::abs(ratio.imag()) > 1e-10 * std::max(1.0, std::abs(ratio.real()))) continue;
        const double phi_star = ratio.real();
        if (phi_star <= 0.0 || phi_star >= 1.0) continue;
        const auto t = detail::solve_phi_equals(phi_star, params);
        if (!t) continue;
        if (best && *t >= best->t_star) continue;

        // Confirm factorization: qubit j's reduced state must be pure.
        const SectorState st = evolve(state0, profile, params, *t);
        const double x = std::norm(st.a[j]);
        if (2.0 * x * (1.0 - x) > kPurityTol) continue;
        best = TStarResult{*t, phi_star, j};
    }
    return best;
}

/// Snapshot entanglement report for a three-qubit sector state.
struct EntanglementReport {
    double n_cut[3] = {0.0, 0.0, 0.0};  // one-vs-rest negativities of the pure part
    double n_geo = 0.0;                 // tripartite negativity of the pure part
    double q = 0.0;
    double n_star = 0.0;                // Q * N_(3)
    bool biseparable = false;
};

inline EntanglementReport sector_report(const SectorState& state) {
    if (state.n() != 3)
        throw std::invalid_argument("sector_report: n = 3 only");
    EntanglementReport rep;
    const auto cd = canonical_decomposition(state);
    rep.q = cd.q;
    if (cd.ground_only) {
        rep.biseparable = true;
        return rep;
    }
    for (int j = 0; j < 3; ++j) {
        rep.n_cut[j] = pure_sector_negativity(cd.pure_part, j);
        const double mu = std::norm(cd.pure_part.a[j]);
        if (2.0 * mu * (1.0 - mu) <= kPurityTol) rep.biseparable = true;
    }
    rep.n_geo = tripartite_negativity(cd.pure_part);
    rep.n_star = rep.q * rep.n_geo;
    if (rep.n_star <= kBisepEps && rep.biseparable) rep.n_star = std::max(rep.n_star, 0.0);
    return rep;
}

}  // namespace subrad
