#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "coupling.hpp"
#include "dfs.hpp"
#include "propagator.hpp"
#include "sector.hpp"

namespace subrad {

/// One-parameter family of three-qubit initial states:
///   c1 = sqrt((1+2p)/3), c2 = sqrt((1-p)/3) e^{i theta}, c3 = sqrt((1-p)/3) e^{i phi},
/// p = 0 the W state, p = 1 the product state |egg>.
struct InitialFamily {
    double p = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

inline SectorState initial_coefficients(const InitialFamily& family) {
    if (family.p < 0.0 || family.p > 1.0)
        throw std::invalid_argument("initial_coefficients: p must be in [0, 1]");
    const double c1 = std::sqrt((1.0 + 2.0 * family.p) / 3.0);
    const double cs = std::sqrt((1.0 - family.p) / 3.0);
    SectorState s(3);
    s.a[0] = c1;
    s.a[1] = cs * std::exp(Complex(0.0, family.theta));
    s.a[2] = cs * std::exp(Complex(0.0, family.phi));
    return s;
}

/// Closed-form sector evolution: the superradiant component scales by Phi(t),
/// the DFS component is frozen, leaked weight accumulates on |g>^(x)n.
///   a(t) = Phi(t) eta_+ r + d,   d = (I - |psi_+><psi_+|) a(0).
inline SectorState evolve(const SectorState& state0, const CouplingProfile& profile,
                          const PropagatorParams& params, double t) {
    if (state0.n() != profile.n())
        throw std::invalid_argument("evolve: state/profile size mismatch");
    state0.require_normalized();
    if (std::abs(state0.g0.imag()) > 1e-12 || state0.g0.real() < -1e-12)
        throw std::invalid_argument("evolve: g0(0) must be real and >= 0");

    const SectorState plus = superradiant_state(profile);
    const Complex eta_plus = plus.a.dot(state0.a);
    const Eigen::VectorXcd dfs_part = state0.a - eta_plus * plus.a;

    SectorState out(profile.n());
    out.a = phi(t, params) * eta_plus * plus.a + dfs_part;
    out.g0 = std::sqrt(std::max(0.0, 1.0 - out.a.squaredNorm()));
    return out;
}

/// Reduced 2^n x 2^n density matrix: the sector block a a^dag on the |[j]>
/// indices, population 1 - Q on the collective ground state, and no
/// sector-ground coherence (the emitted photon carries the which-path record).
inline Eigen::MatrixXcd density_matrix(const SectorState& state) {
    state.require_normalized();
    const int n = state.n();
    const int dim = 1 << n;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            rho(basis_index(n, j), basis_index(n, k)) = state.a[j] * std::conj(state.a[k]);
    rho(0, 0) = 1.0 - state.excited_weight();
    return rho;
}

/// rho = Q |psi~><psi~| + (1 - Q) |g..g><g..g| with |psi~> = a / sqrt(Q).
struct CanonicalDecomposition {
    double q = 0.0;
    SectorState pure_part;   // normalized sector part; empty when ground_only
    double ground_weight = 1.0;
    bool ground_only = false;
};

inline CanonicalDecomposition canonical_decomposition(const SectorState& state) {
    CanonicalDecomposition cd;
    cd.q = state.excited_weight();
    cd.ground_weight = 1.0 - cd.q;
    if (cd.q < 1e-12) {
        cd.ground_only = true;
        return cd;
    }
    cd.pure_part = SectorState(Eigen::VectorXcd(state.a / std::sqrt(cd.q)), 0.0);
    return cd;
}

/// Collective amplitude damping on span{|psi_+>, |g>^(x)n}:
///   E0 = diag(Phi, 1),  E1 = sqrt(1 - Phi^2) |g><psi_+|.
inline Eigen::Matrix2cd kraus_apply(const Eigen::Matrix2cd& rho2,
                                    const PropagatorParams& params, double t) {
    const double f = phi(t, params);
    Eigen::Matrix2cd e0, e1;
    e0 << f, 0.0, 0.0, 1.0;
    e1 << 0.0, 0.0, std::sqrt(std::max(0.0, 1.0 - f * f)), 0.0;
    return e0 * rho2 * e0.adjoint() + e1 * rho2 * e1.adjoint();
}

/// Residual between the direct evolution and the block-channel picture
/// E_total = E_{+0} (+) 1_DFS expressed in the {psi_+, psi_-^i, g^(x)n} basis.
inline double full_channel_consistency(const SectorState& state0,
                                       const CouplingProfile& profile,
                                       const PropagatorParams& params, double t) {
    const int n = profile.n();
    const int dim = 1 << n;

    const Eigen::MatrixXcd direct = density_matrix(evolve(state0, profile, params, t));

    // Columns: psi_+, the DFS basis, the ground state, all embedded in 2^n.
    Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(dim, n + 1);
    const SectorState plus = superradiant_state(profile);
    for (int j = 0; j < n; ++j) basis(basis_index(n, j), 0) = plus.a[j];
    const auto dfs = subradiant_basis(profile);
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n; ++j) basis(basis_index(n, j), i + 1) = dfs[i].a[j];
    basis(0, n) = 1.0;

    Eigen::MatrixXcd rho_b = basis.adjoint() * density_matrix(state0) * basis;

    const double f = phi(t, params);
    Eigen::MatrixXcd e0 = Eigen::MatrixXcd::Identity(n + 1, n + 1);
    e0(0, 0) = f;
    Eigen::MatrixXcd e1 = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    e1(n, 0) = std::sqrt(std::max(0.0, 1.0 - f * f));
    rho_b = e0 * rho_b * e0.adjoint() + e1 * rho_b * e1.adjoint();

    const Eigen::MatrixXcd block = basis * rho_b * basis.adjoint();
    return (direct - block).cwiseAbs().maxCoeff();
}

}  // namespace subrad
