#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "coupling.hpp"
#include "sector.hpp"

namespace subrad {

/// Superradiant state |psi_+>: a_j = r_j, no ground component.
inline SectorState superradiant_state(const CouplingProfile& profile) {
    SectorState s(profile.n());
    for (int j = 0; j < profile.n(); ++j) s.a[j] = profile.weight(j);
    return s;
}

/// Pair subradiant state |psi_-,jk> = (r_k |[j]> - r_j |[k]>) / sqrt(r_j^2 + r_k^2).
inline SectorState subradiant_pair(const CouplingProfile& profile, int j, int k) {
    if (j == k) throw std::invalid_argument("subradiant_pair: j == k");
    const double rj = profile.weight(j);
    const double rk = profile.weight(k);
    const double nrm = std::sqrt(rj * rj + rk * rk);
    if (nrm <= 0.0)
        throw std::invalid_argument("subradiant_pair: both weights zero");
    SectorState s(profile.n());
    s.a[j] = rk / nrm;
    s.a[k] = -rj / nrm;
    return s;
}

/// Orthonormal basis of the DFS within the excitation sector (n-1 vectors).
/// For n = 3 with r1^2 + r2^2 > 0 the first two candidates are pinned to
///   psi_-^1 = (r2, -r1, 0)/sqrt(k),  psi_-^2 = (r1 r3, r2 r3, -k)/sqrt(k),
/// k = r1^2 + r2^2, so eta decompositions reproduce those coefficients.
/// Otherwise the basis comes from modified Gram-Schmidt over the zero-coupling
/// axes followed by the pair family in lexicographic (j, k) order.
inline std::vector<SectorState> subradiant_basis(const CouplingProfile& profile) {
    const int n = profile.n();
    std::vector<Eigen::VectorXcd> candidates;

    const double kap = profile.weight(0) * profile.weight(0) +
                       profile.weight(1) * profile.weight(1);
    if (n == 3 && kap > 0.0) {
        const double r1 = profile.weight(0), r2 = profile.weight(1), r3 = profile.weight(2);
        const double sk = std::sqrt(kap);
        Eigen::VectorXcd v1(3), v2(3);
        v1 << r2 / sk, -r1 / sk, 0.0;
        v2 << r1 * r3 / sk, r2 * r3 / sk, -sk;
        candidates.push_back(v1);
        candidates.push_back(v2);
    }
    for (int j = 0; j < n; ++j) {
        if (profile.weight(j) == 0.0) {
            Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
            e[j] = 1.0;
            candidates.push_back(e);  // trivially dark
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            const double rj = profile.weight(j), rk = profile.weight(k);
            if (rj == 0.0 && rk == 0.0) continue;
            candidates.push_back(subradiant_pair(profile, j, k).a);
        }
    }

    std::vector<SectorState> basis;
    for (auto& v : candidates) {
        if (static_cast<int>(basis.size()) == n - 1) break;
        for (const auto& b : basis) v -= b.a.dot(v) * b.a;
        const double nrm = v.norm();
        if (nrm < 1e-10) continue;
        basis.emplace_back(Eigen::VectorXcd(v / nrm), Complex(0.0));
    }
    if (static_cast<int>(basis.size()) != n - 1)
        throw std::runtime_error("subradiant_basis: failed to span the DFS");
    return basis;
}

/// Coefficients of a sector state over {psi_+, psi_-^1, ..., psi_-^(n-1)}.
struct DfsDecomposition {
    Complex eta_plus = 0.0;
    std::vector<Complex> eta_minus;

    double dfs_weight() const {
        double w = 0.0;
        for (auto e : eta_minus) w += std::norm(e);
        return w;
    }
};

inline DfsDecomposition decompose(const SectorState& state, const CouplingProfile& profile) {
    if (state.n() != profile.n())
        throw std::invalid_argument("decompose: state/profile size mismatch");
    DfsDecomposition d;
    d.eta_plus = superradiant_state(profile).a.dot(state.a);
    for (const auto& b : subradiant_basis(profile))
        d.eta_minus.push_back(b.a.dot(state.a));
    return d;
}

/// Amplitude the collective lowering operator transfers out of the sector:
/// |sum_j alpha_j a_j|. Zero (to rounding) exactly for dark states.
inline double verify_dark(const SectorState& state, const CouplingProfile& profile) {
    Complex acc = 0.0;
    for (int j = 0; j < state.n(); ++j) acc += profile.alpha(j) * state.a[j];
    return std::abs(acc);
}

/// Numerical rank of the stacked pair family {psi_-,jk}; equals n-1 for every
/// valid profile.
inline int dfs_dimension(const CouplingProfile& profile) {
    const int n = profile.n();
    std::vector<Eigen::VectorXcd> rows;
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            if (profile.weight(j) == 0.0 && profile.weight(k) == 0.0) continue;
            rows.push_back(subradiant_pair(profile, j, k).a);
        }
    Eigen::MatrixXcd m(rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i) m.row(i) = rows[i].transpose();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > 1e-9 * sv[0]) ++rank;
    return rank;
}

}  // namespace subrad
