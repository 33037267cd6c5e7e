#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace subrad {

using Complex = std::complex<double>;

/// Pure state of the single-excitation sector plus the collective ground state:
///   |psi> = sum_j a_j |[j]>  +  g0 |g>^(x)n,
/// where |[j]> has the excitation on qubit j (0-based).
struct SectorState {
    Eigen::VectorXcd a;  // size n
    Complex g0 = 0.0;

    SectorState() = default;
    SectorState(Eigen::VectorXcd amps, Complex ground) : a(std::move(amps)), g0(ground) {}

    explicit SectorState(int n) : a(Eigen::VectorXcd::Zero(n)) {}

    int n() const { return static_cast<int>(a.size()); }

    /// Excited-sector weight Q = sum |a_j|^2.
    double excited_weight() const { return a.squaredNorm(); }

    double norm_sq() const { return a.squaredNorm() + std::norm(g0); }

    bool is_normalized(double tol = 1e-10) const {
        return std::abs(norm_sq() - 1.0) <= tol;
    }

    void require_normalized(double tol = 1e-8) const {
        if (std::abs(norm_sq() - 1.0) > tol)
            throw std::invalid_argument("SectorState: not normalized");
    }

    SectorState normalized() const {
        const double nrm = std::sqrt(norm_sq());
        if (nrm <= 0.0) throw std::domain_error("SectorState: zero vector");
        return {a / nrm, g0 / nrm};
    }
};

/// Index of |[j]> in the 2^n computational basis (e = bit set, qubit 0 most
/// significant); the collective ground state sits at index 0.
inline int basis_index(int n, int j) { return 1 << (n - 1 - j); }

}  // namespace subrad
