#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace subrad {

/// Per-qubit couplings alpha_j >= 0 and the derived normalized weights
/// r_j = alpha_j / alpha_T, alpha_T = sqrt(sum alpha_j^2).
class CouplingProfile {
public:
    explicit CouplingProfile(std::vector<double> alphas) : alphas_(std::move(alphas)) {
        if (alphas_.size() < 2)
            throw std::invalid_argument("CouplingProfile: need at least 2 qubits");
        double sum_sq = 0.0;
        for (double a : alphas_) {
            if (a < 0.0 || !std::isfinite(a))
                throw std::invalid_argument("CouplingProfile: couplings must be finite and >= 0");
            sum_sq += a * a;
        }
        if (sum_sq <= 0.0)
            throw std::invalid_argument("CouplingProfile: at least one coupling must be positive");
        alpha_t_ = std::sqrt(sum_sq);
        weights_.resize(alphas_.size());
        for (std::size_t j = 0; j < alphas_.size(); ++j)
            weights_[j] = alphas_[j] / alpha_t_;
    }

    /// Build directly from normalized weights (renormalized defensively).
    static CouplingProfile from_weights(const std::vector<double>& r) {
        return CouplingProfile(r);
    }

    /// n=3 profile from (r1, r2) with r3 = sqrt(1 - r1^2 - r2^2).
    static CouplingProfile from_r1r2(double r1, double r2) {
        const double rest = 1.0 - r1 * r1 - r2 * r2;
        if (r1 < 0.0 || r2 < 0.0 || rest < -1e-12)
            throw std::invalid_argument("CouplingProfile: need r1, r2 >= 0 with r1^2 + r2^2 <= 1");
        return CouplingProfile({r1, r2, std::sqrt(std::max(0.0, rest))});
    }

    int n() const { return static_cast<int>(alphas_.size()); }
    double alpha(int j) const { return alphas_.at(j); }
    double alpha_t() const { return alpha_t_; }
    double weight(int j) const { return weights_.at(j); }
    const std::vector<double>& alphas() const { return alphas_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    std::vector<double> alphas_;
    std::vector<double> weights_;
    double alpha_t_;
};

}  // namespace subrad
