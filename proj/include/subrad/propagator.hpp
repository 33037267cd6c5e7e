#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>

namespace subrad {

/// Lorentzian bath J(w) = (1/pi) * lambda*gamma / ((w - omega0)^2 + gamma^2).
/// lambda sets the coupling strength, gamma the spectral width. omega0 only
/// matters for the discretized-bath oracle; resonant qubits never see it.
struct BathSpec {
    double lambda = 1.0;
    double gamma = 1.0;
    double omega0 = 0.0;

    void validate() const {
        if (lambda < 0.0 || gamma < 0.0)
            throw std::invalid_argument("BathSpec: lambda and gamma must be >= 0");
        if (lambda == 0.0 && gamma == 0.0)
            throw std::invalid_argument("BathSpec: lambda and gamma cannot both be 0");
    }
};

/// Parameters of the collective amplitude Phi(t). The effective rate is
/// r = sqrt(lambda) * alpha_T; everything else derives from (gamma, r).
struct PropagatorParams {
    double gamma = 1.0;
    double rate = 0.0;  // r = sqrt(lambda) * alpha_T

    /// Omega^2 = gamma^2 - 4 r^2 (real; Omega itself may be imaginary).
    double omega_sq() const { return gamma * gamma - 4.0 * rate * rate; }

    std::complex<double> omega() const {
        return std::sqrt(std::complex<double>(omega_sq(), 0.0));
    }

    /// R = r / gamma; only meaningful for gamma > 0.
    double big_r() const {
        if (gamma <= 0.0)
            throw std::domain_error("PropagatorParams: R undefined for gamma = 0");
        return rate / gamma;
    }

    /// Markov-limit amplitude rate r^2 / gamma.
    double markov_rate() const {
        if (gamma <= 0.0)
            throw std::domain_error("PropagatorParams: Markov rate undefined for gamma = 0");
        return rate * rate / gamma;
    }

    static PropagatorParams from_bath(const BathSpec& bath, double alpha_t) {
        bath.validate();
        return {bath.gamma, std::sqrt(bath.lambda) * alpha_t};
    }
};

namespace detail {
constexpr double kOmegaSeriesCut = 1e-6;  // switch to series when |Omega| t below this
constexpr double kPolePhi = 1e-9;         // |Phi| below which Gamma(t) is reported as a pole
}  // namespace detail

/// Survival amplitude of the superradiant component,
///   Phi(t) = e^{-gamma t/2} [cosh(Omega t/2) + (gamma/Omega) sinh(Omega t/2)].
/// Evaluated with complex Omega throughout; near Omega = 0 a series branch
/// avoids the 0/0 in the sinh coefficient.
inline double phi(double t, const PropagatorParams& p) {
    if (t < 0.0) throw std::invalid_argument("phi: t must be >= 0");
    if (t == 0.0) return 1.0;

    const double g = p.gamma;
    const std::complex<double> w = p.omega();

    if (std::abs(w) * t < detail::kOmegaSeriesCut) {
        // cosh x + (g t/2)(sinh x / x) with x = Omega t/2, expanded to O(x^2)
        const double x2 = p.omega_sq() * t * t / 4.0;
        return std::exp(-g * t / 2.0) *
               (1.0 + g * t / 2.0 + x2 * (0.5 + g * t / 12.0));
    }

    // Split cosh/sinh into exponentials; Re(Omega) <= gamma, so both
    // arguments have non-positive real part after absorbing e^{-gamma t/2}.
    const std::complex<double> cp = (1.0 + g / w) * std::exp((w - g) * (t / 2.0));
    const std::complex<double> cm = (1.0 - g / w) * std::exp(-(w + g) * (t / 2.0));
    const std::complex<double> val = 0.5 * (cp + cm);

    if (std::abs(val.imag()) > 1e-10 * std::max(1.0, std::abs(val.real())))
        throw std::runtime_error("phi: non-negligible imaginary residue");
    return val.real();
}

/// d Phi / dt in closed form: Phi'(t) = -(2 r^2 / Omega) e^{-gamma t/2} sinh(Omega t/2).
inline double phi_dot(double t, const PropagatorParams& p) {
    if (t < 0.0) throw std::invalid_argument("phi_dot: t must be >= 0");
    const double g = p.gamma;
    const double r2 = p.rate * p.rate;
    const std::complex<double> w = p.omega();

    if (std::abs(w) * t < detail::kOmegaSeriesCut) {
        const double x2 = p.omega_sq() * t * t / 4.0;
        return -r2 * t * std::exp(-g * t / 2.0) * (1.0 + x2 / 6.0);
    }

    const std::complex<double> val =
        -(r2 / w) * (std::exp((w - g) * (t / 2.0)) - std::exp(-(w + g) * (t / 2.0)));
    if (std::abs(val.imag()) > 1e-10 * std::max(1.0, std::abs(val.real())))
        throw std::runtime_error("phi_dot: non-negligible imaginary residue");
    return val.real();
}

/// Markov-limit amplitude e^{-Gamma t}, Gamma = r^2 / gamma. Rejects gamma = 0.
inline double phi_markov(double t, const PropagatorParams& p) {
    if (p.gamma <= 0.0)
        throw std::domain_error("phi_markov: requires gamma > 0");
    return std::exp(-p.markov_rate() * t);
}

/// Bath correlation kernel f(tau) = lambda e^{-gamma tau} for resonant qubits.
inline double correlation(double tau, const BathSpec& bath) {
    if (tau < 0.0) throw std::invalid_argument("correlation: tau must be >= 0");
    return bath.lambda * std::exp(-bath.gamma * tau);
}

/// Time-local Lindblad rate Gamma(t) = -2 Phi'(t)/Phi(t).
/// Empty result marks a pole (zero of Phi; only possible for 2r > gamma).
inline std::optional<double> decay_rate(double t, const PropagatorParams& p) {
    const double f = phi(t, p);
    if (std::abs(f) < detail::kPolePhi) return std::nullopt;
    return -2.0 * phi_dot(t, p) / f;
}

/// Amplitude-decay convention, -Phi'/Phi. In the bad cavity this tends to
/// (gamma - Omega)/2 ~ r^2/gamma; the Lindblad rate above is twice this.
inline std::optional<double> amplitude_decay_rate(double t, const PropagatorParams& p) {
    const double f = phi(t, p);
    if (std::abs(f) < detail::kPolePhi) return std::nullopt;
    return -phi_dot(t, p) / f;
}

/// CP-divisibility of the induced map: Gamma(t) >= 0 for all t, which holds
/// exactly when Omega is real, i.e. 2r <= gamma.
inline bool is_cp_divisible(const PropagatorParams& p) {
    return 2.0 * p.rate <= p.gamma;
}

/// First zero of Phi, closed form; only exists when 2r > gamma.
inline std::optional<double> first_phi_zero(const PropagatorParams& p) {
    if (is_cp_divisible(p)) return std::nullopt;
    const double wabs = std::sqrt(-p.omega_sq());  // |Omega| for imaginary Omega
    // cos(|O|t/2) + (gamma/|O|) sin(|O|t/2) = 0  =>  tan(|O|t/2) = -|O|/gamma
    const double half = M_PI - std::atan2(wabs, p.gamma);
    return 2.0 * half / wabs;
}

}  // namespace subrad
