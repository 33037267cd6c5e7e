#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "subrad/evolution.hpp"

using namespace subrad;

namespace {
SectorState w_state() {
    SectorState s(3);
    s.a.setConstant(1.0 / std::sqrt(3.0));
    return s;
}

SectorState random_state(std::mt19937& rng, int n, bool with_ground = false) {
    std::normal_distribution<double> gauss;
    SectorState s(n);
    for (int j = 0; j < n; ++j) s.a[j] = Complex(gauss(rng), gauss(rng));
    if (with_ground) s.g0 = std::abs(gauss(rng));
    const double nrm = std::sqrt(s.norm_sq());
    s.a /= nrm;
    s.g0 /= nrm;
    return s;
}
}  // namespace

TEST_CASE("initial family coefficients") {
    auto w = initial_coefficients({0.0, 0.0, 0.0});
    for (int j = 0; j < 3; ++j)
        CHECK(std::abs(w.a[j] - Complex(1.0 / std::sqrt(3.0))) <= 1e-14);

    auto product = initial_coefficients({1.0, 0.0, 0.0});
    CHECK(std::abs(product.a[0] - Complex(1.0)) <= 1e-14);
    CHECK(std::abs(product.a[1]) <= 1e-14);

    auto mid = initial_coefficients({0.25, M_PI, 0.0});
    CHECK(mid.a[0].real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(mid.a[1].real() == doctest::Approx(-std::sqrt(0.25)).epsilon(1e-12));
    CHECK(mid.a[2].real() == doctest::Approx(std::sqrt(0.25)).epsilon(1e-12));

    CHECK_THROWS_AS(initial_coefficients({1.5, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(initial_coefficients({-0.1, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("evolve: identity at t = 0 and the uniform W decay law") {
    CouplingProfile uniform({1.0, 1.0, 1.0});
    PropagatorParams params{1.0, 0.1};

    auto at0 = evolve(w_state(), uniform, params, 0.0);
    CHECK((at0.a - w_state().a).norm() <= 1e-14);

    for (double t : {0.5, 2.0, 10.0}) {
        const double f = phi(t, params);
        auto st = evolve(w_state(), uniform, params, t);
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(st.a[j] - Complex(f / std::sqrt(3.0))) <= 1e-14);
        CHECK(st.excited_weight() == doctest::Approx(f * f).epsilon(1e-12));
    }
}

TEST_CASE("evolve: asymptotic projector arithmetic for |egg>") {
    CouplingProfile profile({0.53, 0.6, 0.59925});
    PropagatorParams params{1.0, 0.1};
    SectorState egg(3);
    egg.a[0] = 1.0;

    auto late = evolve(egg, profile, params, 2000.0);  // Phi ~ 0
    CHECK(late.a[0].real() == doctest::Approx(0.71910).epsilon(1e-4));
    CHECK(late.a[1].real() == doctest::Approx(-0.31802).epsilon(1e-4));
    CHECK(late.a[2].real() == doctest::Approx(-0.31760).epsilon(1e-4));
    CHECK(late.excited_weight() == doctest::Approx(0.71910).epsilon(1e-4));
}

TEST_CASE("evolve matches the explicit three-qubit amplitude formulas") {
    std::mt19937 rng(5);
    PropagatorParams params{1.0, 0.3};
    for (int trial = 0; trial < 25; ++trial) {
        std::uniform_real_distribution<double> dist(0.05, 1.0);
        CouplingProfile profile({dist(rng), dist(rng), dist(rng)});
        SectorState s0 = random_state(rng, 3);
        s0.g0 = 0.0;
        s0.a.normalize();

        const auto d = decompose(s0, profile);
        const double r1 = profile.weight(0), r2 = profile.weight(1), r3 = profile.weight(2);
        const double kappa = r1 * r1 + r2 * r2;
        const double sk = std::sqrt(kappa);

        for (double t : {0.0, 0.7, 3.0, 12.0}) {
            const double f = phi(t, params);
            const auto st = evolve(s0, profile, params, t);
            const Complex c1 = r1 * f * d.eta_plus + (r1 * r3 / sk) * d.eta_minus[1] +
                               (r2 / sk) * d.eta_minus[0];
            const Complex c2 = r2 * f * d.eta_plus + (r2 * r3 / sk) * d.eta_minus[1] -
                               (r1 / sk) * d.eta_minus[0];
            const Complex c3 = r3 * f * d.eta_plus - sk * d.eta_minus[1];
            CHECK(std::abs(st.a[0] - c1) <= 1e-12);
            CHECK(std::abs(st.a[1] - c2) <= 1e-12);
            CHECK(std::abs(st.a[2] - c3) <= 1e-12);
        }
    }
}

TEST_CASE("evolve invariants: frozen DFS component and the Q identity") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> dist(0.05, 1.0);
    PropagatorParams params{1.0, 2.0};
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 4;
        std::vector<double> alphas(n);
        for (auto& a : alphas) a = dist(rng);
        CouplingProfile profile(alphas);
        SectorState s0 = random_state(rng, n);
        s0.g0 = 0.0;
        s0.a.normalize();

        const auto plus = superradiant_state(profile);
        const Complex eta_plus = plus.a.dot(s0.a);
        const Eigen::VectorXcd dfs0 = s0.a - eta_plus * plus.a;
        const double dfs_weight = dfs0.squaredNorm();

        for (double t : {0.3, 1.1, 4.0}) {
            const auto st = evolve(s0, profile, params, t);
            const Eigen::VectorXcd dfs_t = st.a - plus.a.dot(st.a) * plus.a;
            CHECK((dfs_t - dfs0).norm() <= 1e-12);
            const double f = phi(t, params);
            CHECK(st.excited_weight() ==
                  doctest::Approx(std::norm(eta_plus) * f * f + dfs_weight).epsilon(1e-12));
        }
    }
}

TEST_CASE("density matrix structure") {
    const auto rho = density_matrix(w_state());
    const int i1 = basis_index(3, 0), i2 = basis_index(3, 1), i3 = basis_index(3, 2);
    for (int a : {i1, i2, i3})
        for (int b : {i1, i2, i3})
            CHECK(std::abs(rho(a, b) - Complex(1.0 / 3.0)) <= 1e-14);
    CHECK(std::abs(rho(0, 0)) <= 1e-14);
    CHECK(std::abs(rho.trace() - Complex(1.0)) <= 1e-12);

    SectorState ground(3);
    ground.g0 = 1.0;
    const auto rho_g = density_matrix(ground);
    CHECK(std::abs(rho_g(0, 0) - Complex(1.0)) <= 1e-14);
    CHECK(rho_g.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-14));

    SectorState bad(3);
    bad.a[0] = 0.5;  // not normalized
    CHECK_THROWS_AS(density_matrix(bad), std::invalid_argument);
}

TEST_CASE("density matrix spectrum is {Q, 1-Q, 0...}") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 3;
        const auto st = random_state(rng, n, true);
        const auto rho = density_matrix(st);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        const double q = st.excited_weight();
        for (int i = 0; i < ev.size(); ++i) CHECK(ev[i] >= -1e-10);
        CHECK(ev[ev.size() - 1] == doctest::Approx(std::max(q, 1.0 - q)).epsilon(1e-10));
        double rank2_sum = ev[ev.size() - 1] + ev[ev.size() - 2];
        CHECK(rank2_sum == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("canonical decomposition") {
    const auto full = canonical_decomposition(w_state());
    CHECK(full.q == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(full.ground_only);

    CouplingProfile uniform({1.0, 1.0, 1.0});
    PropagatorParams ideal{0.0, 1.0};  // Phi = cos t
    const double t_half = std::acos(0.5);
    const auto cd = canonical_decomposition(evolve(w_state(), uniform, ideal, t_half));
    CHECK(cd.q == doctest::Approx(0.25).epsilon(1e-12));

    SectorState ground(3);
    ground.g0 = 1.0;
    CHECK(canonical_decomposition(ground).ground_only);
}

TEST_CASE("kraus channel on the superradiant block") {
    PropagatorParams ideal{0.0, 1.0};  // Phi = cos t, convenient to dial
    Eigen::Matrix2cd rho_plus = Eigen::Matrix2cd::Zero();
    rho_plus(0, 0) = 1.0;

    // t = 0: identity channel
    Eigen::Matrix2cd mixed;
    mixed << 0.7, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.3;
    CHECK((kraus_apply(mixed, ideal, 0.0) - mixed).cwiseAbs().maxCoeff() <= 1e-14);

    // Phi = 0: everything lands on the ground state
    const auto damped = kraus_apply(mixed, ideal, M_PI / 2.0);
    CHECK(std::abs(damped(1, 1) - Complex(1.0)) <= 1e-12);
    CHECK(std::abs(damped(0, 0)) <= 1e-12);

    // Phi = 0.6 on the superradiant projector
    const double t6 = std::acos(0.6);
    const auto out = kraus_apply(rho_plus, ideal, t6);
    CHECK(out(0, 0).real() == doctest::Approx(0.36).epsilon(1e-12));
    CHECK(out(1, 1).real() == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(std::abs(out(0, 1)) <= 1e-14);
}

TEST_CASE("kraus completeness across a time grid") {
    PropagatorParams params{1.0, 3.0};
    for (int i = 0; i <= 1000; ++i) {
        const double t = 10.0 * i / 1000.0;
        const double f = phi(t, params);
        // E0^dag E0 + E1^dag E1 = diag(Phi^2 + (1 - Phi^2), 1)
        CHECK(std::abs(f * f + (1.0 - f * f) - 1.0) <= 1e-12);
    }
}

TEST_CASE("full channel consistency: direct vs block picture") {
    CouplingProfile uniform({1.0, 1.0, 1.0});
    PropagatorParams params{1.0, 0.4};
    CHECK(full_channel_consistency(w_state(), uniform, params, 0.0) <= 1e-12);
    for (double t : {0.5, 2.0, 8.0})
        CHECK(full_channel_consistency(w_state(), uniform, params, t) <= 1e-10);

    std::mt19937 rng(29);
    std::uniform_real_distribution<double> dist(0.05, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        CouplingProfile profile({dist(rng), dist(rng), dist(rng), dist(rng)});
        auto s0 = random_state(rng, 4);
        s0.g0 = 0.0;
        s0.a.normalize();
        CHECK(full_channel_consistency(s0, profile, params, 3.0) <= 1e-10);
    }
}
