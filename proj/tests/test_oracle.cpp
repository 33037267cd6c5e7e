#include <doctest.h>

#include <cmath>

#include "subrad/dfs.hpp"
#include "subrad/evolution.hpp"
#include "subrad/oracle.hpp"

using namespace subrad;

TEST_CASE("ode oracle: harmonic and decoupled limits") {
    // gamma = 0, r = 1: c(t) = cos t
    const auto harmonic = oracle::solve_cplus_ode({0.0, 1.0}, 10.0, 1e-3);
    for (std::size_t i = 0; i < harmonic.samples.size(); i += 100) {
        const auto& s = harmonic.samples[i];
        CHECK(std::abs(s.value - std::cos(s.t)) <= 1e-8);
    }

    // r = 0: constant 1
    const auto flat = oracle::solve_cplus_ode({1.0, 0.0}, 10.0, 1e-3);
    for (const auto& s : flat.samples) CHECK(s.value == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_FALSE(oracle::solve_cplus_ode({1.0, 0.1}, 1.0, 0.1).step_size_ok);
    CHECK(oracle::solve_cplus_ode({1.0, 0.1}, 1.0, 1e-3).step_size_ok);
}

TEST_CASE("ode oracle tracks the closed form") {
    for (PropagatorParams p : {PropagatorParams{1.0, 0.1}, PropagatorParams{1.0, 0.5}}) {
        const auto res = oracle::solve_cplus_ode(p, 20.0, 1e-3);
        double max_err = 0.0;
        for (const auto& s : res.samples)
            max_err = std::max(max_err, std::abs(s.value - phi(s.t, p)));
        CHECK(max_err <= 1e-8);
    }
}

TEST_CASE("discretized bath: trivial and dark cases") {
    CouplingProfile profile({1.0, 1.0, 1.0});

    // no coupling: state is constant
    BathSpec off{0.0, 1.0, 0.0};
    auto bath0 = oracle::DiscretizedBath::build(off, 101, 5.0);
    SectorState s0(3);
    s0.a[0] = 1.0;
    const auto quiet = oracle::solve_discretized_bath(s0, profile, bath0, 2.0, 0.01);
    CHECK((quiet.qubit_amps.back() - s0.a).norm() <= 1e-12);

    // subradiant initial state stays out of the bath
    BathSpec bath_spec{0.01 / 3.0, 1.0, 0.0};  // r = 0.1 with alpha_T = sqrt(3)
    auto bath = oracle::DiscretizedBath::build(bath_spec, 1201, 20.0);
    const auto dark = subradiant_pair(profile, 0, 2);
    const auto res = oracle::solve_discretized_bath(dark, profile, bath, 5.0, 0.004);
    CHECK(res.max_bath_population <= 1e-6);
    CHECK(res.max_norm_drift <= 1e-8);
}

TEST_CASE("discretized bath: superradiant enhancement") {
    // collective decay rate of Q scales with alpha_T^2 = n; fit the rate from
    // two points in the exponential regime so the prefactor drops out
    BathSpec spec{0.005, 1.0, 0.0};
    const double t1 = 4.0, t2 = 12.0;

    auto fit_rate = [&](const CouplingProfile& prof, const SectorState& st) {
        auto bath = oracle::DiscretizedBath::build(spec, 2401, 25.0);
        const auto res = oracle::solve_discretized_bath(st, prof, bath, t2, 0.004, 1000);
        double q1 = 0.0, q2 = 0.0;
        for (std::size_t i = 0; i < res.times.size(); ++i) {
            if (std::abs(res.times[i] - t1) < 1e-9) q1 = res.qubit_amps[i].squaredNorm();
            if (std::abs(res.times[i] - t2) < 1e-9) q2 = res.qubit_amps[i].squaredNorm();
        }
        REQUIRE(q1 > 0.0);
        REQUIRE(q2 > 0.0);
        return (std::log(q1) - std::log(q2)) / (t2 - t1);
    };

    CouplingProfile trio({1.0, 1.0, 1.0});
    const double rate3 = fit_rate(trio, superradiant_state(trio));

    CouplingProfile solo({1.0, 0.0});
    SectorState lone(2);
    lone.a[0] = 1.0;
    const double rate1 = fit_rate(solo, lone);

    CHECK(rate3 / rate1 == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("discretized bath warns about recurrences") {
    BathSpec spec{0.01, 1.0, 0.0};
    auto coarse = oracle::DiscretizedBath::build(spec, 51, 5.0);  // T_rec ~ 31
    SectorState s0(2);
    s0.a[0] = 1.0;
    const auto res = oracle::solve_discretized_bath(s0, CouplingProfile({1.0, 1.0}),
                                                    coarse, 40.0, 0.01);
    REQUIRE(!res.warnings.empty());
}

TEST_CASE("brute negativity") {
    SectorState w(3);
    w.a.setConstant(1.0 / std::sqrt(3.0));
    CHECK(oracle::brute_negativity(density_matrix(w), {0}, 3) ==
          doctest::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-10));

    Eigen::MatrixXcd sep = Eigen::MatrixXcd::Zero(4, 4);
    sep(0, 0) = 0.5; sep(3, 3) = 0.5;
    CHECK(oracle::brute_negativity(sep, {1}, 2) == 0.0);
}
