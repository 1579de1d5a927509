#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sqzcool/errors.hpp"
#include "sqzcool/frame.hpp"
#include "sqzcool/optimal.hpp"
#include "sqzcool/spectra.hpp"
#include "support.hpp"

using namespace sqzcool;

TEST_SUITE("optimal") {

TEST_CASE("internal optimum at the reference point") {
    const InternalOptimum o = internal_optimum(1.0, 1.0, 1.0);
    CHECK(o.chi_opt == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(o.phi_opt == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK(o.r_opt == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(o.below_threshold);

    const InternalOptimum rs = internal_optimum(1e-8, 1.0, 1.0);
    CHECK(rs.chi_opt < 1e-7);
    CHECK(internal_optimum(1.0, 0.2, 1.0).below_threshold == false);
}

TEST_CASE("nu(-omega_m) vanishes at the optimum") {
    oracle::Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
        LinearizedParams p;
        p.omega_m = rng.log_uniform(0.1, 10.0);
        p.kappa_a = rng.log_uniform(0.01, 100.0);
        p.delta_a = rng.uniform(-50.0, 50.0);
        p = at_internal_optimum(p);
        const cplx nu = nu_zeta(p, -p.omega_m).first;
        REQUIRE(std::abs(nu) <= 1e-14 * (1.0 + p.chi + p.kappa_a + std::abs(p.delta_a)) * 4);
        REQUIRE(p.phi >= 0.0);
        REQUIRE(p.phi < std::numbers::pi);
    }
}

TEST_CASE("injected optimum at the reference point") {
    const InjectedOptimum o = injected_optimum(1.0, 1.0, 1.0);
    CHECK(o.n_s_opt == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(o.r_s_opt == doctest::Approx(std::sqrt(5.0) - 2.0).epsilon(1e-14));
    CHECK(external_squeezing_photons(o.r_s_opt) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK_THROWS_AS(injected_optimum(1.0, 0.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(injected_optimum(1.0, -1.0, 1.0), InvalidParameter);
    CHECK(injected_optimum(1e-8, 1.0, 1.0).n_s_opt < 1e-15);
}

TEST_CASE("injected Stokes zero and photon consistency") {
    oracle::Rng rng(4);
    for (int i = 0; i < 2000; ++i) {
        InjectedModelParams q;
        q.omega_m = 1.0;
        q.kappa_a = rng.log_uniform(0.01, 100.0);
        q.delta_a_s = rng.log_uniform(0.01, 100.0);
        q = at_injected_optimum(q);
        const double s = spectrum_injected(q, -1.0);
        const double scale = spectrum_injected(q, 1.0) + 2.0 / q.kappa_a;
        REQUIRE(s <= 1e-12 * scale);
        const InjectedOptimum o = injected_optimum(q.kappa_a, q.delta_a_s, 1.0);
        REQUIRE(external_squeezing_photons(o.r_s_opt) == doctest::Approx(o.n_s_opt).epsilon(1e-10));
    }
}

TEST_CASE("rates at the optimum") {
    LinearizedParams p;
    p.gamma = 0.25e-6;
    p.n_T = 1000.0;
    p.kappa_a = 1.0;
    p.delta_a = 1.0;
    p.G_a = 0.1;
    CHECK(rates_at_optimum(p).gamma_opt == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(rates_at_optimum(p).a_plus == 0.0);

    const auto q = InjectedModelParams::with_photons(1.0, 0.25e-6, 1000.0, 1.0, 1.0, 0.1, 0.25, 0.0);
    CHECK(rates_at_optimum(q).gamma_opt == doctest::Approx(0.016).epsilon(1e-14));

    // Closed forms agree with the full spectra evaluated at the optimum.
    oracle::Rng rng(6);
    for (int i = 0; i < 200; ++i) {
        LinearizedParams r = oracle::random_reduced(rng);
        r.delta_a = rng.uniform(0.6, 5.0);
        r = at_internal_optimum(r);
        CHECK(rates_at_optimum(r).a_minus == doctest::Approx(cooling_perturbative(r, false).a_minus).epsilon(1e-10));
        // Same anti-Stokes rate as the unsqueezed cavity.
        LinearizedParams plain = r;
        plain.chi = 0.0;
        CHECK(rates_at_optimum(r).a_minus == doctest::Approx(cooling_perturbative(plain, false).a_minus).epsilon(1e-10));

        InjectedModelParams s;
        s.gamma = r.gamma;
        s.kappa_a = r.kappa_a;
        s.delta_a_s = r.delta_a;
        s.G_a_s = r.G_a;
        s = at_injected_optimum(s);
        CHECK(rates_at_optimum(s).a_minus == doctest::Approx(cooling_perturbative(s).a_minus).epsilon(1e-10));
    }
    p.G_a = 1e-9;
    CHECK(rates_at_optimum(p).gamma_opt < 1e-17);
}

TEST_CASE("equal-coupling detunings") {
    CHECK(equal_coupling_detunings(1.0, 1.0).delta_a == doctest::Approx(1.5));
    CHECK(equal_coupling_detunings(1.0, 1.0).delta_a_s == doctest::Approx(1.0));
    CHECK(equal_coupling_detunings(10.0, 1.0).delta_a == doctest::Approx(51.0));
    CHECK(equal_coupling_detunings(1e-9, 1.0).delta_a == doctest::Approx(1.0));
    CHECK_THROWS_AS(equal_coupling_detunings(1.0, 0.0), InvalidParameter);
}

}
