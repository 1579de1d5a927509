#include "doctest.h"

#include <cmath>

#include "sqzcool/core_model.hpp"
#include "sqzcool/errors.hpp"
#include "support.hpp"

using namespace sqzcool;

namespace {

LinearizedParams fig1() {
    LinearizedParams p;
    p.gamma = 0.25e-6;
    p.n_T = 1000.0;
    p.kappa_a = 1.0;
    p.delta_a = 1.0;
    p.G_a = 0.1;
    return p;
}

Eigen::MatrixXd symplectic(std::size_t modes) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (std::size_t m = 0; m < modes; ++m) {
        J(2 * m, 2 * m + 1) = 1.0;
        J(2 * m + 1, 2 * m) = -1.0;
    }
    return J;
}

}  // namespace

TEST_SUITE("core_model") {

TEST_CASE("mode ordering of the three variants") {
    LinearizedParams p = fig1();
    const LinearSystem r = build_internal_system(p, false);
    CHECK(r.dimension() == 4);
    CHECK(r.require_mode("a") == 0);
    CHECK(r.require_mode("b") == 2);
    CHECK_FALSE(r.mode_offset("c").has_value());

    p.kappa_c = 50.0;
    p.epsilon = 1.0;
    const LinearSystem f = build_internal_system(p, true);
    CHECK(f.dimension() == 6);
    CHECK(f.require_mode("c") == 2);
    CHECK(f.require_mode("b") == 4);
    CHECK_THROWS_AS(f.require_mode("d"), InvalidParameter);

    const auto q = InjectedModelParams::with_photons(1.0, 1e-6, 10.0, 1.0, 1.0, 0.1, 0.25, 0.3);
    CHECK(build_injected_system(q).dimension() == 4);
}

TEST_CASE("bare cavity drift eigenvalues are -kappa +- i delta") {
    LinearizedParams p = fig1();
    p.G_a = 0.0;
    p.delta_a = 2.5;
    p.kappa_a = 0.7;
    const LinearSystem s = build_internal_system(p, false);
    Eigen::EigenSolver<Eigen::Matrix2d> es(s.drift.block<2, 2>(0, 0));
    for (int i = 0; i < 2; ++i) {
        CHECK(es.eigenvalues()(i).real() == doctest::Approx(-0.7).epsilon(1e-14));
        CHECK(std::abs(es.eigenvalues()(i).imag()) == doctest::Approx(2.5).epsilon(1e-14));
    }
}

TEST_CASE("vacuum and thermal diffusion") {
    const LinearSystem s = build_internal_system(fig1(), false);
    CHECK(s.diffusion(0, 0) == doctest::Approx(2.0));
    CHECK(s.diffusion(1, 1) == doctest::Approx(2.0));
    CHECK(s.diffusion(2, 2) == doctest::Approx(0.25e-6 * 2001.0));
    CHECK(s.diffusion(0, 1) == 0.0);
}

TEST_CASE("OPO threshold sits at R = 1 for any detuning") {
    oracle::Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        LinearizedParams p = fig1();
        p.G_a = 0.0;
        p.kappa_a = rng.log_uniform(0.1, 10.0);
        p.delta_a = rng.uniform(-5.0, 5.0);
        p.phi = rng.uniform(0.0, 3.0);
        const double scale = std::hypot(p.kappa_a, p.delta_a);
        p.chi = 0.999 * scale;
        CHECK(stability(build_internal_system(p, false), p).stable);
        p.chi = 1.001 * scale;
        CHECK_FALSE(stability(build_internal_system(p, false), p).stable);
        CHECK(p.squeezing_ratio() == doctest::Approx(1.001));
    }
}

TEST_CASE("input noise stays positive for every variant") {
    // Q = D - i (A J + J A^T) must be positive semidefinite for a physical
    // set of Langevin equations.
    oracle::Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        LinearizedParams p = oracle::random_reduced(rng);
        p.kappa_c = rng.log_uniform(1.0, 100.0);
        p.delta_c = rng.uniform(-2.0, 2.0);
        p.epsilon = rng.uniform(0.0, 1.0);
        p.G_c = rng.uniform(0.0, 0.1);
        const auto q = InjectedModelParams::with_photons(1.0, p.gamma, p.n_T, p.kappa_a, p.delta_a, p.G_a,
                                                         rng.log_uniform(1e-3, 10.0), p.phi);
        for (const LinearSystem& s :
             {build_internal_system(p, false), build_internal_system(p, true), build_injected_system(q)}) {
            const Eigen::MatrixXd J = symplectic(s.mode_count());
            const Eigen::MatrixXcd Q = s.diffusion.cast<cplx>() -
                                       cplx(0.0, 1.0) * (s.drift * J + J * s.drift.transpose()).cast<cplx>();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Q);
            CHECK(es.eigenvalues().minCoeff() > -1e-12 * Q.cwiseAbs().maxCoeff());
        }
    }
}

TEST_CASE("pump renormalization") {
    LinearizedParams p = fig1();
    p.kappa_c = 500.0;
    p.delta_c = 1.0;
    p.epsilon = 10.0;
    const LinearizedParams r = renormalize_for_pump(p);
    CHECK(r.kappa_a == doctest::Approx(1.0 - 500.0 * 100.0 / 250001.0).epsilon(1e-14));
    CHECK(r.delta_a == doctest::Approx(1.0 + 100.0 / 250001.0).epsilon(1e-14));
    p.epsilon = 30.0;
    CHECK_THROWS_AS(renormalize_for_pump(p), InvalidParameter);
}

TEST_CASE("parameter validation") {
    LinearizedParams p = fig1();
    p.kappa_a = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    p = fig1();
    p.n_T = std::nan("");
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    p = fig1();
    p.chi = -0.1;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);

    auto q = InjectedModelParams::with_photons(1.0, 1e-6, 1.0, 1.0, 1.0, 0.1, 2.0, 0.0);
    CHECK(q.m_s == doctest::Approx(std::sqrt(6.0)));
    CHECK_NOTHROW(q.validate());
    q.m_s *= 1.01;
    CHECK_THROWS_AS(q.validate(), InvalidParameter);
}

}
