#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sqzcool/core_model.hpp"
#include "sqzcool/errors.hpp"
#include "sqzcool/lyapunov.hpp"
#include "support.hpp"

using namespace sqzcool;

TEST_SUITE("lyapunov") {

TEST_CASE("Schur solver agrees with the dense vec-form solve") {
    oracle::Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const int n = 2 * static_cast<int>(rng.uniform(1.0, 4.0));
        Eigen::MatrixXd A = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return rng.uniform(-1.0, 1.0); });
        // Shift until Hurwitz.
        A -= (max_real_eigenvalue(A) + rng.uniform(0.1, 1.0)) * Eigen::MatrixXd::Identity(n, n);
        Eigen::MatrixXd B = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return rng.uniform(-1.0, 1.0); });
        const Eigen::MatrixXd D = B * B.transpose();
        const Eigen::MatrixXd V = solve_lyapunov(A, D);
        const Eigen::MatrixXd W = oracle::lyapunov_kron(A, D);
        CHECK((V - W).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + W.cwiseAbs().maxCoeff()));
        CHECK((V - V.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("thermal oscillator relaxes to n_T") {
    LinearizedParams p;
    p.gamma = 1e-3;
    p.n_T = 37.0;
    p.kappa_a = 1.0;
    const SteadyCovariance cov = steady_covariance(build_internal_system(p, false));
    CHECK(phonon_number(cov) == doctest::Approx(37.0).epsilon(1e-10));
    CHECK(mode_occupation(cov, "a") == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("phonon number matches the complex-amplitude oracle") {
    // Frozen from an independent scipy solve in the (a, a^dag, b, b^dag) basis.
    LinearizedParams p;
    p.gamma = 0.25e-6;
    p.n_T = 1000.0;
    p.kappa_a = 1.0;
    p.delta_a = 1.0;
    p.G_a = 0.1;
    CHECK(phonon_number(steady_covariance(build_internal_system(p, false))) ==
          doctest::Approx(0.2708491172811979).epsilon(1e-10));
    p.chi = 1.0;
    p.phi = std::numbers::pi / 2;
    CHECK(phonon_number(steady_covariance(build_internal_system(p, false))) ==
          doctest::Approx(0.01783447757472313).epsilon(1e-10));

    oracle::Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        const LinearizedParams q = oracle::random_reduced(rng);
        const LinearSystem s = build_internal_system(q, false);
        if (max_real_eigenvalue(s.drift) > -1e-6) continue;
        const double want =
            oracle::phonons_complex_basis(q.kappa_a, q.delta_a, q.G_a, q.chi, q.phi, q.gamma, q.n_T);
        CHECK(phonon_number(steady_covariance(s)) == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("unstable drift is rejected") {
    LinearizedParams p;
    p.gamma = 1e-3;
    p.kappa_a = 1.0;
    p.delta_a = 0.0;
    p.chi = 1.2;
    CHECK_THROWS_AS(steady_covariance(build_internal_system(p, false)), Unstable);
}

TEST_CASE("squeezed quadrature variance is 1/(1+R) on resonance") {
    for (double r : {0.1, 0.5, 0.9}) {
        LinearizedParams p;
        p.gamma = 1e-3;
        p.kappa_a = 1.3;
        p.chi = r * p.kappa_a;
        p.phi = std::numbers::pi / 2;
        const Eigen::Matrix2d V = steady_covariance(build_internal_system(p, false)).mode_block("a");
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(V);
        CHECK(es.eigenvalues()(0) == doctest::Approx(1.0 / (1.0 + r)).epsilon(1e-12));
        CHECK(es.eigenvalues()(1) == doctest::Approx(1.0 / (1.0 - r)).epsilon(1e-12));
    }
}

TEST_CASE("numeric spectrum of a free cavity is a Lorentzian at delta") {
    LinearizedParams p;
    p.gamma = 1e-3;
    p.kappa_a = 0.4;
    p.delta_a = 1.7;
    const LinearSystem s = build_internal_system(p, false);
    const std::vector<double> w = {-2.0, 0.0, 1.7, 3.0};
    const auto sp = numeric_spectrum(s, QuadraturePair::auto_spectrum(s, "a"), w, SpectrumKind::InternalSa);
    for (std::size_t i = 0; i < w.size(); ++i) {
        CHECK(sp.values[i] == doctest::Approx(oracle::lorentzian(0.4, 1.7 - w[i])).epsilon(1e-12));
    }
}

}
