#pragma once

// Test-side oracles, kept independent of the library's own algorithms.

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "sqzcool/core_model.hpp"

namespace oracle {

using cplx = std::complex<double>;

inline double lorentzian(double kappa, double x) { return 2.0 * kappa / (kappa * kappa + x * x); }

/// Dense vec-form Lyapunov solve: (I (x) A + A (x) I) vec(V) = -vec(D).
inline Eigen::MatrixXd lyapunov_kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& D) {
    const Eigen::Index n = A.rows();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(D.data(), n * n);
    // Column-major vec: vec(A V) = (I (x) A) vec V, vec(V A^T) = (A (x) I) vec V.
    Eigen::MatrixXd K2(n * n, n * n);
    K2.setZero();
    for (Eigen::Index c = 0; c < n; ++c) K2.block(c * n, c * n, n, n) += A;
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index k = 0; k < n; ++k) K2.block(c * n, k * n, n, n) += A(c, k) * I;
    Eigen::VectorXd v = K2.fullPivLu().solve(-d);
    return Eigen::Map<Eigen::MatrixXd>(v.data(), n, n);
}

/// Phonon number of the two-mode reduced model from the complex-amplitude
/// covariance C = <z z^dag>, z = (a, a^dag, b, b^dag).
inline double phonons_complex_basis(double k, double d, double G, double chi, double phi, double gamma,
                                    double nT, double w = 1.0) {
    const cplx e = std::polar(chi, 2.0 * phi);
    const cplx I(0.0, 1.0);
    Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
    M(0, 0) = -(k + I * d); M(0, 1) = e; M(0, 2) = I * G; M(0, 3) = I * G;
    M(1, 1) = -(k - I * d); M(1, 0) = std::conj(e); M(1, 2) = -I * G; M(1, 3) = -I * G;
    M(2, 2) = -(gamma / 2 + I * w); M(2, 0) = I * G; M(2, 1) = I * G;
    M(3, 3) = -(gamma / 2 - I * w); M(3, 0) = -I * G; M(3, 1) = -I * G;
    Eigen::Matrix4cd N = Eigen::Matrix4cd::Zero();
    N(0, 0) = 2 * k; N(2, 2) = gamma * (nT + 1); N(3, 3) = gamma * nT;
    // Solve M C + C M^dag = -N in vec form.
    Eigen::Matrix<cplx, 16, 16> K = Eigen::Matrix<cplx, 16, 16>::Zero();
    const Eigen::Matrix4cd Id = Eigen::Matrix4cd::Identity();
    const Eigen::Matrix4cd Mc = M.conjugate();
    for (int c = 0; c < 4; ++c) K.block<4, 4>(c * 4, c * 4) += M;
    for (int c = 0; c < 4; ++c)
        for (int kk = 0; kk < 4; ++kk) K.block<4, 4>(c * 4, kk * 4) += Mc(c, kk) * Id;
    Eigen::Matrix<cplx, 16, 1> rhs;
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 4; ++r) rhs(c * 4 + r) = -N(r, c);
    const Eigen::Matrix<cplx, 16, 1> v = K.fullPivLu().solve(rhs);
    return v(3 * 4 + 3).real();
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
};

/// Random stable-looking reduced-model point (weak coupling, R < 0.9).
inline sqzcool::LinearizedParams random_reduced(Rng& r) {
    sqzcool::LinearizedParams p;
    p.omega_m = 1.0;
    p.gamma = r.log_uniform(1e-6, 1e-2);
    p.n_T = r.log_uniform(0.1, 1e3);
    p.kappa_a = r.log_uniform(0.1, 10.0);
    p.delta_a = r.uniform(-3.0, 3.0);
    p.G_a = r.uniform(0.0, 0.1) * std::min(1.0, p.kappa_a);
    p.chi = r.uniform(0.0, 0.9) * std::hypot(p.kappa_a, p.delta_a);
    p.phi = r.uniform(0.0, 3.14159265358979);
    return p;
}

}  // namespace oracle
