#include "sqzcool/lyapunov.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "sqzcool/errors.hpp"

namespace sqzcool {

namespace {

using CMatrix = Eigen::MatrixXcd;

// Solves T Y + Y T^H = C for upper-triangular T, sweeping from the bottom
// right corner.
CMatrix solve_triangular_lyapunov(const CMatrix& t, const CMatrix& c) {
    const Eigen::Index n = t.rows();
    CMatrix y = CMatrix::Zero(n, n);
    for (Eigen::Index j = n - 1; j >= 0; --j) {
        for (Eigen::Index i = n - 1; i >= 0; --i) {
            cplx acc = c(i, j);
            for (Eigen::Index k = i + 1; k < n; ++k) acc -= t(i, k) * y(k, j);
            for (Eigen::Index k = j + 1; k < n; ++k) acc -= y(i, k) * std::conj(t(j, k));
            y(i, j) = acc / (t(i, i) + std::conj(t(j, j)));
        }
    }
    return y;
}

Eigen::MatrixXd symplectic_form(Eigen::Index n) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        j(k, k + 1) = 1.0;
        j(k + 1, k) = -1.0;
    }
    return j;
}

void require_stable(const Eigen::MatrixXd& drift) {
    const double lam = max_real_eigenvalue(drift);
    if (!(lam < kStabilityMargin)) {
        std::ostringstream os;
        os << "drift matrix is not stable (max Re eigenvalue " << lam << ")";
        throw Unstable(os.str(), lam);
    }
}

}  // namespace

Eigen::Matrix2d SteadyCovariance::mode_block(const std::string& mode) const {
    for (std::size_t i = 0; i < ordering.size(); ++i) {
        if (ordering[i].mode == mode && ordering[i].quadrature == Quadrature::X) {
            const auto k = static_cast<Eigen::Index>(i);
            return matrix.block<2, 2>(k, k);
        }
    }
    throw InvalidParameter("covariance has no mode '" + mode + "'");
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d) {
    Eigen::ComplexSchur<CMatrix> schur(a.cast<cplx>());
    if (schur.info() != Eigen::Success) throw IllConditioned("Schur decomposition failed");
    const CMatrix& u = schur.matrixU();
    const CMatrix& t = schur.matrixT();

    auto solve = [&](const Eigen::MatrixXd& rhs) -> Eigen::MatrixXd {
        const CMatrix c = -(u.adjoint() * rhs.cast<cplx>() * u);
        const CMatrix y = solve_triangular_lyapunov(t, c);
        Eigen::MatrixXd v = (u * y * u.adjoint()).real();
        return 0.5 * (v + v.transpose());
    };

    Eigen::MatrixXd v = solve(d);
    // One refinement step: A dV + dV A^T = -(A V + V A^T + D).
    const Eigen::MatrixXd r = a * v + v * a.transpose() + d;
    v += solve(r);
    return v;
}

SteadyCovariance steady_covariance(const LinearSystem& sys) {
    require_stable(sys.drift);
    SteadyCovariance cov;
    cov.ordering = sys.ordering;
    cov.matrix = solve_lyapunov(sys.drift, sys.diffusion);
    const Eigen::MatrixXd r = sys.drift * cov.matrix + cov.matrix * sys.drift.transpose() + sys.diffusion;
    cov.residual = r.cwiseAbs().maxCoeff();
    const double dmax = sys.diffusion.cwiseAbs().maxCoeff();
    if (!cov.matrix.allFinite() || cov.residual > 1e-10 * dmax) {
        std::ostringstream os;
        os << "Lyapunov residual " << cov.residual << " exceeds 1e-10 * max|D| = " << 1e-10 * dmax;
        throw IllConditioned(os.str());
    }
    return cov;
}

double mode_occupation(const SteadyCovariance& cov, const std::string& mode) {
    const Eigen::Matrix2d b = cov.mode_block(mode);
    return (b(0, 0) + b(1, 1) - 2.0) / 4.0;
}

double phonon_number(const SteadyCovariance& cov) { return mode_occupation(cov, "b"); }

Eigen::VectorXd QuadraturePair::rotated(const LinearSystem& sys, const std::string& mode,
                                        double theta) {
    const auto off = static_cast<Eigen::Index>(sys.require_mode(mode));
    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.dimension()));
    // e^{-i t} o + e^{i t} o^dag = cos(t) X + sin(t) Y
    w[off] = std::cos(theta);
    w[off + 1] = std::sin(theta);
    return w;
}

QuadraturePair QuadraturePair::auto_spectrum(const LinearSystem& sys, const std::string& mode,
                                             double theta) {
    Eigen::VectorXd w = rotated(sys, mode, theta);
    return {w, w};
}

SpectrumResult numeric_spectrum(const LinearSystem& sys, const QuadraturePair& which,
                                const std::vector<double>& grid, SpectrumKind kind) {
    require_stable(sys.drift);
    const Eigen::Index n = sys.drift.rows();
    if (which.left.size() != n || which.right.size() != n) {
        throw InvalidParameter("quadrature weights do not match the system dimension");
    }
    const Eigen::MatrixXd j = symplectic_form(n);
    const CMatrix q = sys.diffusion.cast<cplx>() -
                      cplx(0.0, 1.0) * (sys.drift * j + j * sys.drift.transpose()).cast<cplx>();
    const CMatrix a = sys.drift.cast<cplx>();
    const CMatrix id = CMatrix::Identity(n, n);
    const Eigen::VectorXcd u = which.left.cast<cplx>();
    const Eigen::VectorXcd v = which.right.cast<cplx>();

    SpectrumResult out;
    out.kind = kind;
    out.omega_grid = grid;
    out.values.reserve(grid.size());
    for (double w : grid) {
        const cplx iw(0.0, w);
        const Eigen::PartialPivLU<CMatrix> hp(-iw * id - a);
        const Eigen::PartialPivLU<CMatrix> hm(iw * id - a);
        // u^T H(w) Q H(-w)^T v = (H(w)^T u)^T Q (H(-w)^T v)
        const CMatrix hpt = hp.solve(id).transpose();
        const CMatrix hmt = hm.solve(id).transpose();
        const cplx uv = (hpt * u).transpose() * q * (hmt * v);
        const cplx vu = (hpt * v).transpose() * q * (hmt * u);
        out.values.push_back(0.5 * (uv + vu).real());
    }
    return out;
}

}  // namespace sqzcool
