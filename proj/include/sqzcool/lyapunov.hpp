#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sqzcool/core_model.hpp"
#include "sqzcool/spectra.hpp"

namespace sqzcool {

/// Stationary symmetrized covariance of a LinearSystem.
struct SteadyCovariance {
    Eigen::MatrixXd matrix;
    std::vector<QuadratureLabel> ordering;
    /// max |A V + V A^T + D|
    double residual = 0.0;

    Eigen::Matrix2d mode_block(const std::string& mode) const;
};

/// Drift eigenvalues with real part above this are treated as unstable.
inline constexpr double kStabilityMargin = -1e-9;

/// Solves A V + V A^T + D = 0 by complex Schur reduction (Bartels-Stewart)
/// followed by one step of iterative refinement. Throws Unstable when the
/// drift is not Hurwitz (margin kStabilityMargin) and IllConditioned when the
/// residual exceeds 1e-10 max|D|.
SteadyCovariance steady_covariance(const LinearSystem& sys);

/// Solver without the stability gate or residual check. Used by tests and
/// by steady_covariance itself.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& drift, const Eigen::MatrixXd& diffusion);

/// Mean phonon number (V_XX + V_YY - 2) / 4 of mode "b".
double phonon_number(const SteadyCovariance& cov);

/// Occupation (V_XX + V_YY - 2) / 4 of an arbitrary mode.
double mode_occupation(const SteadyCovariance& cov, const std::string& mode);

/// Real weight vectors u, v selecting the quadratures u^T R and v^T R.
struct QuadraturePair {
    Eigen::VectorXd left;
    Eigen::VectorXd right;

    /// Rotated quadrature e^{-i theta} o + e^{i theta} o^dag of one mode.
    static Eigen::VectorXd rotated(const LinearSystem& sys, const std::string& mode, double theta);
    static QuadraturePair auto_spectrum(const LinearSystem& sys, const std::string& mode,
                                        double theta = 0.0);
};

/// Non-symmetrized stationary spectrum
///   S_uv(w) = Re[ (u^T S(w) v + v^T S(w) u) / 2 ],
///   S(w) = (-i w - A)^{-1} Q (i w - A)^{-T},
/// where Q = D + i K is the full input-noise correlation matrix, K being
/// fixed by commutator preservation of the drift. For u = v this is
/// int dt e^{i w t} <(u.R)(t) (u.R)(0)>. Throws Unstable.
SpectrumResult numeric_spectrum(const LinearSystem& sys, const QuadraturePair& which,
                                const std::vector<double>& omega_grid, SpectrumKind kind);

}  // namespace sqzcool
