#pragma once

// Parameter types and linear drift/diffusion assembly for the three model
// variants:
//   - reduced internal OPO (cavity mode a + mechanics b),
//   - full internal OPO including the pump mode c,
//   - standard cavity driven by an injected squeezed field.
//
// All rates and frequencies are in units of the mechanical frequency.
// Quadratures are X = o + o^dag, Y = -i (o - o^dag); the stationary
// covariance V_ij = <R_i R_j + R_j R_i>/2 of an isolated vacuum mode is 1.

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sqzcool {

using cplx = std::complex<double>;

/// Single-photon-level parameters of the driven two-mode OPO with a
/// mechanical resonator.
struct FullModelParams {
    double omega_m = 1.0;
    double gamma = 0.0;
    double n_T = 0.0;
    double kappa_a = 0.0;
    double kappa_c = 0.0;
    double delta_a_bar = 0.0;
    double delta_c_bar = 0.0;
    double g_a = 0.0;
    double g_c = 0.0;
    double chi_0 = 0.0;
    cplx drive_a{0.0, 0.0};
    cplx drive_c{0.0, 0.0};

    /// Throws InvalidParameter on non-finite or out-of-range values.
    void validate() const;
};

/// Effective couplings after linearization. G_a, G_c, chi and epsilon are
/// real and non-negative; the pump phase is carried by phi.
struct LinearizedParams {
    double omega_m = 1.0;
    double gamma = 0.0;
    double n_T = 0.0;
    double kappa_a = 0.0;
    double kappa_c = 0.0;
    double delta_a = 0.0;
    double delta_c = 0.0;
    double G_a = 0.0;
    double G_c = 0.0;
    double chi = 0.0;
    double epsilon = 0.0;
    double phi = 0.0;

    void validate() const;
    /// R = chi / sqrt(kappa_a^2 + delta_a^2); R = 1 is the OPO threshold.
    double squeezing_ratio() const;
};

/// Standard optomechanical cavity driven by broadband squeezed vacuum with
/// <a_in^dag a_in> = n_s and <a_in a_in> = m_s exp(-2 i phi_s).
struct InjectedModelParams {
    double omega_m = 1.0;
    double gamma = 0.0;
    double n_T = 0.0;
    double kappa_a = 0.0;
    double delta_a_s = 0.0;
    double G_a_s = 0.0;
    double n_s = 0.0;
    double m_s = 0.0;
    double phi_s = 0.0;

    /// Fills m_s = sqrt(n_s (n_s + 1)).
    static InjectedModelParams with_photons(double omega_m, double gamma, double n_T,
                                            double kappa_a, double delta_a_s,
                                            double G_a_s, double n_s, double phi_s);
    void validate() const;
};

enum class Quadrature { X, Y };

struct QuadratureLabel {
    std::string mode;
    Quadrature quadrature;
    bool operator==(const QuadratureLabel&) const = default;
};

/// dR = A R dt + dW with <dW dW^T>_sym = D dt.
struct LinearSystem {
    Eigen::MatrixXd drift;
    Eigen::MatrixXd diffusion;
    std::vector<QuadratureLabel> ordering;

    std::size_t dimension() const { return ordering.size(); }
    std::size_t mode_count() const { return ordering.size() / 2; }
    /// Index of the X quadrature of `mode`, if present.
    std::optional<std::size_t> mode_offset(const std::string& mode) const;
    std::size_t require_mode(const std::string& mode) const;
};

struct StabilityReport {
    bool stable = false;
    double max_real_eigenvalue = 0.0;
    double opo_threshold_ratio = 0.0;
};

/// Reduced model (modes a, b) when include_pump is false, full model
/// (modes a, c, b) otherwise.
LinearSystem build_internal_system(const LinearizedParams& p, bool include_pump);

/// Squeezed-input model (modes a, b).
LinearSystem build_injected_system(const InjectedModelParams& p);

double max_real_eigenvalue(const Eigen::MatrixXd& drift);

StabilityReport stability(const LinearSystem& sys, const LinearizedParams& p);

/// Mode-a parameters for the three-mode model chosen so that adiabatic
/// elimination of the pump reproduces the (kappa_a, delta_a) of `p`:
///   kappa_a -> kappa_a - kappa_c eps^2 / (kappa_c^2 + delta_c^2)
///   delta_a -> delta_a + delta_c eps^2 / (kappa_c^2 + delta_c^2)
LinearizedParams renormalize_for_pump(const LinearizedParams& p);

/// Writes the 2x2 real block coupling (o_row) to (o_col) for the complex
/// equation  d o_row/dt = ... + m o_col + n o_col^dag.
void add_mode_coupling(Eigen::MatrixXd& drift, std::size_t row_offset, std::size_t col_offset,
                       cplx m, cplx n);

}  // namespace sqzcool
