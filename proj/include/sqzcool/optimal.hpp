#pragma once

#include "sqzcool/core_model.hpp"
#include "sqzcool/spectra.hpp"

namespace sqzcool {

/// Stokes-suppression optimum of the internal OPO.
struct InternalOptimum {
    double phi_opt = 0.0;  ///< principal value in [0, pi)
    double chi_opt = 0.0;
    double r_opt = 0.0;
    /// False when R_opt >= 1, i.e. the optimum lies beyond threshold.
    bool below_threshold = true;
};

/// Stokes-suppression optimum of the injected-squeezing model.
struct InjectedOptimum {
    double phi_s_opt = 0.0;  ///< principal value in [0, pi)
    double n_s_opt = 0.0;
    double r_s_opt = 0.0;
};

/// e^{2 i phi} = -(kappa + i (delta - w_m)) / chi_opt,
/// chi_opt = sqrt(kappa^2 + (delta - w_m)^2), R_opt = chi_opt / sqrt(kappa^2 + delta^2).
InternalOptimum internal_optimum(double kappa_a, double delta_a, double omega_m);

/// n_s = (kappa^2 + (delta_s - w_m)^2) / (4 delta_s w_m), with the matching
/// phase and external-OPO ratio. Throws InvalidParameter for delta_s <= 0.
InjectedOptimum injected_optimum(double kappa_a, double delta_a_s, double omega_m);

/// Copies `p` with phi and chi set to the internal optimum.
LinearizedParams at_internal_optimum(LinearizedParams p);

/// Copies `q` with phi_s, n_s and m_s set to the injected optimum.
InjectedModelParams at_injected_optimum(InjectedModelParams q);

/// Closed-form rates at the suppression optimum (A_+ = 0):
///   internal: A_- = 2 kappa G^2 / (kappa^2 + (delta - w_m)^2)
///   injected: A_- = 2 kappa G_s^2 [1/(kappa^2 + (delta_s - w_m)^2) - 1/(kappa^2 + (delta_s + w_m)^2)]
CoolingResult rates_at_optimum(const LinearizedParams& p);
CoolingResult rates_at_optimum(const InjectedModelParams& q);

struct EqualCouplingDetunings {
    double delta_a_s = 0.0;
    double delta_a = 0.0;
};

/// Detunings at which both models are suppression-optimal with G_a = G_a^(s):
/// delta_s = w_m and delta = (kappa^2 + 2 w_m^2) / (2 w_m).
EqualCouplingDetunings equal_coupling_detunings(double kappa_a, double omega_m);

}  // namespace sqzcool
