#pragma once

// Squeezed-frame map between the reduced internal-OPO model and a standard
// cavity driven by squeezed vacuum.
//
// The rotated operator is a_s = e^{i phi'} [cosh(s) a + sinh(s) e^{2 i (psi - phi')} a^dag]
// with psi = phi + phi' + pi/4 and phi' chosen so that the mechanical
// coupling stays real. Its input noise has <a_in a_in> = m_s e^{2 i psi}, so
// in the injected-model convention <a_in a_in> = m_s e^{-2 i phi_s} the input
// phase is phi_s = -psi (mod pi).

#include "sqzcool/core_model.hpp"

namespace sqzcool {

struct SqueezedFrameParams {
    double s = 0.0;
    /// Input-field phase in the injected-model convention, in [0, pi).
    double phi_s = 0.0;
    /// Frame phase psi = phi + phi' + pi/4, in [0, pi).
    double frame_phase = 0.0;
    double phi_prime = 0.0;
    double n_s = 0.0;
    double m_s = 0.0;
    double delta_a_s = 0.0;
    double G_a_s = 0.0;
};

/// Frame parameters for the reduced model. Requires chi < |delta_a|; throws
/// NotEquivalentRegime otherwise. chi = 0 gives the identity map.
SqueezedFrameParams squeezed_frame(const LinearizedParams& p);

InjectedModelParams map_internal_to_injected(const LinearizedParams& p);

/// Inverse map. Mechanical parameters and kappa_a are copied; pump-mode
/// fields of the result are zero.
LinearizedParams map_injected_to_internal(const InjectedModelParams& q);

struct EquivalenceReport {
    double n_internal = 0.0;
    double n_injected = 0.0;
    double relative_difference = 0.0;
    double tol = 0.0;
    bool pass = false;
};

/// Lyapunov phonon numbers of the reduced internal model and its mapped
/// injected model. Throws NotEquivalentRegime or Unstable.
EquivalenceReport equivalence_certificate(const LinearizedParams& p, double tol);

/// R = chi / sqrt(kappa_a^2 + delta_a^2); throws InvalidParameter when R >= 1.
double internal_squeezing_ratio(const LinearizedParams& p);

/// Photons n_s = 4 R_s^2 / (R_s^2 - 1)^2 delivered by an external resonant
/// OPO with R_s = chi_s / kappa_s in [0, 1).
double external_squeezing_photons(double r_s);

/// Inverse of external_squeezing_photons: R_s = (sqrt(1 + n_s) - 1) / sqrt(n_s).
double external_squeezing_ratio(double n_s);

}  // namespace sqzcool
