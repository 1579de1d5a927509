#pragma once

// Closed-form force spectra and perturbative cooling rates.
//
// Spectra are coupling-free: S(w) = int dt e^{i w t} <X(t) X(0)>, and the
// scattering rates carry the coupling, A_+- = G^2 S(-+omega_m).

#include <optional>
#include <utility>
#include <vector>

#include "sqzcool/core_model.hpp"

namespace sqzcool {

enum class SpectrumKind { InternalSa, InjectedSa, PumpSc, CrossSac };

const char* to_string(SpectrumKind k);

struct SpectrumResult {
    std::vector<double> omega_grid;
    std::vector<double> values;
    SpectrumKind kind = SpectrumKind::InternalSa;
};

enum class CoolingMethod { Perturbative, Lyapunov };

const char* to_string(CoolingMethod m);

/// Rates, optical damping and occupations. n_o and n_st are withheld
/// (heating == true) when the perturbative anti-Stokes rate does not exceed
/// the Stokes rate.
struct CoolingResult {
    double a_plus = 0.0;
    double a_minus = 0.0;
    double gamma_opt = 0.0;
    std::optional<double> n_o;
    std::optional<double> n_st;
    bool heating = false;
    CoolingMethod method = CoolingMethod::Perturbative;
};

/// nu(w) = kappa_a + i (delta_a + w) + chi e^{2 i phi},
/// zeta(w) = (kappa_a - i w)^2 + delta_a^2 - chi^2.
std::pair<cplx, cplx> nu_zeta(const LinearizedParams& p, double omega);

/// 2 kappa_a |nu/zeta|^2. Throws Degenerate when |zeta| < 1e-300.
double spectrum_internal(const LinearizedParams& p, double omega);

/// 2 kappa_a | sqrt(1+n_s) / (kappa_a + i (delta_s - w))
///           + sqrt(n_s) e^{2 i phi_s} / (kappa_a - i (delta_s + w)) |^2
double spectrum_injected(const InjectedModelParams& p, double omega);

/// 2 kappa_c / (kappa_c^2 + (delta_c - w)^2)
double spectrum_pump(const LinearizedParams& p, double omega);

/// First-order-in-epsilon cross spectrum between the mode-a amplitude
/// quadrature and the pump quadrature that couples to the mechanics. This
/// is half the symmetric cross-correlation, so it enters the rates with a
/// factor 2 G_a G_c.
double spectrum_cross(const LinearizedParams& p, double omega);

SpectrumResult spectrum_on_grid(SpectrumKind kind, const LinearizedParams& p,
                                const std::vector<double>& omega_grid);
SpectrumResult spectrum_on_grid(const InjectedModelParams& p, const std::vector<double>& omega_grid);

/// N_st = (gamma n_T + Gamma n_o) / (gamma + Gamma)
double stationary_occupation(double gamma, double n_T, double gamma_opt, double n_o);

/// Perturbative rates for the internal model, with the pump-mode and
/// cross-correlation terms when include_pump is set.
CoolingResult cooling_perturbative(const LinearizedParams& p, bool include_pump);

/// Perturbative rates for the squeezed-input model.
CoolingResult cooling_perturbative(const InjectedModelParams& p);

/// Fills Gamma, n_o and n_st from (A_+, A_-); flags heating when A_- <= A_+.
CoolingResult finish_rates(double a_plus, double a_minus, double gamma, double n_T);

}  // namespace sqzcool
