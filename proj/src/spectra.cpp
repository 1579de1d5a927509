#include "sqzcool/spectra.hpp"

#include <cmath>

#include "sqzcool/errors.hpp"

namespace sqzcool {

namespace {
constexpr cplx kI{0.0, 1.0};

double lorentzian(double kappa, double detuning, double omega) {
    return 2.0 * kappa / (kappa * kappa + (detuning - omega) * (detuning - omega));
}
}  // namespace

const char* to_string(SpectrumKind k) {
    switch (k) {
        case SpectrumKind::InternalSa: return "internal_sa";
        case SpectrumKind::InjectedSa: return "injected_sa";
        case SpectrumKind::PumpSc: return "pump_sc";
        case SpectrumKind::CrossSac: return "cross_sac";
    }
    return "unknown";
}

const char* to_string(CoolingMethod m) {
    return m == CoolingMethod::Perturbative ? "perturbative" : "lyapunov";
}

std::pair<cplx, cplx> nu_zeta(const LinearizedParams& p, double omega) {
    const cplx nu = p.kappa_a + kI * (p.delta_a + omega) + p.chi * std::polar(1.0, 2.0 * p.phi);
    const cplx k = p.kappa_a - kI * omega;
    const cplx zeta = k * k + p.delta_a * p.delta_a - p.chi * p.chi;
    return {nu, zeta};
}

double spectrum_internal(const LinearizedParams& p, double omega) {
    const auto [nu, zeta] = nu_zeta(p, omega);
    if (std::abs(zeta) < 1e-300) throw Degenerate("zeta(omega) vanishes; spectrum is singular");
    return 2.0 * p.kappa_a * std::norm(nu / zeta);
}

double spectrum_injected(const InjectedModelParams& p, double omega) {
    const cplx stokes = std::sqrt(1.0 + p.n_s) / (p.kappa_a + kI * (p.delta_a_s - omega));
    const cplx anti = std::sqrt(p.n_s) * std::polar(1.0, 2.0 * p.phi_s) /
                      (p.kappa_a - kI * (p.delta_a_s + omega));
    return 2.0 * p.kappa_a * std::norm(stokes + anti);
}

double spectrum_pump(const LinearizedParams& p, double omega) {
    return lorentzian(p.kappa_c, p.delta_c, omega);
}

double spectrum_cross(const LinearizedParams& p, double omega) {
    if (p.epsilon == 0.0) return 0.0;
    const auto [nu, zeta] = nu_zeta(p, omega);
    const cplx pump_phase = std::polar(1.0, 2.0 * p.phi);
    const double lc = p.kappa_c * p.kappa_c + (p.delta_c - omega) * (p.delta_c - omega);
    const cplx bracket = (p.kappa_c / p.kappa_a) * zeta / lc -
                         (p.kappa_a - kI * (p.delta_a + omega)) / (p.kappa_c + kI * (p.delta_c - omega)) -
                         p.chi * pump_phase / (p.kappa_c - kI * (p.delta_c + omega));
    const double z2 = std::norm(zeta);
    if (z2 < 1e-300) throw Degenerate("zeta(omega) vanishes; cross spectrum is singular");
    return 2.0 * p.kappa_a * p.epsilon / z2 * std::real(nu * std::conj(pump_phase) * bracket);
}

SpectrumResult spectrum_on_grid(SpectrumKind kind, const LinearizedParams& p,
                                const std::vector<double>& grid) {
    SpectrumResult r;
    r.kind = kind;
    r.omega_grid = grid;
    r.values.reserve(grid.size());
    for (double w : grid) {
        switch (kind) {
            case SpectrumKind::InternalSa: r.values.push_back(spectrum_internal(p, w)); break;
            case SpectrumKind::PumpSc: r.values.push_back(spectrum_pump(p, w)); break;
            case SpectrumKind::CrossSac: r.values.push_back(spectrum_cross(p, w)); break;
            case SpectrumKind::InjectedSa:
                throw InvalidParameter("injected spectrum needs InjectedModelParams");
        }
    }
    return r;
}

SpectrumResult spectrum_on_grid(const InjectedModelParams& p, const std::vector<double>& grid) {
    SpectrumResult r;
    r.kind = SpectrumKind::InjectedSa;
    r.omega_grid = grid;
    r.values.reserve(grid.size());
    for (double w : grid) r.values.push_back(spectrum_injected(p, w));
    return r;
}

double stationary_occupation(double gamma, double n_T, double gamma_opt, double n_o) {
    return (gamma * n_T + gamma_opt * n_o) / (gamma + gamma_opt);
}

CoolingResult finish_rates(double a_plus, double a_minus, double gamma, double n_T) {
    CoolingResult r;
    r.method = CoolingMethod::Perturbative;
    r.a_plus = a_plus;
    r.a_minus = a_minus;
    r.gamma_opt = a_minus - a_plus;
    r.heating = !(a_minus > a_plus);
    if (!r.heating) {
        r.n_o = a_plus / r.gamma_opt;
        r.n_st = stationary_occupation(gamma, n_T, r.gamma_opt, *r.n_o);
    }
    return r;
}

CoolingResult cooling_perturbative(const LinearizedParams& p, bool include_pump) {
    p.validate();
    const double wm = p.omega_m;
    const double ga2 = p.G_a * p.G_a;
    double a_plus = ga2 * spectrum_internal(p, -wm);
    double a_minus = ga2 * spectrum_internal(p, wm);
    if (include_pump) {
        if (!(p.kappa_c > 0.0)) throw InvalidParameter("pump contribution needs kappa_c > 0");
        const double gc2 = p.G_c * p.G_c;
        const double cross = 2.0 * p.G_a * p.G_c;
        a_plus += gc2 * spectrum_pump(p, -wm) + cross * spectrum_cross(p, -wm);
        a_minus += gc2 * spectrum_pump(p, wm) + cross * spectrum_cross(p, wm);
    }
    return finish_rates(a_plus, a_minus, p.gamma, p.n_T);
}

CoolingResult cooling_perturbative(const InjectedModelParams& p) {
    p.validate();
    const double g2 = p.G_a_s * p.G_a_s;
    return finish_rates(g2 * spectrum_injected(p, -p.omega_m), g2 * spectrum_injected(p, p.omega_m),
                        p.gamma, p.n_T);
}

}  // namespace sqzcool
