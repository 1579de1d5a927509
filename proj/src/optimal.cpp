#include "sqzcool/optimal.hpp"

#include <cmath>
#include <numbers>

#include "sqzcool/errors.hpp"

namespace sqzcool {

namespace {

constexpr double kPi = std::numbers::pi;

double half_angle(cplx z) {
    double phi = 0.5 * std::arg(z);
    if (phi < 0.0) phi += kPi;
    if (phi >= kPi) phi -= kPi;
    return phi;
}

}  // namespace

InternalOptimum internal_optimum(double kappa_a, double delta_a, double omega_m) {
    InternalOptimum o;
    const cplx z(kappa_a, delta_a - omega_m);
    o.chi_opt = std::abs(z);
    o.phi_opt = half_angle(-z);
    o.r_opt = o.chi_opt / std::hypot(kappa_a, delta_a);
    o.below_threshold = o.r_opt < 1.0;
    return o;
}

InjectedOptimum injected_optimum(double kappa_a, double delta_a_s, double omega_m) {
    if (!(delta_a_s > 0.0) || !(omega_m > 0.0)) {
        throw InvalidParameter("injected optimum needs delta_a_s > 0 and omega_m > 0");
    }
    InjectedOptimum o;
    const double lm = kappa_a * kappa_a + (delta_a_s - omega_m) * (delta_a_s - omega_m);
    const double lp = kappa_a * kappa_a + (delta_a_s + omega_m) * (delta_a_s + omega_m);
    const cplx k(kappa_a, -delta_a_s);
    o.phi_s_opt = half_angle(-(k * k + omega_m * omega_m));
    o.n_s_opt = lm / (4.0 * delta_a_s * omega_m);
    o.r_s_opt = lm > 0.0 ? (std::sqrt(lp) - 2.0 * std::sqrt(delta_a_s * omega_m)) / std::sqrt(lm) : 0.0;
    return o;
}

LinearizedParams at_internal_optimum(LinearizedParams p) {
    const InternalOptimum o = internal_optimum(p.kappa_a, p.delta_a, p.omega_m);
    p.phi = o.phi_opt;
    p.chi = o.chi_opt;
    return p;
}

InjectedModelParams at_injected_optimum(InjectedModelParams q) {
    const InjectedOptimum o = injected_optimum(q.kappa_a, q.delta_a_s, q.omega_m);
    q.phi_s = o.phi_s_opt;
    q.n_s = o.n_s_opt;
    q.m_s = std::sqrt(o.n_s_opt * (o.n_s_opt + 1.0));
    return q;
}

CoolingResult rates_at_optimum(const LinearizedParams& p) {
    const double d = p.delta_a - p.omega_m;
    const double a_minus = 2.0 * p.kappa_a * p.G_a * p.G_a / (p.kappa_a * p.kappa_a + d * d);
    return finish_rates(0.0, a_minus, p.gamma, p.n_T);
}

CoolingResult rates_at_optimum(const InjectedModelParams& q) {
    const double k2 = q.kappa_a * q.kappa_a;
    const double dm = q.delta_a_s - q.omega_m;
    const double dp = q.delta_a_s + q.omega_m;
    const double a_minus = 2.0 * q.kappa_a * q.G_a_s * q.G_a_s * (1.0 / (k2 + dm * dm) - 1.0 / (k2 + dp * dp));
    return finish_rates(0.0, a_minus, q.gamma, q.n_T);
}

EqualCouplingDetunings equal_coupling_detunings(double kappa_a, double omega_m) {
    if (!(omega_m > 0.0)) throw InvalidParameter("omega_m must be > 0");
    return {omega_m, (kappa_a * kappa_a + 2.0 * omega_m * omega_m) / (2.0 * omega_m)};
}

}  // namespace sqzcool
