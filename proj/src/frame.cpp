#include "sqzcool/frame.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sqzcool/errors.hpp"
#include "sqzcool/lyapunov.hpp"

namespace sqzcool {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_pi(double x) {
    double r = std::fmod(x, kPi);
    if (r < 0.0) r += kPi;
    if (r >= kPi) r -= kPi;
    return r;
}

}  // namespace

SqueezedFrameParams squeezed_frame(const LinearizedParams& p) {
    p.validate();
    const double delta = p.delta_a;
    if (!(p.chi < std::abs(delta))) {
        std::ostringstream os;
        os << "chi = " << p.chi << " >= |delta_a| = " << std::abs(delta)
           << ": parametric term cannot be removed by a squeezed frame";
        throw NotEquivalentRegime(os.str());
    }

    SqueezedFrameParams f;
    const double theta = 2.0 * p.phi + 0.5 * kPi;
    if (p.chi == 0.0) {
        f.frame_phase = wrap_pi(0.5 * theta);
        f.phi_s = wrap_pi(-f.frame_phase);
        f.delta_a_s = delta;
        f.G_a_s = p.G_a;
        return f;
    }

    // tanh(s) = (D - sqrt(D^2 - chi^2)) / chi, in the cancellation-free form.
    const double root = std::sqrt((std::abs(delta) - p.chi) * (std::abs(delta) + p.chi));
    const double t = p.chi / (std::abs(delta) + root);
    const double s = std::atanh(t);
    // For delta < 0 the signed root is -s; the sign is absorbed into the phase.
    const double theta_eff = delta < 0.0 ? theta + kPi : theta;

    const cplx u0 = std::cosh(s);
    const cplx v0 = std::sinh(s) * std::polar(1.0, theta_eff);
    const cplx diff = u0 - v0;
    const double alpha = -std::arg(diff);

    f.s = s;
    f.phi_prime = alpha;
    f.frame_phase = wrap_pi(alpha + 0.5 * theta_eff);
    f.phi_s = wrap_pi(-f.frame_phase);
    f.n_s = std::sinh(s) * std::sinh(s);
    f.m_s = std::sqrt(f.n_s * (f.n_s + 1.0));
    f.delta_a_s = delta / std::cosh(2.0 * s);
    f.G_a_s = p.G_a * std::abs(diff);
    return f;
}

InjectedModelParams map_internal_to_injected(const LinearizedParams& p) {
    const SqueezedFrameParams f = squeezed_frame(p);
    InjectedModelParams q = InjectedModelParams::with_photons(
        p.omega_m, p.gamma, p.n_T, p.kappa_a, f.delta_a_s, f.G_a_s, f.n_s, f.phi_s);
    return q;
}

LinearizedParams map_injected_to_internal(const InjectedModelParams& q) {
    q.validate();
    const double s = std::asinh(std::sqrt(q.n_s));
    const double psi = -q.phi_s;
    const cplx w = std::cosh(s) + std::sinh(s) * std::polar(1.0, 2.0 * psi);
    const double phi_prime = std::arg(w);
    double theta = 2.0 * psi - 2.0 * phi_prime;
    if (q.delta_a_s < 0.0) theta -= kPi;

    LinearizedParams p;
    p.omega_m = q.omega_m;
    p.gamma = q.gamma;
    p.n_T = q.n_T;
    p.kappa_a = q.kappa_a;
    p.delta_a = q.delta_a_s * std::cosh(2.0 * s);
    p.chi = std::abs(p.delta_a) * std::tanh(2.0 * s);
    p.phi = wrap_pi(0.5 * (theta - 0.5 * kPi));
    p.G_a = q.G_a_s * std::abs(w);
    return p;
}

EquivalenceReport equivalence_certificate(const LinearizedParams& p, double tol) {
    const InjectedModelParams q = map_internal_to_injected(p);
    EquivalenceReport r;
    r.tol = tol;
    r.n_internal = phonon_number(steady_covariance(build_internal_system(p, false)));
    r.n_injected = phonon_number(steady_covariance(build_injected_system(q)));
    const double scale = std::max(std::abs(r.n_internal), 1e-300);
    r.relative_difference = std::abs(r.n_internal - r.n_injected) / scale;
    r.pass = r.relative_difference <= tol;
    return r;
}

double internal_squeezing_ratio(const LinearizedParams& p) {
    const double r = p.squeezing_ratio();
    if (!(r >= 0.0 && r < 1.0)) {
        std::ostringstream os;
        os << "squeezing ratio R = " << r << " is at or above the OPO threshold";
        throw InvalidParameter(os.str());
    }
    return r;
}

double external_squeezing_photons(double r_s) {
    if (!(r_s >= 0.0 && r_s < 1.0)) {
        throw InvalidParameter("external squeezing ratio must lie in [0, 1)");
    }
    const double d = r_s * r_s - 1.0;
    return 4.0 * r_s * r_s / (d * d);
}

double external_squeezing_ratio(double n_s) {
    if (!(n_s >= 0.0) || !std::isfinite(n_s)) throw InvalidParameter("n_s must be finite and >= 0");
    if (n_s == 0.0) return 0.0;
    return (std::sqrt(1.0 + n_s) - 1.0) / std::sqrt(n_s);
}

}  // namespace sqzcool
