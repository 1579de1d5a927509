#include "sqzcool/core_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sqzcool/errors.hpp"

namespace sqzcool {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw InvalidParameter(what);
}

bool finite(double x) { return std::isfinite(x); }
bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_positive(double x, const char* name) {
    if (!(finite(x) && x > 0.0)) {
        std::ostringstream os;
        os << name << " must be finite and > 0 (got " << x << ")";
        throw InvalidParameter(os.str());
    }
}

void require_nonnegative(double x, const char* name) {
    if (!(finite(x) && x >= 0.0)) {
        std::ostringstream os;
        os << name << " must be finite and >= 0 (got " << x << ")";
        throw InvalidParameter(os.str());
    }
}

void require_finite(double x, const char* name) {
    if (!finite(x)) {
        std::ostringstream os;
        os << name << " must be finite";
        throw InvalidParameter(os.str());
    }
}

void fill_mode_labels(std::vector<QuadratureLabel>& out, const std::string& mode) {
    out.push_back({mode, Quadrature::X});
    out.push_back({mode, Quadrature::Y});
}

// Phase-insensitive (vacuum or thermal) input on one mode.
void set_isotropic_noise(Eigen::MatrixXd& d, std::size_t offset, double value) {
    d(offset, offset) = value;
    d(offset + 1, offset + 1) = value;
}

}  // namespace

void FullModelParams::validate() const {
    require_positive(omega_m, "omega_m");
    require_positive(gamma, "gamma");
    require_nonnegative(n_T, "n_T");
    require_positive(kappa_a, "kappa_a");
    require_positive(kappa_c, "kappa_c");
    require_finite(delta_a_bar, "delta_a_bar");
    require_finite(delta_c_bar, "delta_c_bar");
    require_finite(g_a, "g_a");
    require_finite(g_c, "g_c");
    require_nonnegative(chi_0, "chi_0");
    require(finite(drive_a) && finite(drive_c), "drive amplitudes must be finite");
}

void LinearizedParams::validate() const {
    require_positive(omega_m, "omega_m");
    require_positive(gamma, "gamma");
    require_nonnegative(n_T, "n_T");
    require_positive(kappa_a, "kappa_a");
    require_nonnegative(kappa_c, "kappa_c");
    require_finite(delta_a, "delta_a");
    require_finite(delta_c, "delta_c");
    require_nonnegative(G_a, "G_a");
    require_nonnegative(G_c, "G_c");
    require_nonnegative(chi, "chi");
    require_nonnegative(epsilon, "epsilon");
    require_finite(phi, "phi");
}

double LinearizedParams::squeezing_ratio() const {
    return chi / std::hypot(kappa_a, delta_a);
}

InjectedModelParams InjectedModelParams::with_photons(double omega_m, double gamma, double n_T,
                                                      double kappa_a, double delta_a_s,
                                                      double G_a_s, double n_s, double phi_s) {
    InjectedModelParams p;
    p.omega_m = omega_m;
    p.gamma = gamma;
    p.n_T = n_T;
    p.kappa_a = kappa_a;
    p.delta_a_s = delta_a_s;
    p.G_a_s = G_a_s;
    p.n_s = n_s;
    p.m_s = std::sqrt(n_s * (n_s + 1.0));
    p.phi_s = phi_s;
    return p;
}

void InjectedModelParams::validate() const {
    require_positive(omega_m, "omega_m");
    require_positive(gamma, "gamma");
    require_nonnegative(n_T, "n_T");
    require_positive(kappa_a, "kappa_a");
    require_finite(delta_a_s, "delta_a_s");
    require_nonnegative(G_a_s, "G_a_s");
    require_nonnegative(n_s, "n_s");
    require_nonnegative(m_s, "m_s");
    require_finite(phi_s, "phi_s");
    const double expected = std::sqrt(n_s * (n_s + 1.0));
    if (std::abs(m_s - expected) > 1e-12 * std::max(1.0, expected)) {
        std::ostringstream os;
        os.precision(17);
        os << "m_s must equal sqrt(n_s (n_s + 1)) = " << expected << " (got " << m_s << ")";
        throw InvalidParameter(os.str());
    }
}

std::optional<std::size_t> LinearSystem::mode_offset(const std::string& mode) const {
    for (std::size_t i = 0; i < ordering.size(); ++i) {
        if (ordering[i].mode == mode && ordering[i].quadrature == Quadrature::X) return i;
    }
    return std::nullopt;
}

std::size_t LinearSystem::require_mode(const std::string& mode) const {
    auto off = mode_offset(mode);
    if (!off) throw InvalidParameter("linear system has no mode '" + mode + "'");
    return *off;
}

void add_mode_coupling(Eigen::MatrixXd& drift, std::size_t r, std::size_t c, cplx m, cplx n) {
    drift(r, c) += m.real() + n.real();
    drift(r, c + 1) += -m.imag() + n.imag();
    drift(r + 1, c) += m.imag() + n.imag();
    drift(r + 1, c + 1) += m.real() - n.real();
}

LinearSystem build_internal_system(const LinearizedParams& p, bool include_pump) {
    p.validate();
    if (include_pump) require_positive(p.kappa_c, "kappa_c");

    const std::size_t n = include_pump ? 6 : 4;
    const std::size_t ia = 0;
    const std::size_t ic = 2;
    const std::size_t ib = include_pump ? 4 : 2;
    const cplx i(0.0, 1.0);
    const cplx pump_phase = std::polar(1.0, 2.0 * p.phi);

    LinearSystem sys;
    sys.drift = Eigen::MatrixXd::Zero(n, n);
    sys.diffusion = Eigen::MatrixXd::Zero(n, n);
    fill_mode_labels(sys.ordering, "a");
    if (include_pump) fill_mode_labels(sys.ordering, "c");
    fill_mode_labels(sys.ordering, "b");

    auto& A = sys.drift;
    add_mode_coupling(A, ia, ia, -(p.kappa_a + i * p.delta_a), p.chi * pump_phase);
    add_mode_coupling(A, ia, ib, i * p.G_a, i * p.G_a);
    add_mode_coupling(A, ib, ib, -(0.5 * p.gamma + i * p.omega_m), 0.0);
    add_mode_coupling(A, ib, ia, i * p.G_a, i * p.G_a);

    if (include_pump) {
        add_mode_coupling(A, ia, ic, p.epsilon, 0.0);
        add_mode_coupling(A, ic, ic, -(p.kappa_c + i * p.delta_c), 0.0);
        add_mode_coupling(A, ic, ia, -p.epsilon, 0.0);
        add_mode_coupling(A, ic, ib, i * p.G_c * pump_phase, i * p.G_c * pump_phase);
        add_mode_coupling(A, ib, ic, i * p.G_c * std::conj(pump_phase), i * p.G_c * pump_phase);
    }

    set_isotropic_noise(sys.diffusion, ia, 2.0 * p.kappa_a);
    if (include_pump) set_isotropic_noise(sys.diffusion, ic, 2.0 * p.kappa_c);
    set_isotropic_noise(sys.diffusion, ib, p.gamma * (2.0 * p.n_T + 1.0));
    return sys;
}

LinearSystem build_injected_system(const InjectedModelParams& p) {
    p.validate();
    const cplx i(0.0, 1.0);
    LinearSystem sys;
    sys.drift = Eigen::MatrixXd::Zero(4, 4);
    sys.diffusion = Eigen::MatrixXd::Zero(4, 4);
    fill_mode_labels(sys.ordering, "a");
    fill_mode_labels(sys.ordering, "b");

    auto& A = sys.drift;
    add_mode_coupling(A, 0, 0, -(p.kappa_a + i * p.delta_a_s), 0.0);
    add_mode_coupling(A, 0, 2, i * p.G_a_s, i * p.G_a_s);
    add_mode_coupling(A, 2, 2, -(0.5 * p.gamma + i * p.omega_m), 0.0);
    add_mode_coupling(A, 2, 0, i * p.G_a_s, i * p.G_a_s);

    // Symmetrized quadrature moments of the input:
    //   <X^2> = 2n+1 + 2 Re M,  <Y^2> = 2n+1 - 2 Re M,  <XY>_sym = 2 Im M
    // with M = <a_in a_in> = m_s exp(-2 i phi_s).
    const cplx m = p.m_s * std::polar(1.0, -2.0 * p.phi_s);
    const double base = 2.0 * p.n_s + 1.0;
    const double scale = 2.0 * p.kappa_a;
    auto& D = sys.diffusion;
    D(0, 0) = scale * (base + 2.0 * m.real());
    D(1, 1) = scale * (base - 2.0 * m.real());
    D(0, 1) = D(1, 0) = scale * 2.0 * m.imag();
    set_isotropic_noise(D, 2, p.gamma * (2.0 * p.n_T + 1.0));
    return sys;
}

double max_real_eigenvalue(const Eigen::MatrixXd& drift) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(drift, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    return es.eigenvalues().real().maxCoeff();
}

StabilityReport stability(const LinearSystem& sys, const LinearizedParams& p) {
    StabilityReport r;
    r.max_real_eigenvalue = max_real_eigenvalue(sys.drift);
    r.stable = r.max_real_eigenvalue < 0.0;
    r.opo_threshold_ratio = p.squeezing_ratio();
    return r;
}

LinearizedParams renormalize_for_pump(const LinearizedParams& p) {
    const double denom = p.kappa_c * p.kappa_c + p.delta_c * p.delta_c;
    if (!(denom > 0.0)) throw InvalidParameter("renormalization needs kappa_c^2 + delta_c^2 > 0");
    const double e2 = p.epsilon * p.epsilon;
    LinearizedParams out = p;
    out.kappa_a = p.kappa_a - p.kappa_c * e2 / denom;
    out.delta_a = p.delta_a + p.delta_c * e2 / denom;
    if (!(out.kappa_a > 0.0)) {
        std::ostringstream os;
        os << "renormalized kappa_a = " << out.kappa_a
           << " <= 0; mode coupling too strong for this pump linewidth";
        throw InvalidParameter(os.str());
    }
    return out;
}

}  // namespace sqzcool
