#include "sqzcool/mean_field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include <Eigen/Dense>

#include "sqzcool/errors.hpp"

namespace sqzcool {

namespace {

constexpr cplx kI{0.0, 1.0};

struct Derived {
    cplx b;
    double delta_a;
    double delta_c;
};

Derived derive(const FullModelParams& p, cplx a, cplx c) {
    Derived d;
    d.b = kI * (p.g_a * std::norm(a) + p.g_c * std::norm(c)) / (0.5 * p.gamma + kI * p.omega_m);
    const double x = 2.0 * d.b.real();
    d.delta_a = p.delta_a_bar - p.g_a * x;
    d.delta_c = p.delta_c_bar - p.g_c * x;
    return d;
}

double relative(cplx r, std::initializer_list<double> terms) {
    double scale = 0.0;
    for (double t : terms) scale = std::max(scale, t);
    const double mag = std::abs(r);
    if (scale == 0.0) return mag;
    return mag / scale;
}

// Residuals of the three relations, each normalised by its largest term.
std::array<double, 3> residuals(const FullModelParams& p, cplx a, cplx c, cplx b) {
    const double x = 2.0 * b.real();
    const double da = p.delta_a_bar - p.g_a * x;
    const double dc = p.delta_c_bar - p.g_c * x;
    const cplx ta = (p.kappa_a + kI * da) * a;
    const cplx tpa = p.chi_0 * std::conj(a) * c;
    const cplx tc = (p.kappa_c + kI * dc) * c;
    const cplx tpc = 0.5 * p.chi_0 * a * a;
    const cplx tb = (0.5 * p.gamma + kI * p.omega_m) * b;
    const double src = p.g_a * std::norm(a) + p.g_c * std::norm(c);
    return {
        relative(-ta + tpa + p.drive_a, {std::abs(ta), std::abs(tpa), std::abs(p.drive_a)}),
        relative(-tc - tpc + p.drive_c, {std::abs(tc), std::abs(tpc), std::abs(p.drive_c)}),
        relative(-tb + kI * src, {std::abs(tb), std::abs(src)}),
    };
}

// Stationarity of modes a and c with b eliminated, as 4 real equations.
Eigen::Vector4d stationarity(const FullModelParams& p, const Eigen::Vector4d& x) {
    const cplx a(x[0], x[1]);
    const cplx c(x[2], x[3]);
    const Derived d = derive(p, a, c);
    const cplx ra = -(p.kappa_a + kI * d.delta_a) * a + p.chi_0 * std::conj(a) * c + p.drive_a;
    const cplx rc = -(p.kappa_c + kI * d.delta_c) * c - 0.5 * p.chi_0 * a * a + p.drive_c;
    return {ra.real(), ra.imag(), rc.real(), rc.imag()};
}

struct Attempt {
    cplx a;
    cplx c;
    double residual;
    int iterations;
    bool converged;
};

double residual_max(const FullModelParams& p, cplx a, cplx c) {
    const auto r = residuals(p, a, c, derive(p, a, c).b);
    return *std::max_element(r.begin(), r.end());
}

// Newton steps with a central-difference Jacobian; used to finish off a
// Picard run that stalls or oscillates near the parametric threshold.
void newton_polish(const FullModelParams& p, cplx& a, cplx& c, double tol, int max_steps) {
    Eigen::Vector4d x(a.real(), a.imag(), c.real(), c.imag());
    for (int it = 0; it < max_steps; ++it) {
        if (residual_max(p, {x[0], x[1]}, {x[2], x[3]}) <= tol) break;
        const Eigen::Vector4d f = stationarity(p, x);
        Eigen::Matrix4d jac;
        const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
        for (int k = 0; k < 4; ++k) {
            const double h = 1e-7 * scale;
            Eigen::Vector4d xp = x;
            Eigen::Vector4d xm = x;
            xp[k] += h;
            xm[k] -= h;
            jac.col(k) = (stationarity(p, xp) - stationarity(p, xm)) / (2.0 * h);
        }
        const Eigen::Vector4d step = jac.fullPivLu().solve(-f);
        if (!step.allFinite()) break;
        x += step;
    }
    a = {x[0], x[1]};
    c = {x[2], x[3]};
}

Attempt run_picard(const FullModelParams& p, const MeanFieldOptions& opt, MeanFieldSeed seed) {
    cplx a = seed.a;
    cplx c = seed.c;
    const double w = opt.damping;
    Attempt out{a, c, residual_max(p, a, c), 0, false};
    for (int it = 1; it <= opt.max_iter; ++it) {
        const Derived d = derive(p, a, c);
        const double denom = p.kappa_a * p.kappa_a + d.delta_a * d.delta_a -
                             p.chi_0 * p.chi_0 * std::norm(c);
        const cplx a_next =
            (p.drive_a * (p.kappa_a - kI * d.delta_a) + std::conj(p.drive_a) * p.chi_0 * c) / denom;
        const cplx c_next = (p.drive_c - 0.5 * p.chi_0 * a * a) / (p.kappa_c + kI * d.delta_c);
        a = (1.0 - w) * a + w * a_next;
        c = (1.0 - w) * c + w * c_next;
        out.iterations = it;
        if (!std::isfinite(std::abs(a)) || !std::isfinite(std::abs(c))) break;
        const double res = residual_max(p, a, c);
        out.a = a;
        out.c = c;
        out.residual = res;
        if (res <= opt.tol) {
            out.converged = true;
            return out;
        }
        // Picard alone contracts slowly near threshold; hand over to Newton
        // once the iterate is close.
        if (res < 1e-6 && it % 50 == 0) {
            cplx an = a;
            cplx cn = c;
            newton_polish(p, an, cn, opt.tol, 20);
            const double rn = residual_max(p, an, cn);
            if (rn <= opt.tol) {
                out = {an, cn, rn, it, true};
                return out;
            }
        }
    }
    if (std::isfinite(std::abs(out.a)) && std::isfinite(std::abs(out.c))) {
        cplx an = out.a;
        cplx cn = out.c;
        newton_polish(p, an, cn, opt.tol, 50);
        const double rn = residual_max(p, an, cn);
        if (rn < out.residual) {
            out.a = an;
            out.c = cn;
            out.residual = rn;
        }
        out.converged = out.residual <= opt.tol;
    }
    return out;
}

bool same_solution(const Attempt& x, const Attempt& y) {
    const double scale = std::max({std::abs(x.a), std::abs(x.c), std::abs(y.a), std::abs(y.c), 1e-300});
    return std::abs(x.a - y.a) + std::abs(x.c - y.c) <= 1e-6 * scale;
}

}  // namespace

double mean_field_residual(const FullModelParams& p, cplx a, cplx c, cplx b) {
    const auto r = residuals(p, a, c, b);
    return *std::max_element(r.begin(), r.end());
}

MeanFieldSolution solve_mean_field(const FullModelParams& p, const MeanFieldOptions& opt,
                                   const std::vector<MeanFieldSeed>& extra_seeds) {
    p.validate();
    if (!(opt.tol > 0.0) || opt.max_iter < 1 || !(opt.damping > 0.0 && opt.damping <= 1.0)) {
        throw InvalidParameter("mean-field options need tol > 0, max_iter >= 1, damping in (0, 1]");
    }

    std::vector<MeanFieldSeed> seeds = extra_seeds;
    const cplx a0 = p.drive_a / (p.kappa_a + kI * p.delta_a_bar);
    const cplx c0 = p.drive_c / (p.kappa_c + kI * p.delta_c_bar);
    seeds.push_back({0.0, 0.0});
    seeds.push_back({a0, c0});
    seeds.push_back({1.1 * a0, 1.1 * c0});
    seeds.push_back({0.9 * a0, 0.9 * c0});

    std::vector<Attempt> converged;
    double best_residual = std::numeric_limits<double>::infinity();
    for (const auto& seed : seeds) {
        Attempt at = run_picard(p, opt, seed);
        best_residual = std::min(best_residual, at.residual);
        if (at.converged) converged.push_back(at);
    }
    if (converged.empty()) {
        std::ostringstream os;
        os << "mean-field iteration did not converge (best residual " << best_residual << ")";
        throw NotConverged(os.str(), best_residual);
    }

    const Attempt& chosen = converged.front();
    MeanFieldSolution sol;
    for (const auto& other : converged) {
        if (!same_solution(chosen, other)) sol.multiple_solutions = true;
    }

    const Derived d = derive(p, chosen.a, chosen.c);
    sol.residual = mean_field_residual(p, chosen.a, chosen.c, d.b);
    sol.converged = sol.residual <= opt.tol;
    sol.iterations = chosen.iterations;
    sol.b_st = d.b;
    sol.delta_a = d.delta_a;
    sol.delta_c = d.delta_c;

    // Rotate so that <a> is real and non-negative: a -> a e^{i t}, c -> c e^{2 i t}.
    const double theta = std::abs(chosen.a) > 0.0 ? -std::arg(chosen.a) : 0.0;
    sol.a_st = cplx(std::abs(chosen.a), 0.0);
    sol.c_st = chosen.c * std::polar(1.0, 2.0 * theta);
    return sol;
}

LinearizedParams linearize(const FullModelParams& p, const MeanFieldSolution& mf) {
    if (!mf.converged) throw NotConverged("cannot linearize an unconverged mean-field solution", mf.residual);
    if (p.g_a < 0.0 || p.g_c < 0.0) {
        throw InvalidParameter("linearization assumes g_a, g_c >= 0 (sign absorbed into b)");
    }
    const double a = std::abs(mf.a_st);
    const double c = std::abs(mf.c_st);
    LinearizedParams q;
    q.omega_m = p.omega_m;
    q.gamma = p.gamma;
    q.n_T = p.n_T;
    q.kappa_a = p.kappa_a;
    q.kappa_c = p.kappa_c;
    q.delta_a = mf.delta_a;
    q.delta_c = mf.delta_c;
    q.G_a = p.g_a * a;
    q.G_c = p.g_c * c;
    q.chi = p.chi_0 * c;
    q.epsilon = p.chi_0 * a;
    // Phase relative to a real <a>; exact even when a_st was not rotated.
    const double a_phase = a > 0.0 ? std::arg(mf.a_st) : 0.0;
    q.phi = c > 0.0 ? 0.5 * std::arg(mf.c_st * std::polar(1.0, -2.0 * a_phase)) : 0.0;
    return q;
}

FullModelParams invert_targets(const LinearTargets& t, const FullModelParams& p,
                               const MeanFieldOptions& opt) {
    if (!(t.G_a >= 0.0) || !(t.chi >= 0.0) || !std::isfinite(t.phi)) {
        throw InvalidParameter("targets must be finite and non-negative");
    }
    if (t.G_a > 0.0 && !(p.g_a > 0.0)) throw InvalidParameter("G_a target needs g_a > 0");
    if (t.chi > 0.0 && !(p.chi_0 > 0.0)) throw InvalidParameter("chi target needs chi_0 > 0");

    const cplx a = t.G_a > 0.0 ? cplx(t.G_a / p.g_a, 0.0) : cplx(0.0, 0.0);
    const cplx c = t.chi > 0.0 ? std::polar(t.chi / p.chi_0, 2.0 * t.phi) : cplx(0.0, 0.0);

    FullModelParams out = p;
    // The mechanical shift depends only on |a| and |c|.
    const double shift = 2.0 * derive(p, a, c).b.real();
    if (t.delta_a) out.delta_a_bar = *t.delta_a + p.g_a * shift;
    if (t.delta_c) out.delta_c_bar = *t.delta_c + p.g_c * shift;
    const Derived d = derive(out, a, c);

    out.drive_a = (p.kappa_a + kI * d.delta_a) * a - p.chi_0 * std::conj(a) * c;
    out.drive_c = (p.kappa_c + kI * d.delta_c) * c + 0.5 * p.chi_0 * a * a;
    out.validate();

    // Forward check, seeded at the intended branch.
    MeanFieldSolution mf;
    try {
        mf = solve_mean_field(out, opt, {{a, c}});
    } catch (const NotConverged& e) {
        throw NotConverged(std::string("inverted drives do not reproduce targets: ") + e.what(),
                           e.residual());
    }
    const LinearizedParams lin = linearize(out, mf);
    const double err_g = std::abs(lin.G_a - t.G_a) / std::max(t.G_a, 1e-300);
    const double err_x = std::abs(lin.chi - t.chi) / std::max(t.chi, 1e-300);
    const double err = std::max(t.G_a > 0.0 ? err_g : lin.G_a, t.chi > 0.0 ? err_x : lin.chi);
    if (err > 1e-8) {
        throw NotConverged("forward solve of the inverted drives landed on another branch", err);
    }
    return out;
}

}  // namespace sqzcool
