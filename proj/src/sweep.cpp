#include "sqzcool/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "sqzcool/errors.hpp"
#include "sqzcool/frame.hpp"
#include "sqzcool/lyapunov.hpp"
#include "sqzcool/mean_field.hpp"
#include "sqzcool/optimal.hpp"

namespace sqzcool {

const char* to_string(Model m) {
    switch (m) {
        case Model::InternalReduced: return "internal";
        case Model::InternalFull: return "internal-full";
        case Model::Injected: return "injected";
        case Model::NoSqueezing: return "none";
    }
    return "?";
}

const char* to_string(Method m) {
    switch (m) {
        case Method::Perturbative: return "pert";
        case Method::Lyapunov: return "lyap";
        case Method::Both: return "both";
    }
    return "?";
}

const char* to_string(Status s) {
    switch (s) {
        case Status::Ok: return "ok";
        case Status::Unstable: return "unstable";
        case Status::Heating: return "heating";
        case Status::NotConverged: return "not_converged";
        case Status::Invalid: return "invalid";
    }
    return "?";
}

Model parse_model(const std::string& s) {
    if (s == "internal" || s == "internal-reduced") return Model::InternalReduced;
    if (s == "internal-full" || s == "full") return Model::InternalFull;
    if (s == "injected") return Model::Injected;
    if (s == "none" || s == "no-squeezing") return Model::NoSqueezing;
    throw ConfigError("unknown model '" + s + "' (internal|internal-full|injected|none)");
}

Method parse_method(const std::string& s) {
    if (s == "pert" || s == "perturbative") return Method::Perturbative;
    if (s == "lyap" || s == "lyapunov") return Method::Lyapunov;
    if (s == "both") return Method::Both;
    throw ConfigError("unknown method '" + s + "' (pert|lyap|both)");
}

Scale parse_scale(const std::string& s) {
    if (s == "lin" || s == "linear") return Scale::Linear;
    if (s == "log") return Scale::Log;
    throw ConfigError("unknown scale '" + s + "' (lin|log)");
}

std::string canonical_key(const std::string& key) {
    if (key == "phi_s") return "phi";
    if (key == "R_s") return "R";
    if (key == "delta_a_s") return "delta_a";
    if (key == "G_a_s") return "G_a";
    return key;
}

namespace {

// Alternative coordinates for the squeezing strength.
bool is_squeezing_key(const std::string& k) { return k == "R" || k == "chi" || k == "n_s"; }

void require_known(const std::string& key, const std::string& k) {
    static const std::set<std::string> known = {
        "omega_m", "gamma", "n_T",  "kappa_a", "delta_a", "G_a", "phi", "R",   "chi",         "n_s",
        "kappa_c", "delta_c", "G_c", "epsilon", "chi_0",   "g_a", "g_c", "renormalize", "mean_field"};
    if (!known.count(k)) throw ConfigError("unknown parameter '" + key + "'");
}

}  // namespace

void ParamSet::set(const std::string& key, double value) {
    const std::string k = canonical_key(key);
    require_known(key, k);
    values[k] = value;
    if (is_squeezing_key(k)) {
        for (const char* s : {"R", "chi", "n_s"}) {
            optimal.erase(s);
            if (k != s) values.erase(s);
        }
    } else {
        optimal.erase(k);
    }
}

void ParamSet::set_optimal(const std::string& key) {
    const std::string k = canonical_key(key);
    if (k != "phi" && k != "R" && k != "chi" && k != "n_s") {
        throw ConfigError("only phi and R (or chi, n_s) accept \"opt\", not '" + key + "'");
    }
    if (is_squeezing_key(k)) {
        for (const char* s : {"R", "chi", "n_s"}) values.erase(s);
    } else {
        values.erase(k);
    }
    optimal.insert(k);
}

bool ParamSet::has(const std::string& key) const { return values.count(canonical_key(key)) != 0; }

double ParamSet::get(const std::string& key) const {
    const auto it = values.find(canonical_key(key));
    if (it == values.end()) throw ConfigError("missing parameter '" + key + "'");
    return it->second;
}

double ParamSet::get_or(const std::string& key, double fallback) const {
    const auto it = values.find(canonical_key(key));
    return it == values.end() ? fallback : it->second;
}

ParamSet ParamSet::overlaid(const ParamSet& other) const {
    ParamSet out = *this;
    for (const auto& [k, v] : other.values) out.set(k, v);
    for (const auto& k : other.optimal) out.set_optimal(k);
    return out;
}

ParamSet default_parameters() {
    ParamSet p;
    p.set("omega_m", 1.0);
    p.set("gamma", 0.25e-6);
    p.set("n_T", 1000.0);
    p.set("kappa_a", 1.0);
    p.set("delta_a", 1.0);
    p.set("G_a", 0.1);
    p.set_optimal("phi");
    p.set_optimal("R");
    return p;
}

namespace {

bool squeezing_is_optimal(const ParamSet& ps) {
    return ps.optimal.count("R") || ps.optimal.count("chi") || ps.optimal.count("n_s");
}

void resolve_internal(ModelPoint& pt, const ParamSet& ps) {
    LinearizedParams& e = pt.effective;
    e.omega_m = ps.get_or("omega_m", 1.0);
    e.gamma = ps.get("gamma");
    e.n_T = ps.get("n_T");
    e.kappa_a = ps.get("kappa_a");
    e.delta_a = ps.get("delta_a");
    e.G_a = ps.get("G_a");

    const double scale = std::hypot(e.kappa_a, e.delta_a);
    if (pt.model == Model::NoSqueezing) {
        e.chi = 0.0;
        e.phi = ps.get_or("phi", 0.0);
    } else {
        const InternalOptimum o = internal_optimum(e.kappa_a, e.delta_a, e.omega_m);
        e.phi = ps.optimal.count("phi") ? o.phi_opt : ps.get("phi");
        if (squeezing_is_optimal(ps)) {
            e.chi = o.chi_opt;
        } else if (ps.has("chi")) {
            e.chi = ps.get("chi");
        } else {
            const double r = ps.get("R");
            if (!(r >= 0.0)) throw InvalidParameter("R must be >= 0");
            e.chi = std::min(r, kMaxSqueezingRatio) * scale;
        }
    }
    pt.resolved["phi"] = e.phi;
    pt.resolved["chi"] = e.chi;
    pt.resolved["R"] = scale > 0.0 ? e.chi / scale : 0.0;
    pt.system = e;

    if (pt.model != Model::InternalFull) return;

    e.kappa_c = ps.get("kappa_c");
    e.delta_c = ps.get("delta_c");
    const bool from_single_photon = ps.has("chi_0") || ps.has("g_c") || ps.has("g_a");
    if (from_single_photon) {
        const double chi_0 = ps.get("chi_0");
        const double g_a = ps.get("g_a");
        const double g_c = ps.get("g_c");
        if (!(chi_0 > 0.0) || !(g_a > 0.0) || !(g_c >= 0.0)) {
            throw InvalidParameter("need chi_0 > 0, g_a > 0 and g_c >= 0");
        }
        e.G_c = g_c * e.chi / chi_0;
        e.epsilon = chi_0 * e.G_a / g_a;
    } else {
        e.G_c = ps.get("G_c");
        e.epsilon = ps.get("epsilon");
    }
    pt.resolved["G_c"] = e.G_c;
    pt.resolved["epsilon"] = e.epsilon;

    const bool renormalize = ps.get_or("renormalize", 1.0) != 0.0;
    pt.system = renormalize ? renormalize_for_pump(e) : e;
    pt.resolved["kappa_a_full"] = pt.system.kappa_a;
    pt.resolved["delta_a_full"] = pt.system.delta_a;

    // Optionally realize the point through the mean-field steady state.
    if (from_single_photon && ps.get_or("mean_field", 0.0) != 0.0) {
        FullModelParams f;
        f.omega_m = e.omega_m;
        f.gamma = e.gamma;
        f.n_T = e.n_T;
        f.kappa_a = pt.system.kappa_a;
        f.kappa_c = e.kappa_c;
        f.g_a = ps.get("g_a");
        f.g_c = ps.get("g_c");
        f.chi_0 = ps.get("chi_0");
        LinearTargets t;
        t.G_a = e.G_a;
        t.chi = e.chi;
        t.phi = e.phi;
        t.delta_a = pt.system.delta_a;
        t.delta_c = e.delta_c;
        const FullModelParams driven = invert_targets(t, f);
        const MeanFieldSolution mf = solve_mean_field(driven);
        const LinearizedParams lin = linearize(driven, mf);
        pt.system = lin;
        pt.resolved["drive_a_abs"] = std::abs(driven.drive_a);
        pt.resolved["drive_c_abs"] = std::abs(driven.drive_c);
        pt.resolved["mean_field_residual"] = mf.residual;
    }
}

void resolve_injected(ModelPoint& pt, const ParamSet& ps) {
    InjectedModelParams& q = pt.injected;
    q.omega_m = ps.get_or("omega_m", 1.0);
    q.gamma = ps.get("gamma");
    q.n_T = ps.get("n_T");
    q.kappa_a = ps.get("kappa_a");
    q.delta_a_s = ps.get("delta_a");
    q.G_a_s = ps.get("G_a");

    const bool need_opt = ps.optimal.count("phi") || squeezing_is_optimal(ps);
    InjectedOptimum o;
    if (need_opt) o = injected_optimum(q.kappa_a, q.delta_a_s, q.omega_m);
    q.phi_s = ps.optimal.count("phi") ? o.phi_s_opt : ps.get("phi");
    if (squeezing_is_optimal(ps)) {
        q.n_s = o.n_s_opt;
    } else if (ps.has("n_s")) {
        q.n_s = ps.get("n_s");
    } else {
        const double r = ps.get("R");
        if (!(r >= 0.0)) throw InvalidParameter("R must be >= 0");
        q.n_s = external_squeezing_photons(std::min(r, kMaxSqueezingRatio));
    }
    if (!(q.n_s >= 0.0)) throw InvalidParameter("n_s must be >= 0");
    q.m_s = std::sqrt(q.n_s * (q.n_s + 1.0));
    pt.resolved["phi"] = q.phi_s;
    pt.resolved["n_s"] = q.n_s;
    pt.resolved["R"] = external_squeezing_ratio(q.n_s);
}

}  // namespace

ModelPoint resolve_point(Model model, const ParamSet& params) {
    ModelPoint pt;
    pt.model = model;
    if (model == Model::Injected) {
        resolve_injected(pt, params);
        pt.injected.validate();
    } else {
        resolve_internal(pt, params);
        pt.effective.validate();
        pt.system.validate();
    }
    return pt;
}

LinearSystem ModelPoint::build() const {
    switch (model) {
        case Model::Injected: return build_injected_system(injected);
        case Model::InternalFull: return build_internal_system(system, true);
        default: return build_internal_system(system, false);
    }
}

CoolingResult ModelPoint::perturbative() const {
    switch (model) {
        case Model::Injected: return cooling_perturbative(injected);
        case Model::InternalFull: return cooling_perturbative(effective, true);
        default: return cooling_perturbative(effective, false);
    }
}

std::vector<double> Axis::values() const {
    if (!points.empty()) return points;
    std::vector<double> v(static_cast<std::size_t>(count));
    const double last = static_cast<double>(count - 1);
    if (scale == Scale::Log) {
        const double l0 = std::log(min);
        const double l1 = std::log(max);
        for (int i = 0; i < count; ++i) v[i] = std::exp(l0 + (l1 - l0) * i / last);
    } else {
        for (int i = 0; i < count; ++i) v[i] = min + (max - min) * i / last;
    }
    v.front() = min;
    v.back() = max;
    return v;
}

void SweepSpec::validate() const {
    if (axes.empty()) throw ConfigError("sweep needs at least one axis");
    if (axes.size() > 2) throw ConfigError("sweep supports at most two axes");
    for (const auto& a : axes) {
        if (a.name.empty()) throw ConfigError("axis without a name");
        if (!a.points.empty()) continue;
        if (a.count < 2) throw ConfigError("axis '" + a.name + "' needs count >= 2");
        if (!std::isfinite(a.min) || !std::isfinite(a.max)) {
            throw ConfigError("axis '" + a.name + "' bounds must be finite");
        }
        if (a.scale == Scale::Log && !(a.min > 0.0 && a.max > 0.0)) {
            throw ConfigError("log axis '" + a.name + "' needs positive bounds");
        }
    }
    for (const auto& b : minimize_over) {
        if (!(std::isfinite(b.lo) && std::isfinite(b.hi) && b.lo < b.hi)) {
            throw ConfigError("bound '" + b.name + "' must be finite with lo < hi");
        }
    }
    if (threads < 1) throw ConfigError("threads must be >= 1");
}

SweepRecord evaluate_point(Model model, Method method, const ParamSet& params) {
    SweepRecord r;
    ModelPoint pt;
    try {
        pt = resolve_point(model, params);
    } catch (const NotConverged& e) {
        r.status = Status::NotConverged;
        r.message = e.what();
        return r;
    } catch (const Error& e) {
        r.status = Status::Invalid;
        r.message = e.what();
        return r;
    }
    r.resolved = pt.resolved;

    LinearSystem sys;
    try {
        sys = pt.build();
    } catch (const Error& e) {
        r.status = Status::Invalid;
        r.message = e.what();
        return r;
    }
    r.stable = max_real_eigenvalue(sys.drift) < kStabilityMargin;

    bool heating = false;
    if (method != Method::Lyapunov) {
        try {
            const CoolingResult c = pt.perturbative();
            r.a_plus = c.a_plus;
            r.a_minus = c.a_minus;
            r.gamma_opt = c.gamma_opt;
            r.n_o = c.n_o;
            r.n_pert = c.n_st;
            heating = c.heating;
        } catch (const Error& e) {
            r.message = e.what();
        }
    }

    bool converged = true;
    if (method != Method::Perturbative && r.stable) {
        try {
            const double n = phonon_number(steady_covariance(sys));
            // Round-off can push a near-ground-state value marginally negative.
            r.n_lyap = std::max(n, 0.0);
        } catch (const Error& e) {
            converged = false;
            r.message = e.what();
        }
    }

    if (!r.stable) {
        r.status = Status::Unstable;
    } else if (!converged) {
        r.status = Status::NotConverged;
    } else if (heating) {
        r.status = Status::Heating;
    }
    return r;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

SweepRecord optimize_nst(Model model, const ParamSet& fixed, const std::vector<Bound>& free,
                         const OptimizerOptions& options, std::uint64_t seed, Method report_method) {
    if (free.empty()) throw InvalidParameter("optimize_nst needs at least one free parameter");
    // Penalties sit above any physical occupation reachable from n_T.
    const double penalty = 1e6 * (1.0 + fixed.get_or("n_T", 0.0));

    auto point_for = [&](std::span<const double> x) {
        ParamSet p = fixed;
        for (std::size_t i = 0; i < free.size(); ++i) p.set(free[i].name, x[i]);
        return p;
    };

    const Objective f = [&](std::span<const double> x) -> double {
        LinearSystem sys;
        try {
            sys = resolve_point(model, point_for(x)).build();
        } catch (const Error&) {
            return 10.0 * penalty;
        }
        const double lambda = max_real_eigenvalue(sys.drift);
        if (!(lambda < kStabilityMargin)) return penalty * (2.0 + std::min(lambda, 1e3));
        try {
            return std::max(phonon_number(steady_covariance(sys)), 0.0);
        } catch (const Error&) {
            return penalty;
        }
    };

    const OptimizeResult best = minimize_in_box(f, free, options, seed, penalty);
    if (!(best.value < penalty)) {
        throw NoStablePoint("no stable point found within the bounds");
    }
    SweepRecord r = evaluate_point(model, report_method, point_for(best.x));
    for (std::size_t i = 0; i < free.size(); ++i) r.minimizer[canonical_key(free[i].name)] = best.x[i];
    return r;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<std::vector<double>> grids;
    std::size_t total = 1;
    for (const auto& a : spec.axes) {
        grids.push_back(a.values());
        total *= grids.back().size();
    }

    std::vector<SweepRecord> out(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < total; k = next++) {
            std::vector<double> coords(grids.size());
            std::size_t rem = k;
            for (std::size_t d = grids.size(); d-- > 0;) {
                coords[d] = grids[d][rem % grids[d].size()];
                rem /= grids[d].size();
            }
            ParamSet p = spec.fixed;
            for (std::size_t d = 0; d < coords.size(); ++d) p.set(spec.axes[d].name, coords[d]);

            SweepRecord r;
            if (spec.minimize_over.empty()) {
                r = evaluate_point(spec.model, spec.method, p);
            } else {
                try {
                    r = optimize_nst(spec.model, p, spec.minimize_over, spec.optimizer,
                                     mix_seed(spec.seed, k), spec.method);
                } catch (const NoStablePoint& e) {
                    r.status = Status::Unstable;
                    r.message = e.what();
                }
            }
            r.axis_values = std::move(coords);
            out[k] = std::move(r);
        }
    };

    const auto n = static_cast<std::size_t>(std::max(1, spec.threads));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < std::min(n, total); ++i) pool.emplace_back(worker);
    }
    return out;
}

std::string format_number(double x) {
    if (!std::isfinite(x)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string opt_cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string map_cell(const std::map<std::string, double>& m, const std::string& key) {
    const auto it = m.find(key);
    return it == m.end() ? std::string() : format_number(it->second);
}

}  // namespace

void write_csv_header(std::ostream& os, const std::vector<std::string>& axis_names,
                      const std::vector<std::string>& resolved_keys,
                      const std::vector<std::string>& minimizer_keys, bool with_curve) {
    if (with_curve) os << "curve,";
    for (const auto& a : axis_names) os << a << ',';
    os << "N_pert,N_lyap,A_plus,A_minus,Gamma,n_o,stable";
    for (const auto& k : resolved_keys) os << ",res_" << k;
    for (const auto& k : minimizer_keys) os << ",opt_" << k;
    os << ",status\n";
}

void write_csv_row(std::ostream& os, const SweepRecord& r, const std::vector<std::string>& resolved_keys,
                   const std::vector<std::string>& minimizer_keys, const std::string& curve) {
    if (!curve.empty()) os << curve << ',';
    for (double v : r.axis_values) os << format_number(v) << ',';
    os << opt_cell(r.n_pert) << ',' << opt_cell(r.n_lyap) << ',' << opt_cell(r.a_plus) << ','
       << opt_cell(r.a_minus) << ',' << opt_cell(r.gamma_opt) << ',' << opt_cell(r.n_o) << ','
       << (r.stable ? 1 : 0);
    for (const auto& k : resolved_keys) os << ',' << map_cell(r.resolved, k);
    for (const auto& k : minimizer_keys) os << ',' << map_cell(r.minimizer, k);
    os << ',' << to_string(r.status) << '\n';
}

void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRecord>& records) {
    std::vector<std::string> axes;
    for (const auto& a : spec.axes) axes.push_back(a.name);
    std::set<std::string> res;
    for (const auto& r : records) {
        for (const auto& [k, v] : r.resolved) res.insert(k);
    }
    std::vector<std::string> minimizer;
    for (const auto& b : spec.minimize_over) minimizer.push_back(canonical_key(b.name));
    const std::vector<std::string> resolved(res.begin(), res.end());
    write_csv_header(os, axes, resolved, minimizer, false);
    for (const auto& r : records) write_csv_row(os, r, resolved, minimizer, "");
}

}  // namespace sqzcool
