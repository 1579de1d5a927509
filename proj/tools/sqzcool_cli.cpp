// sqzcool: command-line front end for the cooling models.
//
// Exit codes: 0 success, 1 configuration error, 2 figure with partial panels.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "sqzcool/config.hpp"
#include "sqzcool/errors.hpp"
#include "sqzcool/figures.hpp"
#include "sqzcool/frame.hpp"
#include "sqzcool/lyapunov.hpp"
#include "sqzcool/spectra.hpp"
#include "sqzcool/sweep.hpp"

namespace {

using namespace sqzcool;

struct Common {
    std::string model = "internal";
    std::string config;
    std::string out;
    std::string method = "both";
    int threads = 1;
    std::vector<std::string> sets;
    std::vector<std::string> axes;
    std::vector<std::string> frees;
    std::uint64_t seed = 1;
    CLI::Option* model_opt = nullptr;
    CLI::Option* method_opt = nullptr;
    CLI::Option* threads_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* sub, Common& c, bool sweep_like) {
    c.model_opt = sub->add_option("--model", c.model, "internal | internal-full | injected | none");
    sub->add_option("--config", c.config, "TOML configuration file");
    sub->add_option("--out", c.out, "output file or directory (default: stdout)");
    c.method_opt = sub->add_option("--method", c.method, "pert | lyap | both");
    c.threads_opt = sub->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    sub->add_option("--set", c.sets, "parameter override key=value (value may be \"opt\")");
    c.seed_opt = sub->add_option("--seed", c.seed, "optimizer seed");
    if (sweep_like) {
        sub->add_option("--axis", c.axes, "swept axis name:min:max:count[:lin|log]");
        sub->add_option("--free", c.frees, "minimized parameter name:lo:hi");
    }
}

RunConfig build_config(const Common& c) {
    RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
    if (c.config.empty() || c.model_opt->count()) cfg.model = parse_model(c.model);
    if (c.config.empty() || c.method_opt->count()) cfg.method = parse_method(c.method);
    if (c.config.empty() || c.threads_opt->count()) cfg.threads = c.threads;
    if (c.seed_opt->count()) cfg.seed = c.seed;
    if (cfg.threads == 0) cfg.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    for (const auto& s : c.sets) apply_override(cfg.params, s);
    if (!c.axes.empty()) {
        cfg.axes.clear();
        for (const auto& a : c.axes) cfg.axes.push_back(parse_axis(a));
    }
    if (!c.frees.empty()) {
        cfg.free.clear();
        for (const auto& f : c.frees) cfg.free.push_back(parse_bound(f));
    }
    return cfg;
}

// Writes to --out (a file) or stdout.
void emit(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    f << text;
    if (!f) throw ConfigError("cannot write '" + out + "'");
}

std::string file_in(const std::string& out, const std::string& name) {
    if (out.empty()) return out;
    if (std::filesystem::is_directory(out) || out.back() == '/') {
        std::filesystem::create_directories(out);
        return (std::filesystem::path(out) / name).string();
    }
    return out;
}

int cmd_nst(const Common& c) {
    const RunConfig cfg = build_config(c);
    SweepSpec spec = cfg.sweep_spec();
    spec.axes.clear();
    spec.minimize_over.clear();
    std::ostringstream os;
    write_sweep_csv(os, spec, {evaluate_point(cfg.model, cfg.method, cfg.params)});
    emit(file_in(c.out, "nst.csv"), os.str());
    return 0;
}

int cmd_sweep(const Common& c) {
    const RunConfig cfg = build_config(c);
    const SweepSpec spec = cfg.sweep_spec();
    const auto records = run_sweep(spec);
    std::ostringstream os;
    write_sweep_csv(os, spec, records);
    emit(file_in(c.out, "sweep.csv"), os.str());
    return 0;
}

int cmd_optimize(const Common& c) {
    const RunConfig cfg = build_config(c);
    if (cfg.free.empty()) throw ConfigError("optimize needs --free name:lo:hi (or [optimize].free)");
    SweepSpec spec = cfg.sweep_spec();
    spec.axes.clear();
    std::ostringstream os;
    try {
        write_sweep_csv(os, spec, {optimize_nst(cfg.model, cfg.params, cfg.free, cfg.optimizer, cfg.seed, cfg.method)});
    } catch (const NoStablePoint& e) {
        std::cerr << "optimize: " << e.what() << '\n';
        return 2;
    }
    emit(file_in(c.out, "optimum.csv"), os.str());
    return 0;
}

int cmd_spectrum(const Common& c, const std::string& which, double wmin, double wmax, int count) {
    const RunConfig cfg = build_config(c);
    const ModelPoint pt = resolve_point(cfg.model, cfg.params);
    Axis ax;
    ax.name = "omega";
    ax.min = wmin;
    ax.max = wmax;
    ax.count = count;
    if (count < 2) throw ConfigError("--count must be >= 2");
    const std::vector<double> grid = ax.values();

    // Coupling-free system: the spectra describe the optical force alone.
    LinearSystem sys;
    std::vector<double> analytic(grid.size());
    SpectrumKind kind;
    std::string mode = "a";
    double theta = 0.0;
    if (cfg.model == Model::Injected) {
        if (which != "a") throw ConfigError("the injected model only has the 'a' spectrum");
        InjectedModelParams q = pt.injected;
        q.G_a_s = 0.0;
        sys = build_injected_system(q);
        kind = SpectrumKind::InjectedSa;
        for (std::size_t i = 0; i < grid.size(); ++i) analytic[i] = spectrum_injected(q, grid[i]);
    } else {
        LinearizedParams e = pt.effective;
        e.G_a = 0.0;
        e.G_c = 0.0;
        const bool pump = cfg.model == Model::InternalFull;
        if (which == "a") {
            kind = SpectrumKind::InternalSa;
            // With the pump included the numeric column is the full three-mode result.
            for (std::size_t i = 0; i < grid.size(); ++i) analytic[i] = spectrum_internal(e, grid[i]);
        } else if (which == "c" && pump) {
            kind = SpectrumKind::PumpSc;
            mode = "c";
            theta = 2.0 * e.phi;
            for (std::size_t i = 0; i < grid.size(); ++i) analytic[i] = spectrum_pump(e, grid[i]);
        } else if (which == "ac" && pump) {
            kind = SpectrumKind::CrossSac;
            for (std::size_t i = 0; i < grid.size(); ++i) analytic[i] = spectrum_cross(e, grid[i]);
        } else {
            throw ConfigError("spectrum '" + which + "' needs --model internal-full (a | c | ac)");
        }
        // Pump spectra are first order in epsilon, so no renormalization there.
        sys = build_internal_system(pump && kind == SpectrumKind::InternalSa ? renormalize_for_pump(e) : e, pump);
    }

    std::vector<double> numeric(grid.size(), std::nan(""));
    std::string status = "ok";
    try {
        QuadraturePair q = QuadraturePair::auto_spectrum(sys, mode, theta);
        if (kind == SpectrumKind::CrossSac) {
            q.left = QuadraturePair::rotated(sys, "a", 0.0);
            q.right = QuadraturePair::rotated(sys, "c", 2.0 * pt.effective.phi);
        }
        numeric = numeric_spectrum(sys, q, grid, kind).values;
    } catch (const Unstable&) {
        status = "unstable";
    }

    std::ostringstream os;
    os << "omega,S_analytic,S_numeric,status\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        os << format_number(grid[i]) << ',' << format_number(analytic[i]) << ',' << format_number(numeric[i])
           << ',' << status << '\n';
    }
    emit(file_in(c.out, "spectrum.csv"), os.str());
    return 0;
}

int cmd_map_frame(const Common& c) {
    const RunConfig cfg = build_config(c);
    const ModelPoint pt = resolve_point(cfg.model, cfg.params);
    std::ostringstream os;
    os.precision(17);
    if (cfg.model == Model::Injected) {
        const LinearizedParams p = map_injected_to_internal(pt.injected);
        os << "direction,injected_to_internal\n"
           << "delta_a," << format_number(p.delta_a) << "\nG_a," << format_number(p.G_a) << "\nchi,"
           << format_number(p.chi) << "\nphi," << format_number(p.phi) << "\nR,"
           << format_number(p.squeezing_ratio()) << '\n';
    } else {
        const SqueezedFrameParams f = squeezed_frame(pt.effective);
        const EquivalenceReport rep = equivalence_certificate(pt.effective, 1e-8);
        os << "direction,internal_to_injected\n"
           << "s," << format_number(f.s) << "\nphi_s," << format_number(f.phi_s) << "\nphi_prime,"
           << format_number(f.phi_prime) << "\nn_s," << format_number(f.n_s) << "\nm_s," << format_number(f.m_s)
           << "\ndelta_a_s," << format_number(f.delta_a_s) << "\nG_a_s," << format_number(f.G_a_s)
           << "\nR_s," << format_number(external_squeezing_ratio(f.n_s)) << "\nN_internal,"
           << format_number(rep.n_internal) << "\nN_injected," << format_number(rep.n_injected)
           << "\nrelative_difference," << format_number(rep.relative_difference) << "\nequivalent,"
           << (rep.pass ? "yes" : "no") << '\n';
    }
    emit(file_in(c.out, "frame.csv"), os.str());
    return 0;
}

int cmd_stability(const Common& c) {
    const RunConfig cfg = build_config(c);
    const ModelPoint pt = resolve_point(cfg.model, cfg.params);
    const LinearSystem sys = pt.build();
    const double lambda = max_real_eigenvalue(sys.drift);
    std::ostringstream os;
    os << "max_real_eigenvalue," << format_number(lambda) << "\nstable,"
       << (lambda < kStabilityMargin ? "yes" : "no") << '\n';
    if (cfg.model != Model::Injected) os << "R," << format_number(pt.system.squeezing_ratio()) << '\n';
    emit(file_in(c.out, "stability.csv"), os.str());
    return 0;
}

int cmd_figure(const Common& c, int id, double resolution) {
    const RunConfig cfg = build_config(c);
    FigureOptions fo;
    fo.out_dir = c.out.empty() ? "." : c.out;
    fo.threads = cfg.threads;
    fo.seed = cfg.seed;
    fo.optimizer = cfg.optimizer;
    fo.resolution = resolution;
    // Only explicitly given values override the figure's own parameters.
    if (!c.config.empty()) fo.overrides = load_config(c.config).params;
    for (const auto& s : c.sets) apply_override(fo.overrides, s);
    const FigureReport rep = reproduce_figure(id, fo);
    for (const auto& p : rep.panels) {
        std::cerr << p.file << ": " << p.rows << " rows" << (p.partial ? " (partial)" : "") << '\n';
    }
    std::cerr << "manifest: " << rep.manifest_path << " (" << rep.runtime_seconds << " s)\n";
    return rep.partial ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optomechanical cooling with intracavity and injected squeezing"};
    app.require_subcommand(1);

    auto* nst = app.add_subcommand("nst", "steady-state phonon number at one point");
    auto* spectrum = app.add_subcommand("spectrum", "force spectrum, analytic and numeric");
    auto* sweep = app.add_subcommand("sweep", "grid sweep with optional per-point minimization");
    auto* optimize = app.add_subcommand("optimize", "minimize N_st over bounded parameters");
    auto* map_frame = app.add_subcommand("map-frame", "map between internal and injected parameters");
    auto* figure = app.add_subcommand("figure", "regenerate the data behind a figure");
    auto* stab = app.add_subcommand("stability", "drift-matrix stability check");
    // Each subcommand gets its own option objects bound to the shared struct.
    std::vector<Common> commons(7);
    std::vector<CLI::App*> subs = {nst, spectrum, sweep, optimize, map_frame, figure, stab};
    for (std::size_t i = 0; i < subs.size(); ++i) add_common(subs[i], commons[i], subs[i] == sweep || subs[i] == optimize);

    std::string which = "a";
    double wmin = -3.0, wmax = 3.0;
    int count = 601;
    spectrum->add_option("--kind", which, "a | c | ac");
    spectrum->add_option("--omega-min", wmin);
    spectrum->add_option("--omega-max", wmax);
    spectrum->add_option("--count", count);

    int figure_id = 0;
    double resolution = 1.0;
    figure->add_option("id", figure_id, "figure number 1-6")->required()->check(CLI::Range(1, 6));
    figure->add_option("--resolution", resolution, "grid density multiplier");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (!subs[i]->parsed()) continue;
            const Common& c = commons[i];
            if (subs[i] == nst) return cmd_nst(c);
            if (subs[i] == spectrum) return cmd_spectrum(c, which, wmin, wmax, count);
            if (subs[i] == sweep) return cmd_sweep(c);
            if (subs[i] == optimize) return cmd_optimize(c);
            if (subs[i] == map_frame) return cmd_map_frame(c);
            if (subs[i] == figure) return cmd_figure(c, figure_id, resolution);
            if (subs[i] == stab) return cmd_stability(c);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
