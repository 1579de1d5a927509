#include "sqzcool/figures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"

#include "sqzcool/errors.hpp"
#include "sqzcool/lyapunov.hpp"
#include "sqzcool/optimal.hpp"
#include "sqzcool/spectra.hpp"

namespace sqzcool {

namespace fs = std::filesystem;
using nlohmann::json;

std::string git_blob_sha1(const std::string& content) {
    const std::string header = "blob " + std::to_string(content.size()) + '\0';
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
    EVP_DigestUpdate(ctx, header.data(), header.size());
    EVP_DigestUpdate(ctx, content.data(), content.size());
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return hex.str();
}

namespace {

constexpr double kPi = std::numbers::pi;

struct Curve {
    std::string name;
    Model model;
    ParamSet params;
};

json params_json(const ParamSet& p) {
    json j = json::object();
    for (const auto& [k, v] : p.values) j[k] = v;
    for (const auto& k : p.optimal) j[k] = "opt";
    return j;
}

class FigureBuilder {
public:
    FigureBuilder(int id, const FigureOptions& opt) : id_(id), opt_(opt) {
        dir_ = fs::path(opt.out_dir);
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) throw ConfigError("cannot create output directory '" + opt.out_dir + "'");
        report_.id = id;
    }

    const FigureOptions& options() const { return opt_; }
    json& manifest() { return manifest_; }

    int scaled(int n) const { return std::max(3, static_cast<int>(std::lround(n * opt_.resolution))); }

    ParamSet base(const ParamSet& figure_defaults) const { return figure_defaults.overlaid(opt_.overrides); }

    SweepSpec spec(Model model, const ParamSet& fixed, std::vector<Axis> axes, Method method) const {
        SweepSpec s;
        s.model = model;
        s.fixed = fixed;
        s.axes = std::move(axes);
        s.method = method;
        s.optimizer = opt_.optimizer;
        s.seed = opt_.seed;
        s.threads = opt_.threads;
        return s;
    }

    /// Runs one sweep per curve and writes them into one CSV.
    std::vector<std::vector<SweepRecord>> sweep_panel(const std::string& name, const std::vector<Curve>& curves,
                                                      const std::vector<Axis>& axes, Method method,
                                                      const std::vector<Bound>& minimize_over = {}) {
        std::vector<std::vector<SweepRecord>> all;
        std::set<std::string> res;
        for (const auto& c : curves) {
            SweepSpec s = spec(c.model, c.params, axes, method);
            s.minimize_over = minimize_over;
            all.push_back(run_sweep(s));
            for (const auto& r : all.back()) {
                for (const auto& [k, v] : r.resolved) res.insert(k);
            }
        }
        std::vector<std::string> axis_names;
        for (const auto& a : axes) axis_names.push_back(a.name);
        std::vector<std::string> minimizer;
        for (const auto& b : minimize_over) minimizer.push_back(canonical_key(b.name));
        const std::vector<std::string> resolved(res.begin(), res.end());

        std::ostringstream csv;
        write_csv_header(csv, axis_names, resolved, minimizer, true);
        PanelInfo info;
        for (std::size_t i = 0; i < curves.size(); ++i) {
            for (const auto& r : all[i]) {
                write_csv_row(csv, r, resolved, minimizer, curves[i].name);
                ++info.status_counts[to_string(r.status)];
                if (r.status == Status::NotConverged) info.partial = true;
            }
        }
        finish_panel(name, csv.str(), info);
        return all;
    }

    void finish_panel(const std::string& name, const std::string& content, PanelInfo info) {
        info.name = name;
        info.file = "fig" + std::to_string(id_) + "_" + name + ".csv";
        info.rows = static_cast<std::size_t>(std::count(content.begin(), content.end(), '\n'));
        if (info.rows > 0) --info.rows;
        info.git_blob_sha1 = git_blob_sha1(content);
        std::ofstream out(dir_ / info.file, std::ios::binary);
        out << content;
        if (!out) throw ConfigError("cannot write " + (dir_ / info.file).string());
        report_.partial = report_.partial || info.partial;
        report_.panels.push_back(std::move(info));
    }

    void flag_partial(const std::string& why) {
        report_.partial = true;
        manifest_["problems"].push_back(why);
    }

    FigureReport finish(double runtime) {
        report_.runtime_seconds = runtime;
        json panels = json::array();
        std::string tree;
        for (const auto& p : report_.panels) {
            panels.push_back({{"name", p.name},
                              {"file", p.file},
                              {"rows", p.rows},
                              {"status_counts", p.status_counts},
                              {"partial", p.partial},
                              {"git_blob_sha1", p.git_blob_sha1}});
            tree += p.git_blob_sha1 + "  " + p.file + "\n";
        }
        manifest_["figure"] = id_;
        manifest_["panels"] = panels;
        manifest_["content_hash"] = git_blob_sha1(tree);
        manifest_["partial"] = report_.partial;
        manifest_["runtime_seconds"] = runtime;
        manifest_["threads"] = opt_.threads;
        manifest_["seed"] = opt_.seed;
        manifest_["resolution"] = opt_.resolution;
        manifest_["units"] = "frequencies and rates in units of omega_m";
        manifest_["phase_note"] = "phases are principal values in [0, pi); only exp(2 i phi) enters";
        report_.manifest_path = (dir_ / ("fig" + std::to_string(id_) + "_manifest.json")).string();
        std::ofstream out(report_.manifest_path);
        out << manifest_.dump(2) << '\n';
        if (!out) throw ConfigError("cannot write " + report_.manifest_path);
        return report_;
    }

private:
    int id_;
    FigureOptions opt_;
    fs::path dir_;
    FigureReport report_;
    json manifest_ = json::object();
};

Axis lin_axis(const std::string& name, double lo, double hi, int count) {
    Axis a;
    a.name = name;
    a.min = lo;
    a.max = hi;
    a.count = count;
    return a;
}

Axis log_axis(const std::string& name, double lo, double hi, int count) {
    Axis a = lin_axis(name, lo, hi, count);
    a.scale = Scale::Log;
    return a;
}

/// R from 0 to kMaxSqueezingRatio with 1 - R log-spaced, dense near threshold.
Axis squeezing_axis(int count) {
    Axis a;
    a.name = "R";
    const double top = std::log10(1.0 - kMaxSqueezingRatio);
    for (int i = 0; i < count; ++i) {
        const double r = 1.0 - std::pow(10.0, top * i / (count - 1));
        a.points.push_back(i == count - 1 ? kMaxSqueezingRatio : r);
    }
    a.min = a.points.front();
    a.max = a.points.back();
    a.count = count;
    return a;
}

/// Phases in [0, pi) without the duplicate endpoint.
Axis phase_axis(int count) {
    Axis a;
    a.name = "phi";
    for (int i = 0; i < count; ++i) a.points.push_back(kPi * i / count);
    a.min = 0.0;
    a.max = a.points.back();
    a.count = count;
    return a;
}

ParamSet fig1_defaults() { return default_parameters(); }

std::optional<double> best_n(const SweepRecord& r) {
    if (r.status != Status::Ok && r.status != Status::Heating) return std::nullopt;
    return r.n_lyap;
}

// ---------------------------------------------------------------- figure 1

void figure1(FigureBuilder& fb) {
    const ParamSet base = fb.base(fig1_defaults());
    fb.manifest()["parameters"] = params_json(base);

    // (a) coupling-free force spectrum, analytic and from the linear system.
    {
        const Axis w = lin_axis("omega", -3.0, 3.0, 6 * (fb.scaled(100)) + 1);
        std::ostringstream csv;
        csv << "curve,omega,S_analytic,S_numeric,status\n";
        PanelInfo info;
        for (const auto& [name, model] : {std::pair{"internal", Model::InternalReduced},
                                          std::pair{"none", Model::NoSqueezing}}) {
            ParamSet p = base;
            p.set("G_a", 0.0);
            const ModelPoint pt = resolve_point(model, p);
            const std::vector<double> grid = w.values();
            std::vector<double> numeric(grid.size(), std::nan(""));
            std::string status = "ok";
            try {
                const LinearSystem sys = pt.build();
                numeric = numeric_spectrum(sys, QuadraturePair::auto_spectrum(sys, "a"), grid,
                                           SpectrumKind::InternalSa)
                              .values;
            } catch (const Unstable&) {
                status = "unstable";
            }
            for (std::size_t i = 0; i < grid.size(); ++i) {
                csv << name << ',' << format_number(grid[i]) << ','
                    << format_number(spectrum_internal(pt.effective, grid[i])) << ','
                    << format_number(numeric[i]) << ',' << status << '\n';
                ++info.status_counts[status];
            }
        }
        fb.finish_panel("a", csv.str(), info);
    }

    const std::vector<Curve> curves = {{"internal", Model::InternalReduced, base},
                                       {"none", Model::NoSqueezing, base}};
    fb.sweep_panel("b", curves, {lin_axis("phi", 0.0, kPi, fb.scaled(121))}, Method::Both);
    fb.sweep_panel("c", curves, {lin_axis("R", 0.0, kMaxSqueezingRatio, fb.scaled(101))}, Method::Both);
    fb.sweep_panel("d", curves, {lin_axis("G_a", 0.005, 0.6, fb.scaled(120))}, Method::Both);
}

// ------------------------------------------------------------ figures 2, 3

struct RowRanges {
    double delta_lo, delta_hi, g_lo, g_hi;
};

RowRanges ranges_for(double kappa) {
    if (kappa <= 0.3) return {0.05, 3.0, 0.001, 0.3};
    if (kappa <= 3.0) return {0.1, 5.0, 0.005, 0.8};
    return {0.05, 15.0 * kappa, 0.05, 0.8 * kappa};
}

void row_panels(FigureBuilder& fb, const std::string& prefix, const ParamSet& base, json& row_json) {
    const double kappa = base.get("kappa_a");
    const RowRanges rr = ranges_for(kappa);

    struct Tuned {
        std::string name;
        Model model;
        ParamSet params;
    };
    std::vector<Tuned> tuned;
    json optimum = json::object();
    std::uint64_t salt = 0;
    for (const auto& [name, model] : {std::pair{"internal", Model::InternalReduced},
                                      std::pair{"injected", Model::Injected},
                                      std::pair{"none", Model::NoSqueezing}}) {
        ParamSet p = base;
        p.set_optimal("phi");
        p.set_optimal("R");
        double d_lo = rr.delta_lo;
        // Keep the internal OPO in the regime where the two models are equivalent.
        if (model == Model::InternalReduced) d_lo = std::max(d_lo, 0.5 * (kappa * kappa + 1.0) * (1.0 + 1e-6));
        const std::vector<Bound> free = {{"delta_a", d_lo, rr.delta_hi}, {"G_a", rr.g_lo, rr.g_hi}};
        try {
            const SweepRecord best = optimize_nst(model, p, free, fb.options().optimizer,
                                                  fb.options().seed + 7919 * ++salt, Method::Lyapunov);
            p.set("delta_a", best.minimizer.at("delta_a"));
            p.set("G_a", best.minimizer.at("G_a"));
            optimum[name] = {{"delta_a", best.minimizer.at("delta_a")},
                             {"G_a", best.minimizer.at("G_a")},
                             {"N_lyap", best.n_lyap.value_or(std::nan(""))},
                             {"R", best.resolved.at("R")},
                             {"phi", best.resolved.at("phi")}};
        } catch (const NoStablePoint&) {
            p.set("delta_a", 0.5 * (d_lo + rr.delta_hi));
            p.set("G_a", rr.g_lo);
            fb.flag_partial(prefix + "/" + name + ": no stable optimum inside the bounds");
        }
        tuned.push_back({name, model, p});
    }
    row_json["optimum"] = optimum;
    row_json["bounds"] = {{"delta_a", {rr.delta_lo, rr.delta_hi}}, {"G_a", {rr.g_lo, rr.g_hi}}};

    auto curves_with = [&](auto&& edit) {
        std::vector<Curve> cs;
        for (const auto& t : tuned) {
            ParamSet p = t.params;
            edit(p);
            cs.push_back({t.name, t.model, p});
        }
        return cs;
    };
    auto keep = [](ParamSet&) {};

    fb.sweep_panel(prefix + "_phi", curves_with(keep), {lin_axis("phi", 0.0, kPi, fb.scaled(181))}, Method::Both);
    fb.sweep_panel(prefix + "_delta", curves_with(keep),
                   {lin_axis("delta_a", rr.delta_lo, rr.delta_hi, fb.scaled(150))}, Method::Both);
    fb.sweep_panel(prefix + "_G", curves_with(keep), {lin_axis("G_a", rr.g_lo, rr.g_hi, fb.scaled(150))},
                   Method::Both);
    fb.sweep_panel(prefix + "_R", curves_with(keep), {squeezing_axis(fb.scaled(121))}, Method::Both);
}

void figure2(FigureBuilder& fb) {
    json rows = json::array();
    int i = 0;
    for (double kappa : {0.1, 1.0, 10.0}) {
        ParamSet p = fig1_defaults();
        p.set("kappa_a", kappa);
        p = fb.base(p);
        json row = {{"parameters", params_json(p)}};
        row_panels(fb, "row" + std::to_string(++i), p, row);
        rows.push_back(row);
    }
    fb.manifest()["rows"] = rows;
}

void figure3(FigureBuilder& fb) {
    json rows = json::array();
    int i = 0;
    for (double n_T : {0.1, 1e5}) {
        ParamSet p = fig1_defaults();
        p.set("n_T", n_T);
        p = fb.base(p);
        json row = {{"parameters", params_json(p)}};
        row_panels(fb, "row" + std::to_string(++i), p, row);
        rows.push_back(row);
    }
    fb.manifest()["rows"] = rows;
}

// ------------------------------------------------------------ figures 4, 5

void phase_map_figure(FigureBuilder& fb, double kappa, double quoted_internal, double quoted_injected) {
    ParamSet p = fig1_defaults();
    p.set("kappa_a", kappa);
    p = fb.base(p);
    kappa = p.get("kappa_a");
    fb.manifest()["parameters"] = params_json(p);

    const std::vector<Bound> free = {{"delta_a", 0.01, 2.0 * kappa + 2.0}, {"G_a", 1e-3, 0.5 * kappa}};
    fb.manifest()["minimized_over"] = {{"delta_a", {free[0].lo, free[0].hi}}, {"G_a", {free[1].lo, free[1].hi}}};

    const Axis phi = phase_axis(fb.scaled(36));
    const Axis r = squeezing_axis(fb.scaled(24));
    const std::vector<std::pair<std::string, Model>> models = {{"internal", Model::InternalReduced},
                                                               {"injected", Model::Injected}};
    json cuts = json::object();
    std::vector<Curve> cut_curves;
    for (std::size_t m = 0; m < models.size(); ++m) {
        const auto& [name, model] = models[m];
        const auto recs =
            fb.sweep_panel(m == 0 ? "a" : "b", {{name, model, p}}, {phi, r}, Method::Lyapunov, free)[0];

        // Coarse minimum, then a joint refinement of (phi, R, delta, G) around it.
        const SweepRecord* best = nullptr;
        for (const auto& rec : recs) {
            const auto n = best_n(rec);
            if (n && (!best || *n < *best_n(*best))) best = &rec;
        }
        const double quoted = m == 0 ? quoted_internal : quoted_injected;
        if (!best) {
            fb.flag_partial(name + ": no stable point on the phase map");
            cuts[name] = {{"phi_found_over_pi", nullptr}, {"phi_quoted_over_pi", quoted}};
            continue;
        }
        const double dphi = kPi / phi.points.size();
        const double r0 = best->axis_values[1];
        std::vector<Bound> refine = {{"phi", best->axis_values[0] - dphi, best->axis_values[0] + dphi},
                                     {"R", std::max(0.0, r0 - 0.5 * (1.0 - r0) - 0.02),
                                      std::min(kMaxSqueezingRatio, r0 + 0.5 * (1.0 - r0))},
                                     free[0],
                                     free[1]};
        if (!(refine[1].lo < refine[1].hi)) refine[1].lo = refine[1].hi - 1e-3;
        OptimizerOptions o = fb.options().optimizer;
        o.starts = std::max(o.starts, 16);
        double phi_min = best->axis_values[0];
        double n_min = *best_n(*best);
        try {
            const SweepRecord fine = optimize_nst(model, p, refine, o, fb.options().seed + 104729 * (m + 1),
                                                  Method::Lyapunov);
            if (fine.n_lyap && *fine.n_lyap < n_min) {
                n_min = *fine.n_lyap;
                phi_min = fine.minimizer.at("phi");
            }
        } catch (const NoStablePoint&) {
        }
        phi_min = std::fmod(std::fmod(phi_min, kPi) + kPi, kPi);
        cuts[name] = {{"phi_found_over_pi", phi_min / kPi},
                      {"phi_quoted_over_pi", quoted},
                      {"difference_over_pi", phi_min / kPi - quoted},
                      {"N_lyap_min", n_min}};
        ParamSet cp = p;
        cp.set("phi", phi_min);
        cut_curves.push_back({name, model, cp});
    }
    fb.manifest()["phase_cuts"] = cuts;

    if (cut_curves.empty()) return;
    const Axis rc = squeezing_axis(fb.scaled(60));
    const auto cut = fb.sweep_panel("c", cut_curves, {rc}, Method::Lyapunov, free);
    for (const char* key : {"delta_a", "G_a"}) {
        std::ostringstream csv;
        csv << "curve,R," << key << ",N_lyap,status\n";
        PanelInfo info;
        for (std::size_t c = 0; c < cut.size(); ++c) {
            for (const auto& rec : cut[c]) {
                const auto it = rec.minimizer.find(key);
                csv << cut_curves[c].name << ',' << format_number(rec.axis_values[0]) << ','
                    << (it == rec.minimizer.end() ? "" : format_number(it->second)) << ','
                    << (rec.n_lyap ? format_number(*rec.n_lyap) : "") << ',' << to_string(rec.status) << '\n';
                ++info.status_counts[to_string(rec.status)];
                if (rec.status == Status::NotConverged) info.partial = true;
            }
        }
        fb.finish_panel(std::string(key) == "delta_a" ? "d" : "e", csv.str(), info);
    }
}

// ---------------------------------------------------------------- figure 6

void figure6(FigureBuilder& fb) {
    ParamSet p = fig1_defaults();
    p.set("kappa_c", 500.0);
    p.set("delta_c", 1.0);
    p.set("g_a", 1e-6);
    p = fb.base(p);

    // Coupling that minimizes N_st of the reduced model at these detunings.
    double g_star = p.get("G_a");
    try {
        const SweepRecord best = optimize_nst(Model::InternalReduced, p, {{"G_a", 0.005, 0.8}},
                                              fb.options().optimizer, fb.options().seed, Method::Lyapunov);
        g_star = best.minimizer.at("G_a");
    } catch (const NoStablePoint&) {
        fb.flag_partial("no stable reduced-model optimum for G_a");
    }
    p.set("G_a", g_star);
    fb.manifest()["parameters"] = params_json(p);
    fb.manifest()["G_a_optimal"] = g_star;

    ParamSet pa = p;
    pa.set("g_c", p.get_or("g_c", 1e-6));
    fb.sweep_panel("a",
                   {{"full", Model::InternalFull, pa}, {"reduced", Model::InternalReduced, pa}},
                   {log_axis("chi_0", 1e-9, 1e-3, fb.scaled(61))}, Method::Both);

    ParamSet pb = p;
    pb.set("chi_0", p.get_or("chi_0", 1e-4));
    fb.sweep_panel("b",
                   {{"full", Model::InternalFull, pb}, {"reduced", Model::InternalReduced, pb}},
                   {log_axis("g_c", 1e-8, 1e-2, fb.scaled(61))}, Method::Both);
}

}  // namespace

FigureReport reproduce_figure(int id, const FigureOptions& options) {
    if (id < 1 || id > 6) throw ConfigError("figure id must be 1..6");
    if (!(options.resolution > 0.0)) throw ConfigError("resolution must be > 0");
    const auto t0 = std::chrono::steady_clock::now();
    FigureBuilder fb(id, options);
    switch (id) {
        case 1: figure1(fb); break;
        case 2: figure2(fb); break;
        case 3: figure3(fb); break;
        case 4: phase_map_figure(fb, 10.0, 0.62, 0.47); break;
        case 5: phase_map_figure(fb, 100.0, 0.63, 0.45); break;
        case 6: figure6(fb); break;
    }
    const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return fb.finish(runtime);
}

}  // namespace sqzcool
