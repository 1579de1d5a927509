#pragma once

// Parameter sweeps, per-point N_st minimisation and CSV emission.
//
// Points are described by flat parameter maps. Recognised keys (all in
// units of omega_m):
//   omega_m, gamma, n_T, kappa_a, delta_a, G_a, phi     every model
//   R | chi                                           internal squeezing strength
//   n_s | R                                           injected squeezing (R read as R_s)
//   kappa_c, delta_c, and G_c + epsilon or chi_0 + g_a + g_c, renormalize
//                                                     full three-mode model
// For the injected model delta_a, G_a and phi are the mapped quantities
// delta_a^(s), G_a^(s) and phi_s; the aliases delta_a_s, G_a_s, phi_s and
// R_s are accepted. phi and R (or n_s) may be marked "opt" to apply the
// Stokes-suppression optimum at each point.

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "sqzcool/core_model.hpp"
#include "sqzcool/optimize.hpp"
#include "sqzcool/spectra.hpp"

namespace sqzcool {

enum class Model { InternalReduced, InternalFull, Injected, NoSqueezing };
enum class Method { Perturbative, Lyapunov, Both };
enum class Scale { Linear, Log };
enum class Status { Ok, Unstable, Heating, NotConverged, Invalid };

const char* to_string(Model m);
const char* to_string(Method m);
const char* to_string(Status s);
Model parse_model(const std::string& s);
Method parse_method(const std::string& s);
Scale parse_scale(const std::string& s);

/// Largest squeezing ratio accepted when R is the input coordinate.
inline constexpr double kMaxSqueezingRatio = 0.999;

/// Canonical key for an alias (phi_s -> phi, R_s -> R, ...).
std::string canonical_key(const std::string& key);

struct ParamSet {
    std::map<std::string, double> values;
    /// Keys to be replaced by the suppression optimum ("phi", "R").
    std::set<std::string> optimal;

    void set(const std::string& key, double value);
    void set_optimal(const std::string& key);
    bool has(const std::string& key) const;
    double get(const std::string& key) const;
    double get_or(const std::string& key, double fallback) const;
    /// Later values (and "opt" markers) win.
    ParamSet overlaid(const ParamSet& other) const;
};

/// Fig. 1-style defaults: kappa_a = delta_a = 1, G_a = 0.1, gamma = 0.25e-6,
/// n_T = 1000, phi and R at the suppression optimum.
ParamSet default_parameters();

/// A fully resolved point of one model.
struct ModelPoint {
    Model model = Model::InternalReduced;
    /// Parameters seen by the mechanics (used by the perturbative formulas).
    LinearizedParams effective;
    /// Parameters used to build the linear system; differs from `effective`
    /// only by the pump renormalization of the full model.
    LinearizedParams system;
    InjectedModelParams injected;
    /// Quantities resolved from "opt" markers or derived coordinates.
    std::map<std::string, double> resolved;

    LinearSystem build() const;
    CoolingResult perturbative() const;
};

/// Throws ConfigError for missing keys and InvalidParameter for invalid
/// physical values.
ModelPoint resolve_point(Model model, const ParamSet& params);

struct Axis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    int count = 2;
    Scale scale = Scale::Linear;
    /// Explicit grid; overrides min/max/count/scale when non-empty.
    std::vector<double> points;
    std::vector<double> values() const;
};

struct SweepSpec {
    Model model = Model::InternalReduced;
    ParamSet fixed;
    std::vector<Axis> axes;
    std::vector<Bound> minimize_over;
    Method method = Method::Both;
    OptimizerOptions optimizer;
    std::uint64_t seed = 1;
    int threads = 1;

    /// Throws ConfigError.
    void validate() const;
};

struct SweepRecord {
    std::vector<double> axis_values;
    std::optional<double> n_pert;
    std::optional<double> n_lyap;
    std::optional<double> a_plus;
    std::optional<double> a_minus;
    std::optional<double> gamma_opt;
    std::optional<double> n_o;
    bool stable = false;
    std::map<std::string, double> resolved;
    std::map<std::string, double> minimizer;
    Status status = Status::Ok;
    std::string message;
};

/// Evaluates one parameter point. Never throws for physical failures; they
/// are reported through `status`.
SweepRecord evaluate_point(Model model, Method method, const ParamSet& params);

/// Row-major grid over the axes (last axis fastest), one record per point,
/// evaluated on `spec.threads` workers. Output order does not depend on the
/// thread count.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

/// Minimises the Lyapunov N_st over the bounded free parameters. Unstable
/// trial points are penalised. Throws NoStablePoint.
SweepRecord optimize_nst(Model model, const ParamSet& fixed, const std::vector<Bound>& free,
                         const OptimizerOptions& options, std::uint64_t seed,
                         Method report_method = Method::Both);

/// CSV with header; 17 significant digits; `status` is the last column.
/// Optional leading `curve` column when `curve` is non-empty.
void write_csv_header(std::ostream& os, const std::vector<std::string>& axis_names,
                      const std::vector<std::string>& resolved_keys,
                      const std::vector<std::string>& minimizer_keys, bool with_curve);
void write_csv_row(std::ostream& os, const SweepRecord& r, const std::vector<std::string>& resolved_keys,
                   const std::vector<std::string>& minimizer_keys, const std::string& curve);

std::string format_number(double x);

/// Writes a whole sweep as CSV.
void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRecord>& records);

}  // namespace sqzcool
