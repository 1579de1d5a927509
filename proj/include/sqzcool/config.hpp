#pragma once

// TOML run configuration and command-line parameter overrides.
//
//   [system]     model = "internal", parameter keys (numbers or "opt"),
//                optional omega_m_hz (labelling only)
//   [sweep]      method, threads, seed, axes = [{name, min, max, count, scale}]
//   [optimize]   free = [{name, lo, hi}], starts, max_iterations,
//                simplex_tol, polish_rounds

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqzcool/optimize.hpp"
#include "sqzcool/sweep.hpp"

namespace sqzcool {

struct RunConfig {
    Model model = Model::InternalReduced;
    ParamSet params = default_parameters();
    Method method = Method::Both;
    std::vector<Axis> axes;
    std::vector<Bound> free;
    OptimizerOptions optimizer;
    std::uint64_t seed = 1;
    int threads = 1;
    std::optional<double> omega_m_hz;

    SweepSpec sweep_spec() const;
};

/// Throws ConfigError with the offending key or TOML parse position.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& toml_text, const std::string& source = "<string>");

/// "key=value" with value a number or "opt".
void apply_override(ParamSet& params, const std::string& assignment);

/// "name:lo:hi"
Bound parse_bound(const std::string& text);
/// "name:min:max:count[:lin|log]"
Axis parse_axis(const std::string& text);

}  // namespace sqzcool
