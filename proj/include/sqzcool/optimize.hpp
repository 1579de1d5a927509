#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sqzcool {

struct Bound {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
};

struct OptimizerOptions {
    int starts = 8;
    int max_iterations = 400;   ///< Nelder-Mead iterations per start
    double simplex_tol = 1e-7;  ///< relative to the bound widths
    int polish_rounds = 4;      ///< 5-point coordinate grid passes
    /// Random redraws allowed to replace a start that lands on a penalised point.
    int reseed_attempts = 64;
};

struct OptimizeResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
};

using Objective = std::function<double(std::span<const double>)>;

/// Multi-start Nelder-Mead over a box. Starts are a Latin hypercube over the
/// bounds; each run is followed by a local 5-point grid polish along every
/// coordinate. Points outside the box are never passed to `f`. Results are
/// fully determined by `seed`.
OptimizeResult minimize_in_box(const Objective& f, std::span<const Bound> bounds,
                               const OptimizerOptions& opt, std::uint64_t seed,
                               double penalty_threshold);

}  // namespace sqzcool
