#pragma once

#include <optional>
#include <vector>

#include "sqzcool/core_model.hpp"

namespace sqzcool {

/// Stationary mean fields of the full model, with the global phase fixed so
/// that a_st is real and non-negative.
struct MeanFieldSolution {
    cplx a_st{0.0, 0.0};
    cplx c_st{0.0, 0.0};
    cplx b_st{0.0, 0.0};
    double delta_a = 0.0;
    double delta_c = 0.0;
    /// Largest relative residual of the three stationarity relations.
    double residual = 0.0;
    bool converged = false;
    /// Set when the multi-start seeds settled on distinct fixed points.
    bool multiple_solutions = false;
    int iterations = 0;
};

struct MeanFieldOptions {
    double tol = 1e-12;
    int max_iter = 10000;
    double damping = 0.5;
};

/// Starting amplitudes (a, c) in the frame of the supplied drives.
struct MeanFieldSeed {
    cplx a;
    cplx c;
};

/// Damped fixed-point solve of
///   (kappa_a + i Delta_a) a = chi_0 a^* c + E_a
///   (kappa_c + i Delta_c) c = -(chi_0/2) a^2 + E_c
///   (gamma/2 + i omega_m) b = i (g_a |a|^2 + g_c |c|^2)
/// with Delta_j = Delta_bar_j - g_j (b + b^*). Throws NotConverged.
///
/// Seeds are tried in order: `extra_seeds`, zero, the decoupled-cavity
/// amplitudes, and that solution scaled by 1.1 and 0.9. The first converged
/// seed is returned; disagreement between converged seeds sets
/// multiple_solutions.
MeanFieldSolution solve_mean_field(const FullModelParams& p, const MeanFieldOptions& opt = {},
                                   const std::vector<MeanFieldSeed>& extra_seeds = {});

/// Relative residuals of the three relations at the given amplitudes,
/// evaluated in the frame of the original drives.
double mean_field_residual(const FullModelParams& p, cplx a, cplx c, cplx b);

/// G_a = g_a |a|, G_c = g_c |c|, chi = chi_0 |c|, epsilon = chi_0 |a|,
/// phi = arg(c)/2 in the frame where a is real.
LinearizedParams linearize(const FullModelParams& p, const MeanFieldSolution& mf);

struct LinearTargets {
    double G_a = 0.0;
    double chi = 0.0;
    double phi = 0.0;
    /// When set, the bare detunings are shifted so the mean-field detunings
    /// (after the radiation-pressure shift) take these values.
    std::optional<double> delta_a;
    std::optional<double> delta_c;
};

/// Drive amplitudes for which the mean-field solution has g_a a_st = G_a
/// and chi_0 c_st = chi exp(2 i phi). The returned parameters are verified
/// by a forward solve; throws NotConverged when the forward solve lands on
/// a different branch.
FullModelParams invert_targets(const LinearTargets& targets, const FullModelParams& p,
                               const MeanFieldOptions& opt = {});

}  // namespace sqzcool
