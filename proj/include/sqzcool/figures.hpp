#pragma once

// Data behind the six result figures: one CSV per panel plus manifest.json.
//
// Panel CSV schemas
//   spectrum panels   curve,omega,S_analytic,S_numeric,status
//   sweep panels      curve,<axis>[,<axis2>],N_pert,N_lyap,A_plus,A_minus,Gamma,n_o,
//                     stable,res_<key>...,opt_<key>...,status
// Empty cells mean "not computed" (unstable, heating, or not requested).

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sqzcool/sweep.hpp"

namespace sqzcool {

struct FigureOptions {
    std::string out_dir = ".";
    int threads = 1;
    std::uint64_t seed = 1;
    /// Applied on top of each figure's base parameter set.
    ParamSet overrides;
    /// Grid density multiplier; values below 1 give coarser, faster panels.
    double resolution = 1.0;
    OptimizerOptions optimizer;
};

struct PanelInfo {
    std::string name;
    std::string file;
    std::size_t rows = 0;
    std::map<std::string, std::size_t> status_counts;
    /// Set when a point failed numerically (not_converged).
    bool partial = false;
    std::string git_blob_sha1;
};

struct FigureReport {
    int id = 0;
    std::vector<PanelInfo> panels;
    bool partial = false;
    double runtime_seconds = 0.0;
    std::string manifest_path;
};

/// Throws ConfigError for an unknown id or an unwritable output directory.
FigureReport reproduce_figure(int id, const FigureOptions& options);

/// SHA-1 of "blob <size>\0<content>", as printed by `git hash-object`.
std::string git_blob_sha1(const std::string& content);

}  // namespace sqzcool
