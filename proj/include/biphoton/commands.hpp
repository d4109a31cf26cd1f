#pragma once

// CLI subcommands. Each one resolves the configuration, writes its tables
// into cfg.out and returns the written paths plus a short text summary.

#include <filesystem>
#include <string>
#include <vector>

#include "biphoton/run_config.hpp"

namespace biphoton {

struct CommandResult {
    std::vector<std::filesystem::path> files;
    std::string summary;
};

/// delta_n(phi0) and theta0(phi0) on [0, 1.2] rad, and fit residuals on [0.51, 1.2].
CommandResult cmd_dispersion(const RunConfig& cfg);

/// f_exact and f_approx against kappa- over the full cone and near its edge.
CommandResult cmd_fcurve(const RunConfig& cfg);

/// Single-particle (exact and approximate), coincidence and plane-restricted
/// curves plus the entanglement report; cfg.sweep adds theta0 = 0.04, 0.02, 0.
CommandResult cmd_distributions(const RunConfig& cfg);

/// Analytic and Monte-Carlo ring scans, the coincidence scan and the
/// theory-vs-scan comparison. Needs theta0 > 0.
CommandResult cmd_scan(const RunConfig& cfg);

/// Entanglement report and ring geometry on stdout only.
CommandResult cmd_report(const RunConfig& cfg);

}  // namespace biphoton
