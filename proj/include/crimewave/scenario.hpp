#pragma once
// Flat key=value scenario configuration: parsing with typo-safe key
// checking, defaults, and the resolved Scenario handed to the experiment
// driver.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crimewave/kinetics.hpp"
#include "crimewave/pde_solver.hpp"

namespace crimewave {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Scenario {
    double beta = 0.0;
    double s_b = 0.0;
    std::optional<double> alpha;  // unset: normalized automatically
    GapLayout layout;
    SolverConfig solver;
    std::string experiment;       // may be empty until the CLI selects one
    std::string out_dir = "out";

    /// Resolved kinetics (normalized unless alpha was given).
    KineticsParams params() const;
};

/// Parses flat `key=value` lines (UTF-8). `#` starts a comment, blank
/// lines are skipped, later keys override earlier ones, unknown keys and
/// malformed numbers raise ConfigError naming the offending line.
/// Recognized keys: beta, s_b, alpha, gap.kind, gap.L, gap.L1, gap.L2,
/// gap.d, dx, dt, x_min, x_max, t_end, mode, experiment, out.
Scenario parse_config(const std::string& text);

/// The bare line grammar shared with every emitted summary: returns the
/// key/value pairs in order, without any key whitelist.
std::vector<std::pair<std::string, std::string>> parse_kv_lines(const std::string& text);

/// Names of the supported experiments.
const std::vector<std::string>& experiment_names();

}  // namespace crimewave
