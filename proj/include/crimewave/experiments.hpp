#pragma once
// Experiment driver: orchestrates the kinetics/steady-state/PDE modules
// for one parsed Scenario and writes plot-ready CSVs plus a flat
// key=value summary into the output directory.

#include <string>

#include "crimewave/scenario.hpp"

namespace crimewave {

/// Runs the scenario's experiment and writes artifacts under
/// scenario.out_dir. Returns 0 on success, 2 on configuration errors,
/// 3 on numerical failures; diagnostics go to stderr.
int run_experiment(const Scenario& scenario);

}  // namespace crimewave
