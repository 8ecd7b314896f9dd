#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gpolar/scenarios.hpp"
#include "gpolar/toml_lite.hpp"

namespace gpolar {

// Bumped whenever the results.csv column set changes.
constexpr int kCsvSchema = 1;

struct GridPoint {
    int n = 0;
    double delta_c = 0.0;
    double delta_s = 0.0;
    long trials = 0;
    long design_trials = 0;
};

// One scenario swept over axes; everything else is shared by the grid.
struct ExperimentConfig {
    ScenarioConfig base;
    std::vector<int> n_axis;
    std::vector<double> delta_c_axis;
    std::vector<double> delta_s_axis;
    std::vector<long> trials_axis;
    std::vector<long> design_trials_axis;
};

// Throws std::invalid_argument naming the offending field. Unknown keys are
// rejected so typos cannot silently fall back to defaults.
ExperimentConfig experiment_from_toml(const TomlTable& t);

// Row-major sweep order: n, delta_c, delta_s, trials, design_trials.
std::vector<GridPoint> grid_points(const ExperimentConfig& cfg);
ScenarioConfig config_at(const ExperimentConfig& cfg, const GridPoint& gp);

// results.csv layout; fixed per kCsvSchema. Proportion metrics fill the err
// slots and mean metrics the dist slots, per scenario; absent slots stay
// empty. Wall time never enters these rows, so reruns are byte-identical.
std::string csv_header();
std::string csv_row(const ScenarioConfig& cfg, const SimReport& rep);

// timing.csv sidecar; the one artifact allowed to differ between reruns.
std::string timing_header();
std::string timing_row(const ScenarioConfig& cfg, double wall_seconds);

std::string report_to_json(const ScenarioConfig& cfg, const SimReport& rep,
                           const std::map<std::string, double>& rates);

struct PointOutcome {
    GridPoint gp;
    std::string error;  // empty on success
    SimReport report;
    double wall_seconds = 0.0;
    std::string csv;
    std::string timing;
    std::string json;
    std::vector<std::pair<std::string, std::string>> cache_entries;  // key -> payload
    std::vector<std::string> design_lines;
};

struct ExperimentResult {
    int failed = 0;
    std::vector<PointOutcome> outcomes;
};

// Designs (reusing <out>/cache) and, unless design_only, simulates every grid
// point; grid points run on up to `workers` threads while all artifact writes
// happen serially afterwards in grid order. Per-point failures are recorded
// in the outcome and do not stop the sweep.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                                int workers, bool design_only);

}  // namespace gpolar
