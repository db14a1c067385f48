#pragma once

#include "retailsim/config.hpp"
#include "retailsim/metrics.hpp"
#include "retailsim/stats.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace retailsim {

// One swept level: a display label plus the raw JSON of the value.
struct LevelSpec {
    std::string label;
    std::string value_json;
    bool operator==(const LevelSpec&) const = default;
};

struct ExperimentSpec {
    std::string name = "experiment";
    std::string scenario_path;
    ScenarioConfig base;         // loaded and mode-adjusted scenario
    std::string parameter;       // e.g. "pool_size", "wom.adoption_fraction", "mode"
    std::vector<LevelSpec> levels;
    int replications = 5;
    int days = 70;
    std::uint64_t master_seed = 1;
    bool common_random_numbers = true;
    std::vector<std::string> test_measures;
    std::vector<std::pair<int, int>> test_pairs; // level index pairs
};

// Reads a JSON experiment spec; the scenario path is resolved against the
// working directory first, then against the spec file's directory.
ExperimentSpec load_experiment_spec(const std::string& path);

// The swept parameter applied to the base scenario.
ScenarioConfig apply_level(const ScenarioConfig& base, const std::string& parameter,
                           const std::string& value_json);

// Fixed, ordered list of per-run summary measures.
const std::vector<std::string>& measure_names();

// The summary measures for one finished replication, in measure_names' order.
std::vector<double> measure_values(const RunOutput& out);

struct TestRow {
    std::string measure;
    int level_a = 0;
    int level_b = 0;
    double mean_a = 0.0;
    double mean_b = 0.0;
    LeveneResult levene;
    TTestResult welch;
    TTestResult student;
    std::string variant; // the test Levene's result selects
    double eta2 = 0.0;   // effect size of the selected test
};

struct ExperimentResult {
    ExperimentSpec spec;
    // values[level][replication][measure index]
    std::vector<std::vector<std::vector<double>>> values;
    // series[level][day] = {mean arrivals, mean transactions} across reps
    std::vector<std::vector<std::array<double, 2>>> series;
    std::vector<TestRow> tests;
};

// Runs the full level x replication grid (jobs > 1 runs them in parallel;
// results are identical regardless). With common random numbers, replication
// i uses the same streams at every level.
ExperimentResult run_experiment(const ExperimentSpec& spec, int jobs = 1);

// Writes runs.csv, descriptives.csv, tests.csv and series.csv into dir.
void emit_report(const ExperimentResult& result, const std::string& dir);

// Human-readable summary of a directory written by emit_report.
std::string render_report(const std::string& dir);

} // namespace retailsim
