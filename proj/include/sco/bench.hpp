#ifndef SCO_BENCH_HPP
#define SCO_BENCH_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sco/batch_bo.hpp"
#include "sco/objective.hpp"

namespace sco {

struct GklsSuiteConfig {
    int functions = 20;
    int local_minima = 6;
    double f_star = -1.0;
    double radii_lo_frac = 0.06;
    double radii_hi_frac = 0.12;
    double base_coefficient = 2.0;
};

// One experiment grid. The experiment id selects the driver:
//   E1-uncertainty     design discrepancy distributions, sampling vs SCO
//   E2-ga-vs-sa        optimizer traces on shared sampler outputs
//   E3-dimension-sweep batch BO across dimensions
//   E4-batch-size-sweep batch BO across batch sizes
//   single-run         one strategy on one objective
struct ExperimentConfig {
    std::string experiment;
    std::string output_dir = "results";
    int replications = 1;
    std::vector<int> dimensions = {2};
    std::vector<int> batch_sizes = {5};
    std::vector<std::string> strategies = {"SCO", "S only"};
    std::uint64_t master_seed = 0;
    std::string objective = "gkls"; // "branin" or "gkls"
    GklsSuiteConfig gkls;
    BoConfig bo;
};

// Parses and validates a JSON config document. Unknown keys, wrong types, and
// invalid values raise ValidationError listing every offending field.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& file);

// Stable hash of the canonical config echo; every record references it.
std::string config_hash(const ExperimentConfig& config);

// Output directory resolution: relative paths are joined under the
// SCOBENCH_OUTPUT_ROOT environment variable when it is set.
std::filesystem::path resolve_output_dir(const std::string& configured);

struct RunStatus {
    int cells = 0;
    int failures = 0;
    std::vector<std::string> failed_cells;
    std::filesystem::path output_dir;
};

// Executes the experiment grid: writes manifest.json, one JSON record per
// cell under records/, results.csv, and failures.json when cells failed.
// Per-cell failures are recorded and the grid continues.
RunStatus run_experiment(const ExperimentConfig& config);

struct SummarizeStatus {
    int records = 0;
    int skipped = 0;
    std::vector<std::string> problems;
};

// Reads a result directory and emits summary/groups.csv (per-group quartiles)
// and summary/ara_curves.csv (mean accuracy per cycle). Refuses directories
// whose records reference a different manifest. Pure transformation:
// running it twice yields identical files.
SummarizeStatus summarize(const std::filesystem::path& dir);

} // namespace sco

#endif
