#ifndef SCO_BATCH_BO_HPP
#define SCO_BATCH_BO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sco/gp.hpp"
#include "sco/objective.hpp"
#include "sco/optimize.hpp"
#include "sco/point.hpp"
#include "sco/sampling.hpp"

namespace sco {

enum class Strategy { Sco, SamplingOnly, Kb, ClMin };

// Display labels used for grouping in result tables.
const char* to_string(Strategy strategy);
Strategy strategy_from_string(const std::string& name);

enum class OptimizerChoice { Sa, Ga };
enum class InitDesign { WdLhs, Mesh };

struct BoConfig {
    std::size_t n_init = 0;   // 0 selects 5 * dim
    std::size_t batch_size = 5;
    int cycles = 5;
    InitDesign init = InitDesign::WdLhs;
    SamplerParams sampler;
    GpConfig gp;
    GaParams ga;
    OptimizerChoice optimizer = OptimizerChoice::Sa;
};

struct CycleRecord {
    std::vector<Point> batch;            // original domain
    std::vector<double> responses;
    double incumbent = 0.0;              // best response after this cycle
    double phi_max = 0.0;
    std::vector<double> candidate_scores; // reduced discrepancy per candidate
    double selected_score = 0.0;          // score of the chosen design (NaN for KB/CL)
    long mode_counts[3] = {0, 0, 0};      // indexed by SampleMode
    bool degenerate_fallback = false;     // acquisition vanished, uniform target used
    double fit_seconds = 0.0;
    double maximize_seconds = 0.0;
    double sample_seconds = 0.0;
    double optimize_seconds = 0.0;
};

struct RunRecord {
    std::string strategy;
    std::uint64_t seed = 0;
    std::vector<Point> initial_design;   // original domain
    std::vector<double> initial_responses;
    double initial_incumbent = 0.0;
    std::vector<CycleRecord> cycles;
    long evaluations = 0;

    double final_incumbent() const {
        return cycles.empty() ? initial_incumbent : cycles.back().incumbent;
    }
    // Incumbent after the initial design and after each cycle.
    std::vector<double> incumbents() const;
};

// One full batch Bayesian optimization run. Each cycle fits the GP surrogate,
// maximizes expected improvement, selects a batch with the chosen strategy,
// evaluates the objective at the batch, and appends the real responses.
// Deterministic for a fixed seed.
RunRecord run_strategy(const ObjectiveFunction& f, Strategy strategy, const BoConfig& config,
                       std::uint64_t seed);

// Relative accuracy of one run against the known minimum.
double ara_component(double y_min, double f_min);

// Average relative accuracy over a suite: records[i] must be a run on
// suite[i], every suite member needs a known nonzero minimum.
double compute_ara(const std::vector<RunRecord>& records,
                   const std::vector<ObjectiveFunction>& suite);

} // namespace sco

#endif
