#ifndef SCO_OPTIMIZE_HPP
#define SCO_OPTIMIZE_HPP

#include <cstdint>
#include <vector>

#include "sco/discrepancy.hpp"
#include "sco/sampling.hpp"

namespace sco {

struct GaParams {
    double fitness_exponent = 5.0; // l
    double crossover_prob = 0.5;   // per slot
    double mutation_prob = 0.1;    // per slot
    int max_generations = 200;
    int stall_generations = 30;
};

struct TraceEntry {
    int iteration = 0;        // generation (GA) or sweep (SA)
    double best_score = 0.0;  // best-ever score after this iteration
    double pop_median = 0.0;  // population median (GA) or current score (SA)
    int swaps = 0;            // accepted swaps in this sweep (SA only)
    long delta_evals = 0;     // cumulative incremental-rescore count
    double seconds = 0.0;     // cumulative wall time
};

struct Milestone {
    long delta_evals = 0;
    double best_score = 0.0;
};

struct OptimizationTrace {
    std::vector<TraceEntry> iterations;
    // Best-score improvements keyed by cumulative delta evaluations,
    // starting with the initial best at zero evaluations.
    std::vector<Milestone> milestones;
    long delta_evals = 0;
    double seconds = 0.0;
};

struct OptimizeResult {
    Design design;
    double score = 0.0;
    OptimizationTrace trace;
};

// Genetic refinement of the candidate batch over the pool: elitism, roulette
// selection on shifted-score fitness, per-slot crossover and mutation (slot 0
// never touched), child scores maintained incrementally from the father's.
// Returns the best design ever seen. Deterministic given the seed.
OptimizeResult ga_optimize(const CandidateBatch& batch, const CandidatePool& pool,
                           const GaParams& params, std::uint64_t seed);

// Switch refinement: starting from the best candidate, repeatedly applies the
// best strictly-improving single-site swap per slot (slots 1..n-1, candidates
// drawn from the whole pool, duplicates excluded) until a full sweep changes
// nothing. Parameter-free and deterministic.
OptimizeResult sa_optimize(const CandidateBatch& batch, const CandidatePool& pool);

} // namespace sco

#endif
