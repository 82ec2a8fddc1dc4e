#include "sco/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_set>

#include "sco/errors.hpp"
#include "sco/rng.hpp"

namespace sco {

namespace {

constexpr double kSwapTolerance = 1e-14;
constexpr double kFitnessShift = 1e-9;
constexpr double kStallTolerance = 1e-12;
constexpr int kMaxSweeps = 1000;
constexpr int kDuplicateRepairAttempts = 100;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void validate_batch(const CandidateBatch& batch, const CandidatePool& pool) {
    if (batch.designs.empty()) throw ArgumentError("optimize: empty candidate batch");
    if (batch.d_scores.size() != batch.designs.size())
        throw ArgumentError("optimize: one score per candidate design required");
    const std::size_t n = batch.designs.front().size();
    for (const Design& x : batch.designs) {
        if (x.size() != n) throw ArgumentError("optimize: candidate designs differ in size");
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!pool.find(x[i]))
                throw MissingCacheError("optimize: design site missing from the pool");
    }
}

std::size_t best_index(const std::vector<double>& scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] < scores[best]) best = i;
    return best;
}

double population_median(std::vector<double> scores) {
    std::sort(scores.begin(), scores.end());
    std::size_t mid = scores.size() / 2;
    if (scores.size() % 2 == 1) return scores[mid];
    return 0.5 * (scores[mid - 1] + scores[mid]);
}

} // namespace

OptimizeResult ga_optimize(const CandidateBatch& batch, const CandidatePool& pool,
                           const GaParams& params, std::uint64_t seed) {
    validate_batch(batch, pool);
    if (batch.designs.size() < 2)
        throw ArgumentError("ga_optimize: need at least two candidate designs");
    if (!(params.fitness_exponent > 0.0))
        throw ArgumentError("ga_optimize: fitness exponent must be positive");
    if (params.crossover_prob < 0.0 || params.crossover_prob > 1.0 ||
        params.mutation_prob < 0.0 || params.mutation_prob > 1.0)
        throw ArgumentError("ga_optimize: probabilities must lie in [0,1]");

    const auto start = std::chrono::steady_clock::now();
    const std::size_t m = batch.designs.size();
    const std::size_t n = batch.designs.front().size();

    std::vector<Design> population = batch.designs;
    std::vector<double> scores = batch.d_scores;

    std::size_t b = best_index(scores);
    Design best_design = population[b];
    double best_score = scores[b];

    OptimizationTrace trace;
    trace.milestones.push_back({0, best_score});

    Rng rng(mix_seed(seed, 0x6761ull)); // "ga"

    // Roulette draw over fitness (D - D_min + shift)^(-l), computed in a
    // normalized form so large exponents cannot overflow.
    auto select_parent = [&](const std::vector<double>& pop_scores) {
        double d_min = *std::min_element(pop_scores.begin(), pop_scores.end());
        std::vector<long double> cum(pop_scores.size());
        long double acc = 0.0L;
        for (std::size_t i = 0; i < pop_scores.size(); ++i) {
            long double shifted = static_cast<long double>(pop_scores[i] - d_min) + kFitnessShift;
            acc += std::exp(-static_cast<long double>(params.fitness_exponent) *
                            std::log(shifted / kFitnessShift));
            cum[i] = acc;
        }
        long double r = static_cast<long double>(rng.uniform()) * acc;
        for (std::size_t i = 0; i < cum.size(); ++i)
            if (r < cum[i]) return i;
        return cum.size() - 1;
    };

    int stall = 0;
    for (int gen = 1; gen <= params.max_generations; ++gen) {
        std::vector<Design> offspring;
        std::vector<double> offspring_scores;
        offspring.reserve(m);
        offspring_scores.reserve(m);
        // Elitism: the best individual survives unchanged.
        offspring.push_back(best_design);
        offspring_scores.push_back(best_score);

        while (offspring.size() < m) {
            std::size_t fi = select_parent(scores);
            std::size_t mi = select_parent(scores);
            const Design& father = population[fi];
            const Design& mother = population[mi];

            Design child = father;
            for (std::size_t slot = 1; slot < n; ++slot)
                if (rng.uniform() < params.crossover_prob) child.set_site(slot, mother[slot]);
            for (std::size_t slot = 1; slot < n; ++slot)
                if (rng.uniform() < params.mutation_prob)
                    child.set_site(slot, pool.site(rng.integer(pool.size())));

            // Repair duplicate sites by redrawing from the pool.
            for (std::size_t slot = 1; slot < n; ++slot) {
                auto duplicated = [&](const Point& p) {
                    for (std::size_t other = 0; other < n; ++other)
                        if (other != slot && child[other] == p) return true;
                    return false;
                };
                if (!duplicated(child[slot])) continue;
                bool fixed = false;
                for (int attempt = 0; attempt < kDuplicateRepairAttempts && !fixed; ++attempt) {
                    Point p = pool.site(rng.integer(pool.size()));
                    if (!duplicated(p)) {
                        child.set_site(slot, p);
                        fixed = true;
                    }
                }
                if (!fixed && !duplicated(father[slot])) {
                    child.set_site(slot, father[slot]);
                    fixed = true;
                }
                for (std::size_t s = 0; s < pool.size() && !fixed; ++s) {
                    if (!duplicated(pool.site(s))) {
                        child.set_site(slot, pool.site(s));
                        fixed = true;
                    }
                }
            }

            double child_score = scores[fi];
            bool changed = false;
            for (std::size_t slot = 1; slot < n && !changed; ++slot)
                changed = !(child[slot] == father[slot]);
            if (changed) {
                child_score = delta_update(father, child, scores[fi], pool);
                ++trace.delta_evals;
            }
            offspring.push_back(std::move(child));
            offspring_scores.push_back(child_score);
        }

        population = std::move(offspring);
        scores = std::move(offspring_scores);

        std::size_t gb = best_index(scores);
        if (scores[gb] < best_score - kStallTolerance) {
            stall = 0;
        } else {
            ++stall;
        }
        if (scores[gb] < best_score) {
            best_score = scores[gb];
            best_design = population[gb];
            trace.milestones.push_back({trace.delta_evals, best_score});
        }

        TraceEntry entry;
        entry.iteration = gen;
        entry.best_score = best_score;
        entry.pop_median = population_median(scores);
        entry.delta_evals = trace.delta_evals;
        entry.seconds = seconds_since(start);
        trace.iterations.push_back(entry);

        if (stall >= params.stall_generations) break;
    }

    trace.seconds = seconds_since(start);
    return OptimizeResult{std::move(best_design), best_score, std::move(trace)};
}

OptimizeResult sa_optimize(const CandidateBatch& batch, const CandidatePool& pool) {
    validate_batch(batch, pool);
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = batch.designs.front().size();

    std::size_t b = best_index(batch.d_scores);
    Design current = batch.designs[b];
    double score = batch.d_scores[b];

    OptimizationTrace trace;
    trace.milestones.push_back({0, score});

    bool changed = true;
    int sweep = 0;
    while (changed && sweep < kMaxSweeps) {
        changed = false;
        ++sweep;
        int swaps = 0;
        for (std::size_t slot = 1; slot < n; ++slot) {
            double best_delta = 0.0;
            std::size_t best_site = pool.size();
            for (std::size_t s = 0; s < pool.size(); ++s) {
                const Point& cand = pool.site(s);
                if (current.contains(cand)) continue;
                double delta = switch_delta(current, slot, cand, pool);
                ++trace.delta_evals;
                // Strict comparison keeps the lowest-index site on ties.
                if (delta < best_delta) {
                    best_delta = delta;
                    best_site = s;
                }
            }
            if (best_site < pool.size() && best_delta < -kSwapTolerance) {
                current.set_site(slot, pool.site(best_site));
                score += best_delta;
                trace.milestones.push_back({trace.delta_evals, score});
                changed = true;
                ++swaps;
            }
        }
        TraceEntry entry;
        entry.iteration = sweep;
        entry.best_score = score;
        entry.pop_median = score;
        entry.swaps = swaps;
        entry.delta_evals = trace.delta_evals;
        entry.seconds = seconds_since(start);
        trace.iterations.push_back(entry);
    }

    trace.seconds = seconds_since(start);
    return OptimizeResult{std::move(current), score, std::move(trace)};
}

} // namespace sco
