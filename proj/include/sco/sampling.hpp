#ifndef SCO_SAMPLING_HPP
#define SCO_SAMPLING_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "sco/acquisition.hpp"
#include "sco/discrepancy.hpp"
#include "sco/point.hpp"

namespace sco {

enum class SampleMode { RsSubsample, RsSequential, Sir };

const char* to_string(SampleMode mode);

struct SamplerParams {
    std::size_t n_min = 0;        // 0 selects 1000 * dim
    std::size_t n_max = 0;        // 0 selects 10 * n_min
    std::size_t num_candidates = 50;
    MaximizerBudget maximizer;    // used only when no argmax is supplied
};

struct CandidateBatch {
    std::vector<Design> designs;
    std::vector<double> d_scores; // reduced discrepancy per design
    std::vector<SampleMode> modes;
};

struct LambdaScreenResult {
    // Indices into the pre-sample set, ordered by ascending (lambda, index),
    // with the matching lambda values.
    std::vector<std::size_t> accepted;
    std::vector<double> lambdas;
    // (n-1)-th smallest lambda over the whole screen; +inf when there are
    // fewer than n-1 pre-samples.
    double lambda_tail = 0.0;
};

// One rejection screen over a frozen pre-sample set: draws v_i ~ U(0,1) in
// index order and forms lambda_i = v_i * phi_max / phi_i. When the tail
// lambda_(n-1) is <= 1 the n-1 smallest-lambda sites are returned (the
// subsample branch), otherwise every site with lambda_i <= 1.
LambdaScreenResult lambda_screen(const PreSampleSet& presamples, double phi_max, std::size_t n,
                                 std::uint64_t seed);

// Importance resampling: draws `count` indices with probability phi_i / S_phi
// with replacement, redrawing duplicates so the returned indices are distinct.
std::vector<std::size_t> sir_resample(const PreSampleSet& presamples, std::size_t count,
                                      std::uint64_t seed);

struct GenerateResult {
    CandidateBatch batch;
    CandidatePool pool;
    PreSampleSet presamples;
    Point x_star;
    double phi_max = 0.0;
};

// The full sampling stage: uniform pre-sampling with cached acquisition
// values, the acquisition argmax anchored at slot 0 of every design,
// rejection screens ordered by lambda with sequential growth of the
// pre-sample set, and an importance-resampling fallback once the set reaches
// its maximum size (after which every later design uses it too). Every site's
// cross term is cached in the returned pool exactly once, and each design is
// scored by the reduced discrepancy.
//
// When `argmax` is supplied the acquisition maximization stage is skipped and
// phi is evaluated exactly once per pre-sample point (including the argmax
// itself when it joins the set); otherwise the maximizer runs internally with
// a derived seed.
GenerateResult generate(const Acquisition& phi, std::size_t batch_size,
                        const SamplerParams& params, std::uint64_t seed,
                        const std::optional<MaximizeResult>& argmax = std::nullopt);

namespace detail {

// Full screen used by generate: all accepted sites in (lambda, index) order
// regardless of the tail branch, plus the tail value.
LambdaScreenResult lambda_screen_full(const PreSampleSet& presamples, double phi_max,
                                      std::size_t n, std::uint64_t seed);

// Weighted draws with replacement (no deduplication); the building block of
// sir_resample and of distributional tests.
std::vector<std::size_t> weighted_draws(const PreSampleSet& presamples, std::size_t count,
                                        std::uint64_t seed);

} // namespace detail

} // namespace sco

#endif
