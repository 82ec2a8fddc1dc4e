#include "sco/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "sco/errors.hpp"
#include "sco/rng.hpp"

namespace sco {

namespace {

constexpr std::uint64_t kStreamPresample = 0x707265ull;  // "pre"
constexpr std::uint64_t kStreamMaximize = 0x6d6178ull;   // "max"
constexpr std::uint64_t kStreamScreen = 0x736372ull;     // "scr"
constexpr std::uint64_t kStreamGrow = 0x67726full;       // "gro"
constexpr std::uint64_t kStreamSir = 0x736972ull;        // "sir"

double checked_phi(const Acquisition& phi, const Point& x) {
    double v = phi.evaluate(x);
    if (!std::isfinite(v) || v < 0.0)
        throw ArgumentError("sampling: acquisition returned a negative or non-finite value");
    return v;
}

// Cumulative acquisition mass for weighted index draws.
struct SirTable {
    std::vector<double> cum;

    explicit SirTable(const PreSampleSet& presamples) {
        cum.resize(presamples.size());
        long double acc = 0.0L;
        for (std::size_t i = 0; i < presamples.size(); ++i) {
            acc += presamples.phi(i);
            cum[i] = static_cast<double>(acc);
        }
    }

    std::size_t draw(Rng& rng) const {
        double r = rng.uniform() * cum.back();
        auto it = std::upper_bound(cum.begin(), cum.end(), r);
        if (it == cum.end()) --it;
        return static_cast<std::size_t>(it - cum.begin());
    }
};

} // namespace

const char* to_string(SampleMode mode) {
    switch (mode) {
        case SampleMode::RsSubsample: return "rs-subsample";
        case SampleMode::RsSequential: return "rs-sequential";
        case SampleMode::Sir: return "sir";
    }
    return "unknown";
}

namespace detail {

LambdaScreenResult lambda_screen_full(const PreSampleSet& presamples, double phi_max,
                                      std::size_t n, std::uint64_t seed) {
    const std::size_t count = presamples.size();
    if (n < 2) throw ArgumentError("lambda_screen: batch size must be at least 2");
    if (count == 0) throw ArgumentError("lambda_screen: empty pre-sample set");
    if (!(phi_max > 0.0))
        throw DegenerateAcquisitionError("lambda_screen: phi_max is zero");
    double max_phi = 0.0;
    for (std::size_t i = 0; i < count; ++i) max_phi = std::max(max_phi, presamples.phi(i));
    if (phi_max + 1e-9 < max_phi)
        throw ArgumentError("lambda_screen: phi_max below the observed acquisition maximum");

    Rng rng(seed);
    std::vector<double> lambda(count);
    for (std::size_t i = 0; i < count; ++i) {
        double v = rng.uniform();
        double p = presamples.phi(i);
        lambda[i] = p > 0.0 ? v * phi_max / p : std::numeric_limits<double>::infinity();
    }

    LambdaScreenResult out;
    out.lambda_tail = std::numeric_limits<double>::infinity();
    if (count >= n - 1) {
        std::vector<double> copy = lambda;
        std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(n - 2),
                         copy.end());
        out.lambda_tail = copy[n - 2];
    }

    std::vector<std::pair<double, std::size_t>> accepted;
    for (std::size_t i = 0; i < count; ++i)
        if (lambda[i] <= 1.0) accepted.emplace_back(lambda[i], i);
    std::sort(accepted.begin(), accepted.end());

    out.accepted.reserve(accepted.size());
    out.lambdas.reserve(accepted.size());
    for (const auto& [l, i] : accepted) {
        out.accepted.push_back(i);
        out.lambdas.push_back(l);
    }
    return out;
}

std::vector<std::size_t> weighted_draws(const PreSampleSet& presamples, std::size_t count,
                                        std::uint64_t seed) {
    if (count == 0) throw ArgumentError("weighted_draws: count must be positive");
    if (!(presamples.s_phi() > 0.0))
        throw DegenerateAcquisitionError("weighted_draws: acquisition mass is zero");
    SirTable table(presamples);
    Rng rng(seed);
    std::vector<std::size_t> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(table.draw(rng));
    return out;
}

} // namespace detail

LambdaScreenResult lambda_screen(const PreSampleSet& presamples, double phi_max, std::size_t n,
                                 std::uint64_t seed) {
    LambdaScreenResult full = detail::lambda_screen_full(presamples, phi_max, n, seed);
    if (full.lambda_tail <= 1.0) {
        full.accepted.resize(n - 1);
        full.lambdas.resize(n - 1);
    }
    return full;
}

std::vector<std::size_t> sir_resample(const PreSampleSet& presamples, std::size_t count,
                                      std::uint64_t seed) {
    if (count == 0) throw ArgumentError("sir_resample: count must be positive");
    if (!(presamples.s_phi() > 0.0))
        throw DegenerateAcquisitionError("sir_resample: acquisition mass is zero");
    SirTable table(presamples);
    Rng rng(seed);
    std::vector<std::size_t> out;
    std::unordered_set<Point, PointHash> taken;
    const std::size_t cap = 100 * count;
    std::size_t attempts = 0;
    while (out.size() < count) {
        if (attempts++ >= cap)
            throw DistinctSiteShortageError(
                "sir_resample: could not draw enough distinct sites");
        std::size_t idx = table.draw(rng);
        Point p = presamples.point(idx);
        if (taken.count(p)) continue;
        taken.insert(std::move(p));
        out.push_back(idx);
    }
    return out;
}

GenerateResult generate(const Acquisition& phi, std::size_t batch_size,
                        const SamplerParams& params, std::uint64_t seed,
                        const std::optional<MaximizeResult>& argmax) {
    const std::size_t d = phi.dim();
    const std::size_t n = batch_size;
    if (n < 2) throw ArgumentError("generate: batch size must be at least 2");
    const std::size_t n_min = params.n_min != 0 ? params.n_min : 1000 * d;
    const std::size_t n_max = params.n_max != 0 ? params.n_max : 10 * n_min;
    if (n_min < 2 || n_max < n_min)
        throw ArgumentError("generate: need 2 <= N_min <= N_max");
    const std::size_t m = params.num_candidates;
    if (m < 1) throw ArgumentError("generate: need at least one candidate design");

    PreSampleSet presamples(d, n_min, n_max);
    Rng pre_rng(mix_seed(seed, kStreamPresample));
    double max_phi = 0.0;
    for (std::size_t i = 0; i < n_min; ++i) {
        Point u = uniform_point(pre_rng, d);
        double p = checked_phi(phi, u);
        max_phi = std::max(max_phi, p);
        presamples.append(u, p);
    }

    MaximizeResult best = argmax.has_value()
                              ? *argmax
                              : maximize_acquisition(phi, params.maximizer,
                                                     mix_seed(seed, kStreamMaximize));
    const Point x_star = best.x_star;
    // The argmax joins the pre-sample set so its cross term flows through the
    // same caches as every other site.
    double phi_star = checked_phi(phi, x_star);
    max_phi = std::max(max_phi, phi_star);
    presamples.append(x_star, phi_star);

    if (!(presamples.s_phi() > 0.0))
        throw DegenerateAcquisitionError("generate: acquisition vanishes on all pre-samples");

    struct PendingDesign {
        std::vector<Point> sites;
        SampleMode mode;
    };
    std::vector<PendingDesign> pending;
    pending.reserve(m);

    bool sir_started = false;
    std::optional<SirTable> sir_table;

    for (std::size_t k = 0; k < m; ++k) {
        std::vector<Point> sites;
        sites.reserve(n);
        sites.push_back(x_star);
        std::unordered_set<Point, PointHash> taken;
        taken.insert(x_star);
        SampleMode mode = SampleMode::RsSubsample;

        if (!sir_started && presamples.size() < n_max) {
            // Screens guard against a slightly sub-optimal maximizer by using
            // the largest acquisition value seen so far.
            LambdaScreenResult screen = detail::lambda_screen_full(
                presamples, max_phi, n, mix_seed(seed, kStreamScreen, k));
            for (std::size_t t = 0; t < screen.accepted.size() && sites.size() < n; ++t) {
                Point cand = presamples.point(screen.accepted[t]);
                if (taken.count(cand)) continue;
                taken.insert(cand);
                sites.push_back(std::move(cand));
            }
            if (sites.size() < n) {
                mode = SampleMode::RsSequential;
                Rng grow_rng(mix_seed(seed, kStreamGrow, k));
                while (sites.size() < n && presamples.size() < n_max) {
                    Point u = uniform_point(grow_rng, d);
                    double p = checked_phi(phi, u);
                    presamples.append(u, p);
                    max_phi = std::max(max_phi, p);
                    double v = grow_rng.uniform();
                    if (p > 0.0 && v * max_phi / p <= 1.0 && !taken.count(u)) {
                        taken.insert(u);
                        sites.push_back(std::move(u));
                    }
                }
                if (sites.size() < n) {
                    // Budget exhausted mid-design: discard the partial draw
                    // and rebuild this design (and all later ones) by SIR.
                    sir_started = true;
                    sites.resize(1);
                    taken.clear();
                    taken.insert(x_star);
                }
            }
        }

        if (sites.size() < n) {
            sir_started = true;
            mode = SampleMode::Sir;
            if (!sir_table) sir_table.emplace(presamples);
            Rng sir_rng(mix_seed(seed, kStreamSir, k));
            const std::size_t cap = 100 * n;
            std::size_t attempts = 0;
            while (sites.size() < n) {
                if (attempts++ >= cap)
                    throw DistinctSiteShortageError(
                        "generate: SIR could not draw enough distinct sites");
                std::size_t idx = sir_table->draw(sir_rng);
                Point u = presamples.point(idx);
                if (taken.count(u)) continue;
                taken.insert(u);
                sites.push_back(std::move(u));
            }
        }

        pending.push_back(PendingDesign{std::move(sites), mode});
    }

    // The pre-sample set is final here; cache each distinct site's cross term
    // once and score every design against the same set.
    GenerateResult out{CandidateBatch{}, CandidatePool(d), std::move(presamples), x_star,
                       best.phi_max};
    out.pool.ensure_site(x_star, out.presamples);
    out.batch.designs.reserve(m);
    out.batch.d_scores.reserve(m);
    out.batch.modes.reserve(m);
    std::vector<double> a2_values;
    for (auto& pd : pending) {
        a2_values.clear();
        for (const Point& s : pd.sites)
            a2_values.push_back(out.pool.a2(out.pool.ensure_site(s, out.presamples)));
        Design design(std::move(pd.sites), true);
        out.batch.d_scores.push_back(d_minus(design, a2_values));
        out.batch.designs.push_back(std::move(design));
        out.batch.modes.push_back(pd.mode);
    }
    return out;
}

} // namespace sco
