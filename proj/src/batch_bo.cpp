#include "sco/batch_bo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "sco/acquisition.hpp"
#include "sco/design_init.hpp"
#include "sco/discrepancy.hpp"
#include "sco/errors.hpp"
#include "sco/rng.hpp"

namespace sco {

namespace {

constexpr std::uint64_t kStreamInit = 0x696e6974ull; // "init"
constexpr std::uint64_t kStreamFit = 0x666974ull;    // "fit"
constexpr std::uint64_t kStreamAmax = 0x616d6178ull; // "amax"
constexpr std::uint64_t kStreamGen = 0x67656eull;    // "gen"
constexpr std::uint64_t kStreamOpt = 0x6f7074ull;    // "opt"
constexpr std::uint64_t kStreamQei = 0x716569ull;    // "qei"

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::size_t mesh_levels_for(std::size_t dim, std::size_t n_init) {
    std::size_t levels = 2;
    while (true) {
        std::size_t total = 1;
        for (std::size_t k = 0; k < dim; ++k) total *= levels;
        if (total == n_init) return levels;
        if (total > n_init)
            throw ArgumentError("run_strategy: mesh initialization needs n_init = levels^dim");
        ++levels;
    }
}

// Batch selection for the sampling strategies; returns unit-cube points.
struct SelectedBatch {
    std::vector<Point> points;
    double phi_max = 0.0;
    std::vector<double> candidate_scores;
    double selected_score = std::numeric_limits<double>::quiet_NaN();
    long mode_counts[3] = {0, 0, 0};
    bool degenerate_fallback = false;
    double sample_seconds = 0.0;
    double optimize_seconds = 0.0;
};

SelectedBatch select_sco_batch(const Acquisition& phi, const MaximizeResult& argmax,
                               Strategy strategy, const BoConfig& config, std::uint64_t seed,
                               int cycle) {
    SelectedBatch out;
    out.phi_max = argmax.phi_max;
    const std::size_t n = config.batch_size;
    if (n == 1) {
        // A single-point batch is the acquisition argmax for every strategy.
        out.points.push_back(argmax.x_star);
        return out;
    }

    SamplerParams params = config.sampler;
    if (strategy == Strategy::SamplingOnly) params.num_candidates = 1;

    const auto sample_start = std::chrono::steady_clock::now();
    const auto uniform_retry = [&] {
        out.degenerate_fallback = true;
        UniformAcquisition flat(phi.dim());
        MaximizeResult flat_max;
        flat_max.x_star = argmax.x_star;
        flat_max.phi_max = 1.0;
        return generate(flat, n, params, mix_seed(seed, kStreamGen, cycle), flat_max);
    };
    GenerateResult gen = [&] {
        try {
            return generate(phi, n, params, mix_seed(seed, kStreamGen, cycle), argmax);
        } catch (const DegenerateAcquisitionError&) {
            // The acquisition carries no mass anywhere: fall back to the
            // uniform target so the batch still space-fills the domain.
            return uniform_retry();
        } catch (const DistinctSiteShortageError&) {
            // The acquisition mass sits on fewer distinct pre-sample sites
            // than the batch needs; same collapse, same fallback.
            return uniform_retry();
        }
    }();
    out.sample_seconds = seconds_since(sample_start);

    for (SampleMode m : gen.batch.modes) ++out.mode_counts[static_cast<int>(m)];
    out.candidate_scores = gen.batch.d_scores;

    if (strategy == Strategy::SamplingOnly) {
        out.points = gen.batch.designs.front().sites();
        out.selected_score = gen.batch.d_scores.front();
        return out;
    }

    const auto optimize_start = std::chrono::steady_clock::now();
    OptimizeResult opt = config.optimizer == OptimizerChoice::Sa
                             ? sa_optimize(gen.batch, gen.pool)
                             : ga_optimize(gen.batch, gen.pool, config.ga,
                                           mix_seed(seed, kStreamOpt, cycle));
    out.optimize_seconds = seconds_since(optimize_start);
    out.points = opt.design.sites();
    out.selected_score = opt.score;
    return out;
}

SelectedBatch select_fantasy_batch(const GpModel& model, double y_best, Strategy strategy,
                                   const BoConfig& config, const MaximizeResult& argmax,
                                   std::uint64_t seed, int cycle) {
    SelectedBatch out;
    out.phi_max = argmax.phi_max;
    const std::size_t n = config.batch_size;
    out.points.push_back(argmax.x_star);

    GpModel believer = model;
    double believed_best = y_best;
    const double lie_floor = y_best; // constant liar uses the current minimum
    for (std::size_t j = 1; j < n; ++j) {
        const Point& last = out.points.back();
        double lie = strategy == Strategy::Kb ? believer.predict(last).mean : lie_floor;
        believer = believer.fantasy_update(last, lie);
        believed_best = std::min(believed_best, lie);
        EiAcquisition ei(believer, believed_best);
        MaximizeResult step = maximize_acquisition(
            ei, config.sampler.maximizer,
            mix_seed(seed, kStreamQei, static_cast<std::uint64_t>(cycle) * 1024 + j));
        out.points.push_back(step.x_star);
    }
    return out;
}

} // namespace

const char* to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::Sco: return "SCO";
        case Strategy::SamplingOnly: return "S only";
        case Strategy::Kb: return "KB";
        case Strategy::ClMin: return "CL-min";
    }
    return "unknown";
}

Strategy strategy_from_string(const std::string& name) {
    if (name == "SCO" || name == "sco") return Strategy::Sco;
    if (name == "S only" || name == "SamplingOnly" || name == "sampling-only")
        return Strategy::SamplingOnly;
    if (name == "KB" || name == "kb") return Strategy::Kb;
    if (name == "CL-min" || name == "CLMin" || name == "cl-min") return Strategy::ClMin;
    throw ArgumentError("unknown strategy name: " + name);
}

std::vector<double> RunRecord::incumbents() const {
    std::vector<double> out;
    out.reserve(cycles.size() + 1);
    out.push_back(initial_incumbent);
    for (const CycleRecord& c : cycles) out.push_back(c.incumbent);
    return out;
}

RunRecord run_strategy(const ObjectiveFunction& f, Strategy strategy, const BoConfig& config,
                       std::uint64_t seed) {
    const std::size_t d = f.dim();
    const std::size_t n_init = config.n_init != 0 ? config.n_init : 5 * d;
    const std::size_t n = config.batch_size;
    if (n_init < d + 2) throw ArgumentError("run_strategy: need n_init >= dim + 2");
    if (n < 1) throw ArgumentError("run_strategy: batch size must be positive");
    if (config.cycles < 0) throw ArgumentError("run_strategy: cycles must be non-negative");

    RunRecord record;
    record.strategy = to_string(strategy);
    record.seed = seed;

    Design init = config.init == InitDesign::Mesh
                      ? mesh_design(d, mesh_levels_for(d, n_init))
                      : initial_design(d, n_init, mix_seed(seed, kStreamInit));

    std::vector<Point> x_unit;
    std::vector<double> y;
    x_unit.reserve(n_init);
    y.reserve(n_init);
    for (const Point& u : init.sites()) {
        Point original = f.from_unit(u);
        double value = f.evaluate(original);
        ++record.evaluations;
        record.initial_design.push_back(std::move(original));
        record.initial_responses.push_back(value);
        x_unit.push_back(u);
        y.push_back(value);
    }
    double incumbent = *std::min_element(y.begin(), y.end());
    record.initial_incumbent = incumbent;

    for (int cycle = 1; cycle <= config.cycles; ++cycle) {
        CycleRecord cr;

        const auto fit_start = std::chrono::steady_clock::now();
        GpConfig gp_config = config.gp;
        gp_config.seed = mix_seed(seed, kStreamFit, cycle);
        GpModel model = fit_gp(x_unit, y, gp_config);
        cr.fit_seconds = seconds_since(fit_start);

        EiAcquisition ei(model, incumbent);
        const auto maximize_start = std::chrono::steady_clock::now();
        MaximizeResult argmax = maximize_acquisition(ei, config.sampler.maximizer,
                                                     mix_seed(seed, kStreamAmax, cycle));
        cr.maximize_seconds = seconds_since(maximize_start);

        SelectedBatch batch =
            strategy == Strategy::Kb || strategy == Strategy::ClMin
                ? select_fantasy_batch(model, incumbent, strategy, config, argmax, seed, cycle)
                : select_sco_batch(ei, argmax, strategy, config, seed, cycle);

        cr.phi_max = batch.phi_max;
        cr.candidate_scores = std::move(batch.candidate_scores);
        cr.selected_score = batch.selected_score;
        for (int m = 0; m < 3; ++m) cr.mode_counts[m] = batch.mode_counts[m];
        cr.degenerate_fallback = batch.degenerate_fallback;
        cr.sample_seconds = batch.sample_seconds;
        cr.optimize_seconds = batch.optimize_seconds;

        for (const Point& u : batch.points) {
            Point original = f.from_unit(u);
            double value = f.evaluate(original);
            ++record.evaluations;
            incumbent = std::min(incumbent, value);
            cr.batch.push_back(std::move(original));
            cr.responses.push_back(value);
            x_unit.push_back(u);
            y.push_back(value);
        }
        cr.incumbent = incumbent;
        record.cycles.push_back(std::move(cr));
    }
    return record;
}

double ara_component(double y_min, double f_min) {
    if (f_min == 0.0 || !std::isfinite(f_min))
        throw AraUndefinedError("ara: known minimum must be finite and nonzero");
    return (y_min - f_min) / std::fabs(f_min);
}

double compute_ara(const std::vector<RunRecord>& records,
                   const std::vector<ObjectiveFunction>& suite) {
    if (records.empty() || records.size() != suite.size())
        throw ArgumentError("compute_ara: need one record per suite function");
    double total = 0.0;
    for (std::size_t i = 0; i < suite.size(); ++i) {
        if (!suite[i].known_minimum())
            throw AraUndefinedError("ara: suite function lacks a known minimum");
        total += ara_component(records[i].final_incumbent(), suite[i].known_minimum()->value);
    }
    return total / static_cast<double>(suite.size());
}

} // namespace sco
