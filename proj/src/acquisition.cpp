#include "sco/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "sco/errors.hpp"
#include "sco/nelder_mead.hpp"
#include "sco/rng.hpp"

namespace sco {

namespace {

constexpr double kSigmaFloorStd = 1e-12;
constexpr double kInvSqrt2 = 0.7071067811865476;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr std::uint64_t kStreamScreen = 0x73637265656eull;  // "screen"
constexpr std::uint64_t kStreamStarts = 0x737461727473ull;  // "starts"

} // namespace

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double expected_improvement(double mean, double sigma, double y_best) {
    if (!(sigma > 0.0)) return std::max(y_best - mean, 0.0);
    double z = (y_best - mean) / sigma;
    double ei = (y_best - mean) * normal_cdf(z) + sigma * normal_pdf(z);
    return ei > 0.0 ? ei : 0.0;
}

EiAcquisition::EiAcquisition(const GpModel& model, double y_best)
    : model_(model), y_best_(y_best) {
    if (model.size() == 0) throw ArgumentError("EiAcquisition: empty model");
    if (!std::isfinite(y_best)) throw ArgumentError("EiAcquisition: non-finite incumbent");
}

double EiAcquisition::evaluate(const Point& x) const {
    GpPrediction p = model_.predict(x);
    double sigma = std::sqrt(p.variance);
    if (sigma / model_.y_scale() < kSigmaFloorStd) return std::max(y_best_ - p.mean, 0.0);
    return expected_improvement(p.mean, sigma, y_best_);
}

MaximizeResult maximize_acquisition(const Acquisition& phi, const MaximizerBudget& budget,
                                    std::uint64_t seed) {
    const std::size_t d = phi.dim();
    if (d == 0) throw ArgumentError("maximize_acquisition: zero-dimensional acquisition");

    long probes = 0;
    Point best_point;
    double best_value = -std::numeric_limits<double>::infinity();
    bool have_best = false;

    auto probe = [&](const std::vector<double>& coords) {
        Point p(coords);
        double v = phi.evaluate(p);
        ++probes;
        // Strict comparison keeps the earliest probe on ties.
        if (!have_best || v > best_value) {
            have_best = true;
            best_value = v;
            best_point = std::move(p);
        }
        return v;
    };

    // Stage 1: uniform screen.
    Rng screen_rng(mix_seed(seed, kStreamScreen));
    std::vector<double> screen_best;
    double screen_best_value = -std::numeric_limits<double>::infinity();
    std::vector<double> coords(d);
    for (int i = 0; i < budget.screen_points; ++i) {
        for (std::size_t k = 0; k < d; ++k) coords[k] = screen_rng.uniform();
        double v = probe(coords);
        if (screen_best.empty() || v > screen_best_value) {
            screen_best = coords;
            screen_best_value = v;
        }
    }

    // Stage 2: local refinement from stratified starts plus the screen best.
    const int starts = budget.multistarts > 0 ? budget.multistarts
                                              : 10 * static_cast<int>(d);
    Rng start_rng(mix_seed(seed, kStreamStarts));
    std::vector<std::vector<int>> perm(d, std::vector<int>(starts));
    for (std::size_t k = 0; k < d; ++k) {
        std::iota(perm[k].begin(), perm[k].end(), 0);
        std::shuffle(perm[k].begin(), perm[k].end(), start_rng.engine());
    }

    const std::vector<double> lo(d, 0.0), hi(d, 1.0), step(d, 0.15);
    auto negated = [&](const std::vector<double>& x) { return -probe(x); };
    for (int s = 0; s < starts; ++s) {
        std::vector<double> x0(d);
        for (std::size_t k = 0; k < d; ++k)
            x0[k] = (static_cast<double>(perm[k][s]) + start_rng.uniform()) /
                    static_cast<double>(starts);
        nelder_mead_minimize(negated, x0, step, lo, hi, budget.local_iterations);
    }
    if (!screen_best.empty())
        nelder_mead_minimize(negated, screen_best, step, lo, hi, budget.local_iterations);

    if (!have_best) throw ArgumentError("maximize_acquisition: zero probe budget");
    MaximizeResult out;
    out.x_star = std::move(best_point);
    out.phi_max = best_value;
    out.evaluations = probes;
    return out;
}

} // namespace sco
