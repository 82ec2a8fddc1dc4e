#include "sco/objective.hpp"

#include <cmath>

#include "sco/errors.hpp"
#include "sco/rng.hpp"

namespace sco {

namespace {

constexpr double kBoundsSlack = 1e-9;
constexpr int kPlacementAttempts = 1000;

} // namespace

ObjectiveFunction::ObjectiveFunction(std::string name,
                                     std::vector<std::pair<double, double>> bounds,
                                     std::function<double(const Point&)> fn,
                                     std::optional<KnownMinimum> known_minimum)
    : name_(std::move(name)),
      bounds_(std::move(bounds)),
      fn_(std::move(fn)),
      known_minimum_(std::move(known_minimum)) {
    if (bounds_.empty()) throw ArgumentError("ObjectiveFunction: empty bounds");
    for (const auto& [lo, hi] : bounds_)
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
            throw ArgumentError("ObjectiveFunction: bounds must be finite with lower < upper");
    if (!fn_) throw ArgumentError("ObjectiveFunction: missing evaluator");
    if (known_minimum_ && known_minimum_->location.dim() != bounds_.size())
        throw ArgumentError("ObjectiveFunction: known minimizer dimension mismatch");
}

double ObjectiveFunction::evaluate(const Point& x) const {
    if (x.dim() != dim()) throw ArgumentError("ObjectiveFunction::evaluate: dimension mismatch");
    for (std::size_t k = 0; k < dim(); ++k) {
        double span = bounds_[k].second - bounds_[k].first;
        if (x[k] < bounds_[k].first - kBoundsSlack * span ||
            x[k] > bounds_[k].second + kBoundsSlack * span)
            throw ArgumentError("ObjectiveFunction::evaluate: point outside the domain");
    }
    return fn_(x);
}

double ObjectiveFunction::evaluate_unit(const Point& u) const { return evaluate(from_unit(u)); }

Point ObjectiveFunction::to_unit(const Point& original) const {
    if (original.dim() != dim()) throw ArgumentError("ObjectiveFunction::to_unit: dimension mismatch");
    std::vector<double> c(dim());
    for (std::size_t k = 0; k < dim(); ++k)
        c[k] = (original[k] - bounds_[k].first) / (bounds_[k].second - bounds_[k].first);
    return Point(std::move(c));
}

Point ObjectiveFunction::from_unit(const Point& unit) const {
    if (unit.dim() != dim()) throw ArgumentError("ObjectiveFunction::from_unit: dimension mismatch");
    std::vector<double> c(dim());
    for (std::size_t k = 0; k < dim(); ++k)
        c[k] = bounds_[k].first + unit[k] * (bounds_[k].second - bounds_[k].first);
    return Point(std::move(c));
}

double branin_value(double x1, double x2) {
    const double pi = 3.14159265358979323846;
    const double a = 1.0;
    const double b = 5.1 / (4.0 * pi * pi);
    const double c = 5.0 / pi;
    const double r = 6.0;
    const double s = 10.0;
    const double t = 1.0 / (8.0 * pi);
    double inner = x2 - b * x1 * x1 + c * x1 - r;
    return a * inner * inner + s * (1.0 - t) * std::cos(x1) + s;
}

ObjectiveFunction branin() {
    const double pi = 3.14159265358979323846;
    KnownMinimum known;
    known.location = Point{pi, 2.275};
    known.value = branin_value(pi, 2.275);
    return ObjectiveFunction(
        "branin", {{-5.0, 10.0}, {0.0, 15.0}},
        [](const Point& x) { return branin_value(x[0], x[1]); }, known);
}

ObjectiveFunction gkls_style(const GklsStyleSpec& spec) {
    const std::size_t d = spec.dimension;
    if (d == 0) throw ArgumentError("gkls_style: dimension must be positive");
    if (spec.local_minima == 0) throw ArgumentError("gkls_style: need at least one basin");
    if (!(spec.f_star < 0.0)) throw ArgumentError("gkls_style: global minimum must be negative");
    if (!(spec.radii_lo_frac > 0.0) || !(spec.radii_hi_frac >= spec.radii_lo_frac))
        throw ArgumentError("gkls_style: need 0 < radii_lo_frac <= radii_hi_frac");
    if (!(spec.base_coefficient > 0.0))
        throw ArgumentError("gkls_style: base coefficient must be positive");

    const double diagonal = std::sqrt(static_cast<double>(d));
    const double r_lo = spec.radii_lo_frac * diagonal;
    const double r_hi = spec.radii_hi_frac * diagonal;
    if (2.0 * r_hi >= 1.0)
        throw GeneratorError("gkls_style: basin radii exceed the domain");

    Rng rng(mix_seed(spec.seed, 0x676b6c73ull)); // "gkls"

    struct Basin {
        Point center;
        double radius = 0.0;
        double depth = 0.0;     // local minimum value at the center
        double curvature = 0.0; // quadratic growth inside the basin
    };
    std::vector<Basin> basins;
    basins.reserve(spec.local_minima);

    for (std::size_t k = 0; k < spec.local_minima; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
            double radius = rng.uniform(r_lo, r_hi);
            std::vector<double> c(d);
            for (auto& v : c) v = rng.uniform(radius, 1.0 - radius);
            Point center(std::move(c));
            bool disjoint = true;
            for (const Basin& other : basins) {
                double dist2 = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    double t = center[j] - other.center[j];
                    dist2 += t * t;
                }
                double need = radius + other.radius;
                if (dist2 < need * need) {
                    disjoint = false;
                    break;
                }
            }
            if (!disjoint) continue;
            Basin basin;
            basin.center = std::move(center);
            basin.radius = radius;
            // The first basin carries the global minimum; the others stay in
            // (f_star, 0) with a guard gap so f_star is strictly the lowest.
            basin.depth = k == 0 ? spec.f_star
                                 : rng.uniform(0.8 * spec.f_star, 0.2 * spec.f_star);
            basin.curvature = rng.uniform(0.5, 2.0);
            basins.push_back(std::move(basin));
            placed = true;
        }
        if (!placed)
            throw GeneratorError("gkls_style: could not place disjoint basins; reduce "
                                 "local_minima or the radii");
    }

    std::vector<double> base_center(d);
    for (auto& v : base_center) v = rng.uniform(0.1, 0.9);
    Point base_point(std::move(base_center));
    const double base_coeff = spec.base_coefficient;

    auto fn = [basins, base_point, base_coeff](const Point& x) {
        double base = 0.0;
        for (std::size_t j = 0; j < x.dim(); ++j) {
            double t = x[j] - base_point[j];
            base += t * t;
        }
        base *= base_coeff;
        for (const Basin& basin : basins) {
            double dist2 = 0.0;
            for (std::size_t j = 0; j < x.dim(); ++j) {
                double t = x[j] - basin.center[j];
                dist2 += t * t;
            }
            double rho2 = dist2 / (basin.radius * basin.radius);
            if (rho2 >= 1.0) continue;
            // Smooth bump blend: w(1) = w'(1) = 0 keeps the function C^1 at
            // the basin boundary; w(0) = 1 pins the center value exactly.
            double w = (1.0 - rho2) * (1.0 - rho2);
            return w * (basin.depth + basin.curvature * rho2) + (1.0 - w) * base;
        }
        return base;
    };

    KnownMinimum known;
    known.value = spec.f_star;
    known.location = basins.front().center;

    std::vector<std::pair<double, double>> bounds(d, {0.0, 1.0});
    return ObjectiveFunction("gkls-style", std::move(bounds), std::move(fn), known);
}

} // namespace sco
