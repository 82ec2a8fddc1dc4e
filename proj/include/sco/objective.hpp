#ifndef SCO_OBJECTIVE_HPP
#define SCO_OBJECTIVE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sco/point.hpp"

namespace sco {

struct KnownMinimum {
    double value = 0.0;
    Point location; // original domain
};

// Deterministic objective over a finite box, evaluated in its original
// domain. All modeling happens in the unit cube; the affine maps below are
// the only bridge between the two coordinate systems.
class ObjectiveFunction {
public:
    ObjectiveFunction(std::string name, std::vector<std::pair<double, double>> bounds,
                      std::function<double(const Point&)> fn,
                      std::optional<KnownMinimum> known_minimum = std::nullopt);

    const std::string& name() const { return name_; }
    std::size_t dim() const { return bounds_.size(); }
    const std::vector<std::pair<double, double>>& bounds() const { return bounds_; }
    const std::optional<KnownMinimum>& known_minimum() const { return known_minimum_; }

    // Evaluates at an original-domain point (small out-of-box slack allowed).
    double evaluate(const Point& x) const;
    // Evaluates at a unit-cube point.
    double evaluate_unit(const Point& u) const;

    Point to_unit(const Point& original) const;
    Point from_unit(const Point& unit) const;

private:
    std::string name_;
    std::vector<std::pair<double, double>> bounds_;
    std::function<double(const Point&)> fn_;
    std::optional<KnownMinimum> known_minimum_;
};

// The standard two-dimensional Branin function on [-5,10] x [0,15] with its
// known minimum value at (pi, 2.275).
ObjectiveFunction branin();
double branin_value(double x1, double x2);

// Seeded random multimodal generator: a quadratic bowl perturbed by M
// disjoint smooth basins, one of which is deepened to the prescribed global
// minimum. A documented stand-in for the GKLS suite, not a reproduction.
struct GklsStyleSpec {
    std::size_t dimension = 2;
    std::size_t local_minima = 10;  // M, including the global basin
    double f_star = -1.0;           // global minimum value, must be < 0
    double radii_lo_frac = 0.1;     // basin radius range, fraction of the
    double radii_hi_frac = 0.2;     // domain diagonal
    double base_coefficient = 2.0;  // curvature of the quadratic bowl
    std::uint64_t seed = 0;
};

// Throws GeneratorError when disjoint basins cannot be placed within the
// retry cap (reduce local_minima or the radii).
ObjectiveFunction gkls_style(const GklsStyleSpec& spec);

} // namespace sco

#endif
