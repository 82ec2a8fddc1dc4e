#ifndef SCO_NELDER_MEAD_HPP
#define SCO_NELDER_MEAD_HPP

#include <functional>
#include <vector>

namespace sco {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
};

// Bounded Nelder-Mead minimization. Every probe is clamped into [lo, hi]
// before evaluation, so the objective never sees out-of-box points.
// Deterministic given the start point and step.
NelderMeadResult nelder_mead_minimize(const std::function<double(const std::vector<double>&)>& f,
                                      const std::vector<double>& start,
                                      const std::vector<double>& step,
                                      const std::vector<double>& lo,
                                      const std::vector<double>& hi,
                                      int max_iterations);

} // namespace sco

#endif
