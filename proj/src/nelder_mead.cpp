#include "sco/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "sco/errors.hpp"

namespace sco {

namespace {

void clamp_into(std::vector<double>& x, const std::vector<double>& lo,
                const std::vector<double>& hi) {
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::clamp(x[k], lo[k], hi[k]);
}

} // namespace

NelderMeadResult nelder_mead_minimize(const std::function<double(const std::vector<double>&)>& f,
                                      const std::vector<double>& start,
                                      const std::vector<double>& step,
                                      const std::vector<double>& lo,
                                      const std::vector<double>& hi,
                                      int max_iterations) {
    const std::size_t d = start.size();
    if (d == 0 || step.size() != d || lo.size() != d || hi.size() != d)
        throw ArgumentError("nelder_mead_minimize: inconsistent dimensions");

    int evals = 0;
    auto eval = [&](std::vector<double> x) {
        clamp_into(x, lo, hi);
        ++evals;
        double v = f(x);
        return std::make_pair(std::move(x), std::isfinite(v) ? v : std::numeric_limits<double>::infinity());
    };

    std::vector<std::pair<std::vector<double>, double>> simplex;
    simplex.reserve(d + 1);
    simplex.push_back(eval(start));
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<double> v = start;
        v[k] += step[k] != 0.0 ? step[k] : 1e-3;
        simplex.push_back(eval(std::move(v)));
    }

    auto order = [&] {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const auto& a, const auto& b) { return a.second < b.second; });
    };
    order();

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    for (int it = 0; it < max_iterations; ++it) {
        // Centroid of all but the worst vertex.
        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[i].first[k];
        for (std::size_t k = 0; k < d; ++k) centroid[k] /= static_cast<double>(d);

        const auto& worst = simplex[d];
        std::vector<double> refl(d);
        for (std::size_t k = 0; k < d; ++k)
            refl[k] = centroid[k] + alpha * (centroid[k] - worst.first[k]);
        auto r = eval(refl);

        if (r.second < simplex[0].second) {
            std::vector<double> exp_pt(d);
            for (std::size_t k = 0; k < d; ++k)
                exp_pt[k] = centroid[k] + gamma * (r.first[k] - centroid[k]);
            auto e = eval(std::move(exp_pt));
            simplex[d] = e.second < r.second ? std::move(e) : std::move(r);
        } else if (r.second < simplex[d - 1].second) {
            simplex[d] = std::move(r);
        } else {
            std::vector<double> contr(d);
            for (std::size_t k = 0; k < d; ++k)
                contr[k] = centroid[k] + rho * (worst.first[k] - centroid[k]);
            auto c = eval(std::move(contr));
            if (c.second < worst.second) {
                simplex[d] = std::move(c);
            } else {
                // Shrink towards the best vertex.
                for (std::size_t i = 1; i <= d; ++i) {
                    std::vector<double> v(d);
                    for (std::size_t k = 0; k < d; ++k)
                        v[k] = simplex[0].first[k] + sigma * (simplex[i].first[k] - simplex[0].first[k]);
                    simplex[i] = eval(std::move(v));
                }
            }
        }
        order();

        double spread = simplex[d].second - simplex[0].second;
        if (spread < 1e-12 * (1.0 + std::fabs(simplex[0].second))) break;
    }

    NelderMeadResult result;
    result.x = simplex[0].first;
    result.value = simplex[0].second;
    result.evaluations = evals;
    return result;
}

} // namespace sco
