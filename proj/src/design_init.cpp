#include "sco/design_init.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "sco/discrepancy.hpp"
#include "sco/errors.hpp"
#include "sco/rng.hpp"

namespace sco {

namespace {

constexpr int kMaxSweeps = 100;

Design assemble(const std::vector<std::vector<double>>& levels,
                const std::vector<std::vector<std::size_t>>& perm) {
    const std::size_t d = perm.size();
    const std::size_t n = perm.front().size();
    std::vector<Point> sites;
    sites.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> c(d);
        for (std::size_t k = 0; k < d; ++k) c[k] = levels[k][perm[k][i]];
        sites.emplace_back(std::move(c));
    }
    return Design(std::move(sites), false);
}

} // namespace

Design initial_design(std::size_t dim, std::size_t n, std::uint64_t seed) {
    if (dim == 0) throw ArgumentError("initial_design: dimension must be positive");
    if (n == 0) throw ArgumentError("initial_design: need at least one site");

    std::vector<std::vector<double>> levels(dim, std::vector<double>(n));
    for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t i = 0; i < n; ++i)
            levels[k][i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);

    Rng rng(mix_seed(seed, 0x6c6873ull)); // "lhs"
    std::vector<std::vector<std::size_t>> perm(dim, std::vector<std::size_t>(n));
    for (std::size_t k = 0; k < dim; ++k) {
        std::iota(perm[k].begin(), perm[k].end(), std::size_t{0});
        std::shuffle(perm[k].begin(), perm[k].end(), rng.engine());
    }

    double score = analytic_wd2(assemble(levels, perm));

    // Swap descent: exchanging two rows' levels within one coordinate keeps
    // the Latin property; accept the first strictly improving swap per scan.
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool improved = false;
        for (std::size_t k = 0; k < dim; ++k)
            for (std::size_t i = 0; i + 1 < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    std::swap(perm[k][i], perm[k][j]);
                    double trial = analytic_wd2(assemble(levels, perm));
                    if (trial < score - 1e-14) {
                        score = trial;
                        improved = true;
                    } else {
                        std::swap(perm[k][i], perm[k][j]);
                    }
                }
        if (!improved) break;
    }
    return assemble(levels, perm);
}

Design mesh_design(std::size_t dim, std::size_t per_axis) {
    if (dim == 0) throw ArgumentError("mesh_design: dimension must be positive");
    if (per_axis < 2) throw ArgumentError("mesh_design: need at least two levels per axis");
    std::size_t total = 1;
    for (std::size_t k = 0; k < dim; ++k) total *= per_axis;

    std::vector<Point> sites;
    sites.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::vector<double> c(dim);
        std::size_t rest = idx;
        for (std::size_t k = 0; k < dim; ++k) {
            c[k] = static_cast<double>(rest % per_axis) / static_cast<double>(per_axis - 1);
            rest /= per_axis;
        }
        sites.emplace_back(std::move(c));
    }
    return Design(std::move(sites), false);
}

} // namespace sco
