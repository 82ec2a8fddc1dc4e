#ifndef SCO_SUMMATION_HPP
#define SCO_SUMMATION_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace sco {

// Pairwise (tree) summation with extended-precision interior accumulation.
// Deterministic for a fixed input order.
double pairwise_sum(std::span<const double> values);
long double pairwise_sum_ext(std::span<const double> values);

namespace detail {

// One per-dimension factor of the wrapped discrepancy kernel.
inline double wd_factor(double delta) {
    double a = std::fabs(delta);
    return 1.5 - a + a * a;
}

} // namespace detail

// Cross sum  sum_{j<n} w[j] * K(u_j, x)  where u_j is read column-wise from
// cols and K is the wrapped discrepancy kernel. Fixed index order.
double wd_cross_sum(const std::vector<std::vector<double>>& cols,
                    std::span<const double> w, std::size_t n,
                    std::span<const double> x);

// Full double sum  sum_i sum_j K(u_i, u_j) w[i] w[j]  over all ordered pairs
// including the diagonal. Uses symmetry (each unordered pair evaluated once);
// row partials are reduced in index order, rows combined by tree summation.
double wd_pair_sum(const std::vector<std::vector<double>>& cols,
                   std::span<const double> w, std::size_t n);

} // namespace sco

#endif
