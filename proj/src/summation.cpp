#include "sco/summation.hpp"

#include <array>

#include "sco/errors.hpp"

namespace sco {

namespace {

long double tree_sum(const double* v, std::size_t n) {
    if (n <= 32) {
        long double s = 0.0L;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t half = n / 2;
    return tree_sum(v, half) + tree_sum(v + half, n - half);
}

// Row kernel with compile-time dimension so the factor product unrolls and
// the four accumulator lanes vectorize.
template <int D>
double row_sum_fixed(const double* const* cols, const double* w, std::size_t n, const double* x) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        double p0 = 1.0, p1 = 1.0, p2 = 1.0, p3 = 1.0;
        for (int k = 0; k < D; ++k) {
            const double* c = cols[k];
            const double xk = x[k];
            p0 *= detail::wd_factor(xk - c[j]);
            p1 *= detail::wd_factor(xk - c[j + 1]);
            p2 *= detail::wd_factor(xk - c[j + 2]);
            p3 *= detail::wd_factor(xk - c[j + 3]);
        }
        acc0 += w[j] * p0;
        acc1 += w[j + 1] * p1;
        acc2 += w[j + 2] * p2;
        acc3 += w[j + 3] * p3;
    }
    for (; j < n; ++j) {
        double p = 1.0;
        for (int k = 0; k < D; ++k) p *= detail::wd_factor(x[k] - cols[k][j]);
        acc0 += w[j] * p;
    }
    return (acc0 + acc1) + (acc2 + acc3);
}

double row_sum_generic(const double* const* cols, const double* w, std::size_t n, std::size_t d,
                       const double* x) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        double p0 = 1.0, p1 = 1.0, p2 = 1.0, p3 = 1.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double* c = cols[k];
            const double xk = x[k];
            p0 *= detail::wd_factor(xk - c[j]);
            p1 *= detail::wd_factor(xk - c[j + 1]);
            p2 *= detail::wd_factor(xk - c[j + 2]);
            p3 *= detail::wd_factor(xk - c[j + 3]);
        }
        acc0 += w[j] * p0;
        acc1 += w[j + 1] * p1;
        acc2 += w[j + 2] * p2;
        acc3 += w[j + 3] * p3;
    }
    for (; j < n; ++j) {
        double p = 1.0;
        for (std::size_t k = 0; k < d; ++k) p *= detail::wd_factor(x[k] - cols[k][j]);
        acc0 += w[j] * p;
    }
    return (acc0 + acc1) + (acc2 + acc3);
}

double row_sum(const double* const* cols, const double* w, std::size_t n, std::size_t d,
               const double* x) {
    switch (d) {
        case 1: return row_sum_fixed<1>(cols, w, n, x);
        case 2: return row_sum_fixed<2>(cols, w, n, x);
        case 3: return row_sum_fixed<3>(cols, w, n, x);
        case 4: return row_sum_fixed<4>(cols, w, n, x);
        case 5: return row_sum_fixed<5>(cols, w, n, x);
        default: return row_sum_generic(cols, w, n, d, x);
    }
}

std::vector<const double*> column_ptrs(const std::vector<std::vector<double>>& cols) {
    std::vector<const double*> p(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) p[k] = cols[k].data();
    return p;
}

} // namespace

double pairwise_sum(std::span<const double> values) {
    return static_cast<double>(tree_sum(values.data(), values.size()));
}

long double pairwise_sum_ext(std::span<const double> values) {
    return tree_sum(values.data(), values.size());
}

double wd_cross_sum(const std::vector<std::vector<double>>& cols,
                    std::span<const double> w, std::size_t n,
                    std::span<const double> x) {
    const std::size_t d = cols.size();
    if (x.size() != d) throw ArgumentError("wd_cross_sum: dimension mismatch");
    auto ptrs = column_ptrs(cols);
    return row_sum(ptrs.data(), w.data(), n, d, x.data());
}

double wd_pair_sum(const std::vector<std::vector<double>>& cols,
                   std::span<const double> w, std::size_t n) {
    const std::size_t d = cols.size();
    auto ptrs = column_ptrs(cols);

    // Off-diagonal half: t[i] = w[i] * sum_{j<i} K(u_i,u_j) w[j].
    std::vector<double> t(n, 0.0);
    std::vector<double> xi(d);
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) xi[k] = cols[k][i];
        t[i] = w[i] * row_sum(ptrs.data(), w.data(), i, d, xi.data());
    }
    long double off = tree_sum(t.data(), n);

    // Diagonal: K(u,u) = 1.5^d.
    for (std::size_t i = 0; i < n; ++i) t[i] = w[i] * w[i];
    long double diag_w = tree_sum(t.data(), n);
    long double diag = diag_w * static_cast<long double>(std::pow(1.5, static_cast<double>(d)));

    return static_cast<double>(2.0L * off + diag);
}

} // namespace sco
