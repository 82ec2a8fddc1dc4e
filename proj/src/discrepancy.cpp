#include "sco/discrepancy.hpp"

#include <cmath>

#include "sco/errors.hpp"
#include "sco/summation.hpp"

namespace sco {

double kernel_wd(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw ArgumentError("kernel_wd: dimension mismatch");
    if (u.empty()) throw ArgumentError("kernel_wd: empty point");
    double prod = 1.0;
    for (std::size_t k = 0; k < u.size(); ++k) prod *= detail::wd_factor(u[k] - v[k]);
    return prod;
}

double kernel_wd(const Point& u, const Point& v) { return kernel_wd(u.span(), v.span()); }

double analytic_wd2(const Design& x) {
    return a3_design(x) - std::pow(4.0 / 3.0, static_cast<double>(x.dim()));
}

PreSampleSet::PreSampleSet(std::size_t dim, std::size_t n_min, std::size_t n_max)
    : dim_(dim), n_min_(n_min), n_max_(n_max), cols_(dim) {
    if (dim == 0) throw ArgumentError("PreSampleSet: dimension must be positive");
    if (n_min == 0 || n_max < n_min)
        throw ArgumentError("PreSampleSet: need 0 < n_min <= n_max");
    for (auto& c : cols_) c.reserve(n_min);
    phi_.reserve(n_min);
}

PreSampleSet::PreSampleSet(PreSampleSet&& other) noexcept
    : dim_(other.dim_),
      n_min_(other.n_min_),
      n_max_(other.n_max_),
      cols_(std::move(other.cols_)),
      phi_(std::move(other.phi_)),
      s_phi_(other.s_phi_),
      a1_size_(other.a1_size_),
      a1_value_(other.a1_value_) {}

PreSampleSet& PreSampleSet::operator=(PreSampleSet&& other) noexcept {
    if (this != &other) {
        dim_ = other.dim_;
        n_min_ = other.n_min_;
        n_max_ = other.n_max_;
        cols_ = std::move(other.cols_);
        phi_ = std::move(other.phi_);
        s_phi_ = other.s_phi_;
        a1_size_ = other.a1_size_;
        a1_value_ = other.a1_value_;
    }
    return *this;
}

PreSampleSet::PreSampleSet(const PreSampleSet& other)
    : dim_(other.dim_),
      n_min_(other.n_min_),
      n_max_(other.n_max_),
      cols_(other.cols_),
      phi_(other.phi_),
      s_phi_(other.s_phi_),
      a1_size_(other.a1_size_),
      a1_value_(other.a1_value_) {}

PreSampleSet& PreSampleSet::operator=(const PreSampleSet& other) {
    if (this != &other) {
        dim_ = other.dim_;
        n_min_ = other.n_min_;
        n_max_ = other.n_max_;
        cols_ = other.cols_;
        phi_ = other.phi_;
        s_phi_ = other.s_phi_;
        a1_size_ = other.a1_size_;
        a1_value_ = other.a1_value_;
    }
    return *this;
}

void PreSampleSet::append(const Point& u, double phi) {
    if (u.dim() != dim_) throw ArgumentError("PreSampleSet::append: dimension mismatch");
    if (!in_unit_cube(u)) throw ArgumentError("PreSampleSet::append: site outside unit cube");
    if (!std::isfinite(phi) || phi < 0.0)
        throw ArgumentError("PreSampleSet::append: phi must be finite and non-negative");
    for (std::size_t k = 0; k < dim_; ++k) cols_[k].push_back(u[k]);
    phi_.push_back(phi);
    s_phi_ += phi;
}

Point PreSampleSet::point(std::size_t i) const {
    std::vector<double> c(dim_);
    for (std::size_t k = 0; k < dim_; ++k) c[k] = cols_[k][i];
    return Point(std::move(c));
}

double PreSampleSet::s_phi_recomputed() const {
    return pairwise_sum(std::span<const double>(phi_.data(), phi_.size()));
}

double PreSampleSet::a1() const {
    std::lock_guard<std::mutex> lock(a1_mutex_);
    const std::size_t n = phi_.size();
    if (a1_size_ == n) return a1_value_;
    const double s = s_phi();
    if (!(s > 0.0))
        throw DegenerateAcquisitionError("PreSampleSet::a1: acquisition mass is zero");
    double total = wd_pair_sum(cols_, std::span<const double>(phi_.data(), n), n);
    a1_value_ = total / (s * s);
    a1_size_ = n;
    return a1_value_;
}

bool PreSampleSet::a1_cached() const {
    std::lock_guard<std::mutex> lock(a1_mutex_);
    return a1_size_ == phi_.size();
}

double a2_site(const Point& x, const PreSampleSet& presamples) {
    if (x.dim() != presamples.dim()) throw ArgumentError("a2_site: dimension mismatch");
    const double s = presamples.s_phi();
    if (!(s > 0.0)) throw DegenerateAcquisitionError("a2_site: acquisition mass is zero");
    const auto& phis = presamples.phis();
    double total = wd_cross_sum(presamples.columns(),
                                std::span<const double>(phis.data(), phis.size()),
                                presamples.size(), x.span());
    return total / s;
}

double a1_presample(const PreSampleSet& presamples) { return presamples.a1(); }

double a3_design(const Design& x) {
    const std::size_t n = x.size();
    const std::size_t d = x.dim();
    long double off = 0.0L;
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) off += kernel_wd(x[i], x[j]);
    long double diag = static_cast<long double>(n) * std::pow(1.5L, static_cast<long double>(d));
    long double total = 2.0L * off + diag;
    return static_cast<double>(total / (static_cast<long double>(n) * static_cast<long double>(n)));
}

double d_minus(const Design& x, std::span<const double> a2_values) {
    if (a2_values.size() != x.size())
        throw ArgumentError("d_minus: one A2 value per design site required");
    long double sum_a2 = pairwise_sum_ext(a2_values);
    long double n = static_cast<long double>(x.size());
    return static_cast<double>(-(2.0L / n) * sum_a2 + static_cast<long double>(a3_design(x)));
}

DiscrepancyParts discrepancy_parts(const Design& x, const PreSampleSet& presamples,
                                   bool with_population_term) {
    if (x.dim() != presamples.dim())
        throw ArgumentError("discrepancy_parts: dimension mismatch");
    DiscrepancyParts parts;
    parts.a2.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) parts.a2.push_back(a2_site(x[i], presamples));
    parts.a3 = a3_design(x);
    parts.d_minus = d_minus(x, parts.a2);
    if (with_population_term) {
        parts.a1 = presamples.a1();
        parts.d_full = *parts.a1 + parts.d_minus;
    }
    return parts;
}

double d_full_estimate(const Design& x, const PreSampleSet& presamples) {
    auto parts = discrepancy_parts(x, presamples, true);
    return *parts.d_full;
}

std::size_t CandidatePool::ensure_site(const Point& s, const PreSampleSet& presamples) {
    if (s.dim() != dim_) throw ArgumentError("CandidatePool::ensure_site: dimension mismatch");
    auto it = index_.find(s);
    if (it != index_.end()) return it->second;
    double a2 = a2_site(s, presamples);
    sites_.push_back(s);
    a2_.push_back(a2);
    std::size_t idx = sites_.size() - 1;
    index_.emplace(s, idx);
    return idx;
}

std::optional<std::size_t> CandidatePool::find(const Point& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

double CandidatePool::a2_for(const Point& s) const {
    auto it = index_.find(s);
    if (it == index_.end())
        throw MissingCacheError("CandidatePool::a2_for: site has no cached A2 value");
    return a2_[it->second];
}

double delta_update(const Design& x_old, const Design& x_new, double d_old,
                    const CandidatePool& pool) {
    if (x_old.size() != x_new.size() || x_old.dim() != x_new.dim())
        throw ArgumentError("delta_update: designs must agree in size and dimension");
    const std::size_t n = x_old.size();
    long double removed = 0.0L, added = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        if (x_old[i] == x_new[i]) continue;
        removed += pool.a2_for(x_old[i]);
        added += pool.a2_for(x_new[i]);
    }
    long double ln = static_cast<long double>(n);
    long double delta = (2.0L / ln) * removed - (2.0L / ln) * added -
                        static_cast<long double>(a3_design(x_old)) +
                        static_cast<long double>(a3_design(x_new));
    return static_cast<double>(static_cast<long double>(d_old) + delta);
}

double switch_delta(const Design& x, std::size_t slot, const Point& s,
                    const CandidatePool& pool) {
    const std::size_t n = x.size();
    if (slot >= n) throw ArgumentError("switch_delta: slot out of range");
    if (s.dim() != x.dim()) throw ArgumentError("switch_delta: dimension mismatch");
    const Point& old_site = x[slot];
    if (s == old_site) return 0.0;
    long double cross = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == slot) continue;
        cross += kernel_wd(s, x[j]) - kernel_wd(old_site, x[j]);
    }
    long double ln = static_cast<long double>(n);
    long double a3_diff = (2.0L / (ln * ln)) * cross;
    long double a2_diff = pool.a2_for(s) - pool.a2_for(old_site);
    return static_cast<double>(-(2.0L / ln) * a2_diff + a3_diff);
}

} // namespace sco
