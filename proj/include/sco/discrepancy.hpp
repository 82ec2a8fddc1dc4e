#ifndef SCO_DISCREPANCY_HPP
#define SCO_DISCREPANCY_HPP

#include <cstddef>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "sco/point.hpp"

namespace sco {

// Wrapped discrepancy kernel K(u,v) = prod_k (3/2 - |u_k-v_k| + (u_k-v_k)^2).
// Each factor lies in [5/4, 3/2] on the unit cube, so K is strictly positive.
double kernel_wd(std::span<const double> u, std::span<const double> v);
double kernel_wd(const Point& u, const Point& v);

// Closed-form squared wrapped discrepancy of a design against the uniform
// target: -(4/3)^d + (1/n^2) sum_ij K(x_i,x_j).
double analytic_wd2(const Design& x);

// Pre-sample set U: sites u_i drawn over the unit cube with their acquisition
// values phi_i and the running normalizer S_phi. Append-only; the population
// term A1 is cached lazily and recomputed when the set has grown.
class PreSampleSet {
public:
    PreSampleSet(std::size_t dim, std::size_t n_min, std::size_t n_max);

    // Movable and copyable; the cache guard itself is never transferred.
    PreSampleSet(PreSampleSet&& other) noexcept;
    PreSampleSet& operator=(PreSampleSet&& other) noexcept;
    PreSampleSet(const PreSampleSet& other);
    PreSampleSet& operator=(const PreSampleSet& other);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return phi_.size(); }
    std::size_t n_min() const { return n_min_; }
    std::size_t n_max() const { return n_max_; }

    // phi must be finite and >= 0; u must lie in [0,1]^d.
    void append(const Point& u, double phi);

    double phi(std::size_t i) const { return phi_[i]; }
    const std::vector<double>& phis() const { return phi_; }
    double coord(std::size_t i, std::size_t k) const { return cols_[k][i]; }
    Point point(std::size_t i) const;
    const std::vector<std::vector<double>>& columns() const { return cols_; }

    // Running sum of phi over the set, maintained in extended precision.
    double s_phi() const { return static_cast<double>(s_phi_); }
    // Scratch recomputation of s_phi (tree sum), for consistency checks.
    double s_phi_recomputed() const;

    // Population term A1 = sum_ij K(u_j,u_i) phi_j phi_i / S_phi^2.
    // Lazily computed, cached per set size, safe under concurrent readers.
    double a1() const;
    bool a1_cached() const;

private:
    std::size_t dim_;
    std::size_t n_min_;
    std::size_t n_max_;
    std::vector<std::vector<double>> cols_;
    std::vector<double> phi_;
    long double s_phi_ = 0.0L;
    mutable std::mutex a1_mutex_;
    mutable std::size_t a1_size_ = static_cast<std::size_t>(-1);
    mutable double a1_value_ = 0.0;
};

// Cross term A2(x) = sum_j K(u_j, x) phi_j / S_phi.
double a2_site(const Point& x, const PreSampleSet& presamples);

// Population term A1 of the set (same value as presamples.a1()).
double a1_presample(const PreSampleSet& presamples);

// Within-design term A3 = (1/n^2) sum_ij K(x_j, x_i).
double a3_design(const Design& x);

// Reduced score D- = -(2/n) sum_i a2_values[i] + A3(x); ranks designs
// identically to the full estimate because A1 does not depend on the design.
double d_minus(const Design& x, std::span<const double> a2_values);

struct DiscrepancyParts {
    std::vector<double> a2;
    double a3 = 0.0;
    double d_minus = 0.0;
    std::optional<double> a1;
    std::optional<double> d_full;
};

DiscrepancyParts discrepancy_parts(const Design& x, const PreSampleSet& presamples,
                                   bool with_population_term);

// Full Monte Carlo estimate D^2 = A1 - (2/n) sum_i A2(x_i) + A3.
double d_full_estimate(const Design& x, const PreSampleSet& presamples);

// Candidate pool: every site that may enter a design during optimization,
// with its A2 value computed exactly once. Lookup is by exact coordinates.
class CandidatePool {
public:
    explicit CandidatePool(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return sites_.size(); }

    // Inserts the site if absent (computing A2 against the pre-sample set);
    // returns its pool index either way.
    std::size_t ensure_site(const Point& s, const PreSampleSet& presamples);

    std::optional<std::size_t> find(const Point& s) const;
    const Point& site(std::size_t idx) const { return sites_[idx]; }
    double a2(std::size_t idx) const { return a2_[idx]; }

    // Throws MissingCacheError when the site was never inserted.
    double a2_for(const Point& s) const;

private:
    std::size_t dim_;
    std::vector<Point> sites_;
    std::vector<double> a2_;
    std::unordered_map<Point, std::size_t, PointHash> index_;
};

// Incremental rescore: returns d_new = d_old + delta where delta accounts for
// the slots on which x_old and x_new differ. All changed sites must be in the
// pool. Designs must have equal size and dimension.
double delta_update(const Design& x_old, const Design& x_new, double d_old,
                    const CandidatePool& pool);

// Delta for replacing the site at one slot by s, in O(n d) kernel work:
// the within-design diagonal cancels, so only cross terms against the other
// sites change. Adding the return value to the design's score rescores it.
double switch_delta(const Design& x, std::size_t slot, const Point& s,
                    const CandidatePool& pool);

} // namespace sco

#endif
