#ifndef SCO_GP_HPP
#define SCO_GP_HPP

#include <cstdint>
#include <vector>

#include "sco/point.hpp"

namespace sco {

struct GpConfig {
    int multistarts = 16;
    int local_iterations = 150;
    double log_length_min = -4.605170185988091;  // log 0.01
    double log_length_max = 2.302585092994046;   // log 10
    double log_nugget_min = -18.420680743952367; // log 1e-8
    double log_nugget_max = -4.605170185988091;  // log 1e-2
    std::uint64_t seed = 0;
};

struct GpHyperparams {
    std::vector<double> length_scales; // one per input dimension
    double signal_variance = 1.0;      // on the standardized response scale
    double nugget = 1e-8;              // relative jitter added to the correlation diagonal
};

struct GpPrediction {
    double mean = 0.0;
    double variance = 0.0;
};

// Gaussian process with anisotropic squared-exponential correlation
// r(x,x') = exp(-1/2 sum_k (dx_k / l_k)^2) over the unit cube. Responses are
// standardized internally; predictions are reported on the original scale.
class GpModel {
public:
    // Factorizes the covariance at the given hyperparameters. The nugget is
    // raised tenfold (up to the config ceiling) until the factorization
    // succeeds; exhausting the ladder raises IllConditionedDataError.
    static GpModel build(std::vector<Point> x, std::vector<double> y, GpHyperparams hp,
                         double nugget_ceiling = 1e-2);

    // Same, but with a frozen response standardization (used when refitting
    // on augmented data without re-estimating anything).
    static GpModel build_with_standardization(std::vector<Point> x, std::vector<double> y,
                                              GpHyperparams hp, double y_mean, double y_scale,
                                              double nugget_ceiling = 1e-2);

    std::size_t size() const { return x_.size(); }
    std::size_t dim() const { return x_.empty() ? 0 : x_.front().dim(); }
    const GpHyperparams& hyperparams() const { return hp_; }
    double y_mean() const { return y_mean_; }
    double y_scale() const { return y_scale_; }
    const std::vector<Point>& train_x() const { return x_; }
    const std::vector<double>& train_y() const { return y_; }

    // Posterior mean and variance at x (original response scale).
    // The variance includes the nugget and is non-negative.
    GpPrediction predict(const Point& x) const;

    // Profiled log marginal likelihood at the stored hyperparameters.
    double log_marginal_likelihood() const;

    // New model on the training set plus one fake observation, reusing the
    // stored hyperparameters and standardization unchanged.
    GpModel fantasy_update(const Point& x_new, double y_new) const;

private:
    GpModel() = default;
    void factorize(double nugget_ceiling);

    std::vector<Point> x_;
    std::vector<double> y_;      // original scale
    std::vector<double> y_std_;  // standardized
    GpHyperparams hp_;
    double y_mean_ = 0.0;
    double y_scale_ = 1.0;
    std::vector<double> chol_;   // lower factor of R + nugget*I, row-major
    std::vector<double> alpha_;  // (R + nugget*I)^{-1} y_std
    double log_det_half_ = 0.0;  // sum of log diagonal entries of the factor
};

// Maximum-likelihood fit: multistart Nelder-Mead over log length-scales and
// log nugget, signal variance profiled out analytically. Deterministic for a
// fixed seed. Requires at least two training points.
GpModel fit_gp(const std::vector<Point>& x, const std::vector<double>& y, const GpConfig& config);

} // namespace sco

#endif
