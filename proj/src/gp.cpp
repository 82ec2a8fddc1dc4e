#include "sco/gp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sco/errors.hpp"
#include "sco/nelder_mead.hpp"
#include "sco/rng.hpp"
#include "sco/summation.hpp"

namespace sco {

namespace {

constexpr double kScaleFloor = 1e-12;
constexpr double kVarianceFloor = 1e-12;
constexpr double kHalfLog2Pi = 0.9189385332046727;

double correlation(const Point& a, const Point& b, const std::vector<double>& ls) {
    double q = 0.0;
    for (std::size_t k = 0; k < ls.size(); ++k) {
        double t = (a[k] - b[k]) / ls[k];
        q += t * t;
    }
    return std::exp(-0.5 * q);
}

Eigen::MatrixXd correlation_matrix(const std::vector<Point>& x, const std::vector<double>& ls) {
    const std::size_t n = x.size();
    Eigen::MatrixXd r(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        r(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j) {
            double v = correlation(x[i], x[j], ls);
            r(i, j) = v;
            r(j, i) = v;
        }
    }
    return r;
}

struct FactorResult {
    Eigen::MatrixXd chol;       // lower factor of R + nugget*I
    Eigen::VectorXd alpha;      // (R + nugget*I)^{-1} y
    double log_det_half = 0.0;
    bool ok = false;
};

FactorResult try_factorize(const Eigen::MatrixXd& r, const Eigen::VectorXd& y, double nugget) {
    FactorResult out;
    Eigen::MatrixXd k = r;
    k.diagonal().array() += nugget;
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) return out;
    out.chol = llt.matrixL();
    out.alpha = llt.solve(y);
    out.log_det_half = out.chol.diagonal().array().log().sum();
    out.ok = true;
    return out;
}

void validate_training_data(const std::vector<Point>& x, const std::vector<double>& y) {
    if (x.empty() || x.size() != y.size())
        throw ArgumentError("gp: need matching non-empty inputs and responses");
    const std::size_t d = x.front().dim();
    if (d == 0) throw ArgumentError("gp: zero-dimensional inputs");
    for (const Point& p : x) {
        if (p.dim() != d) throw ArgumentError("gp: mixed input dimensions");
        if (!in_unit_cube(p, 1e-12)) throw ArgumentError("gp: input outside the unit cube");
    }
    for (double v : y)
        if (!std::isfinite(v)) throw ArgumentError("gp: non-finite response");
}

} // namespace

GpModel GpModel::build(std::vector<Point> x, std::vector<double> y, GpHyperparams hp,
                       double nugget_ceiling) {
    validate_training_data(x, y);
    const std::size_t n = y.size();
    double mean = pairwise_sum(std::span<const double>(y.data(), n)) / static_cast<double>(n);
    double scale = 1.0;
    if (n >= 2) {
        std::vector<double> sq(n);
        for (std::size_t i = 0; i < n; ++i) sq[i] = (y[i] - mean) * (y[i] - mean);
        double var = pairwise_sum(std::span<const double>(sq.data(), n)) / static_cast<double>(n - 1);
        scale = std::sqrt(var);
        if (!(scale > kScaleFloor)) scale = 1.0;
    }
    return build_with_standardization(std::move(x), std::move(y), std::move(hp), mean, scale,
                                      nugget_ceiling);
}

GpModel GpModel::build_with_standardization(std::vector<Point> x, std::vector<double> y,
                                            GpHyperparams hp, double y_mean, double y_scale,
                                            double nugget_ceiling) {
    validate_training_data(x, y);
    const std::size_t d = x.front().dim();
    if (hp.length_scales.size() != d)
        throw ArgumentError("gp: one length-scale per dimension required");
    for (double l : hp.length_scales)
        if (!(l > 0.0) || !std::isfinite(l)) throw ArgumentError("gp: length-scales must be positive");
    if (!(hp.signal_variance > 0.0)) throw ArgumentError("gp: signal variance must be positive");
    if (!(hp.nugget > 0.0)) throw ArgumentError("gp: nugget must be positive");
    if (!(y_scale > 0.0)) throw ArgumentError("gp: response scale must be positive");

    GpModel m;
    m.x_ = std::move(x);
    m.y_ = std::move(y);
    m.hp_ = std::move(hp);
    m.y_mean_ = y_mean;
    m.y_scale_ = y_scale;
    m.y_std_.resize(m.y_.size());
    for (std::size_t i = 0; i < m.y_.size(); ++i) m.y_std_[i] = (m.y_[i] - y_mean) / y_scale;
    m.factorize(nugget_ceiling);
    return m;
}

void GpModel::factorize(double nugget_ceiling) {
    const std::size_t n = x_.size();
    Eigen::MatrixXd r = correlation_matrix(x_, hp_.length_scales);
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(y_std_.data(), static_cast<Eigen::Index>(n));
    double nugget = hp_.nugget;
    while (true) {
        FactorResult f = try_factorize(r, y, nugget);
        if (f.ok) {
            hp_.nugget = nugget;
            chol_.assign(n * n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j <= i; ++j)
                    chol_[i * n + j] = f.chol(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            alpha_.assign(f.alpha.data(), f.alpha.data() + n);
            log_det_half_ = f.log_det_half;
            return;
        }
        if (nugget >= nugget_ceiling)
            throw IllConditionedDataError("gp: covariance not positive definite at maximum nugget");
        nugget = std::min(nugget * 10.0, nugget_ceiling);
    }
}

GpPrediction GpModel::predict(const Point& x) const {
    const std::size_t n = x_.size();
    if (x.dim() != dim()) throw ArgumentError("gp: predict dimension mismatch");
    Eigen::VectorXd r(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        r(static_cast<Eigen::Index>(i)) = correlation(x, x_[i], hp_.length_scales);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> l(
        chol_.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXd v = l.triangularView<Eigen::Lower>().solve(r);
    Eigen::Map<const Eigen::VectorXd> alpha(alpha_.data(), static_cast<Eigen::Index>(n));

    double mean_std = r.dot(alpha);
    double var_std = hp_.signal_variance * (1.0 + hp_.nugget - v.squaredNorm());
    if (var_std < 0.0) var_std = 0.0;

    GpPrediction out;
    out.mean = mean_std * y_scale_ + y_mean_;
    out.variance = var_std * y_scale_ * y_scale_;
    return out;
}

double GpModel::log_marginal_likelihood() const {
    const double n = static_cast<double>(x_.size());
    Eigen::Map<const Eigen::VectorXd> y(y_std_.data(), static_cast<Eigen::Index>(y_std_.size()));
    Eigen::Map<const Eigen::VectorXd> alpha(alpha_.data(), static_cast<Eigen::Index>(alpha_.size()));
    double quad = y.dot(alpha) / hp_.signal_variance;
    double log_det = n * std::log(hp_.signal_variance) + 2.0 * log_det_half_;
    return -0.5 * quad - 0.5 * log_det - n * kHalfLog2Pi;
}

GpModel GpModel::fantasy_update(const Point& x_new, double y_new) const {
    if (x_new.dim() != dim()) throw ArgumentError("gp: fantasy_update dimension mismatch");
    if (!std::isfinite(y_new)) throw ArgumentError("gp: fantasy_update non-finite response");
    std::vector<Point> x = x_;
    std::vector<double> y = y_;
    x.push_back(x_new);
    y.push_back(y_new);
    return build_with_standardization(std::move(x), std::move(y), hp_, y_mean_, y_scale_);
}

GpModel fit_gp(const std::vector<Point>& x, const std::vector<double>& y, const GpConfig& config) {
    validate_training_data(x, y);
    if (x.size() < 2) throw ArgumentError("fit_gp: need at least two training points");
    const std::size_t n = x.size();
    const std::size_t d = x.front().dim();
    const std::size_t p = d + 1; // log length-scales plus log nugget

    double mean = pairwise_sum(std::span<const double>(y.data(), n)) / static_cast<double>(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (y[i] - mean) * (y[i] - mean);
    double var = pairwise_sum(std::span<const double>(sq.data(), n)) / static_cast<double>(n - 1);
    double scale = std::sqrt(var);
    if (!(scale > kScaleFloor)) scale = 1.0;

    Eigen::VectorXd y_std(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) y_std(static_cast<Eigen::Index>(i)) = (y[i] - mean) / scale;

    // Profiled negative log likelihood over theta = (log l_1..d, log nugget).
    auto negative_mll = [&](const std::vector<double>& theta) {
        std::vector<double> ls(d);
        for (std::size_t k = 0; k < d; ++k) ls[k] = std::exp(theta[k]);
        double nugget = std::exp(theta[d]);
        Eigen::MatrixXd r = correlation_matrix(x, ls);
        FactorResult f = try_factorize(r, y_std, nugget);
        if (!f.ok) return std::numeric_limits<double>::infinity();
        double sigma2 = std::max(y_std.dot(f.alpha) / static_cast<double>(n), kVarianceFloor);
        double mll = -0.5 * static_cast<double>(n) * std::log(sigma2) - f.log_det_half -
                     static_cast<double>(n) * (0.5 + kHalfLog2Pi);
        return -mll;
    };

    std::vector<double> lo(p), hi(p), step(p);
    for (std::size_t k = 0; k < d; ++k) {
        lo[k] = config.log_length_min;
        hi[k] = config.log_length_max;
    }
    lo[d] = config.log_nugget_min;
    hi[d] = config.log_nugget_max;
    for (std::size_t k = 0; k < p; ++k) step[k] = (hi[k] - lo[k]) / 8.0;

    // Stratified start points: one stratum per start in each coordinate,
    // strata visited in a shuffled order per coordinate.
    const int starts = std::max(config.multistarts, 1);
    Rng rng(mix_seed(config.seed, 0x6770666974ull)); // "gpfit"
    std::vector<std::vector<int>> perm(p, std::vector<int>(starts));
    for (std::size_t k = 0; k < p; ++k) {
        std::iota(perm[k].begin(), perm[k].end(), 0);
        std::shuffle(perm[k].begin(), perm[k].end(), rng.engine());
    }

    std::vector<double> best_theta;
    double best_value = std::numeric_limits<double>::infinity();
    for (int s = 0; s < starts; ++s) {
        std::vector<double> theta(p);
        for (std::size_t k = 0; k < p; ++k) {
            double u = (static_cast<double>(perm[k][s]) + rng.uniform()) / static_cast<double>(starts);
            theta[k] = lo[k] + (hi[k] - lo[k]) * u;
        }
        NelderMeadResult local =
            nelder_mead_minimize(negative_mll, theta, step, lo, hi, config.local_iterations);
        if (local.value < best_value) {
            best_value = local.value;
            best_theta = local.x;
        }
    }
    if (!std::isfinite(best_value))
        throw IllConditionedDataError("fit_gp: no hyperparameter setting could be factorized");

    std::vector<double> ls(d);
    for (std::size_t k = 0; k < d; ++k) ls[k] = std::exp(best_theta[k]);
    double nugget = std::exp(best_theta[d]);
    Eigen::MatrixXd r = correlation_matrix(x, ls);
    FactorResult f = try_factorize(r, y_std, nugget);
    if (!f.ok) throw IllConditionedDataError("fit_gp: final factorization failed");
    double sigma2 = std::max(y_std.dot(f.alpha) / static_cast<double>(n), kVarianceFloor);

    GpHyperparams hp;
    hp.length_scales = std::move(ls);
    hp.signal_variance = sigma2;
    hp.nugget = nugget;
    return GpModel::build_with_standardization(x, y, std::move(hp), mean, scale);
}

} // namespace sco
