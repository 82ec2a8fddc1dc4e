#ifndef SCO_ACQUISITION_HPP
#define SCO_ACQUISITION_HPP

#include <atomic>
#include <cstdint>
#include <functional>

#include "sco/gp.hpp"
#include "sco/point.hpp"

namespace sco {

// One-site acquisition phi over the unit cube. Implementations must return
// finite non-negative values.
class Acquisition {
public:
    virtual ~Acquisition() = default;
    virtual std::size_t dim() const = 0;
    virtual double evaluate(const Point& x) const = 0;
};

double normal_pdf(double z);
double normal_cdf(double z);

// Closed-form expected improvement for a Gaussian with the given posterior
// moments under minimization. sigma <= 0 falls back to max(y_best - mean, 0).
double expected_improvement(double mean, double sigma, double y_best);

// Expected improvement of a GP posterior. Keeps a reference to the model;
// the model must outlive the acquisition. The posterior deviation is
// compared against the numerical floor on the standardized scale, so the
// cutoff does not depend on the units of the response.
class EiAcquisition final : public Acquisition {
public:
    EiAcquisition(const GpModel& model, double y_best);
    std::size_t dim() const override { return model_.dim(); }
    double evaluate(const Point& x) const override;
    double y_best() const { return y_best_; }
    const GpModel& model() const { return model_; }

private:
    const GpModel& model_;
    double y_best_;
};

// phi identically one; sampling from it is uniform sampling.
class UniformAcquisition final : public Acquisition {
public:
    explicit UniformAcquisition(std::size_t dim) : dim_(dim) {}
    std::size_t dim() const override { return dim_; }
    double evaluate(const Point&) const override { return 1.0; }

private:
    std::size_t dim_;
};

// Arbitrary callable acquisition, mainly for tests and diagnostics.
class FunctionAcquisition final : public Acquisition {
public:
    FunctionAcquisition(std::size_t dim, std::function<double(const Point&)> fn)
        : dim_(dim), fn_(std::move(fn)) {}
    std::size_t dim() const override { return dim_; }
    double evaluate(const Point& x) const override { return fn_(x); }

private:
    std::size_t dim_;
    std::function<double(const Point&)> fn_;
};

// Decorator counting evaluate calls, for evaluation accounting.
class CountingAcquisition final : public Acquisition {
public:
    explicit CountingAcquisition(const Acquisition& inner) : inner_(inner) {}
    std::size_t dim() const override { return inner_.dim(); }
    double evaluate(const Point& x) const override {
        count_.fetch_add(1, std::memory_order_relaxed);
        return inner_.evaluate(x);
    }
    long count() const { return count_.load(std::memory_order_relaxed); }
    void reset() { count_.store(0, std::memory_order_relaxed); }

private:
    const Acquisition& inner_;
    mutable std::atomic<long> count_{0};
};

struct MaximizerBudget {
    int screen_points = 10000;
    int multistarts = 0; // 0 selects 10 * dim
    int local_iterations = 200;
};

struct MaximizeResult {
    Point x_star;
    double phi_max = 0.0;
    long evaluations = 0;
};

// Global maximization of phi over the unit cube: a uniform screen followed by
// multistart local refinement from stratified starts plus the screen best.
// Every probe participates in the final argmax; ties keep the earliest probe,
// so a flat acquisition returns the first screened point. Deterministic for a
// fixed seed.
MaximizeResult maximize_acquisition(const Acquisition& phi, const MaximizerBudget& budget,
                                    std::uint64_t seed);

} // namespace sco

#endif
