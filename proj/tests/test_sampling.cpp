#include <doctest.h>

#include <cmath>
#include <limits>
#include <unordered_set>

#include "sco/acquisition.hpp"
#include "sco/errors.hpp"
#include "sco/rng.hpp"
#include "sco/sampling.hpp"
#include "support/oracles.hpp"
#include "support/statistics.hpp"

using namespace sco;
using namespace sco_test;

namespace {

double ramp_phi(const Point& p) { return 0.5 + p[0]; }

double peaked_phi(const Point& p) {
    double t = p[0] - 0.3;
    return std::exp(-200.0 * t * t);
}

// phi with a high plateau on [0, 0.2] and a thin but drawable floor elsewhere.
double plateau_phi(const Point& p) { return p[0] <= 0.2 ? 1.0 : 0.05; }

SamplerParams small_params(std::size_t n_min, std::size_t n_max, std::size_t candidates) {
    SamplerParams params;
    params.n_min = n_min;
    params.n_max = n_max;
    params.num_candidates = candidates;
    return params;
}

MaximizeResult fixed_argmax(Point x, double phi_max) {
    MaximizeResult r;
    r.x_star = std::move(x);
    r.phi_max = phi_max;
    return r;
}

void check_sir_absorbing(const std::vector<SampleMode>& modes) {
    bool seen_sir = false;
    for (SampleMode m : modes) {
        if (seen_sir) CHECK(m == SampleMode::Sir);
        if (m == SampleMode::Sir) seen_sir = true;
    }
}

} // namespace

TEST_SUITE("sampling") {

TEST_CASE("mode names") {
    CHECK(std::string(to_string(SampleMode::RsSubsample)) == "rs-subsample");
    CHECK(std::string(to_string(SampleMode::RsSequential)) == "rs-sequential");
    CHECK(std::string(to_string(SampleMode::Sir)) == "sir");
}

TEST_CASE("lambda screen reproduces the definition exactly") {
    PreSampleSet u = make_presamples(1, 50, ramp_phi, 421);
    const double phi_max = 1.5;
    const std::size_t n = 8;
    const std::uint64_t seed = 123;

    // Reconstruct the lambdas from the published draw order.
    Rng rng(seed);
    std::vector<std::pair<double, std::size_t>> expect;
    std::vector<double> all_lambdas;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double lambda = rng.uniform() * phi_max / u.phi(i);
        all_lambdas.push_back(lambda);
        if (lambda <= 1.0) expect.emplace_back(lambda, i);
    }
    std::sort(expect.begin(), expect.end());
    std::sort(all_lambdas.begin(), all_lambdas.end());

    LambdaScreenResult full = detail::lambda_screen_full(u, phi_max, n, seed);
    REQUIRE(full.accepted.size() == expect.size());
    for (std::size_t t = 0; t < expect.size(); ++t) {
        CHECK(full.accepted[t] == expect[t].second);
        CHECK(full.lambdas[t] == expect[t].first);
    }
    CHECK(full.lambda_tail == all_lambdas[n - 2]);

    LambdaScreenResult trimmed = lambda_screen(u, phi_max, n, seed);
    if (full.lambda_tail <= 1.0) {
        REQUIRE(trimmed.accepted.size() == n - 1);
        for (std::size_t t = 0; t < n - 1; ++t) CHECK(trimmed.accepted[t] == expect[t].second);
    } else {
        CHECK(trimmed.accepted.size() == full.accepted.size());
    }
}

TEST_CASE("flat acquisition screen returns the n-1 smallest draws") {
    PreSampleSet u = make_presamples(2, 200, [](const Point&) { return 1.0; }, 5);
    LambdaScreenResult r = lambda_screen(u, 1.0, 6, 77);
    REQUIRE(r.accepted.size() == 5);
    CHECK(std::is_sorted(r.lambdas.begin(), r.lambdas.end()));
    CHECK(r.lambda_tail == r.lambdas.back());
    CHECK(r.lambda_tail <= 1.0);
}

TEST_CASE("zero-acquisition sites are never accepted") {
    PreSampleSet u(1, 10, 100);
    for (int i = 0; i < 10; ++i) u.append(Point{i / 10.0}, i % 2 == 0 ? 1.0 : 0.0);
    LambdaScreenResult r = detail::lambda_screen_full(u, 1.0, 3, 9);
    for (std::size_t idx : r.accepted) CHECK(u.phi(idx) > 0.0);
}

TEST_CASE("screen input validation") {
    PreSampleSet u = make_presamples(1, 20, ramp_phi, 3);
    CHECK_THROWS_AS(lambda_screen(u, 1.5, 1, 1), ArgumentError);
    CHECK_THROWS_AS(lambda_screen(u, 0.0, 4, 1), DegenerateAcquisitionError);
    // Claimed maximum below an observed acquisition value.
    CHECK_THROWS_AS(lambda_screen(u, 0.4, 4, 1), ArgumentError);
}

TEST_CASE("tail is infinite when the set is smaller than the design") {
    PreSampleSet u = make_presamples(1, 3, ramp_phi, 11);
    LambdaScreenResult r = detail::lambda_screen_full(u, 1.5, 10, 2);
    CHECK(r.lambda_tail == std::numeric_limits<double>::infinity());
}

TEST_CASE("accepted lambdas are uniform") {
    PreSampleSet u = make_presamples(1, 2000, ramp_phi, 8);
    LambdaScreenResult r = detail::lambda_screen_full(u, 1.5, 10, 31);
    REQUIRE(r.lambdas.size() > 800);
    double d = ks_statistic_uniform(r.lambdas);
    CHECK(ks_pvalue(d, r.lambdas.size()) > 0.01);
}

TEST_CASE("weighted draws follow the acquisition mass") {
    PreSampleSet two(1, 2, 20);
    two.append(Point{0.25}, 1.0);
    two.append(Point{0.75}, 3.0);
    std::vector<std::size_t> draws = detail::weighted_draws(two, 100000, 17);
    std::size_t heavy = 0;
    for (std::size_t idx : draws) heavy += idx == 1 ? 1 : 0;
    double freq = static_cast<double>(heavy) / static_cast<double>(draws.size());
    CHECK(std::fabs(freq - 0.75) < 0.01);
}

TEST_CASE("weighted draws over equal masses are uniform") {
    PreSampleSet u = make_presamples(1, 100, [](const Point&) { return 2.0; }, 41);
    std::vector<std::size_t> draws = detail::weighted_draws(u, 100000, 19);
    std::vector<long> counts(u.size(), 0);
    for (std::size_t idx : draws) counts[idx] += 1;
    std::vector<double> probs(u.size(), 1.0 / static_cast<double>(u.size()));
    double stat = chi_square_statistic(counts, probs, static_cast<long>(draws.size()));
    CHECK(chi_square_pvalue(stat, static_cast<double>(u.size() - 1)) > 0.01);
}

TEST_CASE("importance resampling matches the normalized acquisition per bin") {
    PreSampleSet u = make_presamples(1, 1000, ramp_phi, 23);
    std::vector<std::size_t> draws = detail::weighted_draws(u, 100000, 29);
    const std::size_t bins = 10;
    std::vector<double> mass(bins, 0.0);
    std::vector<long> counts(bins, 0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        auto b = std::min<std::size_t>(bins - 1,
                                       static_cast<std::size_t>(u.point(i)[0] * bins));
        mass[b] += u.phi(i);
    }
    double total_mass = 0.0;
    for (double m : mass) total_mass += m;
    for (double& m : mass) m /= total_mass;
    for (std::size_t idx : draws) {
        auto b = std::min<std::size_t>(bins - 1,
                                       static_cast<std::size_t>(u.point(idx)[0] * bins));
        counts[b] += 1;
    }
    double stat = chi_square_statistic(counts, mass, static_cast<long>(draws.size()));
    CHECK(chi_square_pvalue(stat, static_cast<double>(bins - 1)) > 0.01);
}

TEST_CASE("sir_resample returns distinct sites and honors the mass") {
    PreSampleSet u = make_presamples(2, 400, [](const Point& p) { return 0.1 + p[0] + p[1]; }, 13);
    std::vector<std::size_t> picks = sir_resample(u, 40, 37);
    CHECK(picks.size() == 40);
    std::unordered_set<Point, PointHash> seen;
    for (std::size_t idx : picks) CHECK(seen.insert(u.point(idx)).second);
}

TEST_CASE("sir_resample fails cleanly when distinct sites run out") {
    PreSampleSet u(1, 3, 30);
    u.append(Point{0.5}, 1.0);
    u.append(Point{0.5}, 1.0);
    u.append(Point{0.9}, 1.0);
    CHECK(sir_resample(u, 2, 7).size() == 2);
    CHECK_THROWS_AS(sir_resample(u, 3, 7), DistinctSiteShortageError);
}

TEST_CASE("generate with a flat acquisition stays in the subsample mode") {
    UniformAcquisition flat(2);
    SamplerParams params = small_params(300, 3000, 10);
    GenerateResult r = generate(flat, 5, params, 101, fixed_argmax(Point{0.5, 0.5}, 1.0));

    CHECK(r.presamples.size() == 301); // pre-samples plus the anchored argmax
    CHECK(r.x_star == Point{0.5, 0.5});
    REQUIRE(r.batch.designs.size() == 10);

    std::unordered_set<Point, PointHash> universe;
    for (std::size_t i = 0; i < r.presamples.size(); ++i) universe.insert(r.presamples.point(i));

    for (std::size_t k = 0; k < r.batch.designs.size(); ++k) {
        const Design& x = r.batch.designs[k];
        CHECK(r.batch.modes[k] == SampleMode::RsSubsample);
        CHECK(x.size() == 5);
        CHECK(x.anchored());
        CHECK(x[0] == r.x_star);
        CHECK(x.all_distinct());
        for (const Point& s : x.sites()) {
            CHECK(universe.count(s) == 1);
            CHECK(r.pool.find(s).has_value());
        }
        // Reported score equals a fresh reduced-discrepancy computation.
        std::vector<double> a2;
        for (const Point& s : x.sites()) a2.push_back(a2_oracle(s, r.presamples));
        CHECK(r.batch.d_scores[k] ==
              doctest::Approx(d_minus_oracle(x, r.presamples)).epsilon(1e-12));
        for (std::size_t i = 0; i < x.size(); ++i)
            CHECK(r.pool.a2_for(x[i]) == doctest::Approx(a2[i]).epsilon(1e-12));
    }
}

TEST_CASE("generate falls back to importance resampling when growth is impossible") {
    FunctionAcquisition phi(1, plateau_phi);
    SamplerParams params = small_params(8, 8, 6);
    GenerateResult r = generate(phi, 5, params, 55, fixed_argmax(Point{0.1}, 1.0));
    CHECK(r.presamples.size() == 9);
    for (SampleMode m : r.batch.modes) CHECK(m == SampleMode::Sir);
    for (const Design& x : r.batch.designs) {
        CHECK(x.size() == 5);
        CHECK(x[0] == r.x_star);
        CHECK(x.all_distinct());
    }
    check_sir_absorbing(r.batch.modes);
}

TEST_CASE("generate grows the pre-sample set under a peaked acquisition") {
    FunctionAcquisition phi(1, peaked_phi);
    SamplerParams params = small_params(40, 4000, 8);
    GenerateResult r = generate(phi, 12, params, 202, fixed_argmax(Point{0.3}, 1.0));

    CHECK(r.presamples.size() > 41);
    bool grew = false;
    for (SampleMode m : r.batch.modes) grew = grew || m == SampleMode::RsSequential;
    CHECK(grew);
    check_sir_absorbing(r.batch.modes);
    for (const Design& x : r.batch.designs) {
        CHECK(x.size() == 12);
        CHECK(x[0] == r.x_star);
        CHECK(x.all_distinct());
    }
    CHECK(r.presamples.s_phi_recomputed() ==
          doctest::Approx(r.presamples.s_phi()).epsilon(1e-9));
}

TEST_CASE("budget exhaustion mid-design discards the partial draw") {
    FunctionAcquisition phi(1, plateau_phi);
    SamplerParams params = small_params(8, 14, 4);
    GenerateResult r = generate(phi, 10, params, 33, fixed_argmax(Point{0.1}, 1.0));
    // Growth stops at the cap, the partial design is discarded, and this and
    // all later designs are rebuilt by importance resampling.
    CHECK(r.presamples.size() == 14);
    for (SampleMode m : r.batch.modes) CHECK(m == SampleMode::Sir);
    for (const Design& x : r.batch.designs) {
        CHECK(x.size() == 10);
        CHECK(x.all_distinct());
    }
}

TEST_CASE("designs concentrate where the acquisition is large") {
    FunctionAcquisition phi(1, peaked_phi);
    SamplerParams params = small_params(1000, 10000, 20);
    GenerateResult r = generate(phi, 10, params, 71, fixed_argmax(Point{0.3}, 1.0));

    double mean_u = 0.0;
    for (std::size_t i = 0; i < r.presamples.size(); ++i) mean_u += r.presamples.phi(i);
    mean_u /= static_cast<double>(r.presamples.size());

    double mean_design = 0.0;
    std::size_t sites = 0;
    for (const Design& x : r.batch.designs)
        for (const Point& s : x.sites()) {
            mean_design += peaked_phi(s);
            ++sites;
        }
    mean_design /= static_cast<double>(sites);
    CHECK(mean_design > 3.0 * mean_u);
}

TEST_CASE("acquisition evaluations equal the pre-sample count when the argmax is given") {
    FunctionAcquisition inner(1, peaked_phi);
    SamplerParams params = small_params(30, 300, 6);

    CountingAcquisition counted(inner);
    GenerateResult r = generate(counted, 8, params, 404, fixed_argmax(Point{0.3}, 1.0));
    CHECK(counted.count() == static_cast<long>(r.presamples.size()));

    // The importance-resampling path adds no evaluations either.
    CountingAcquisition counted_sir(inner);
    SamplerParams tight = small_params(30, 30, 6);
    GenerateResult rs = generate(counted_sir, 8, tight, 404, fixed_argmax(Point{0.3}, 1.0));
    CHECK(counted_sir.count() == static_cast<long>(rs.presamples.size()));
}

TEST_CASE("vanishing acquisition raises a degenerate-acquisition error") {
    FunctionAcquisition zero(2, [](const Point&) { return 0.0; });
    SamplerParams params = small_params(20, 200, 3);
    CHECK_THROWS_AS(generate(zero, 4, params, 1, fixed_argmax(Point{0.5, 0.5}, 0.0)),
                    DegenerateAcquisitionError);
}

TEST_CASE("generate input validation") {
    UniformAcquisition flat(1);
    CHECK_THROWS_AS(generate(flat, 1, small_params(10, 100, 3), 1), ArgumentError);
    CHECK_THROWS_AS(generate(flat, 4, small_params(10, 5, 3), 1), ArgumentError);
    CHECK_THROWS_AS(generate(flat, 4, small_params(10, 100, 0), 1), ArgumentError);
    FunctionAcquisition bad(1, [](const Point&) { return -1.0; });
    CHECK_THROWS_AS(generate(bad, 4, small_params(10, 100, 3), 1), ArgumentError);
}

TEST_CASE("generate is deterministic for a fixed seed") {
    FunctionAcquisition phi(2, [](const Point& p) { return 0.2 + p[0] * (1.0 - p[1]); });
    SamplerParams params = small_params(100, 1000, 5);
    GenerateResult a = generate(phi, 6, params, 909, fixed_argmax(Point{1.0, 0.0}, 1.2));
    GenerateResult b = generate(phi, 6, params, 909, fixed_argmax(Point{1.0, 0.0}, 1.2));
    REQUIRE(a.batch.designs.size() == b.batch.designs.size());
    for (std::size_t k = 0; k < a.batch.designs.size(); ++k) {
        CHECK(a.batch.modes[k] == b.batch.modes[k]);
        CHECK(a.batch.d_scores[k] == b.batch.d_scores[k]);
        REQUIRE(a.batch.designs[k].size() == b.batch.designs[k].size());
        for (std::size_t i = 0; i < a.batch.designs[k].size(); ++i)
            CHECK(a.batch.designs[k][i] == b.batch.designs[k][i]);
    }
    GenerateResult c = generate(phi, 6, params, 910, fixed_argmax(Point{1.0, 0.0}, 1.2));
    bool any_difference = false;
    for (std::size_t k = 0; k < c.batch.designs.size(); ++k)
        any_difference = any_difference || !(c.batch.designs[k][1] == a.batch.designs[k][1]);
    CHECK(any_difference);
}

} // TEST_SUITE
