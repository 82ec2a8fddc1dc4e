#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "sco/batch_bo.hpp"
#include "sco/errors.hpp"
#include "sco/objective.hpp"
#include "sco/point.hpp"

using namespace sco;

namespace {

// Budgets small enough for unit tests while exercising every stage.
BoConfig quick_config(std::size_t batch_size, int cycles) {
    BoConfig config;
    config.n_init = 8;
    config.batch_size = batch_size;
    config.cycles = cycles;
    config.sampler.n_min = 300;
    config.sampler.n_max = 3000;
    config.sampler.num_candidates = 8;
    config.sampler.maximizer.screen_points = 1500;
    config.sampler.maximizer.multistarts = 4;
    config.sampler.maximizer.local_iterations = 60;
    config.gp.multistarts = 4;
    config.gp.local_iterations = 60;
    return config;
}

ObjectiveFunction test_function(std::uint64_t seed) {
    GklsStyleSpec spec;
    spec.dimension = 2;
    spec.local_minima = 4;
    spec.f_star = -1.0;
    spec.radii_lo_frac = 0.06;
    spec.radii_hi_frac = 0.12;
    spec.seed = seed;
    return gkls_style(spec);
}

bool same_run(const RunRecord& a, const RunRecord& b) {
    if (a.initial_design.size() != b.initial_design.size()) return false;
    for (std::size_t i = 0; i < a.initial_design.size(); ++i)
        if (a.initial_design[i] != b.initial_design[i]) return false;
    if (a.cycles.size() != b.cycles.size()) return false;
    for (std::size_t c = 0; c < a.cycles.size(); ++c) {
        if (a.cycles[c].batch.size() != b.cycles[c].batch.size()) return false;
        for (std::size_t i = 0; i < a.cycles[c].batch.size(); ++i)
            if (a.cycles[c].batch[i] != b.cycles[c].batch[i]) return false;
    }
    return true;
}

} // namespace

TEST_SUITE("batch_bo") {

TEST_CASE("strategy labels round-trip") {
    CHECK(std::string(to_string(Strategy::Sco)) == "SCO");
    CHECK(std::string(to_string(Strategy::SamplingOnly)) == "S only");
    CHECK(std::string(to_string(Strategy::Kb)) == "KB");
    CHECK(std::string(to_string(Strategy::ClMin)) == "CL-min");
    for (Strategy s : {Strategy::Sco, Strategy::SamplingOnly, Strategy::Kb, Strategy::ClMin})
        CHECK(strategy_from_string(to_string(s)) == s);
    CHECK_THROWS_AS(strategy_from_string("mystery"), ArgumentError);
}

TEST_CASE("zero cycles returns just the evaluated initial design") {
    ObjectiveFunction f = test_function(1);
    RunRecord record = run_strategy(f, Strategy::Sco, quick_config(4, 0), 11);
    CHECK(record.cycles.empty());
    CHECK(record.evaluations == 8);
    CHECK(record.initial_design.size() == 8);
    CHECK(record.initial_responses.size() == 8);
    double lowest = *std::min_element(record.initial_responses.begin(),
                                      record.initial_responses.end());
    CHECK(record.initial_incumbent == lowest);
    CHECK(record.final_incumbent() == lowest);
    CHECK(record.incumbents() == std::vector<double>{lowest});
}

TEST_CASE("the incumbent never worsens across cycles") {
    ObjectiveFunction f = test_function(2);
    for (Strategy strategy : {Strategy::Sco, Strategy::SamplingOnly, Strategy::Kb,
                              Strategy::ClMin}) {
        RunRecord record = run_strategy(f, strategy, quick_config(3, 3), 21);
        std::vector<double> incumbents = record.incumbents();
        REQUIRE(incumbents.size() == 4);
        for (std::size_t i = 1; i < incumbents.size(); ++i)
            CHECK(incumbents[i] <= incumbents[i - 1]);
        // The incumbent is the minimum over everything evaluated so far.
        double lowest = record.initial_incumbent;
        for (const CycleRecord& c : record.cycles)
            for (double r : c.responses) lowest = std::min(lowest, r);
        CHECK(record.final_incumbent() == lowest);
    }
}

TEST_CASE("the objective is evaluated exactly once per proposed point") {
    // Fantasy responses must never touch the real objective; only the
    // initial design and the accepted batches may consume evaluations.
    long calls = 0;
    ObjectiveFunction counted(
        "counted-branin", {{-5.0, 10.0}, {0.0, 15.0}},
        [&calls](const Point& x) {
            ++calls;
            return branin_value(x[0], x[1]);
        });
    for (Strategy strategy : {Strategy::Sco, Strategy::Kb}) {
        calls = 0;
        RunRecord record = run_strategy(counted, strategy, quick_config(3, 2), 5);
        CHECK(calls == 8 + 2 * 3);
        CHECK(record.evaluations == calls);
    }
}

TEST_CASE("every strategy proposes the acquisition argmax when the batch is one point") {
    ObjectiveFunction f = test_function(3);
    BoConfig config = quick_config(1, 2);
    RunRecord sco = run_strategy(f, Strategy::Sco, config, 31);
    RunRecord sampling = run_strategy(f, Strategy::SamplingOnly, config, 31);
    RunRecord kb = run_strategy(f, Strategy::Kb, config, 31);
    RunRecord cl = run_strategy(f, Strategy::ClMin, config, 31);
    CHECK(same_run(sco, sampling));
    CHECK(same_run(sco, kb));
    CHECK(same_run(sco, cl));
    CHECK(sco.final_incumbent() == kb.final_incumbent());
    REQUIRE(sco.cycles.size() == 2);
    CHECK(sco.cycles[0].batch.size() == 1);
}

TEST_CASE("batches stay inside the domain and sampling batches stay distinct") {
    ObjectiveFunction f = test_function(4);
    for (Strategy strategy : {Strategy::Sco, Strategy::SamplingOnly}) {
        RunRecord record = run_strategy(f, strategy, quick_config(4, 2), 17);
        for (const CycleRecord& cycle : record.cycles) {
            REQUIRE(cycle.batch.size() == 4);
            std::set<std::vector<double>> distinct;
            for (const Point& x : cycle.batch) {
                for (std::size_t k = 0; k < 2; ++k) {
                    CHECK(x[k] >= f.bounds()[k].first);
                    CHECK(x[k] <= f.bounds()[k].second);
                }
                distinct.insert(x.coords());
            }
            CHECK(distinct.size() == 4);
        }
    }
}

TEST_CASE("sampling strategies report scores and modes, fantasy strategies do not") {
    ObjectiveFunction f = test_function(5);
    BoConfig config = quick_config(4, 1);

    RunRecord sco = run_strategy(f, Strategy::Sco, config, 13);
    const CycleRecord& sc = sco.cycles.front();
    CHECK(sc.candidate_scores.size() == config.sampler.num_candidates);
    CHECK_FALSE(std::isnan(sc.selected_score));
    // The refined design can only match or beat the best sampled candidate.
    double best_candidate = *std::min_element(sc.candidate_scores.begin(),
                                              sc.candidate_scores.end());
    CHECK(sc.selected_score <= best_candidate + 1e-12);
    CHECK(sc.mode_counts[0] + sc.mode_counts[1] + sc.mode_counts[2] ==
          static_cast<long>(config.sampler.num_candidates));
    CHECK(sc.phi_max > 0.0);
    CHECK_FALSE(sc.degenerate_fallback);

    RunRecord sampling = run_strategy(f, Strategy::SamplingOnly, config, 13);
    CHECK(sampling.cycles.front().candidate_scores.size() == 1);
    CHECK(sampling.cycles.front().selected_score ==
          sampling.cycles.front().candidate_scores.front());

    RunRecord kb = run_strategy(f, Strategy::Kb, config, 13);
    const CycleRecord& kc = kb.cycles.front();
    CHECK(kc.candidate_scores.empty());
    CHECK(std::isnan(kc.selected_score));
    CHECK(kc.mode_counts[0] + kc.mode_counts[1] + kc.mode_counts[2] == 0);
}

TEST_CASE("runs are deterministic in the seed") {
    ObjectiveFunction f = test_function(6);
    BoConfig config = quick_config(3, 2);
    RunRecord a = run_strategy(f, Strategy::Sco, config, 41);
    RunRecord b = run_strategy(f, Strategy::Sco, config, 41);
    RunRecord c = run_strategy(f, Strategy::Sco, config, 42);
    CHECK(same_run(a, b));
    CHECK(a.final_incumbent() == b.final_incumbent());
    CHECK_FALSE(same_run(a, c));
}

TEST_CASE("mesh initialization spans the full domain") {
    BoConfig config = quick_config(2, 0);
    config.init = InitDesign::Mesh;
    config.n_init = 16;
    ObjectiveFunction f = branin();
    RunRecord record = run_strategy(f, Strategy::Sco, config, 3);
    REQUIRE(record.initial_design.size() == 16);
    std::set<std::vector<double>> sites;
    for (const Point& x : record.initial_design) sites.insert(x.coords());
    CHECK(sites.count({-5.0, 0.0}) == 1);
    CHECK(sites.count({10.0, 15.0}) == 1);

    config.n_init = 10; // not a power of the mesh level count
    CHECK_THROWS_AS(run_strategy(f, Strategy::Sco, config, 3), ArgumentError);
}

TEST_CASE("run_strategy validates its configuration") {
    ObjectiveFunction f = test_function(7);
    BoConfig config = quick_config(3, 1);
    config.n_init = 3; // needs at least dim + 2
    CHECK_THROWS_AS(run_strategy(f, Strategy::Sco, config, 1), ArgumentError);
    config = quick_config(0, 1);
    CHECK_THROWS_AS(run_strategy(f, Strategy::Sco, config, 1), ArgumentError);
    config = quick_config(3, 1);
    config.cycles = -1;
    CHECK_THROWS_AS(run_strategy(f, Strategy::Sco, config, 1), ArgumentError);
}

TEST_CASE("relative accuracy components and suite averages") {
    CHECK(ara_component(-0.9, -1.0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(ara_component(-1.0, -1.0) == 0.0);
    CHECK(ara_component(0.5, 0.25) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(ara_component(1.0, 0.0), AraUndefinedError);

    std::vector<ObjectiveFunction> suite = {test_function(8), test_function(9)};
    RunRecord first;
    first.initial_incumbent = -0.5;
    RunRecord second;
    second.initial_incumbent = -0.9;
    double ara = compute_ara({first, second}, suite);
    CHECK(ara == doctest::Approx((0.5 + 0.1) / 2.0).epsilon(1e-12));

    CHECK_THROWS_AS(compute_ara({first}, suite), ArgumentError);
    std::vector<ObjectiveFunction> no_min = {
        ObjectiveFunction("plain", {{0.0, 1.0}}, [](const Point& x) { return x[0]; })};
    RunRecord r;
    r.initial_incumbent = 0.5;
    CHECK_THROWS_AS(compute_ara({r}, no_min), AraUndefinedError);
}

} // TEST_SUITE("batch_bo")
