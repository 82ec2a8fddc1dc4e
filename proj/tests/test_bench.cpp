#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sco/bench.hpp"
#include "sco/errors.hpp"

using namespace sco;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(bool(in), "missing file: " << path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

long count_lines(const std::string& text) {
    long lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    return lines;
}

// Scratch directory wiped on construction and destruction.
struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / name) {
        fs::remove_all(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
};

std::string tiny_e1_config(const fs::path& out) {
    return std::string(R"({
        "experiment": "E1-uncertainty",
        "output_dir": ")") +
           out.string() + R"(",
        "replications": 2,
        "batch_sizes": [4],
        "master_seed": 7,
        "objective": "branin",
        "bo": {"sampler": {"n_min": 300, "n_max": 1200, "num_candidates": 6}}
    })";
}

} // namespace

TEST_SUITE("bench") {

TEST_CASE("a minimal config parses with defaults filled in") {
    ExperimentConfig c = parse_config(R"({"experiment": "E3-dimension-sweep"})");
    CHECK(c.experiment == "E3-dimension-sweep");
    CHECK(c.replications == 1);
    CHECK(c.dimensions == std::vector<int>{2});
    CHECK(c.batch_sizes == std::vector<int>{5});
    CHECK(c.strategies == std::vector<std::string>{"SCO", "S only"});
    CHECK(c.objective == "gkls");
    CHECK(c.bo.cycles == 5);
    CHECK(c.bo.sampler.num_candidates == 50);
    CHECK(c.gkls.functions == 20);

    // Experiment-specific defaults.
    CHECK(parse_config(R"({"experiment": "E1-uncertainty"})").objective == "branin");
    CHECK(parse_config(R"({"experiment": "E2-ga-vs-sa"})").strategies ==
          std::vector<std::string>{"GA", "SA"});
}

TEST_CASE("unknown keys are rejected with their full paths") {
    try {
        parse_config(R"({
            "experiment": "E3-dimension-sweep",
            "bogus_key": 1,
            "gkls": {"fstar": -1.0},
            "bo": {"sampler": {"n_mim": 5}, "ga": {"mutation_prob": 2.0}}
        })");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        std::string message = e.what();
        CHECK(message.find("bogus_key: unknown key") != std::string::npos);
        CHECK(message.find("gkls.fstar: unknown key") != std::string::npos);
        CHECK(message.find("bo.sampler.n_mim: unknown key") != std::string::npos);
        CHECK(message.find("bo.ga.mutation_prob") != std::string::npos);
    }
}

TEST_CASE("structural and semantic errors are all collected") {
    CHECK_THROWS_AS(parse_config("not json at all"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"([1, 2, 3])"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({})"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"experiment": "E9-novel"})"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"experiment": "single-run", "replications": 0})"),
                    ValidationError);
    CHECK_THROWS_AS(
        parse_config(R"({"experiment": "E3-dimension-sweep", "dimensions": []})"),
        ValidationError);
    CHECK_THROWS_AS(
        parse_config(R"({"experiment": "E3-dimension-sweep", "objective": "rastrigin"})"),
        ValidationError);
    CHECK_THROWS_AS(
        parse_config(R"({"experiment": "E3-dimension-sweep", "master_seed": -4})"),
        ValidationError);
    // Branin is strictly two-dimensional.
    CHECK_THROWS_AS(parse_config(R"({"experiment": "E3-dimension-sweep",
                                     "objective": "branin", "dimensions": [3]})"),
                    ValidationError);
    // E1 compares the two sampling strategies only.
    CHECK_THROWS_AS(parse_config(R"({"experiment": "E1-uncertainty",
                                     "strategies": ["KB"]})"),
                    ValidationError);
    // E2 owns its strategy pair.
    CHECK_THROWS_AS(parse_config(R"({"experiment": "E2-ga-vs-sa",
                                     "strategies": ["SCO"]})"),
                    ValidationError);
    // single-run wants exactly one of everything.
    CHECK_THROWS_AS(parse_config(R"({"experiment": "single-run"})"), ValidationError);
    CHECK_NOTHROW(parse_config(R"({"experiment": "single-run", "strategies": ["SCO"],
                                   "objective": "branin"})"));
}

TEST_CASE("the config hash tracks content") {
    ExperimentConfig a = parse_config(R"({"experiment": "E3-dimension-sweep"})");
    ExperimentConfig b = parse_config(R"({"experiment": "E3-dimension-sweep"})");
    ExperimentConfig c = parse_config(
        R"({"experiment": "E3-dimension-sweep", "master_seed": 1})");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(c));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("relative output directories honor the environment root") {
    const char* saved = std::getenv("SCOBENCH_OUTPUT_ROOT");
    std::string saved_value = saved ? saved : "";

    unsetenv("SCOBENCH_OUTPUT_ROOT");
    CHECK(resolve_output_dir("results") == fs::path("results"));
    setenv("SCOBENCH_OUTPUT_ROOT", "/data/bench", 1);
    CHECK(resolve_output_dir("results") == fs::path("/data/bench/results"));
    CHECK(resolve_output_dir("/abs/path") == fs::path("/abs/path"));

    if (saved) setenv("SCOBENCH_OUTPUT_ROOT", saved_value.c_str(), 1);
    else unsetenv("SCOBENCH_OUTPUT_ROOT");
}

TEST_CASE("a small design-uncertainty experiment produces records, CSV, and summaries") {
    Scratch scratch("sco-bench-e1");
    ExperimentConfig config = parse_config(tiny_e1_config(scratch.dir));
    RunStatus status = run_experiment(config);
    CHECK(status.cells == 4); // 2 replications x 1 size x 2 strategies
    CHECK(status.failures == 0);
    CHECK(status.output_dir == scratch.dir);

    json manifest = json::parse(read_file(scratch.dir / "manifest.json"));
    CHECK(manifest.at("manifest_hash").get<std::string>() == config_hash(config));
    CHECK(manifest.at("config").at("experiment") == "E1-uncertainty");
    CHECK(manifest.contains("omitted_baselines"));

    long records = 0;
    for (const auto& entry : fs::directory_iterator(scratch.dir / "records"))
        if (entry.path().extension() == ".json") ++records;
    CHECK(records == 4);

    std::string csv = read_file(scratch.dir / "results.csv");
    CHECK(count_lines(csv) == 5); // header + one row per cell
    CHECK(csv.rfind("experiment,strategy,d,n,rep,cycle,", 0) == 0);
    CHECK(csv.find("E1-uncertainty,SCO,2,4,0,") != std::string::npos);
    CHECK(csv.find("E1-uncertainty,S only,2,4,1,") != std::string::npos);

    SummarizeStatus summary = summarize(scratch.dir);
    CHECK(summary.records == 4);
    CHECK(summary.skipped == 0);
    std::string groups = read_file(scratch.dir / "summary" / "groups.csv");
    CHECK(groups.find("SCO-4,d_full,2,") != std::string::npos);
    CHECK(groups.find("S only-4,d_full,2,") != std::string::npos);

    SUBCASE("summaries are byte-identical when regenerated") {
        std::string curves = read_file(scratch.dir / "summary" / "ara_curves.csv");
        summarize(scratch.dir);
        CHECK(read_file(scratch.dir / "summary" / "groups.csv") == groups);
        CHECK(read_file(scratch.dir / "summary" / "ara_curves.csv") == curves);
    }

    SUBCASE("corrupt records are skipped and reported") {
        std::ofstream bad(scratch.dir / "records" / "zz-corrupt.json");
        bad << "{ this is not json";
        bad.close();
        SummarizeStatus tolerant = summarize(scratch.dir);
        CHECK(tolerant.records == 4);
        CHECK(tolerant.skipped == 1);
        REQUIRE(tolerant.problems.size() == 1);
        CHECK(tolerant.problems.front().find("zz-corrupt.json") != std::string::npos);
    }

    SUBCASE("records from another run are refused outright") {
        json rec = json::parse(read_file(scratch.dir / "records" / "e1-sco-n004-rep0000.json"));
        rec["manifest_hash"] = "0000000000000000";
        std::ofstream foreign(scratch.dir / "records" / "zz-foreign.json");
        foreign << rec.dump(1) << "\n";
        foreign.close();
        CHECK_THROWS_AS(summarize(scratch.dir), ValidationError);
    }

    SUBCASE("a directory owned by a different config is not overwritten") {
        ExperimentConfig other = config;
        other.master_seed = 999;
        CHECK_THROWS_AS(run_experiment(other), ValidationError);
        // Re-running the same config into its own directory is fine.
        CHECK_NOTHROW(run_experiment(config));
    }
}

TEST_CASE("summarize refuses a directory without a manifest") {
    Scratch scratch("sco-bench-nomanifest");
    fs::create_directories(scratch.dir);
    CHECK_THROWS_AS(summarize(scratch.dir), ValidationError);
}

TEST_CASE("a single run records the full trajectory") {
    Scratch scratch("sco-bench-single");
    std::string text = std::string(R"({
        "experiment": "single-run",
        "output_dir": ")") +
                       scratch.dir.string() + R"(",
        "strategies": ["SCO"],
        "batch_sizes": [5],
        "master_seed": 3,
        "objective": "branin",
        "bo": {
            "cycles": 1, "n_init": 16, "init": "mesh",
            "sampler": {"n_min": 300, "n_max": 3000, "num_candidates": 6,
                        "maximizer": {"screen_points": 1500, "multistarts": 4,
                                      "local_iterations": 60}},
            "gp": {"multistarts": 4, "local_iterations": 60}
        }
    })";
    ExperimentConfig config = parse_config(text);
    RunStatus status = run_experiment(config);
    CHECK(status.cells == 1);
    CHECK(status.failures == 0);

    json rec = json::parse(read_file(scratch.dir / "records" / "run-sco-d2-n005-rep0000.json"));
    CHECK(rec.at("evaluations").get<long>() == 16 + 5);
    CHECK(rec.at("initial_design").size() == 16);
    CHECK(rec.at("cycles").size() == 1);
    CHECK(rec.at("cycles")[0].at("batch").size() == 5);
    CHECK(rec.at("objective") == "branin");
    CHECK(rec.contains("ara"));
    double initial_ara = rec.at("initial_ara").get<double>();
    double final_ara = rec.at("ara").get<double>();
    CHECK(final_ara <= initial_ara + 1e-12);

    // Header, the initial state, and one row per cycle.
    std::string csv = read_file(scratch.dir / "results.csv");
    CHECK(count_lines(csv) == 3);
    CHECK(csv.find("single-run,SCO,2,5,0,0,") != std::string::npos);
    CHECK(csv.find("single-run,SCO,2,5,0,1,") != std::string::npos);
}

TEST_CASE("optimizer comparisons share their sampled inputs") {
    Scratch scratch("sco-bench-e2");
    std::string text = std::string(R"({
        "experiment": "E2-ga-vs-sa",
        "output_dir": ")") +
                       scratch.dir.string() + R"(",
        "replications": 2,
        "dimensions": [2],
        "batch_sizes": [6],
        "master_seed": 11,
        "gkls": {"functions": 1, "local_minima": 4, "radii_lo_frac": 0.06,
                 "radii_hi_frac": 0.12},
        "bo": {"sampler": {"n_min": 300, "n_max": 3000, "num_candidates": 10,
                           "maximizer": {"screen_points": 1500, "multistarts": 4,
                                         "local_iterations": 60}},
               "gp": {"multistarts": 4, "local_iterations": 60}}
    })";
    ExperimentConfig config = parse_config(text);
    RunStatus status = run_experiment(config);
    CHECK(status.cells == 2);
    CHECK(status.failures == 0);

    json rec = json::parse(read_file(scratch.dir / "records" / "e2-d2-rep0000.json"));
    const double initial_best = rec.at("initial_best").get<double>();
    for (const char* side : {"ga", "sa"}) {
        const json& trace = rec.at(side);
        // Refinement starts from the candidate batch and can only improve.
        CHECK(trace.at("score").get<double>() <= initial_best + 1e-12);
        const json& milestones = trace.at("milestones");
        REQUIRE(milestones.size() >= 1);
        CHECK(milestones[0][0].get<long>() == 0);
        CHECK(milestones[0][1].get<double>() == initial_best);
    }

    summarize(scratch.dir);
    std::string groups = read_file(scratch.dir / "summary" / "groups.csv");
    CHECK(groups.find("GA-6,reduced_score,2,") != std::string::npos);
    CHECK(groups.find("SA-6,reduced_score,2,") != std::string::npos);
}

} // TEST_SUITE("bench")
