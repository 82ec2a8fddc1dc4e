#include "sco/bench.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "sco/acquisition.hpp"
#include "sco/design_init.hpp"
#include "sco/discrepancy.hpp"
#include "sco/errors.hpp"
#include "sco/gp.hpp"
#include "sco/optimize.hpp"
#include "sco/rng.hpp"

namespace sco {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";
constexpr const char* kE1 = "E1-uncertainty";
constexpr const char* kE2 = "E2-ga-vs-sa";
constexpr const char* kE3 = "E3-dimension-sweep";
constexpr const char* kE4 = "E4-batch-size-sweep";
constexpr const char* kSingle = "single-run";

constexpr std::uint64_t kStreamCell = 0x63656c6cull;  // per-cell seeds
constexpr std::uint64_t kStreamSetup = 0x73657475ull; // shared fixtures (fit, argmax)
constexpr std::uint64_t kStreamSuite = 0x73756974ull; // objective suite generation
constexpr std::uint64_t kStreamRun = 0x72756eull;     // run_strategy seeds
constexpr std::uint64_t kStreamOpt = 0x6f7074ull;     // GA seed inside a cell

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Fixed-format double used in every CSV cell so that regenerating a summary
// from the same records is byte-identical.
std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

// File-name fragment for a strategy label ("S only" -> "s-only").
std::string slug(const std::string& label) {
    std::string out;
    for (char c : label) {
        if (c == ' ') out.push_back('-');
        else out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::string pad(long value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%0*ld", width, value);
    return std::string(buf);
}

const char* init_name(InitDesign init) {
    return init == InitDesign::Mesh ? "mesh" : "wd-lhs";
}

const char* optimizer_name(OptimizerChoice c) { return c == OptimizerChoice::Ga ? "ga" : "sa"; }

json modes_json(const long counts[3]) {
    return json{{"rs-subsample", counts[0]}, {"rs-sequential", counts[1]}, {"sir", counts[2]}};
}

json point_json(const Point& p) {
    json arr = json::array();
    for (std::size_t k = 0; k < p.dim(); ++k) arr.push_back(p[k]);
    return arr;
}

json points_json(const std::vector<Point>& pts) {
    json arr = json::array();
    for (const Point& p : pts) arr.push_back(point_json(p));
    return arr;
}

// Canonical config echo. nlohmann::json orders object keys alphabetically,
// so dumping this object is a canonical serialization and its hash is stable.
json config_echo(const ExperimentConfig& c) {
    json j;
    j["experiment"] = c.experiment;
    j["output_dir"] = c.output_dir;
    j["replications"] = c.replications;
    j["dimensions"] = c.dimensions;
    j["batch_sizes"] = c.batch_sizes;
    j["strategies"] = c.strategies;
    j["master_seed"] = c.master_seed;
    j["objective"] = c.objective;
    j["gkls"] = json{{"functions", c.gkls.functions},
                     {"local_minima", c.gkls.local_minima},
                     {"f_star", c.gkls.f_star},
                     {"radii_lo_frac", c.gkls.radii_lo_frac},
                     {"radii_hi_frac", c.gkls.radii_hi_frac},
                     {"base_coefficient", c.gkls.base_coefficient}};
    j["bo"] = json{
        {"n_init", c.bo.n_init},
        {"cycles", c.bo.cycles},
        {"init", init_name(c.bo.init)},
        {"optimizer", optimizer_name(c.bo.optimizer)},
        {"sampler",
         json{{"n_min", c.bo.sampler.n_min},
              {"n_max", c.bo.sampler.n_max},
              {"num_candidates", c.bo.sampler.num_candidates},
              {"maximizer", json{{"screen_points", c.bo.sampler.maximizer.screen_points},
                                 {"multistarts", c.bo.sampler.maximizer.multistarts},
                                 {"local_iterations", c.bo.sampler.maximizer.local_iterations}}}}},
        {"gp", json{{"multistarts", c.bo.gp.multistarts},
                    {"local_iterations", c.bo.gp.local_iterations}}},
        {"ga", json{{"fitness_exponent", c.bo.ga.fitness_exponent},
                    {"crossover_prob", c.bo.ga.crossover_prob},
                    {"mutation_prob", c.bo.ga.mutation_prob},
                    {"max_generations", c.bo.ga.max_generations},
                    {"stall_generations", c.bo.ga.stall_generations}}}};
    return j;
}

// ---------------------------------------------------------------------------
// Config parsing and validation
// ---------------------------------------------------------------------------

struct Problems {
    std::vector<std::string> list;
    void add(const std::string& path, const std::string& message) {
        list.push_back(path + ": " + message);
    }
};

std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

void check_keys(const json& obj, const std::string& base,
                std::initializer_list<const char*> allowed, Problems& problems) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) problems.add(join_path(base, it.key()), "unknown key");
    }
}

const json* field(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

bool read_string(const json& obj, const std::string& base, const char* key, std::string& out,
                 Problems& problems) {
    const json* f = field(obj, key);
    if (!f) return false;
    if (!f->is_string()) {
        problems.add(join_path(base, key), "must be a string");
        return false;
    }
    out = f->get<std::string>();
    return true;
}

bool read_long(const json& obj, const std::string& base, const char* key, long& out,
               Problems& problems) {
    const json* f = field(obj, key);
    if (!f) return false;
    if (!f->is_number_integer()) {
        problems.add(join_path(base, key), "must be an integer");
        return false;
    }
    out = f->get<long>();
    return true;
}

void read_bounded(const json& obj, const std::string& base, const char* key, int& out, long lo,
                  long hi, Problems& problems) {
    long v = 0;
    if (!read_long(obj, base, key, v, problems)) return;
    if (v < lo || v > hi) {
        problems.add(join_path(base, key),
                     "must be between " + std::to_string(lo) + " and " + std::to_string(hi));
        return;
    }
    out = static_cast<int>(v);
}

void read_size(const json& obj, const std::string& base, const char* key, std::size_t& out,
               Problems& problems) {
    long v = 0;
    if (!read_long(obj, base, key, v, problems)) return;
    if (v < 0) {
        problems.add(join_path(base, key), "must be non-negative");
        return;
    }
    out = static_cast<std::size_t>(v);
}

void read_seed(const json& obj, const std::string& base, const char* key, std::uint64_t& out,
               Problems& problems) {
    const json* f = field(obj, key);
    if (!f) return;
    if (!f->is_number_integer() || (f->is_number_integer() && !f->is_number_unsigned() &&
                                    f->get<long long>() < 0)) {
        problems.add(join_path(base, key), "must be a non-negative integer");
        return;
    }
    out = f->get<std::uint64_t>();
}

void read_double(const json& obj, const std::string& base, const char* key, double& out,
                 Problems& problems) {
    const json* f = field(obj, key);
    if (!f) return;
    if (!f->is_number()) {
        problems.add(join_path(base, key), "must be a number");
        return;
    }
    out = f->get<double>();
}

void read_int_list(const json& obj, const std::string& base, const char* key,
                   std::vector<int>& out, long lo, Problems& problems) {
    const json* f = field(obj, key);
    if (!f) return;
    if (!f->is_array() || f->empty()) {
        problems.add(join_path(base, key), "must be a non-empty array of integers");
        return;
    }
    std::vector<int> values;
    for (const json& e : *f) {
        if (!e.is_number_integer() || e.get<long>() < lo) {
            problems.add(join_path(base, key),
                         "entries must be integers >= " + std::to_string(lo));
            return;
        }
        values.push_back(e.get<int>());
    }
    out = std::move(values);
}

bool read_string_list(const json& obj, const std::string& base, const char* key,
                      std::vector<std::string>& out, Problems& problems) {
    const json* f = field(obj, key);
    if (!f) return false;
    if (!f->is_array() || f->empty()) {
        problems.add(join_path(base, key), "must be a non-empty array of strings");
        return false;
    }
    std::vector<std::string> values;
    for (const json& e : *f) {
        if (!e.is_string()) {
            problems.add(join_path(base, key), "entries must be strings");
            return false;
        }
        values.push_back(e.get<std::string>());
    }
    out = std::move(values);
    return true;
}

void parse_gkls(const json& obj, Problems& problems, GklsSuiteConfig& g) {
    const std::string base = "gkls";
    check_keys(obj, base,
               {"functions", "local_minima", "f_star", "radii_lo_frac", "radii_hi_frac",
                "base_coefficient"},
               problems);
    read_bounded(obj, base, "functions", g.functions, 1, 100000, problems);
    read_bounded(obj, base, "local_minima", g.local_minima, 1, 100000, problems);
    read_double(obj, base, "f_star", g.f_star, problems);
    read_double(obj, base, "radii_lo_frac", g.radii_lo_frac, problems);
    read_double(obj, base, "radii_hi_frac", g.radii_hi_frac, problems);
    read_double(obj, base, "base_coefficient", g.base_coefficient, problems);
    if (g.f_star >= 0.0) problems.add(base + ".f_star", "must be negative");
    if (!(g.radii_lo_frac > 0.0) || g.radii_hi_frac < g.radii_lo_frac)
        problems.add(base + ".radii_lo_frac", "radii must satisfy 0 < lo <= hi");
    if (!(g.base_coefficient > 0.0)) problems.add(base + ".base_coefficient", "must be positive");
}

void parse_bo(const json& obj, Problems& problems, BoConfig& bo) {
    const std::string base = "bo";
    check_keys(obj, base, {"n_init", "cycles", "init", "optimizer", "sampler", "gp", "ga"},
               problems);
    read_size(obj, base, "n_init", bo.n_init, problems);
    read_bounded(obj, base, "cycles", bo.cycles, 0, 1000000, problems);
    std::string init;
    if (read_string(obj, base, "init", init, problems)) {
        if (init == "wd-lhs") bo.init = InitDesign::WdLhs;
        else if (init == "mesh") bo.init = InitDesign::Mesh;
        else problems.add(base + ".init", "must be \"wd-lhs\" or \"mesh\"");
    }
    std::string opt;
    if (read_string(obj, base, "optimizer", opt, problems)) {
        if (opt == "sa") bo.optimizer = OptimizerChoice::Sa;
        else if (opt == "ga") bo.optimizer = OptimizerChoice::Ga;
        else problems.add(base + ".optimizer", "must be \"sa\" or \"ga\"");
    }
    if (const json* s = field(obj, "sampler")) {
        const std::string sp = base + ".sampler";
        if (!s->is_object()) {
            problems.add(sp, "must be an object");
        } else {
            check_keys(*s, sp, {"n_min", "n_max", "num_candidates", "maximizer"}, problems);
            read_size(*s, sp, "n_min", bo.sampler.n_min, problems);
            read_size(*s, sp, "n_max", bo.sampler.n_max, problems);
            read_size(*s, sp, "num_candidates", bo.sampler.num_candidates, problems);
            if (bo.sampler.num_candidates < 1)
                problems.add(sp + ".num_candidates", "must be at least 1");
            if (const json* m = field(*s, "maximizer")) {
                const std::string mp = sp + ".maximizer";
                if (!m->is_object()) {
                    problems.add(mp, "must be an object");
                } else {
                    check_keys(*m, mp, {"screen_points", "multistarts", "local_iterations"},
                               problems);
                    read_bounded(*m, mp, "screen_points", bo.sampler.maximizer.screen_points, 1,
                                 100000000, problems);
                    read_bounded(*m, mp, "multistarts", bo.sampler.maximizer.multistarts, 0,
                                 100000, problems);
                    read_bounded(*m, mp, "local_iterations",
                                 bo.sampler.maximizer.local_iterations, 1, 100000000, problems);
                }
            }
        }
    }
    if (const json* g = field(obj, "gp")) {
        const std::string gp = base + ".gp";
        if (!g->is_object()) {
            problems.add(gp, "must be an object");
        } else {
            check_keys(*g, gp, {"multistarts", "local_iterations"}, problems);
            read_bounded(*g, gp, "multistarts", bo.gp.multistarts, 1, 100000, problems);
            read_bounded(*g, gp, "local_iterations", bo.gp.local_iterations, 1, 100000000,
                         problems);
        }
    }
    if (const json* g = field(obj, "ga")) {
        const std::string gp = base + ".ga";
        if (!g->is_object()) {
            problems.add(gp, "must be an object");
        } else {
            check_keys(*g, gp,
                       {"fitness_exponent", "crossover_prob", "mutation_prob", "max_generations",
                        "stall_generations"},
                       problems);
            read_double(*g, gp, "fitness_exponent", bo.ga.fitness_exponent, problems);
            read_double(*g, gp, "crossover_prob", bo.ga.crossover_prob, problems);
            read_double(*g, gp, "mutation_prob", bo.ga.mutation_prob, problems);
            read_bounded(*g, gp, "max_generations", bo.ga.max_generations, 1, 100000000,
                         problems);
            read_bounded(*g, gp, "stall_generations", bo.ga.stall_generations, 1, 100000000,
                         problems);
            if (!(bo.ga.fitness_exponent > 0.0))
                problems.add(gp + ".fitness_exponent", "must be positive");
            if (bo.ga.crossover_prob < 0.0 || bo.ga.crossover_prob > 1.0)
                problems.add(gp + ".crossover_prob", "must lie in [0,1]");
            if (bo.ga.mutation_prob < 0.0 || bo.ga.mutation_prob > 1.0)
                problems.add(gp + ".mutation_prob", "must lie in [0,1]");
        }
    }
}

bool is_run_experiment(const std::string& e) { return e == kE3 || e == kE4 || e == kSingle; }

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }

    Problems problems;
    ExperimentConfig c;
    if (!j.is_object()) {
        throw ValidationError("config: top level must be a JSON object");
    }
    check_keys(j, "",
               {"experiment", "output_dir", "replications", "dimensions", "batch_sizes",
                "strategies", "master_seed", "objective", "gkls", "bo"},
               problems);

    if (!read_string(j, "", "experiment", c.experiment, problems) && !field(j, "experiment"))
        problems.add("experiment", "required");
    read_string(j, "", "output_dir", c.output_dir, problems);
    read_bounded(j, "", "replications", c.replications, 1, 1000000, problems);
    read_int_list(j, "", "dimensions", c.dimensions, 1, problems);
    read_int_list(j, "", "batch_sizes", c.batch_sizes, 1, problems);
    bool strategies_given = read_string_list(j, "", "strategies", c.strategies, problems);
    read_seed(j, "", "master_seed", c.master_seed, problems);
    bool objective_given = read_string(j, "", "objective", c.objective, problems);
    if (const json* g = field(j, "gkls")) {
        if (!g->is_object()) problems.add("gkls", "must be an object");
        else parse_gkls(*g, problems, c.gkls);
    }
    if (const json* b = field(j, "bo")) {
        if (!b->is_object()) problems.add("bo", "must be an object");
        else parse_bo(*b, problems, c.bo);
    }

    // Semantic validation once the structure is known.
    const std::set<std::string> known_experiments = {kE1, kE2, kE3, kE4, kSingle};
    if (!c.experiment.empty() && !known_experiments.count(c.experiment)) {
        problems.add("experiment", "unknown experiment \"" + c.experiment + "\"");
    }
    if (c.objective != "branin" && c.objective != "gkls")
        problems.add("objective", "must be \"branin\" or \"gkls\"");

    if (c.experiment == kE1) {
        if (!objective_given) c.objective = "branin";
        else if (c.objective != "branin")
            problems.add("objective", "E1-uncertainty always measures designs on Branin");
        if (c.dimensions != std::vector<int>{2})
            problems.add("dimensions", "E1-uncertainty is two-dimensional; use [2]");
        for (const std::string& s : c.strategies) {
            if (s != "SCO" && s != "S only")
                problems.add("strategies", "E1-uncertainty compares \"SCO\" and \"S only\"");
        }
        for (int n : c.batch_sizes)
            if (n < 2) problems.add("batch_sizes", "design sizes must be at least 2");
    } else if (c.experiment == kE2) {
        if (!strategies_given) c.strategies = {"GA", "SA"};
        else if (c.strategies != std::vector<std::string>{"GA", "SA"})
            problems.add("strategies",
                         "E2-ga-vs-sa always compares GA and SA; leave strategies unset");
        if (c.objective != "gkls")
            problems.add("objective", "E2-ga-vs-sa runs on the generated multimodal suite");
        for (int n : c.batch_sizes)
            if (n < 2) problems.add("batch_sizes", "design sizes must be at least 2");
        if (c.batch_sizes.size() != 1)
            problems.add("batch_sizes", "E2-ga-vs-sa uses one design size");
    } else if (is_run_experiment(c.experiment)) {
        for (const std::string& s : c.strategies) {
            try {
                strategy_from_string(s);
            } catch (const ArgumentError&) {
                problems.add("strategies", "unknown strategy \"" + s + "\"");
            }
        }
        if (c.experiment == kSingle) {
            if (c.strategies.size() != 1)
                problems.add("strategies", "single-run takes exactly one strategy");
            if (c.dimensions.size() != 1)
                problems.add("dimensions", "single-run takes exactly one dimension");
            if (c.batch_sizes.size() != 1)
                problems.add("batch_sizes", "single-run takes exactly one batch size");
            if (c.replications != 1) problems.add("replications", "single-run runs once");
        }
    }
    if (c.objective == "branin") {
        for (int d : c.dimensions)
            if (d != 2) problems.add("dimensions", "the Branin objective is two-dimensional");
    }

    if (!problems.list.empty()) {
        std::string message = "invalid experiment config:";
        for (const std::string& p : problems.list) message += "\n  - " + p;
        throw ValidationError(message);
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ValidationError("cannot read config file: " + file.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string config_hash(const ExperimentConfig& config) {
    return fnv1a_hex(config_echo(config).dump());
}

std::filesystem::path resolve_output_dir(const std::string& configured) {
    fs::path p(configured);
    if (p.is_absolute()) return p;
    if (const char* root = std::getenv("SCOBENCH_OUTPUT_ROOT")) return fs::path(root) / p;
    return p;
}

namespace {

// ---------------------------------------------------------------------------
// Result persistence
// ---------------------------------------------------------------------------

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("write failed: " + path.string());
}

constexpr const char* kCsvHeader =
    "experiment,strategy,d,n,rep,cycle,incumbent,ara_component,discrepancy,seconds\n";

std::string csv_row(const std::string& experiment, const std::string& strategy, int d, int n,
                    long rep, const std::string& cycle, const std::string& incumbent,
                    const std::string& ara, const std::string& discrepancy,
                    const std::string& seconds) {
    std::string row;
    row += experiment;
    row += ',';
    row += strategy;
    row += ',';
    row += std::to_string(d);
    row += ',';
    row += std::to_string(n);
    row += ',';
    row += std::to_string(rep);
    row += ',';
    row += cycle;
    row += ',';
    row += incumbent;
    row += ',';
    row += ara;
    row += ',';
    row += discrepancy;
    row += ',';
    row += seconds;
    row += '\n';
    return row;
}

struct Sink {
    fs::path records_dir;
    std::string hash;
    std::string csv;
    RunStatus status;

    void record(const std::string& name, const json& body) {
        write_file(records_dir / (name + ".json"), body.dump(1) + "\n");
    }
    void fail(const std::string& cell, const std::exception& e) {
        ++status.failures;
        status.failed_cells.push_back(cell + ": " + e.what());
    }
};

// ---------------------------------------------------------------------------
// E1: distribution of design discrepancies, sampling alone vs SCO
// ---------------------------------------------------------------------------

void run_e1(const ExperimentConfig& c, Sink& sink) {
    ObjectiveFunction f = branin();
    Design mesh = mesh_design(2, 4);
    std::vector<Point> x_unit;
    std::vector<double> y;
    for (const Point& u : mesh.sites()) {
        x_unit.push_back(u);
        y.push_back(f.evaluate_unit(u));
    }
    double y_best = *std::min_element(y.begin(), y.end());

    GpConfig gp_config = c.bo.gp;
    gp_config.seed = mix_seed(c.master_seed, kStreamSetup, 0);
    GpModel model = fit_gp(x_unit, y, gp_config);
    EiAcquisition ei(model, y_best);
    MaximizeResult argmax =
        maximize_acquisition(ei, c.bo.sampler.maximizer, mix_seed(c.master_seed, kStreamSetup, 1));

    for (int rep = 0; rep < c.replications; ++rep) {
        for (int n : c.batch_sizes) {
            for (std::size_t s = 0; s < c.strategies.size(); ++s) {
                const std::string& label = c.strategies[s];
                const bool sco = label == "SCO";
                const std::string cell =
                    "e1-" + slug(label) + "-n" + pad(n, 3) + "-rep" + pad(rep, 4);
                ++sink.status.cells;
                try {
                    const std::uint64_t seed = mix_seed(
                        c.master_seed, kStreamCell,
                        (static_cast<std::uint64_t>(rep) * 1024 + static_cast<std::uint64_t>(n)) *
                                8 +
                            s);
                    SamplerParams params = c.bo.sampler;
                    if (!sco) params.num_candidates = 1;

                    const auto start = std::chrono::steady_clock::now();
                    GenerateResult gen =
                        generate(ei, static_cast<std::size_t>(n), params, seed, argmax);
                    long mode_counts[3] = {0, 0, 0};
                    for (SampleMode m : gen.batch.modes) ++mode_counts[static_cast<int>(m)];

                    double reduced = gen.batch.d_scores.front();
                    if (sco) {
                        OptimizeResult opt =
                            c.bo.optimizer == OptimizerChoice::Sa
                                ? sa_optimize(gen.batch, gen.pool)
                                : ga_optimize(gen.batch, gen.pool, c.bo.ga,
                                              mix_seed(seed, kStreamOpt));
                        reduced = opt.score;
                    }
                    const double a1 = gen.presamples.a1();
                    const double d_full = a1 + reduced;
                    const double seconds = seconds_since(start);

                    json rec;
                    rec["schema"] = "discrepancy";
                    rec["experiment"] = c.experiment;
                    rec["manifest_hash"] = sink.hash;
                    rec["strategy"] = label;
                    rec["d"] = 2;
                    rec["n"] = n;
                    rec["rep"] = rep;
                    rec["seed"] = seed;
                    rec["discrepancy"] = d_full;
                    rec["reduced_score"] = reduced;
                    rec["population_term"] = a1;
                    rec["presamples"] = gen.presamples.size();
                    rec["modes"] = modes_json(mode_counts);
                    rec["seconds"] = seconds;
                    sink.record(cell, rec);
                    sink.csv += csv_row(c.experiment, label, 2, n, rep, "", "", "",
                                        fmt_g(d_full), fmt_g(seconds));
                } catch (const std::exception& e) {
                    sink.fail(cell, e);
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// E2: GA vs switch refinement on identical sampler outputs
// ---------------------------------------------------------------------------

json trace_json(const OptimizeResult& r) {
    json milestones = json::array();
    for (const Milestone& m : r.trace.milestones)
        milestones.push_back(json::array({m.delta_evals, m.best_score}));
    return json{{"score", r.score},
                {"delta_evals", r.trace.delta_evals},
                {"seconds", r.trace.seconds},
                {"milestones", milestones}};
}

void run_e2(const ExperimentConfig& c, Sink& sink) {
    const int n = c.batch_sizes.front();
    for (int d : c.dimensions) {
        for (int rep = 0; rep < c.replications; ++rep) {
            const std::string cell = "e2-d" + std::to_string(d) + "-rep" + pad(rep, 4);
            ++sink.status.cells;
            try {
                const std::uint64_t base = mix_seed(
                    c.master_seed, kStreamCell,
                    static_cast<std::uint64_t>(d) * 100000 + static_cast<std::uint64_t>(rep));

                GklsStyleSpec spec;
                spec.dimension = static_cast<std::size_t>(d);
                spec.local_minima = static_cast<std::size_t>(c.gkls.local_minima);
                spec.f_star = c.gkls.f_star;
                spec.radii_lo_frac = c.gkls.radii_lo_frac;
                spec.radii_hi_frac = c.gkls.radii_hi_frac;
                spec.base_coefficient = c.gkls.base_coefficient;
                spec.seed = mix_seed(base, kStreamSuite);
                ObjectiveFunction f = gkls_style(spec);

                const std::size_t n_init =
                    c.bo.n_init != 0 ? c.bo.n_init : 5 * static_cast<std::size_t>(d);
                Design init = initial_design(static_cast<std::size_t>(d), n_init,
                                             mix_seed(base, kStreamSetup, 0));
                std::vector<Point> x_unit;
                std::vector<double> y;
                for (const Point& u : init.sites()) {
                    x_unit.push_back(u);
                    y.push_back(f.evaluate_unit(u));
                }
                double y_best = *std::min_element(y.begin(), y.end());

                GpConfig gp_config = c.bo.gp;
                gp_config.seed = mix_seed(base, kStreamSetup, 1);
                GpModel model = fit_gp(x_unit, y, gp_config);
                EiAcquisition ei(model, y_best);
                MaximizeResult argmax = maximize_acquisition(ei, c.bo.sampler.maximizer,
                                                             mix_seed(base, kStreamSetup, 2));
                GenerateResult gen = generate(ei, static_cast<std::size_t>(n), c.bo.sampler,
                                              mix_seed(base, kStreamSetup, 3), argmax);

                OptimizeResult ga =
                    ga_optimize(gen.batch, gen.pool, c.bo.ga, mix_seed(base, kStreamOpt));
                OptimizeResult sa = sa_optimize(gen.batch, gen.pool);
                const double initial_best =
                    *std::min_element(gen.batch.d_scores.begin(), gen.batch.d_scores.end());

                json rec;
                rec["schema"] = "trace";
                rec["experiment"] = c.experiment;
                rec["manifest_hash"] = sink.hash;
                rec["d"] = d;
                rec["n"] = n;
                rec["rep"] = rep;
                rec["seed"] = base;
                rec["initial_best"] = initial_best;
                rec["ga"] = trace_json(ga);
                rec["sa"] = trace_json(sa);
                sink.record(cell, rec);
                sink.csv += csv_row(c.experiment, "GA", d, n, rep, "", "", "", fmt_g(ga.score),
                                    fmt_g(ga.trace.seconds));
                sink.csv += csv_row(c.experiment, "SA", d, n, rep, "", "", "", fmt_g(sa.score),
                                    fmt_g(sa.trace.seconds));
            } catch (const std::exception& e) {
                sink.fail(cell, e);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Run-based experiments: dimension sweep, batch-size sweep, single runs
// ---------------------------------------------------------------------------

ObjectiveFunction make_objective(const ExperimentConfig& c, int d, int function_index) {
    if (c.objective == "branin") return branin();
    GklsStyleSpec spec;
    spec.dimension = static_cast<std::size_t>(d);
    spec.local_minima = static_cast<std::size_t>(c.gkls.local_minima);
    spec.f_star = c.gkls.f_star;
    spec.radii_lo_frac = c.gkls.radii_lo_frac;
    spec.radii_hi_frac = c.gkls.radii_hi_frac;
    spec.base_coefficient = c.gkls.base_coefficient;
    spec.seed = mix_seed(c.master_seed, kStreamSuite,
                         static_cast<std::uint64_t>(d) * 100000 +
                             static_cast<std::uint64_t>(function_index));
    return gkls_style(spec);
}

void run_grid(const ExperimentConfig& c, Sink& sink) {
    const int functions = c.objective == "branin" ? 1 : c.gkls.functions;
    for (int d : c.dimensions) {
        for (int n : c.batch_sizes) {
            for (const std::string& label : c.strategies) {
                const Strategy strategy = strategy_from_string(label);
                for (int repeat = 0; repeat < c.replications; ++repeat) {
                    for (int fi = 0; fi < functions; ++fi) {
                        const long rep = static_cast<long>(repeat) * functions + fi;
                        const std::string cell = "run-" + slug(label) + "-d" + std::to_string(d) +
                                                 "-n" + pad(n, 3) + "-rep" + pad(rep, 4);
                        ++sink.status.cells;
                        try {
                            ObjectiveFunction f = make_objective(c, d, fi);
                            BoConfig bo = c.bo;
                            bo.batch_size = static_cast<std::size_t>(n);
                            // Strategies share the run seed so they start from
                            // identical initial designs on each function.
                            const std::uint64_t seed =
                                mix_seed(c.master_seed, kStreamRun,
                                         (static_cast<std::uint64_t>(d) * 1024 +
                                          static_cast<std::uint64_t>(n)) *
                                                 1048576 +
                                             static_cast<std::uint64_t>(rep));
                            RunRecord run = run_strategy(f, strategy, bo, seed);

                            const bool has_min = f.known_minimum().has_value() &&
                                                 f.known_minimum()->value != 0.0;
                            const double f_min = has_min ? f.known_minimum()->value : 0.0;

                            json rec;
                            rec["schema"] = "run";
                            rec["experiment"] = c.experiment;
                            rec["manifest_hash"] = sink.hash;
                            rec["strategy"] = label;
                            rec["d"] = d;
                            rec["n"] = n;
                            rec["rep"] = rep;
                            rec["function"] = fi;
                            rec["repeat"] = repeat;
                            rec["seed"] = seed;
                            rec["objective"] = f.name();
                            if (has_min) rec["f_min"] = f_min;
                            rec["evaluations"] = run.evaluations;
                            rec["initial_design"] = points_json(run.initial_design);
                            rec["initial_responses"] = run.initial_responses;
                            rec["initial_incumbent"] = run.initial_incumbent;
                            if (has_min)
                                rec["initial_ara"] =
                                    ara_component(run.initial_incumbent, f_min);

                            sink.csv += csv_row(
                                c.experiment, label, d, n, rep, "0",
                                fmt_g(run.initial_incumbent),
                                has_min ? fmt_g(ara_component(run.initial_incumbent, f_min)) : "",
                                "", fmt_g(0.0));

                            json cycles = json::array();
                            for (std::size_t ci = 0; ci < run.cycles.size(); ++ci) {
                                const CycleRecord& cr = run.cycles[ci];
                                const double cycle_seconds = cr.fit_seconds +
                                                             cr.maximize_seconds +
                                                             cr.sample_seconds +
                                                             cr.optimize_seconds;
                                json cj;
                                cj["cycle"] = ci + 1;
                                cj["batch"] = points_json(cr.batch);
                                cj["responses"] = cr.responses;
                                cj["incumbent"] = cr.incumbent;
                                cj["phi_max"] = cr.phi_max;
                                cj["candidate_scores"] = cr.candidate_scores;
                                cj["selected_score"] = cr.selected_score;
                                cj["modes"] = modes_json(cr.mode_counts);
                                cj["degenerate_fallback"] = cr.degenerate_fallback;
                                cj["seconds"] = json{{"fit", cr.fit_seconds},
                                                     {"maximize", cr.maximize_seconds},
                                                     {"sample", cr.sample_seconds},
                                                     {"optimize", cr.optimize_seconds}};
                                if (has_min) cj["ara"] = ara_component(cr.incumbent, f_min);
                                cycles.push_back(cj);

                                sink.csv += csv_row(
                                    c.experiment, label, d, n, rep,
                                    std::to_string(ci + 1), fmt_g(cr.incumbent),
                                    has_min ? fmt_g(ara_component(cr.incumbent, f_min)) : "",
                                    std::isnan(cr.selected_score) ? ""
                                                                  : fmt_g(cr.selected_score),
                                    fmt_g(cycle_seconds));
                            }
                            rec["cycles"] = cycles;
                            if (has_min)
                                rec["ara"] = ara_component(run.final_incumbent(), f_min);
                            sink.record(cell, rec);
                        } catch (const std::exception& e) {
                            sink.fail(cell, e);
                        }
                    }
                }
            }
        }
    }
}

} // namespace

RunStatus run_experiment(const ExperimentConfig& config) {
    const fs::path out = resolve_output_dir(config.output_dir);
    const std::string hash = config_hash(config);

    const fs::path manifest_path = out / "manifest.json";
    if (fs::exists(manifest_path)) {
        std::ifstream in(manifest_path, std::ios::binary);
        json existing;
        try {
            in >> existing;
        } catch (...) {
            throw ValidationError("output directory holds an unreadable manifest: " +
                                  manifest_path.string());
        }
        if (existing.value("manifest_hash", std::string()) != hash)
            throw ValidationError(
                "output directory already holds results for a different configuration: " +
                out.string());
    }
    fs::create_directories(out / "records");

    json manifest;
    manifest["format"] = "scobench-results";
    manifest["version"] = kVersion;
    manifest["manifest_hash"] = hash;
    manifest["config"] = config_echo(config);
    manifest["omitted_baselines"] =
        json{{"MPSK", "no reference implementation available; comparisons limited to the "
                      "strategies implemented here"}};
    write_file(manifest_path, manifest.dump(1) + "\n");

    Sink sink;
    sink.records_dir = out / "records";
    sink.hash = hash;
    sink.csv = kCsvHeader;
    sink.status.output_dir = out;

    if (config.experiment == kE1) run_e1(config, sink);
    else if (config.experiment == kE2) run_e2(config, sink);
    else run_grid(config, sink);

    write_file(out / "results.csv", sink.csv);
    if (!sink.status.failed_cells.empty()) {
        json failures = json::array();
        for (const std::string& f : sink.status.failed_cells) failures.push_back(f);
        write_file(out / "failures.json", failures.dump(1) + "\n");
    }
    return sink.status;
}

namespace {

// Linear-interpolation quantile of a sorted sample.
double quantile_sorted(const std::vector<double>& v, double q) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    const double w = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - w) + v[lo + 1] * w;
}

struct CurveKey {
    std::string experiment;
    std::string strategy;
    int d = 0;
    int n = 0;
    long cycle = 0;
    bool operator<(const CurveKey& o) const {
        return std::tie(experiment, strategy, d, n, cycle) <
               std::tie(o.experiment, o.strategy, o.d, o.n, o.cycle);
    }
};

struct GroupAgg {
    std::string metric;
    std::vector<double> values;
};

} // namespace

SummarizeStatus summarize(const std::filesystem::path& dir) {
    const fs::path manifest_path = dir / "manifest.json";
    if (!fs::exists(manifest_path))
        throw ValidationError("no manifest.json in " + dir.string() +
                              "; not a result directory");
    json manifest;
    {
        std::ifstream in(manifest_path, std::ios::binary);
        try {
            in >> manifest;
        } catch (const std::exception& e) {
            throw ValidationError("unreadable manifest.json: " + std::string(e.what()));
        }
    }
    const std::string hash = manifest.value("manifest_hash", std::string());
    if (hash.empty()) throw ValidationError("manifest.json lacks a manifest_hash");

    std::vector<fs::path> files;
    const fs::path records_dir = dir / "records";
    if (fs::exists(records_dir)) {
        for (const auto& entry : fs::directory_iterator(records_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json")
                files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    SummarizeStatus status;
    std::map<std::string, GroupAgg> groups;
    std::map<CurveKey, std::pair<double, long>> curves;

    for (const fs::path& file : files) {
        json rec;
        try {
            std::ifstream in(file, std::ios::binary);
            in >> rec;
            const std::string rec_hash = rec.at("manifest_hash").get<std::string>();
            if (rec_hash != hash)
                throw ValidationError("record " + file.filename().string() +
                                      " belongs to manifest " + rec_hash +
                                      " but the directory manifest is " + hash +
                                      "; refusing to summarize mixed result sets");
            const std::string schema = rec.at("schema").get<std::string>();
            if (schema == "discrepancy") {
                const std::string group = rec.at("strategy").get<std::string>() + "-" +
                                          std::to_string(rec.at("n").get<int>());
                GroupAgg& agg = groups[group];
                agg.metric = "d_full";
                agg.values.push_back(rec.at("discrepancy").get<double>());
            } else if (schema == "trace") {
                const int n = rec.at("n").get<int>();
                for (const char* side : {"GA", "SA"}) {
                    const json& t = rec.at(side == std::string("GA") ? "ga" : "sa");
                    GroupAgg& agg = groups[std::string(side) + "-" + std::to_string(n)];
                    agg.metric = "reduced_score";
                    agg.values.push_back(t.at("score").get<double>());
                }
            } else if (schema == "run") {
                const std::string strategy = rec.at("strategy").get<std::string>();
                const int d = rec.at("d").get<int>();
                const int n = rec.at("n").get<int>();
                const std::string experiment = rec.at("experiment").get<std::string>();
                const bool has_ara = rec.contains("ara");
                const std::string group = strategy + "-d" + std::to_string(d) + "-n" +
                                          std::to_string(n);
                GroupAgg& agg = groups[group];
                if (has_ara) {
                    agg.metric = "ara";
                    agg.values.push_back(rec.at("ara").get<double>());
                } else {
                    agg.metric = "incumbent";
                    double inc = rec.at("initial_incumbent").get<double>();
                    const json& cycles = rec.at("cycles");
                    if (!cycles.empty()) inc = cycles.back().at("incumbent").get<double>();
                    agg.values.push_back(inc);
                }
                if (has_ara) {
                    CurveKey key{experiment, strategy, d, n, 0};
                    auto& cell = curves[key];
                    cell.first += rec.at("initial_ara").get<double>();
                    cell.second += 1;
                    for (const json& cj : rec.at("cycles")) {
                        CurveKey ck{experiment, strategy, d, n, cj.at("cycle").get<long>()};
                        auto& c2 = curves[ck];
                        c2.first += cj.at("ara").get<double>();
                        c2.second += 1;
                    }
                }
            } else {
                throw ValidationError("unknown record schema \"" + schema + "\"");
            }
            ++status.records;
        } catch (const ValidationError&) {
            throw;
        } catch (const std::exception& e) {
            ++status.skipped;
            status.problems.push_back(file.filename().string() + ": " + e.what());
        }
    }

    fs::create_directories(dir / "summary");

    std::string groups_csv = "group,metric,count,median,q1,q3\n";
    for (auto& [name, agg] : groups) {
        std::sort(agg.values.begin(), agg.values.end());
        groups_csv += name;
        groups_csv += ',';
        groups_csv += agg.metric;
        groups_csv += ',';
        groups_csv += std::to_string(agg.values.size());
        groups_csv += ',';
        groups_csv += fmt_g(quantile_sorted(agg.values, 0.5));
        groups_csv += ',';
        groups_csv += fmt_g(quantile_sorted(agg.values, 0.25));
        groups_csv += ',';
        groups_csv += fmt_g(quantile_sorted(agg.values, 0.75));
        groups_csv += '\n';
    }
    write_file(dir / "summary" / "groups.csv", groups_csv);

    std::string curves_csv = "experiment,strategy,d,n,cycle,count,mean_ara\n";
    for (const auto& [key, cell] : curves) {
        curves_csv += key.experiment;
        curves_csv += ',';
        curves_csv += key.strategy;
        curves_csv += ',';
        curves_csv += std::to_string(key.d);
        curves_csv += ',';
        curves_csv += std::to_string(key.n);
        curves_csv += ',';
        curves_csv += std::to_string(key.cycle);
        curves_csv += ',';
        curves_csv += std::to_string(cell.second);
        curves_csv += ',';
        curves_csv += fmt_g(cell.first / static_cast<double>(cell.second));
        curves_csv += '\n';
    }
    write_file(dir / "summary" / "ara_curves.csv", curves_csv);

    return status;
}

} // namespace sco
