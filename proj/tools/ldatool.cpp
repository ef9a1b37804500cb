#include "CLI11.hpp"
#include "json.hpp"

#include "lda/bench.hpp"
#include "lda/csv.hpp"
#include "lda/data.hpp"
#include "lda/fullinfo.hpp"
#include "lda/manifest.hpp"
#include "lda/models.hpp"
#include "lda/polygon.hpp"
#include "lda/population.hpp"
#include "lda/rng.hpp"
#include "lda/search.hpp"
#include "lda/svg.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lda;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::string lambda_text = "1";
    int jobs = 0; // 0: hardware concurrency
    std::string output = ".";
    bool plot = false;

    Rat lambda_rat() const { return Rat::parse(lambda_text); }
    double lambda() const { return lambda_rat().to_double(); }
};

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) out.push_back(csv::trim(item));
    return out;
}

GroupTally parse_tally(const std::string& text) {
    auto parts = split_list(text);
    if (parts.size() != 4) {
        throw std::invalid_argument("tally must be n_1_pos,n_1_neg,n_2_pos,n_2_neg");
    }
    GroupTally t;
    t.n_1_pos = std::stoll(parts[0]);
    t.n_1_neg = std::stoll(parts[1]);
    t.n_2_pos = std::stoll(parts[2]);
    t.n_2_neg = std::stoll(parts[3]);
    return t;
}

std::vector<std::int64_t> parse_weights(const std::string& text) {
    std::vector<std::int64_t> out;
    for (const auto& part : split_list(text)) out.push_back(std::stoll(part));
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const auto& part : split_list(text)) out.push_back(std::stoi(part));
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& part : split_list(text)) out.push_back(std::stod(part));
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void emit_manifest(const GlobalOptions& global, const std::string& command,
                   const json& config, const std::vector<std::string>& outputs,
                   const std::vector<std::string>& inputs = {}) {
    RunManifest m;
    m.command = command;
    m.config_json = config.dump();
    m.master_seed = global.seed;
    m.outputs = outputs;
    for (const auto& path : inputs) m.input_digests[path] = file_digest_hex(path);
    write_manifest(m, global.output);
}

// --- dataset plumbing -----------------------------------------------------

struct DatasetOptions {
    std::string dataset_path;
    std::string schema_name = "adult";
    std::string schema_json_path;

    bool synthetic = false;
    int rows = 2000;
    double group_balance = 0.5;
    std::string base_rates = "0.45,0.3";
    double signal = 0.8;

    void attach(CLI::App* cmd) {
        cmd->add_option("--dataset", dataset_path, "CSV file to load");
        cmd->add_option("--schema", schema_name, "dataset schema: adult or german")
            ->capture_default_str();
        cmd->add_option("--schema-json", schema_json_path,
                        "JSON file overriding schema columns/values");
        cmd->add_flag("--synthetic", synthetic, "use a generated dataset instead of a file");
        cmd->add_option("--rows", rows, "synthetic row count")->capture_default_str();
        cmd->add_option("--group-balance", group_balance, "synthetic group-1 share")
            ->capture_default_str();
        cmd->add_option("--base-rates", base_rates, "synthetic per-group base rates")
            ->capture_default_str();
        cmd->add_option("--signal", signal, "synthetic label signal strength")
            ->capture_default_str();
    }

    bool configured() const { return synthetic || !dataset_path.empty(); }

    Schema schema() const {
        Schema base;
        if (schema_name == "adult") {
            base = adult_schema();
        } else if (schema_name == "german") {
            base = german_schema();
        } else {
            throw std::invalid_argument("unknown schema: " + schema_name);
        }
        if (!schema_json_path.empty()) {
            base = schema_from_json(read_text(schema_json_path), base);
        }
        return base;
    }

    LabeledDataset load(const GlobalOptions& global, std::vector<std::string>& inputs) const {
        if (synthetic) {
            auto rates = parse_double_list(base_rates);
            if (rates.size() != 2) throw std::invalid_argument("base-rates needs two values");
            return synthetic_dataset(rows, group_balance, {rates[0], rates[1]}, signal,
                                     derive_seed(global.seed, "dataset"));
        }
        inputs.push_back(dataset_path);
        if (!schema_json_path.empty()) inputs.push_back(schema_json_path);
        LoadReport report;
        auto data = load_csv(dataset_path, schema(), &report);
        if (report.dropped_rows > 0) {
            std::cerr << "dropped " << report.dropped_rows
                      << " rows without usable group/label\n";
        }
        return data;
    }

    json config() const {
        json j;
        if (synthetic) {
            j["source"] = "synthetic";
            j["rows"] = rows;
            j["group_balance"] = group_balance;
            j["base_rates"] = base_rates;
            j["signal"] = signal;
        } else {
            j["source"] = dataset_path;
            j["schema"] = schema_name;
            if (!schema_json_path.empty()) j["schema_json"] = schema_json_path;
        }
        return j;
    }
};

// --- polygon family ---------------------------------------------------------

struct TallyOptions {
    std::string tally_text;
    DatasetOptions data;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tally", tally_text,
                        "population cell counts n_1_pos,n_1_neg,n_2_pos,n_2_neg");
        data.attach(cmd);
    }

    GroupTally resolve(const GlobalOptions& global, std::vector<std::string>& inputs,
                       json& config) const {
        if (!tally_text.empty()) {
            config["tally"] = tally_text;
            return parse_tally(tally_text);
        }
        if (data.configured()) {
            config["dataset"] = data.config();
            return tally(data.load(global, inputs));
        }
        throw CLI::RequiredError("--tally or --dataset/--synthetic");
    }
};

json frontier_json(const FrontierSummary& f) {
    json j;
    j["delta_star"] = f.delta_star;
    j["u_star"] = f.u_star;
    j["u_f"] = f.u_f;
    j["min_ratio"] = f.min_ratio;
    j["repair"] = {{"p_1_pos", f.repair.p_1_pos},
                   {"p_1_neg", f.repair.p_1_neg},
                   {"p_2_pos", f.repair.p_2_pos},
                   {"p_2_neg", f.repair.p_2_neg}};
    return j;
}

int run_polygon(const GlobalOptions& global, const TallyOptions& opts, std::int64_t grid_cap) {
    std::vector<std::string> inputs;
    json config;
    config["lambda"] = global.lambda_rat().to_string();
    const GroupTally t = opts.resolve(global, inputs, config);
    const double lambda = global.lambda();

    auto hull = feasible_polygon(t, lambda);
    auto frontier = utility_threshold(t, lambda);

    fs::create_directories(global.output);
    csv::Table table;
    table.header = {"delta", "utility"};
    for (const auto& v : hull.vertices) {
        table.rows.push_back({format_double(v.delta), format_double(v.utility)});
    }
    csv::write_file((fs::path(global.output) / "polygon.csv").string(), table);
    write_json(fs::path(global.output) / "frontier.json", frontier_json(frontier));

    std::vector<std::string> outputs{"polygon.csv", "frontier.json"};
    if (global.plot) {
        std::vector<PolygonPoint> grid;
        try {
            grid = deterministic_grid(t, lambda, grid_cap);
        } catch (const std::exception&) {
            // population too large to enumerate; draw the hull alone
        }
        write_text(fs::path(global.output) / "polygon.svg", polygon_svg(hull, grid, frontier));
        outputs.push_back("polygon.svg");
    }
    emit_manifest(global, "polygon", config, outputs, inputs);
    std::cout << "u_star " << format_double(frontier.u_star) << " u_f "
              << format_double(frontier.u_f) << " delta_star "
              << format_double(frontier.delta_star) << "\n";
    return 0;
}

int run_grid(const GlobalOptions& global, const TallyOptions& opts, std::int64_t cap) {
    std::vector<std::string> inputs;
    json config;
    config["lambda"] = global.lambda_rat().to_string();
    config["cap"] = cap;
    const GroupTally t = opts.resolve(global, inputs, config);
    const double lambda = global.lambda();

    auto grid = deterministic_grid(t, lambda, cap);
    fs::create_directories(global.output);
    csv::Table table;
    table.header = {"delta", "utility"};
    for (const auto& p : grid) {
        table.rows.push_back({format_double(p.delta), format_double(p.utility)});
    }
    csv::write_file((fs::path(global.output) / "grid.csv").string(), table);

    std::vector<std::string> outputs{"grid.csv"};
    if (global.plot) {
        auto hull = feasible_polygon(t, lambda);
        auto frontier = utility_threshold(t, lambda);
        write_text(fs::path(global.output) / "grid.svg", polygon_svg(hull, grid, frontier));
        outputs.push_back("grid.svg");
    }
    emit_manifest(global, "grid", config, outputs, inputs);
    std::cout << grid.size() << " deterministic classifiers\n";
    return 0;
}

int run_threshold(const GlobalOptions& global, const TallyOptions& opts, double at_utility,
                  bool at_utility_set) {
    std::vector<std::string> inputs;
    json config;
    config["lambda"] = global.lambda_rat().to_string();
    const GroupTally t = opts.resolve(global, inputs, config);
    const double lambda = global.lambda();

    auto frontier = utility_threshold(t, lambda);
    json j = frontier_json(frontier);
    if (at_utility_set) {
        config["at_utility"] = at_utility;
        j["min_disparity_at_utility"] = min_disparity_at_utility(t, lambda, at_utility);
    }
    fs::create_directories(global.output);
    write_json(fs::path(global.output) / "threshold.json", j);
    emit_manifest(global, "threshold", config, {"threshold.json"}, inputs);
    std::cout << "u_star " << format_double(frontier.u_star) << "\n";
    return 0;
}

// --- full-information solvers ----------------------------------------------

std::string sidecar_for(const std::string& instance_path) {
    fs::path p(instance_path);
    if (p.extension() == ".csv") return p.replace_extension(".json").string();
    return instance_path + ".json";
}

json solution_json(const LdaSolution& sol) {
    json j;
    j["status"] = to_string(sol.status);
    j["selection"] = sol.selection;
    j["delta"] = sol.delta.to_string();
    j["utility"] = sol.utility.to_string();
    j["baseline_delta"] = sol.baseline_delta.to_string();
    j["baseline_utility"] = sol.baseline_utility.to_string();
    if (!sol.note.empty()) j["note"] = sol.note;
    return j;
}

struct SolveCommon {
    std::string instance_path;
    std::string sidecar_path;
    double time_limit_ms = 0.0;
    double memory_cap_mb = 256.0;
    bool force_layered = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--instance", instance_path, "instance CSV (id,rho1,rho2,sigma)")
            ->required();
        cmd->add_option("--sidecar", sidecar_path,
                        "instance JSON sidecar (default: CSV path with .json)");
        cmd->add_option("--time-limit-ms", time_limit_ms, "abort the solve after this long");
        cmd->add_option("--memory-cap-mb", memory_cap_mb, "state-space memory cap")
            ->capture_default_str();
        cmd->add_flag("--force-layered", force_layered,
                      "use the large-instance code path regardless of size");
    }

    FullInfoInstance load(std::vector<std::string>& inputs) const {
        const std::string sidecar =
            sidecar_path.empty() ? sidecar_for(instance_path) : sidecar_path;
        inputs.push_back(instance_path);
        inputs.push_back(sidecar);
        return read_instance(instance_path, sidecar);
    }

    SolveOptions options() const {
        SolveOptions opts;
        opts.memory_cap_bytes = static_cast<std::size_t>(memory_cap_mb * 1024.0 * 1024.0);
        opts.force_layered = force_layered;
        if (time_limit_ms > 0.0) {
            opts.deadline = std::chrono::steady_clock::now() +
                            std::chrono::microseconds(
                                static_cast<std::int64_t>(time_limit_ms * 1000.0));
        }
        return opts;
    }

    json config() const {
        json j;
        j["instance"] = instance_path;
        j["sidecar"] = sidecar_path.empty() ? sidecar_for(instance_path) : sidecar_path;
        if (force_layered) j["force_layered"] = true;
        return j;
    }
};

int finish_solve(const GlobalOptions& global, const std::string& command, json config,
                 const std::vector<std::string>& inputs, const LdaSolution& sol) {
    fs::create_directories(global.output);
    write_json(fs::path(global.output) / "solution.json", solution_json(sol));
    emit_manifest(global, command, config, {"solution.json"}, inputs);
    std::cout << to_string(sol.status);
    if (sol.status == SolveStatus::found) {
        std::cout << " delta " << sol.delta.to_string() << " utility "
                  << sol.utility.to_string();
    }
    std::cout << "\n";
    return sol.status == SolveStatus::found ? 0 : 2;
}

int run_solve(const GlobalOptions& global, const SolveCommon& opts) {
    std::vector<std::string> inputs;
    auto inst = opts.load(inputs);
    auto sol = solve_exact(inst, opts.options());
    return finish_solve(global, "solve", opts.config(), inputs, sol);
}

int run_approx(const GlobalOptions& global, const SolveCommon& opts, double epsilon) {
    std::vector<std::string> inputs;
    auto inst = opts.load(inputs);
    auto sol = solve_approx(inst, epsilon, opts.options());
    json config = opts.config();
    config["epsilon"] = epsilon;
    return finish_solve(global, "approx", config, inputs, sol);
}

int run_reduce(const GlobalOptions& global, const std::string& weights_text) {
    SubsetSumInstance w{parse_weights(weights_text)};
    auto inst = reduce_subset_sum(w, global.lambda_rat());
    fs::create_directories(global.output);
    write_instance(inst, (fs::path(global.output) / "instance.csv").string(),
                   (fs::path(global.output) / "instance.json").string());
    json config;
    config["weights"] = weights_text;
    config["lambda"] = global.lambda_rat().to_string();
    emit_manifest(global, "reduce", config, {"instance.csv", "instance.json"});
    std::cout << inst.values.size() << " values, digits " << inst.digits << "\n";
    return 0;
}

int run_gen(const GlobalOptions& global, int count, int n_options, int digits,
            const std::string& config_path) {
    if (!config_path.empty()) {
        json j = json::parse(read_text(config_path));
        count = j.value("count", count);
        n_options = j.value("n_options", n_options);
        digits = j.value("max_digits", digits);
    }
    if (count <= 0) throw std::invalid_argument("count must be positive");

    fs::create_directories(global.output);
    std::vector<std::string> outputs;
    for (int i = 0; i < count; ++i) {
        auto inst = generate_instance(n_options, digits,
                                      derive_seed(global.seed, "gen",
                                                  static_cast<std::uint64_t>(i)));
        char name[32];
        std::snprintf(name, sizeof name, "instance_%03d", i);
        const auto base = fs::path(global.output) / name;
        write_instance(inst, base.string() + ".csv", base.string() + ".json");
        outputs.push_back(std::string(name) + ".csv");
        outputs.push_back(std::string(name) + ".json");
    }
    json config;
    config["count"] = count;
    config["n_options"] = n_options;
    config["max_digits"] = digits;
    std::vector<std::string> inputs;
    if (!config_path.empty()) inputs.push_back(config_path);
    emit_manifest(global, "gen", config, outputs, inputs);
    std::cout << count << " instances generated\n";
    return 0;
}

int run_bench(const GlobalOptions& global, std::string instances, std::string n_options,
              std::string digits, std::string epsilons, double time_limit_ms, bool no_persist,
              const std::string& config_path) {
    BenchConfig config;
    config.master_seed = global.seed;
    config.jobs = global.jobs;
    config.instance_count = std::stoi(instances);
    config.n_options_values = parse_int_list(n_options);
    config.max_digits_values = parse_int_list(digits);
    config.epsilons = parse_double_list(epsilons);
    config.time_limit_per_solve =
        std::chrono::milliseconds(static_cast<std::int64_t>(time_limit_ms));
    if (!config_path.empty()) {
        json j = json::parse(read_text(config_path));
        config.instance_count = j.value("instance_count", config.instance_count);
        if (j.contains("n_options_values")) {
            config.n_options_values = j["n_options_values"].get<std::vector<int>>();
        }
        if (j.contains("max_digits_values")) {
            config.max_digits_values = j["max_digits_values"].get<std::vector<int>>();
        }
        if (j.contains("epsilons")) {
            config.epsilons = j["epsilons"].get<std::vector<double>>();
        }
        if (j.contains("time_limit_ms")) {
            config.time_limit_per_solve =
                std::chrono::milliseconds(j["time_limit_ms"].get<std::int64_t>());
        }
    }
    if (!no_persist) config.persist_dir = (fs::path(global.output) / "instances").string();

    auto report = run_benchmark(config);
    fs::create_directories(global.output);
    write_report_csv(report, (fs::path(global.output) / "bench.csv").string());

    json summary;
    for (const auto& [key, rate] : hit_rate(report)) summary["hit_rate"][key] = rate;
    std::map<std::string, std::map<int, std::vector<double>>> walls;
    for (const auto& row : report.rows) {
        if (row.status != "timed_out") walls[algorithm_key(row)][row.max_digits].push_back(row.wall_ms);
    }
    for (const auto& [key, buckets] : walls) {
        for (const auto& [digit, values] : buckets) {
            summary["median_wall_ms"][key][std::to_string(digit)] = percentile(values, 0.5);
        }
    }
    summary["rows"] = report.rows.size();
    write_json(fs::path(global.output) / "summary.json", summary);

    json manifest_config;
    manifest_config["instance_count"] = config.instance_count;
    manifest_config["n_options_values"] = config.n_options_values;
    manifest_config["max_digits_values"] = config.max_digits_values;
    manifest_config["epsilons"] = config.epsilons;
    manifest_config["time_limit_ms"] = config.time_limit_per_solve.count();
    std::vector<std::string> outputs{"bench.csv", "summary.json"};
    if (!config.persist_dir.empty()) outputs.push_back("instances/");
    std::vector<std::string> inputs;
    if (!config_path.empty()) inputs.push_back(config_path);
    emit_manifest(global, "bench", manifest_config, outputs, inputs);
    std::cout << report.rows.size() << " rows";
    for (const auto& [key, rate] : hit_rate(report)) {
        std::cout << " " << key << " " << format_double(rate);
    }
    std::cout << "\n";
    return 0;
}

struct SearchOptions {
    DatasetOptions data;
    std::string trainer = "random_forest";
    std::string search_type = "sample";
    int count = 100;
    std::string n_values = "2,5,10,20,50,100";
    int reps = 200;
    int n_trees = 100;
    int max_depth = -1;
    bool unbalanced = false;
    int lr_iterations = 500;
    double lr_step = 0.1;
    double train_frac = 0.6;
    double eval_frac = 0.2;
    double test_frac = 0.2;

    void attach(CLI::App* cmd) {
        data.attach(cmd);
        cmd->add_option("--trainer", trainer,
                        "logistic_regression, decision_tree, or random_forest")
            ->capture_default_str();
        cmd->add_option("--search-type", search_type, "sample or random_seed")
            ->capture_default_str();
        cmd->add_option("--count", count, "models in the candidate pool")
            ->capture_default_str();
        cmd->add_option("--n-values", n_values, "subsample sizes for the trial sweep")
            ->capture_default_str();
        cmd->add_option("--reps", reps, "trials per n")->capture_default_str();
        cmd->add_option("--n-trees", n_trees, "forest size")->capture_default_str();
        cmd->add_option("--max-depth", max_depth, "tree depth limit (-1: kind default)")
            ->capture_default_str();
        cmd->add_flag("--unbalanced", unbalanced, "disable balanced class weights");
        cmd->add_option("--lr-iterations", lr_iterations, "logistic regression iterations")
            ->capture_default_str();
        cmd->add_option("--lr-step", lr_step, "logistic regression step size")
            ->capture_default_str();
        cmd->add_option("--train-frac", train_frac, "training split fraction")
            ->capture_default_str();
        cmd->add_option("--eval-frac", eval_frac, "evaluation split fraction")
            ->capture_default_str();
        cmd->add_option("--test-frac", test_frac, "test split fraction")
            ->capture_default_str();
    }
};

int run_search(const GlobalOptions& global, const SearchOptions& opts) {
    if (!opts.data.configured()) {
        throw CLI::RequiredError("--dataset or --synthetic");
    }
    std::vector<std::string> inputs;
    auto dataset = opts.data.load(global, inputs);

    SplitSpec split_spec;
    split_spec.train_fraction = opts.train_frac;
    split_spec.eval_fraction = opts.eval_frac;
    split_spec.test_fraction = opts.test_frac;
    split_spec.seed = derive_seed(global.seed, "split");
    auto splits = split(dataset, split_spec);

    PoolConfig pool_config;
    pool_config.trainer.kind = trainer_kind_from_string(opts.trainer);
    pool_config.trainer.max_depth = opts.max_depth;
    pool_config.trainer.n_trees = opts.n_trees;
    pool_config.trainer.balanced_weights = !opts.unbalanced;
    pool_config.trainer.lr_iterations = opts.lr_iterations;
    pool_config.trainer.lr_step = opts.lr_step;
    pool_config.search_type = search_type_from_string(opts.search_type);
    pool_config.count = opts.count;
    pool_config.master_seed = derive_seed(global.seed, "pool");
    pool_config.lambda = global.lambda();
    pool_config.jobs = global.jobs;
    auto pool = build_pool(pool_config, splits);

    auto n_sweep = parse_int_list(opts.n_values);
    std::vector<int> usable;
    for (int n : n_sweep) {
        if (n >= 1 && n <= opts.count) {
            usable.push_back(n);
        } else {
            std::cerr << "skipping n=" << n << " outside 1.." << opts.count << "\n";
        }
    }
    if (usable.empty()) throw std::invalid_argument("n out of range");
    std::sort(usable.begin(), usable.end());
    usable.erase(std::unique(usable.begin(), usable.end()), usable.end());

    const std::uint64_t trials_seed = derive_seed(global.seed, "trials");
    std::vector<TrialStatistics> stats;
    for (int n : usable) stats.push_back(trial_statistics(pool, n, opts.reps, trials_seed));

    fs::create_directories(global.output);
    write_pool_csv(pool, (fs::path(global.output) / "pool.csv").string());
    write_statistics_csv(stats, (fs::path(global.output) / "statistics.csv").string());

    const TrialStatistics& top = stats.back();
    json summary;
    summary["dataset"] = dataset.name;
    summary["trainer"] = opts.trainer;
    summary["search_type"] = opts.search_type;
    summary["count"] = opts.count;
    summary["reps"] = opts.reps;
    summary["lambda"] = global.lambda_rat().to_string();
    summary["n"] = top.n;
    summary["disparity"] = {{"mean", top.disparity.mean},
                            {"p2_5", top.disparity.p2_5},
                            {"p97_5", top.disparity.p97_5},
                            {"significant", top.disparity.significant}};
    summary["utility"] = {{"mean", top.utility.mean},
                          {"p2_5", top.utility.p2_5},
                          {"p97_5", top.utility.p97_5},
                          {"significant", top.utility.significant}};
    summary["freq_min_disparity"] = top.perfect_guess_freq;
    write_json(fs::path(global.output) / "summary.json", summary);

    std::vector<std::string> outputs{"pool.csv", "statistics.csv", "summary.json"};
    if (global.plot) {
        write_text(fs::path(global.output) / "search.svg", search_svg(stats));
        outputs.push_back("search.svg");
    }
    json config = opts.data.config();
    config["trainer"] = opts.trainer;
    config["search_type"] = opts.search_type;
    config["count"] = opts.count;
    config["n_values"] = usable;
    config["reps"] = opts.reps;
    config["n_trees"] = opts.n_trees;
    config["max_depth"] = opts.max_depth;
    config["balanced_weights"] = !opts.unbalanced;
    config["lambda"] = global.lambda_rat().to_string();
    config["split"] = {{"train", opts.train_frac},
                       {"eval", opts.eval_frac},
                       {"test", opts.test_frac}};
    emit_manifest(global, "search", config, outputs, inputs);

    std::cout << "n " << top.n << " disparity " << format_double(top.disparity.mean)
              << " utility " << format_double(top.utility.mean) << " freq_min_disp "
              << format_double(top.perfect_guess_freq) << "\n";
    return 0;
}

int run_demo_pathological(const GlobalOptions& global, int rows) {
    auto pre = synthetic_dataset(rows, 0.5, {0.45, 0.3}, 1.0, derive_seed(global.seed, "pre"));
    auto post =
        synthetic_dataset(rows, 0.5, {0.45, 0.3}, 1.0, derive_seed(global.seed, "post"));
    auto transcript = pathological_rule(pre, post);

    fs::create_directories(global.output);
    json j;
    j["rows"] = rows;
    j["pre_accuracy"] = transcript.pre_accuracy;
    j["post_disparity"] = transcript.post_disparity;
    write_json(fs::path(global.output) / "demo.json", j);
    json config;
    config["rows"] = rows;
    emit_manifest(global, "demo-pathological", config, {"demo.json"});
    std::cout << "pre accuracy " << format_double(transcript.pre_accuracy)
              << " post disparity " << format_double(transcript.post_disparity) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"audit toolkit for less discriminatory algorithms"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--seed", global.seed, "master seed; all randomness derives from it")
        ->capture_default_str();
    app.add_option("--lambda", global.lambda_text,
                   "false-positive price (decimal or fraction)")
        ->capture_default_str();
    app.add_option("--jobs", global.jobs, "worker threads (0: all cores)")
        ->capture_default_str();
    app.add_option("--output", global.output, "output directory")->capture_default_str();
    app.add_flag("--plot", global.plot, "also emit SVG figures");

    int exit_code = 0;

    auto* polygon_cmd =
        app.add_subcommand("polygon", "feasible (disparity, utility) region and frontier");
    polygon_cmd->fallthrough();
    TallyOptions polygon_opts;
    polygon_opts.attach(polygon_cmd);
    std::int64_t polygon_grid_cap = 200000;
    polygon_cmd->add_option("--grid-cap", polygon_grid_cap,
                            "max scatter points in the plot")
        ->capture_default_str();
    polygon_cmd->callback(
        [&] { exit_code = run_polygon(global, polygon_opts, polygon_grid_cap); });

    auto* grid_cmd =
        app.add_subcommand("grid", "enumerate every deterministic classifier's point");
    grid_cmd->fallthrough();
    TallyOptions grid_opts;
    grid_opts.attach(grid_cmd);
    std::int64_t grid_cap = 1000000;
    grid_cmd->add_option("--cap", grid_cap, "refuse to enumerate more points than this")
        ->capture_default_str();
    grid_cmd->callback([&] { exit_code = run_grid(global, grid_opts, grid_cap); });

    auto* threshold_cmd =
        app.add_subcommand("threshold", "utility threshold and zero-disparity repair");
    threshold_cmd->fallthrough();
    TallyOptions threshold_opts;
    threshold_opts.attach(threshold_cmd);
    double at_utility = 0.0;
    auto* at_opt = threshold_cmd->add_option(
        "--at-utility", at_utility, "also report the minimum |disparity| at this utility");
    threshold_cmd->callback([&] {
        exit_code = run_threshold(global, threshold_opts, at_utility, at_opt->count() > 0);
    });

    auto* solve_cmd = app.add_subcommand("solve", "exact full-information LDA search");
    solve_cmd->fallthrough();
    SolveCommon solve_opts;
    solve_opts.attach(solve_cmd);
    solve_cmd->callback([&] { exit_code = run_solve(global, solve_opts); });

    auto* approx_cmd =
        app.add_subcommand("approx", "approximate full-information LDA search");
    approx_cmd->fallthrough();
    SolveCommon approx_opts;
    approx_opts.attach(approx_cmd);
    double epsilon = 0.0;
    approx_cmd->add_option("--epsilon", epsilon, "approximation slack (> 0)")
        ->required()
        ->check(CLI::PositiveNumber);
    approx_cmd->callback([&] { exit_code = run_approx(global, approx_opts, epsilon); });

    auto* reduce_cmd =
        app.add_subcommand("reduce", "build the hard instance of a Subset-Sum input");
    reduce_cmd->fallthrough();
    std::string weights_text;
    reduce_cmd->add_option("--weights", weights_text, "nonzero integers, comma separated")
        ->required();
    reduce_cmd->callback([&] { exit_code = run_reduce(global, weights_text); });

    auto* gen_cmd = app.add_subcommand("gen", "generate random solver instances");
    gen_cmd->fallthrough();
    int gen_count = 1, gen_n_options = 5, gen_digits = 2;
    std::string gen_config;
    gen_cmd->add_option("--count", gen_count, "instances to generate")->capture_default_str();
    gen_cmd->add_option("--n-options", gen_n_options, "values per instance")
        ->capture_default_str();
    gen_cmd->add_option("--digits", gen_digits, "density precision in decimals")
        ->capture_default_str();
    gen_cmd->add_option("--config", gen_config, "JSON config overriding the flags");
    gen_cmd->callback([&] {
        exit_code = run_gen(global, gen_count, gen_n_options, gen_digits, gen_config);
    });

    auto* bench_cmd =
        app.add_subcommand("bench", "exact vs approximate runtime and hit-rate comparison");
    bench_cmd->fallthrough();
    std::string bench_instances = "250", bench_n_options = "4,5", bench_digits = "1,2,3,4",
                bench_epsilons = "0.5,0.1,0.01", bench_config;
    double bench_time_limit = 10000.0;
    bool bench_no_persist = false;
    bench_cmd->add_option("--instances", bench_instances, "instance count")
        ->capture_default_str();
    bench_cmd->add_option("--n-options", bench_n_options, "values-per-instance grid")
        ->capture_default_str();
    bench_cmd->add_option("--digits", bench_digits, "precision grid")->capture_default_str();
    bench_cmd->add_option("--epsilons", bench_epsilons, "approximation slacks")
        ->capture_default_str();
    bench_cmd->add_option("--time-limit-ms", bench_time_limit, "per-solve wall limit")
        ->capture_default_str();
    bench_cmd->add_flag("--no-persist", bench_no_persist,
                        "skip writing the instance files");
    bench_cmd->add_option("--config", bench_config, "JSON config overriding the flags");
    bench_cmd->callback([&] {
        exit_code = run_bench(global, bench_instances, bench_n_options, bench_digits,
                              bench_epsilons, bench_time_limit, bench_no_persist,
                              bench_config);
    });

    auto* search_cmd =
        app.add_subcommand("search", "randomized LDA search over retrained models");
    search_cmd->fallthrough();
    SearchOptions search_opts;
    search_opts.attach(search_cmd);
    search_cmd->callback([&] { exit_code = run_search(global, search_opts); });

    auto* demo_cmd = app.add_subcommand(
        "demo-pathological", "memorize-then-select-all rule on disjoint datasets");
    demo_cmd->fallthrough();
    int demo_rows = 200;
    demo_cmd->add_option("--rows", demo_rows, "rows per dataset")->capture_default_str();
    demo_cmd->callback([&] { exit_code = run_demo_pathological(global, demo_rows); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
