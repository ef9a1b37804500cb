#include "lda/search.hpp"

#include "lda/csv.hpp"
#include "lda/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace lda {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

LabeledDataset subset(const LabeledDataset& data, const std::vector<Eigen::Index>& idx) {
    LabeledDataset out;
    out.name = data.name;
    out.feature_names = data.feature_names;
    out.features.resize(static_cast<Eigen::Index>(idx.size()), data.features.cols());
    out.groups.resize(static_cast<Eigen::Index>(idx.size()));
    out.labels.resize(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out.features.row(static_cast<Eigen::Index>(i)) = data.features.row(idx[i]);
        out.groups[static_cast<Eigen::Index>(i)] = data.groups[idx[i]];
        out.labels[static_cast<Eigen::Index>(i)] = data.labels[idx[i]];
    }
    return out;
}

void require_both(const LabeledDataset& part) {
    if (part.size() == 0) throw std::invalid_argument("degenerate split");
    bool g1 = false, g2 = false, y0 = false, y1 = false;
    for (Eigen::Index i = 0; i < part.size(); ++i) {
        (part.groups[i] == 1 ? g1 : g2) = true;
        (part.labels[i] == 1 ? y1 : y0) = true;
    }
    if (!(g1 && g2 && y0 && y1)) throw std::invalid_argument("degenerate split");
}

SplitMetrics metrics_of(const Model& model, const LabeledDataset& part, double lambda) {
    Metrics m = evaluate_decisions(part, model.predict(part), lambda);
    return {m.delta, m.utility, m.sr_1, m.sr_2};
}

LabeledDataset bootstrap_resample(const LabeledDataset& data, RandomStream& rng) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(data.size()));
    for (auto& i : idx) {
        i = static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(data.size())));
    }
    return subset(data, idx);
}

struct Trial {
    std::vector<std::size_t> drawn; // record indices
    std::size_t selected = 0;       // position in drawn
};

Trial draw_trial(const CandidatePool& pool, int n, std::uint64_t seed) {
    if (n < 1 || static_cast<std::size_t>(n) > pool.records.size()) {
        throw std::invalid_argument("n out of range");
    }
    RandomStream rng(seed);
    Trial trial;
    trial.drawn =
        rng.sample_without_replacement(pool.records.size(), static_cast<std::size_t>(n));
    for (std::size_t k = 1; k < trial.drawn.size(); ++k) {
        const auto& cur = pool.records[trial.drawn[k]];
        const auto& best = pool.records[trial.drawn[trial.selected]];
        const double a = std::abs(cur.eval.disparity);
        const double b = std::abs(best.eval.disparity);
        if (a < b || (a == b && cur.model_id < best.model_id)) trial.selected = k;
    }
    return trial;
}

TrialRecord score_trial(const CandidatePool& pool, const Trial& trial) {
    const auto& sel = pool.records[trial.drawn[trial.selected]];
    double mean_abs_disp = 0.0, mean_utility = 0.0, min_abs_test = 0.0;
    bool first = true;
    for (std::size_t idx : trial.drawn) {
        const auto& rec = pool.records[idx];
        const double abs_test = std::abs(rec.test.disparity);
        mean_abs_disp += abs_test;
        mean_utility += rec.test.utility;
        min_abs_test = first ? abs_test : std::min(min_abs_test, abs_test);
        first = false;
    }
    const auto n = static_cast<double>(trial.drawn.size());
    TrialRecord out;
    out.selected_model_id = sel.model_id;
    out.drawn_model_ids.reserve(trial.drawn.size());
    for (std::size_t idx : trial.drawn) out.drawn_model_ids.push_back(pool.records[idx].model_id);
    out.delta_test_disparity = std::abs(sel.test.disparity) - mean_abs_disp / n;
    out.delta_test_utility = sel.test.utility - mean_utility / n;
    out.perfect_guess = std::abs(sel.test.disparity) == min_abs_test;
    return out;
}

std::uint64_t trial_seed(std::uint64_t seed, int n, int rep) {
    return derive_seed(seed, "trial:" + std::to_string(n), static_cast<std::uint64_t>(rep));
}

DeltaSummary summarize(const std::vector<double>& deltas) {
    DeltaSummary s;
    int pos = 0, neg = 0;
    for (double d : deltas) {
        s.mean += d;
        if (d > 0.0) ++pos;
        if (d < 0.0) ++neg;
    }
    const auto reps = static_cast<int>(deltas.size());
    s.mean /= reps;
    s.p2_5 = percentile(deltas, 0.025);
    s.p97_5 = percentile(deltas, 0.975);
    s.significant = pos * 20 >= reps * 19 || neg * 20 >= reps * 19;
    return s;
}

} // namespace

void SplitSpec::validate() const {
    if (!(train_fraction > 0.0 && eval_fraction > 0.0 && test_fraction > 0.0)) {
        throw std::invalid_argument("split fractions must be positive");
    }
    if (std::abs(train_fraction + eval_fraction + test_fraction - 1.0) > 1e-9) {
        throw std::invalid_argument("split fractions must sum to 1");
    }
}

DataSplits split(const LabeledDataset& dataset, const SplitSpec& spec) {
    spec.validate();
    if (dataset.size() == 0) throw std::invalid_argument("empty population");
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(dataset.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<Eigen::Index>(i);
    RandomStream rng(spec.seed);
    rng.shuffle(idx);

    const auto n = static_cast<double>(dataset.size());
    const auto n_train = static_cast<std::size_t>(std::llround(spec.train_fraction * n));
    const auto n_eval = static_cast<std::size_t>(std::llround(spec.eval_fraction * n));
    if (n_train == 0 || n_eval == 0 || n_train + n_eval >= idx.size()) {
        throw std::invalid_argument("degenerate split");
    }
    std::vector<Eigen::Index> train_idx(idx.begin(), idx.begin() + n_train);
    std::vector<Eigen::Index> eval_idx(idx.begin() + n_train, idx.begin() + n_train + n_eval);
    std::vector<Eigen::Index> test_idx(idx.begin() + n_train + n_eval, idx.end());

    DataSplits out{subset(dataset, train_idx), subset(dataset, eval_idx),
                   subset(dataset, test_idx)};
    require_both(out.train);
    require_both(out.eval);
    require_both(out.test);
    return out;
}

std::string to_string(SearchType type) {
    return type == SearchType::sample ? "sample" : "random_seed";
}

SearchType search_type_from_string(const std::string& text) {
    if (text == "sample") return SearchType::sample;
    if (text == "random_seed") return SearchType::random_seed;
    throw std::invalid_argument("unknown search type: " + text);
}

CandidatePool build_pool(const PoolConfig& config, const DataSplits& splits) {
    config.trainer.validate();
    if (config.count <= 0) throw std::invalid_argument("count must be positive");
    if (!(config.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (config.search_type == SearchType::random_seed &&
        config.trainer.kind != TrainerKind::random_forest) {
        throw std::invalid_argument("search type random_seed requires a random forest trainer");
    }

    CandidatePool pool;
    pool.trainer = config.trainer;
    pool.search_type = config.search_type;
    pool.lambda = config.lambda;
    pool.records.resize(static_cast<std::size_t>(config.count));

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= config.count || failed.load()) return;
            try {
                const std::uint64_t seed =
                    derive_seed(config.master_seed, "model", static_cast<std::uint64_t>(i));
                Model model;
                if (config.search_type == SearchType::sample) {
                    RandomStream boot(derive_seed(seed, "bootstrap"));
                    model = train(config.trainer, bootstrap_resample(splits.train, boot), seed);
                } else {
                    model = train(config.trainer, splits.train, seed);
                }
                auto& rec = pool.records[static_cast<std::size_t>(i)];
                rec.model_id = i;
                rec.seed = seed;
                rec.train = metrics_of(model, splits.train, config.lambda);
                rec.eval = metrics_of(model, splits.eval, config.lambda);
                rec.test = metrics_of(model, splits.test, config.lambda);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                failed.store(true);
                if (error.empty()) error = e.what();
            }
        }
    };

    int jobs = config.jobs > 0
                   ? config.jobs
                   : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    jobs = std::min(jobs, config.count);
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(jobs));
        for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    if (failed.load()) throw std::runtime_error(error);
    return pool;
}

TrialRecord subsample_select(const CandidatePool& pool, int n, std::uint64_t seed) {
    return score_trial(pool, draw_trial(pool, n, seed));
}

TrialStatistics trial_statistics(const CandidatePool& pool, int n, int reps,
                                 std::uint64_t seed) {
    if (reps < 1) throw std::invalid_argument("reps must be positive");
    std::vector<double> dd(static_cast<std::size_t>(reps));
    std::vector<double> du(static_cast<std::size_t>(reps));
    int perfect = 0;
    for (int r = 0; r < reps; ++r) {
        TrialRecord rec = subsample_select(pool, n, trial_seed(seed, n, r));
        dd[static_cast<std::size_t>(r)] = rec.delta_test_disparity;
        du[static_cast<std::size_t>(r)] = rec.delta_test_utility;
        perfect += rec.perfect_guess ? 1 : 0;
    }
    TrialStatistics stats;
    stats.n = n;
    stats.reps = reps;
    stats.disparity = summarize(dd);
    stats.utility = summarize(du);
    stats.perfect_guess_freq = static_cast<double>(perfect) / reps;
    return stats;
}

std::map<int, double> perfect_guess_frequency(const CandidatePool& pool,
                                              const std::vector<int>& n_values, int reps,
                                              std::uint64_t seed) {
    if (reps < 1) throw std::invalid_argument("reps must be positive");
    std::map<int, double> out;
    for (int n : n_values) {
        int perfect = 0;
        for (int r = 0; r < reps; ++r) {
            perfect += subsample_select(pool, n, trial_seed(seed, n, r)).perfect_guess ? 1 : 0;
        }
        out[n] = static_cast<double>(perfect) / reps;
    }
    return out;
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("percentile of empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("percentile out of range");
    std::sort(values.begin(), values.end());
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

void write_pool_csv(const CandidatePool& pool, const std::string& path) {
    csv::Table table;
    table.header = {"model_id", "seed", "search_type", "split",
                    "disparity", "utility", "sr_1", "sr_2"};
    auto push = [&](const PoolRecord& rec, const char* name, const SplitMetrics& m) {
        table.rows.push_back({std::to_string(rec.model_id), std::to_string(rec.seed),
                              to_string(pool.search_type), name, format_double(m.disparity),
                              format_double(m.utility), format_double(m.sr_1),
                              format_double(m.sr_2)});
    };
    for (const auto& rec : pool.records) {
        push(rec, "train", rec.train);
        push(rec, "eval", rec.eval);
        push(rec, "test", rec.test);
    }
    csv::write_file(path, table);
}

CandidatePool read_pool_csv(const std::string& path) {
    auto table = csv::read_file(path);
    auto col = [&](const char* name) {
        int c = table.find_column(name);
        if (c < 0) throw std::runtime_error(std::string("pool missing column ") + name);
        return static_cast<std::size_t>(c);
    };
    const auto c_id = col("model_id"), c_seed = col("seed"), c_type = col("search_type"),
               c_split = col("split"), c_d = col("disparity"), c_u = col("utility"),
               c_s1 = col("sr_1"), c_s2 = col("sr_2");
    CandidatePool pool;
    std::map<int, PoolRecord> records;
    bool type_seen = false;
    for (const auto& r : table.rows) {
        const int id = std::stoi(r[c_id]);
        auto& rec = records[id];
        rec.model_id = id;
        rec.seed = std::stoull(r[c_seed]);
        if (!type_seen) {
            pool.search_type = search_type_from_string(r[c_type]);
            type_seen = true;
        }
        SplitMetrics m{std::stod(r[c_d]), std::stod(r[c_u]), std::stod(r[c_s1]),
                       std::stod(r[c_s2])};
        const std::string& part = r[c_split];
        if (part == "train") {
            rec.train = m;
        } else if (part == "eval") {
            rec.eval = m;
        } else if (part == "test") {
            rec.test = m;
        } else {
            throw std::runtime_error("pool row with unknown split " + part);
        }
    }
    pool.records.reserve(records.size());
    for (auto& [id, rec] : records) pool.records.push_back(std::move(rec));
    return pool;
}

void write_statistics_csv(const std::vector<TrialStatistics>& stats, const std::string& path) {
    csv::Table table;
    table.header = {"n",
                    "reps",
                    "mean_delta_disparity",
                    "p2_5_delta_disparity",
                    "p97_5_delta_disparity",
                    "significant_disparity",
                    "mean_delta_utility",
                    "p2_5_delta_utility",
                    "p97_5_delta_utility",
                    "significant_utility",
                    "perfect_guess_freq"};
    for (const auto& s : stats) {
        table.rows.push_back({std::to_string(s.n), std::to_string(s.reps),
                              format_double(s.disparity.mean), format_double(s.disparity.p2_5),
                              format_double(s.disparity.p97_5),
                              s.disparity.significant ? "true" : "false",
                              format_double(s.utility.mean), format_double(s.utility.p2_5),
                              format_double(s.utility.p97_5),
                              s.utility.significant ? "true" : "false",
                              format_double(s.perfect_guess_freq)});
    }
    csv::write_file(path, table);
}

std::vector<TrialStatistics> read_statistics_csv(const std::string& path) {
    auto table = csv::read_file(path);
    auto col = [&](const char* name) {
        int c = table.find_column(name);
        if (c < 0) throw std::runtime_error(std::string("statistics missing column ") + name);
        return static_cast<std::size_t>(c);
    };
    const auto c_n = col("n"), c_reps = col("reps"), c_md = col("mean_delta_disparity"),
               c_ld = col("p2_5_delta_disparity"), c_hd = col("p97_5_delta_disparity"),
               c_sd = col("significant_disparity"), c_mu = col("mean_delta_utility"),
               c_lu = col("p2_5_delta_utility"), c_hu = col("p97_5_delta_utility"),
               c_su = col("significant_utility"), c_pg = col("perfect_guess_freq");
    std::vector<TrialStatistics> out;
    for (const auto& r : table.rows) {
        TrialStatistics s;
        s.n = std::stoi(r[c_n]);
        s.reps = std::stoi(r[c_reps]);
        s.disparity = {std::stod(r[c_md]), std::stod(r[c_ld]), std::stod(r[c_hd]),
                       r[c_sd] == "true"};
        s.utility = {std::stod(r[c_mu]), std::stod(r[c_lu]), std::stod(r[c_hu]),
                     r[c_su] == "true"};
        s.perfect_guess_freq = std::stod(r[c_pg]);
        out.push_back(s);
    }
    return out;
}

} // namespace lda
