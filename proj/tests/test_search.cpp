#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lda/data.hpp"
#include "lda/rng.hpp"
#include "lda/search.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

using namespace lda;

namespace {

DataSplits synthetic_splits(std::uint64_t seed) {
    auto data = synthetic_dataset(1500, 0.5, {0.45, 0.3}, 0.8, seed);
    SplitSpec spec;
    spec.seed = seed + 1;
    return split(data, spec);
}

// Pool of hand-written records; eval/test disparities supplied directly.
CandidatePool fabricated_pool(const std::vector<std::pair<double, double>>& eval_test) {
    CandidatePool pool;
    for (std::size_t i = 0; i < eval_test.size(); ++i) {
        PoolRecord rec;
        rec.model_id = static_cast<int>(i);
        rec.seed = i;
        rec.eval.disparity = eval_test[i].first;
        rec.test.disparity = eval_test[i].second;
        rec.test.utility = 1.0 - eval_test[i].second;
        pool.records.push_back(rec);
    }
    return pool;
}

CandidatePool independence_null_pool(std::size_t size, std::uint64_t seed) {
    RandomStream rng(seed);
    std::vector<std::pair<double, double>> et(size);
    for (auto& [e, t] : et) {
        e = 2.0 * rng.next_unit() - 1.0;
        t = 2.0 * rng.next_unit() - 1.0;
    }
    return fabricated_pool(et);
}

} // namespace

TEST_CASE("split divides 1000 rows as 600/200/200") {
    auto data = synthetic_dataset(1000, 0.5, {0.5, 0.4}, 1.0, 3);
    SplitSpec spec;
    spec.seed = 9;
    auto parts = split(data, spec);
    CHECK(parts.train.size() == 600);
    CHECK(parts.eval.size() == 200);
    CHECK(parts.test.size() == 200);

    // disjoint partition: row multisets add back up to the original
    auto key = [](const LabeledDataset& d, Eigen::Index i) {
        return std::tuple<double, double, int, int>{d.features(i, 0), d.features(i, 1),
                                                    d.groups(i), d.labels(i)};
    };
    std::multiset<std::tuple<double, double, int, int>> original, recombined;
    for (Eigen::Index i = 0; i < data.size(); ++i) original.insert(key(data, i));
    for (const auto* part : {&parts.train, &parts.eval, &parts.test}) {
        for (Eigen::Index i = 0; i < part->size(); ++i) recombined.insert(key(*part, i));
    }
    CHECK(original == recombined);
}

TEST_CASE("split is deterministic and seed-sensitive") {
    auto data = synthetic_dataset(400, 0.5, {0.5, 0.4}, 1.0, 4);
    SplitSpec spec;
    spec.seed = 1;
    auto a = split(data, spec);
    auto b = split(data, spec);
    CHECK((a.train.features.array() == b.train.features.array()).all());
    spec.seed = 2;
    auto c = split(data, spec);
    CHECK(!(a.train.features.array() == c.train.features.array()).all());
}

TEST_CASE("degenerate splits are rejected") {
    auto data = synthetic_dataset(50, 0.5, {0.5, 0.4}, 1.0, 5);
    SplitSpec spec;
    spec.train_fraction = 0.98;
    spec.eval_fraction = 0.01;
    spec.test_fraction = 0.01;
    CHECK_THROWS_WITH(split(data, spec), "degenerate split");

    SplitSpec bad;
    bad.train_fraction = 0.5;
    bad.eval_fraction = 0.2;
    bad.test_fraction = 0.2;
    CHECK_THROWS_AS(split(data, bad), std::invalid_argument);
    bad = {};
    bad.train_fraction = -0.2;
    bad.eval_fraction = 0.6;
    bad.test_fraction = 0.6;
    CHECK_THROWS_AS(split(data, bad), std::invalid_argument);
}

TEST_CASE("build_pool produces deterministic records") {
    auto splits = synthetic_splits(12);
    PoolConfig config;
    config.trainer.kind = TrainerKind::decision_tree;
    config.trainer.max_depth = 3;
    config.count = 6;
    config.master_seed = 99;
    auto a = build_pool(config, splits);
    auto b = build_pool(config, splits);
    REQUIRE(a.records.size() == 6);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].model_id == static_cast<int>(i));
        CHECK(a.records[i].seed == b.records[i].seed);
        CHECK(a.records[i].eval.disparity == b.records[i].eval.disparity);
        CHECK(a.records[i].test.utility == b.records[i].test.utility);
    }
    config.jobs = 4;
    auto c = build_pool(config, splits);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].eval.disparity == c.records[i].eval.disparity);
        CHECK(a.records[i].train.sr_1 == c.records[i].train.sr_1);
    }
}

TEST_CASE("bootstrap pools vary across models, random_seed pools too") {
    auto splits = synthetic_splits(13);
    PoolConfig config;
    config.trainer.kind = TrainerKind::random_forest;
    config.trainer.n_trees = 5;
    config.count = 5;
    config.search_type = SearchType::random_seed;
    auto pool = build_pool(config, splits);
    std::set<double> evals;
    for (const auto& rec : pool.records) evals.insert(rec.eval.disparity);
    CHECK(evals.size() > 1);
}

TEST_CASE("random_seed search demands a random forest") {
    auto splits = synthetic_splits(14);
    PoolConfig config;
    config.trainer.kind = TrainerKind::logistic_regression;
    config.search_type = SearchType::random_seed;
    config.count = 2;
    CHECK_THROWS_WITH(build_pool(config, splits),
                      "search type random_seed requires a random forest trainer");
}

TEST_CASE("pool metrics are recomputable from the trained model") {
    auto splits = synthetic_splits(15);
    PoolConfig config;
    config.trainer.kind = TrainerKind::random_forest;
    config.trainer.n_trees = 4;
    config.count = 3;
    config.search_type = SearchType::random_seed;
    config.lambda = 2.0;
    config.master_seed = 5;
    auto pool = build_pool(config, splits);
    for (const auto& rec : pool.records) {
        auto model = train(config.trainer, splits.train, rec.seed);
        auto m = evaluate_decisions(splits.eval, model.predict(splits.eval), config.lambda);
        CHECK(std::abs(m.delta - rec.eval.disparity) < 1e-12);
        CHECK(std::abs(m.utility - rec.eval.utility) < 1e-12);
        auto t = evaluate_decisions(splits.test, model.predict(splits.test), config.lambda);
        CHECK(std::abs(t.delta - rec.test.disparity) < 1e-12);
    }
}

TEST_CASE("n = 1 trials have zero deltas and perfect guesses") {
    auto pool = independence_null_pool(50, 7);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rec = subsample_select(pool, 1, seed);
        CHECK(rec.delta_test_disparity == 0.0);
        CHECK(rec.delta_test_utility == 0.0);
        CHECK(rec.perfect_guess);
        CHECK(rec.drawn_model_ids.size() == 1);
    }
    auto stats = trial_statistics(pool, 1, 200, 11);
    CHECK(stats.disparity.mean == 0.0);
    CHECK(stats.disparity.p2_5 == 0.0);
    CHECK(stats.disparity.p97_5 == 0.0);
    CHECK(!stats.disparity.significant);
    CHECK(!stats.utility.significant);
    CHECK(stats.perfect_guess_freq == 1.0);
}

TEST_CASE("selection minimizes eval disparity with id tie-breaks") {
    auto pool = fabricated_pool({{0.5, 0.1}, {-0.2, 0.4}, {0.2, 0.3}, {-0.2, 0.2}});
    auto rec = subsample_select(pool, 4, 123);
    // two records tie at |eval| = 0.2; the smaller id wins
    CHECK(rec.selected_model_id == 1);
    CHECK(rec.drawn_model_ids.size() == 4);

    CHECK_THROWS_WITH(subsample_select(pool, 0, 1), "n out of range");
    CHECK_THROWS_WITH(subsample_select(pool, 5, 1), "n out of range");
}

TEST_CASE("argmin is never above the trial mean on eval data") {
    auto pool = independence_null_pool(120, 17);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto rec = subsample_select(pool, 8, seed);
        double mean = 0.0, selected = 0.0;
        for (int id : rec.drawn_model_ids) {
            mean += std::abs(pool.records[static_cast<std::size_t>(id)].eval.disparity);
            if (id == rec.selected_model_id) {
                selected = std::abs(pool.records[static_cast<std::size_t>(id)].eval.disparity);
            }
        }
        mean /= static_cast<double>(rec.drawn_model_ids.size());
        CHECK(selected <= mean);
    }
}

TEST_CASE("concordant pools always guess perfectly") {
    // eval ordering identical to test ordering
    auto pool = fabricated_pool({{0.1, 0.01}, {0.2, 0.02}, {0.3, 0.03}, {0.4, 0.04},
                                 {0.5, 0.05}, {0.6, 0.06}});
    for (int n = 1; n <= 6; ++n) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            CHECK(subsample_select(pool, n, seed).perfect_guess);
        }
    }
}

TEST_CASE("identical models yield null statistics") {
    auto pool = fabricated_pool(std::vector<std::pair<double, double>>(10, {0.3, 0.2}));
    auto stats = trial_statistics(pool, 4, 100, 5);
    CHECK(stats.disparity.mean == 0.0);
    CHECK(stats.utility.mean == 0.0);
    CHECK(!stats.disparity.significant);
    CHECK(!stats.utility.significant);
    CHECK(stats.perfect_guess_freq == 1.0);
}

TEST_CASE("trial statistics are deterministic and ordered") {
    auto pool = independence_null_pool(300, 23);
    auto a = trial_statistics(pool, 10, 400, 77);
    auto b = trial_statistics(pool, 10, 400, 77);
    CHECK(a.disparity.mean == b.disparity.mean);
    CHECK(a.utility.p97_5 == b.utility.p97_5);
    CHECK(a.perfect_guess_freq == b.perfect_guess_freq);
    CHECK(a.disparity.p2_5 <= a.disparity.mean);
    CHECK(a.disparity.mean <= a.disparity.p97_5);
    CHECK(a.utility.p2_5 <= a.utility.mean);
    CHECK(a.utility.mean <= a.utility.p97_5);
    // selecting on eval data cannot help under independence, on average
    CHECK(std::abs(a.disparity.mean) < 0.05);
}

TEST_CASE("perfect guess frequency matches 1/n on independence nulls") {
    auto pool = independence_null_pool(500, 29);
    auto freq = perfect_guess_frequency(pool, {1, 2, 5, 10}, 2000, 41);
    CHECK(freq.at(1) == 1.0);
    CHECK(std::abs(freq.at(2) - 0.5) < 0.05);
    CHECK(std::abs(freq.at(5) - 0.2) < 0.05);
    CHECK(std::abs(freq.at(10) - 0.1) < 0.05);
}

TEST_CASE("perfect guess frequency agrees with trial statistics") {
    auto pool = independence_null_pool(80, 31);
    auto stats = trial_statistics(pool, 6, 500, 13);
    auto freq = perfect_guess_frequency(pool, {6}, 500, 13);
    CHECK(stats.perfect_guess_freq == freq.at(6));
}

TEST_CASE("statistics are invariant to pool record order") {
    auto pool = independence_null_pool(200, 37);
    auto shuffled = pool;
    RandomStream rng(4);
    rng.shuffle(shuffled.records);
    auto a = trial_statistics(pool, 5, 3000, 19);
    auto b = trial_statistics(shuffled, 5, 3000, 19);
    // identically distributed draws; means agree to Monte-Carlo accuracy
    CHECK(std::abs(a.disparity.mean - b.disparity.mean) < 0.04);
    CHECK(std::abs(a.perfect_guess_freq - b.perfect_guess_freq) < 0.05);
}

TEST_CASE("band width stays controlled as n grows") {
    auto pool = independence_null_pool(400, 43);
    auto narrow = trial_statistics(pool, 2, 1500, 3);
    auto wide = trial_statistics(pool, 50, 1500, 3);
    const double w2 = narrow.disparity.p97_5 - narrow.disparity.p2_5;
    const double w50 = wide.disparity.p97_5 - wide.disparity.p2_5;
    CHECK(w50 <= 3.0 * w2);
}

TEST_CASE("pool and statistics CSVs round-trip") {
    auto splits = synthetic_splits(16);
    PoolConfig config;
    config.trainer.kind = TrainerKind::decision_tree;
    config.trainer.max_depth = 2;
    config.count = 4;
    auto pool = build_pool(config, splits);
    auto dir = std::filesystem::temp_directory_path();
    auto pool_path = (dir / "lda_pool.csv").string();
    write_pool_csv(pool, pool_path);
    auto back = read_pool_csv(pool_path);
    REQUIRE(back.records.size() == pool.records.size());
    for (std::size_t i = 0; i < pool.records.size(); ++i) {
        CHECK(back.records[i].model_id == pool.records[i].model_id);
        CHECK(back.records[i].seed == pool.records[i].seed);
        CHECK(back.records[i].train.disparity == pool.records[i].train.disparity);
        CHECK(back.records[i].eval.utility == pool.records[i].eval.utility);
        CHECK(back.records[i].test.sr_2 == pool.records[i].test.sr_2);
    }
    CHECK(back.search_type == pool.search_type);

    std::vector<TrialStatistics> stats;
    stats.push_back(trial_statistics(pool, 2, 50, 1));
    stats.push_back(trial_statistics(pool, 3, 50, 1));
    auto stats_path = (dir / "lda_stats.csv").string();
    write_statistics_csv(stats, stats_path);
    auto stats_back = read_statistics_csv(stats_path);
    REQUIRE(stats_back.size() == 2);
    CHECK(stats_back[0].n == 2);
    CHECK(stats_back[1].n == 3);
    CHECK(stats_back[0].disparity.mean == stats[0].disparity.mean);
    CHECK(stats_back[0].utility.significant == stats[0].utility.significant);
    CHECK(stats_back[1].perfect_guess_freq == stats[1].perfect_guess_freq);
    std::filesystem::remove(pool_path);
    std::filesystem::remove(stats_path);
}

TEST_CASE("percentiles interpolate between order statistics") {
    std::vector<double> v{4.0, 1.0, 3.0, 2.0};
    CHECK(percentile(v, 0.0) == 1.0);
    CHECK(percentile(v, 1.0) == 4.0);
    CHECK(percentile(v, 0.5) == 2.5);
    CHECK(percentile(v, 0.25) == 1.75);
    CHECK_THROWS_AS(percentile({}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(percentile(v, 1.5), std::invalid_argument);
}
