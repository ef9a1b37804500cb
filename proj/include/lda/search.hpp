#pragma once

#include "lda/models.hpp"
#include "lda/population.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lda {

struct SplitSpec {
    double train_fraction = 0.6;
    double eval_fraction = 0.2;
    double test_fraction = 0.2;
    std::uint64_t seed = 0;

    void validate() const; // fractions positive, summing to 1 within 1e-9
};

struct DataSplits {
    LabeledDataset train;
    LabeledDataset eval;
    LabeledDataset test;
};

// Disjoint row partition by shuffled indices; each part must keep both
// groups and both labels, else "degenerate split".
DataSplits split(const LabeledDataset& dataset, const SplitSpec& spec);

enum class SearchType { sample, random_seed };

std::string to_string(SearchType type);
SearchType search_type_from_string(const std::string& text);

struct SplitMetrics {
    double disparity = 0.0; // signed sr_1 - sr_2
    double utility = 0.0;
    double sr_1 = 0.0;
    double sr_2 = 0.0;
};

struct PoolRecord {
    int model_id = 0;
    std::uint64_t seed = 0;
    SplitMetrics train;
    SplitMetrics eval;
    SplitMetrics test;
};

struct CandidatePool {
    TrainerSpec trainer;
    SearchType search_type = SearchType::sample;
    double lambda = 1.0;
    std::vector<PoolRecord> records; // ascending model_id
};

struct PoolConfig {
    TrainerSpec trainer;
    SearchType search_type = SearchType::sample;
    int count = 100;
    std::uint64_t master_seed = 0;
    double lambda = 1.0;
    int jobs = 1; // <= 0: hardware concurrency
};

// One trained model per record: `sample` bootstraps the training split,
// `random_seed` (random forests only) varies the training seed.  Metrics
// of each model on all three splits, deterministic given master_seed.
CandidatePool build_pool(const PoolConfig& config, const DataSplits& splits);

struct TrialRecord {
    int selected_model_id = 0;
    std::vector<int> drawn_model_ids; // the n drawn records, in draw order
    double delta_test_disparity = 0.0; // selected |test disparity| minus trial mean
    double delta_test_utility = 0.0;   // selected test utility minus trial mean
    bool perfect_guess = false;
};

// Draws n records without replacement, selects the minimum |eval
// disparity| (ties: smallest model id), and compares its test metrics to
// the trial average.
TrialRecord subsample_select(const CandidatePool& pool, int n, std::uint64_t seed);

struct DeltaSummary {
    double mean = 0.0;
    double p2_5 = 0.0;
    double p97_5 = 0.0;
    bool significant = false; // same strict sign in >= 95% of reps
};

struct TrialStatistics {
    int n = 0;
    int reps = 0;
    DeltaSummary disparity;
    DeltaSummary utility;
    double perfect_guess_freq = 0.0;
};

TrialStatistics trial_statistics(const CandidatePool& pool, int n, int reps,
                                 std::uint64_t seed);

// Per-n fraction of trials whose eval-minimum is also the test-minimum;
// trials are shared with trial_statistics at the same (n, seed).
std::map<int, double> perfect_guess_frequency(const CandidatePool& pool,
                                              const std::vector<int>& n_values, int reps,
                                              std::uint64_t seed);

// Empirical percentile with linear interpolation between order statistics.
double percentile(std::vector<double> values, double p);

void write_pool_csv(const CandidatePool& pool, const std::string& path);
CandidatePool read_pool_csv(const std::string& path);

void write_statistics_csv(const std::vector<TrialStatistics>& stats, const std::string& path);
std::vector<TrialStatistics> read_statistics_csv(const std::string& path);

} // namespace lda
