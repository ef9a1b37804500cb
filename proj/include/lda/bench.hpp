#pragma once

#include "lda/fullinfo.hpp"

#include <chrono>
#include <map>
#include <string>
#include <vector>

namespace lda {

struct BenchConfig {
    std::vector<int> n_options_values = {4, 5};
    std::vector<int> max_digits_values = {1, 2, 3, 4};
    int instance_count = 250;
    std::vector<double> epsilons = {0.5, 0.1, 0.01};
    std::uint64_t master_seed = 0;
    std::chrono::milliseconds time_limit_per_solve{10000};
    int jobs = 1;
    std::string persist_dir; // nonempty: write each instance before solving
};

struct BenchRow {
    int instance_id = 0;
    int n_options = 0;
    int max_digits = 0;
    int input_digits = 0;
    std::string algorithm; // "exact" or "approx"
    double epsilon = 0.0;  // meaningful for approx rows only
    double wall_ms = 0.0;
    std::string status; // found / none_exists / not_found_at_epsilon / timed_out
    bool valid = true;  // any returned solution passes the strict conditions
    int lda_exists = -1; // 1 / 0 / -1 when the ground truth timed out
};

struct BenchReport {
    std::vector<BenchRow> rows;
};

// Generates the instance stream (round-robin over the parameter grid,
// seeded from master_seed), solves each with the exact solver and one
// approximate solver per epsilon, and records wall times and outcomes.
// Deterministic apart from the timing columns.
BenchReport run_benchmark(const BenchConfig& config);

// Fraction of instances with an existing LDA that each algorithm found,
// keyed "exact" / "approx@<eps>".  Timed-out rows leave the denominator.
std::map<std::string, double> hit_rate(const BenchReport& report);

std::string algorithm_key(const BenchRow& row);

void write_report_csv(const BenchReport& report, const std::string& path);
BenchReport read_report_csv(const std::string& path);

} // namespace lda
