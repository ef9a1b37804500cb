#pragma once

#include "lda/rational.hpp"

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lda {

// One data value x of a full-information instance: group densities and
// the Bayes-optimal positive-label probability, all exact rationals.
struct ValueRecord {
    std::string id;
    Rat rho1;
    Rat rho2;
    Rat sigma;
};

struct FullInfoInstance {
    std::vector<ValueRecord> values;
    Rat lambda = Rat(1);
    std::vector<std::string> baseline; // value ids selected by the baseline h0
    int digits = 0;                    // stated decimal precision of the densities

    // Enforces the instance invariants (density ranges and normalization,
    // id uniqueness, baseline membership, digit bounds for terminating
    // densities).  Throws std::invalid_argument on violation.
    void validate() const;
};

struct ValueScores {
    std::string id;
    Rat d; // disparity contribution: rho1 - rho2
    Rat u; // utility contribution: mean density * (sigma - lambda*(1-sigma))
};

enum class SolveStatus { found, none_exists, not_found_at_epsilon };

std::string to_string(SolveStatus status);
SolveStatus solve_status_from_string(const std::string& text);

struct LdaSolution {
    SolveStatus status = SolveStatus::none_exists;
    std::vector<std::string> selection; // value ids, in instance order
    Rat delta;                          // of the selection when found, else of the baseline
    Rat utility;
    Rat baseline_delta;
    Rat baseline_utility;
    std::string note;
};

struct SubsetSumInstance {
    std::vector<std::int64_t> weights; // nonzero integers; target sum is 0
};

// Thrown by the solvers when SolveOptions.deadline passes mid-solve.
struct SolveTimeout : std::runtime_error {
    SolveTimeout() : std::runtime_error("solve timed out") {}
};

struct SolveOptions {
    std::size_t memory_cap_bytes = std::size_t{256} << 20;
    std::chrono::steady_clock::time_point deadline{}; // epoch value = no deadline
    bool force_layered = false; // use the >64-value code path regardless of size
};

std::vector<ValueScores> value_scores(const FullInfoInstance& inst);

// (delta0, u0) of the baseline selection.
std::pair<Rat, Rat> baseline_scores(const FullInfoInstance& inst);

// Pseudo-polynomial dynamic program over exact integerized disparity sums,
// keeping the maximum achievable utility per reachable sum.  Status
// `found` iff some selection has utility >= u0 and |delta| strictly below
// |delta0|.  Throws when the state space exceeds the memory cap.
LdaSolution solve_exact(const FullInfoInstance& inst, const SolveOptions& opts = {});

// (1+epsilon)-approximation by two-sided list trimming: guaranteed to
// return `found` whenever a selection with |delta| <= |delta0|/(1+epsilon)
// and utility >= u0 exists; any returned solution satisfies the strict
// conditions exactly.
LdaSolution solve_approx(const FullInfoInstance& inst, double epsilon,
                         const SolveOptions& opts = {});

// Builds the hard population for a Subset-Sum instance: one value per
// weight plus the baseline value x* and the balancing value x**; an LDA
// exists iff the weights contain a nonempty zero-sum subset.
FullInfoInstance reduce_subset_sum(const SubsetSumInstance& w, const Rat& lambda);

// Maps a found solution on a reduced instance back to the weights; their
// sum is exactly zero.  Throws if the selection touches x* or x**.
std::vector<std::int64_t> extract_subset_sum_solution(const SubsetSumInstance& w,
                                                      const LdaSolution& solution);

// Random instance: density vectors summing to exactly 1 at max_digits
// decimals (sigma at 2), plus a random nonempty proper baseline.
FullInfoInstance generate_instance(int n_options, int max_digits, std::uint64_t seed);

// Total count of decimal digits after the point across all sigma and rho
// entries (trailing zeros excluded).  Throws std::domain_error when an
// entry has no finite decimal expansion.
int input_size_digits(const FullInfoInstance& inst);

// CSV (id,rho1,rho2,sigma) plus sidecar JSON {lambda, baseline, digits}.
// Densities are written precision-preserving: decimal strings when exact,
// p/q otherwise.
void write_instance(const FullInfoInstance& inst, const std::string& csv_path,
                    const std::string& json_path);
FullInfoInstance read_instance(const std::string& csv_path, const std::string& json_path);

} // namespace lda
