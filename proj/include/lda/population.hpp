#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace lda {

// Person counts per (group, label) cell of a finite population.
struct GroupTally {
    std::int64_t n_1_pos = 0;
    std::int64_t n_1_neg = 0;
    std::int64_t n_2_pos = 0;
    std::int64_t n_2_neg = 0;

    std::int64_t n_1() const { return n_1_pos + n_1_neg; }
    std::int64_t n_2() const { return n_2_pos + n_2_neg; }
    std::int64_t n_pos() const { return n_1_pos + n_2_pos; }
    std::int64_t n_neg() const { return n_1_neg + n_2_neg; }
    std::int64_t total() const { return n_1() + n_2(); }

    double br_1() const { return static_cast<double>(n_1_pos) / static_cast<double>(n_1()); }
    double br_2() const { return static_cast<double>(n_2_pos) / static_cast<double>(n_2()); }
};

// Randomized classifier described by the fraction of each (group, label)
// cell that receives a positive decision.  Deterministic classifiers are
// the special case where every fraction is k / n_{g,y}.
struct CellClassifier {
    double p_1_pos = 0.0;
    double p_1_neg = 0.0;
    double p_2_pos = 0.0;
    double p_2_neg = 0.0;

    static CellClassifier perfect() { return {1.0, 0.0, 1.0, 0.0}; }
    static CellClassifier all_zero() { return {0.0, 0.0, 0.0, 0.0}; }
    static CellClassifier all_one() { return {1.0, 1.0, 1.0, 1.0}; }
};

struct Metrics {
    double sr_1 = 0.0;
    double sr_2 = 0.0;
    double delta = 0.0; // sr_1 - sr_2
    double tpr = 0.0;
    double fpr = 0.0;
    double utility = 0.0; // tpr - lambda * fpr
};

// Tabular dataset after encoding: numeric feature matrix (categoricals
// one-hot expanded by the loader), group ids in {1,2}, labels in {0,1}.
struct LabeledDataset {
    std::string name;
    std::vector<std::string> feature_names;
    Eigen::MatrixXd features; // one row per person
    Eigen::VectorXi groups;
    Eigen::VectorXi labels;

    Eigen::Index size() const { return features.rows(); }
};

// Decisions of the pathological rule on both datasets, with its
// pre-deployment accuracy and post-deployment disparity.
struct PathologicalTranscript {
    std::vector<int> pre_decisions;
    std::vector<int> post_decisions;
    double pre_accuracy = 0.0;
    double post_disparity = 0.0;
};

GroupTally tally(const LabeledDataset& dataset);

Metrics metrics(const GroupTally& tally, const CellClassifier& classifier, double lambda);

// Metrics of explicit 0/1 decisions, one per dataset row.
Metrics evaluate_decisions(const LabeledDataset& dataset, const std::vector<int>& decisions,
                           double lambda);

// Memorizes the pre-deployment labels and selects everyone afterwards:
// perfect accuracy on one dataset, zero disparity on the other.  Requires
// all feature vectors to be distinct within and across the two datasets.
PathologicalTranscript pathological_rule(const LabeledDataset& pre_deploy,
                                         const LabeledDataset& post_deploy);

} // namespace lda
