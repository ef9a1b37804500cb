#pragma once

#include "lda/population.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lda {

enum class TrainerKind { logistic_regression, decision_tree, random_forest };

std::string to_string(TrainerKind kind);
TrainerKind trainer_kind_from_string(const std::string& text);

struct TrainerSpec {
    TrainerKind kind = TrainerKind::logistic_regression;
    int max_depth = -1; // -1: kind default (tree unlimited, forest 5)
    int n_trees = 100;
    bool balanced_weights = true;
    int lr_iterations = 500;
    double lr_step = 0.1;

    int effective_max_depth() const;
    void validate() const;
};

// Interior node tests feature <= threshold (left) vs > (right); leaves
// carry the weighted positive share of their training rows.
struct TreeNode {
    int feature = -1; // -1: leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double positive_fraction = 0.0;
};

struct Tree {
    std::vector<TreeNode> nodes; // nodes[0] is the root

    double score(const Eigen::RowVectorXd& x) const;
};

// Trained predictor.  Imputation (and standardization, for logistic
// regression) replays the training split's statistics at prediction time.
struct Model {
    TrainerKind kind = TrainerKind::logistic_regression;
    Eigen::VectorXd impute_means;

    // logistic regression
    Eigen::VectorXd lr_mean;
    Eigen::VectorXd lr_scale;
    Eigen::VectorXd lr_weights;
    double lr_intercept = 0.0;

    // decision tree / random forest
    std::vector<Tree> trees;

    double score(Eigen::RowVectorXd x) const; // positive-class score in [0,1]
    int predict(const Eigen::RowVectorXd& x) const { return score(x) >= 0.5 ? 1 : 0; }
    std::vector<int> predict(const LabeledDataset& data) const;
};

// Deterministic given (spec, data, seed); the seed only feeds the random
// forest's bootstrap and feature subsampling.
Model train(const TrainerSpec& spec, const LabeledDataset& data, std::uint64_t seed);

} // namespace lda
