#include "lda/models.hpp"

#include "lda/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lda {

namespace {

struct WeightedRows {
    Eigen::MatrixXd x;      // imputed features
    Eigen::VectorXi y;      // labels
    Eigen::VectorXd w;      // per-row class weights
    Eigen::VectorXd means;  // imputation means from this data
};

WeightedRows prepare(const TrainerSpec& spec, const LabeledDataset& data) {
    if (data.size() == 0) throw std::invalid_argument("empty population");
    const Eigen::Index n = data.size();
    const Eigen::Index f = data.features.cols();

    std::int64_t n_pos = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        int y = data.labels[i];
        if (y != 0 && y != 1) throw std::invalid_argument("label outside {0,1}");
        n_pos += y;
    }
    if (n_pos == 0 || n_pos == n) throw std::invalid_argument("degenerate labels");

    WeightedRows rows;
    rows.x = data.features;
    rows.y = data.labels;
    rows.means = Eigen::VectorXd::Zero(f);
    for (Eigen::Index j = 0; j < f; ++j) {
        double sum = 0.0;
        Eigen::Index count = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double v = rows.x(i, j);
            if (std::isinf(v)) throw std::invalid_argument("non-finite feature value");
            if (!std::isnan(v)) {
                sum += v;
                ++count;
            }
        }
        rows.means[j] = count > 0 ? sum / static_cast<double>(count) : 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::isnan(rows.x(i, j))) rows.x(i, j) = rows.means[j];
        }
    }

    rows.w.resize(n);
    double w_pos = 1.0, w_neg = 1.0;
    if (spec.balanced_weights) {
        w_pos = static_cast<double>(n) / (2.0 * static_cast<double>(n_pos));
        w_neg = static_cast<double>(n) / (2.0 * static_cast<double>(n - n_pos));
    }
    for (Eigen::Index i = 0; i < n; ++i) rows.w[i] = rows.y[i] == 1 ? w_pos : w_neg;
    return rows;
}

void fit_logistic(const TrainerSpec& spec, const WeightedRows& rows, Model& model) {
    const Eigen::Index n = rows.x.rows();
    const Eigen::Index f = rows.x.cols();
    model.lr_mean = rows.x.colwise().mean();
    Eigen::MatrixXd z = rows.x.rowwise() - model.lr_mean.transpose();
    model.lr_scale.resize(f);
    for (Eigen::Index j = 0; j < f; ++j) {
        double sd = std::sqrt(z.col(j).squaredNorm() / static_cast<double>(n));
        model.lr_scale[j] = sd > 1e-12 ? sd : 1.0;
        z.col(j) /= model.lr_scale[j];
    }

    Eigen::VectorXd w = Eigen::VectorXd::Zero(f);
    double b = 0.0;
    const double total_weight = rows.w.sum();
    Eigen::VectorXd target(n);
    for (Eigen::Index i = 0; i < n; ++i) target[i] = rows.y[i];
    for (int it = 0; it < spec.lr_iterations; ++it) {
        Eigen::VectorXd p = (z * w).array() + b;
        p = 1.0 / (1.0 + (-p.array()).exp());
        Eigen::VectorXd residual = rows.w.array() * (p - target).array();
        w -= (spec.lr_step / total_weight) * (z.transpose() * residual);
        b -= (spec.lr_step / total_weight) * residual.sum();
    }
    model.lr_weights = std::move(w);
    model.lr_intercept = b;
}

struct TreeBuilder {
    const Eigen::MatrixXd& x;
    const Eigen::VectorXi& y;
    const Eigen::VectorXd& w;
    int max_depth;           // negative: unlimited
    int features_per_split;  // 0: all features
    RandomStream* rng;       // feature subsampling source, forest only
    Tree tree;

    static double gini(double w_pos, double w_total) {
        if (w_total <= 0.0) return 0.0;
        double p = w_pos / w_total;
        return 2.0 * p * (1.0 - p);
    }

    int build(std::vector<Eigen::Index>& idx, int depth) {
        double w_total = 0.0, w_pos = 0.0;
        for (Eigen::Index i : idx) {
            w_total += w[i];
            w_pos += w[i] * y[i];
        }
        const int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[static_cast<std::size_t>(node_id)].positive_fraction =
            w_total > 0.0 ? w_pos / w_total : 0.0;

        const double impurity = gini(w_pos, w_total);
        const bool depth_ok = max_depth < 0 || depth < max_depth;
        if (!depth_ok || impurity <= 0.0 || idx.size() < 2) return node_id;

        std::vector<int> candidates;
        const int f = static_cast<int>(x.cols());
        if (features_per_split > 0 && features_per_split < f) {
            auto picks = rng->sample_without_replacement(static_cast<std::size_t>(f),
                                                         static_cast<std::size_t>(
                                                             features_per_split));
            candidates.assign(picks.begin(), picks.end());
            std::sort(candidates.begin(), candidates.end());
        } else {
            candidates.resize(static_cast<std::size_t>(f));
            std::iota(candidates.begin(), candidates.end(), 0);
        }

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_cost = impurity;
        std::vector<std::pair<double, Eigen::Index>> order(idx.size());
        for (int feature : candidates) {
            for (std::size_t k = 0; k < idx.size(); ++k) {
                order[k] = {x(idx[k], feature), idx[k]};
            }
            std::sort(order.begin(), order.end());
            double left_w = 0.0, left_pos = 0.0;
            for (std::size_t k = 0; k + 1 < order.size(); ++k) {
                const Eigen::Index i = order[k].second;
                left_w += w[i];
                left_pos += w[i] * y[i];
                if (order[k].first == order[k + 1].first) continue;
                const double right_w = w_total - left_w;
                const double right_pos = w_pos - left_pos;
                const double cost = (left_w * gini(left_pos, left_w) +
                                     right_w * gini(right_pos, right_w)) /
                                    w_total;
                if (cost < best_cost) {
                    best_cost = cost;
                    best_feature = feature;
                    best_threshold = std::midpoint(order[k].first, order[k + 1].first);
                }
            }
        }
        if (best_feature < 0) return node_id;

        std::vector<Eigen::Index> left, right;
        for (Eigen::Index i : idx) {
            (x(i, best_feature) <= best_threshold ? left : right).push_back(i);
        }
        if (left.empty() || right.empty()) return node_id;
        idx.clear();
        idx.shrink_to_fit();

        const int left_id = build(left, depth + 1);
        const int right_id = build(right, depth + 1);
        auto& node = tree.nodes[static_cast<std::size_t>(node_id)];
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.left = left_id;
        node.right = right_id;
        return node_id;
    }
};

Tree fit_tree(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, const Eigen::VectorXd& w,
              int max_depth, int features_per_split, RandomStream* rng) {
    TreeBuilder builder{x, y, w, max_depth, features_per_split, rng, {}};
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(x.rows()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    builder.build(idx, 0);
    return std::move(builder.tree);
}

} // namespace

std::string to_string(TrainerKind kind) {
    switch (kind) {
    case TrainerKind::logistic_regression: return "logistic_regression";
    case TrainerKind::decision_tree: return "decision_tree";
    case TrainerKind::random_forest: return "random_forest";
    }
    throw std::logic_error("unreachable trainer kind");
}

TrainerKind trainer_kind_from_string(const std::string& text) {
    if (text == "logistic_regression") return TrainerKind::logistic_regression;
    if (text == "decision_tree") return TrainerKind::decision_tree;
    if (text == "random_forest") return TrainerKind::random_forest;
    throw std::invalid_argument("unknown trainer kind: " + text);
}

int TrainerSpec::effective_max_depth() const {
    if (max_depth >= 0) return max_depth;
    return kind == TrainerKind::random_forest ? 5 : -1;
}

void TrainerSpec::validate() const {
    if (kind == TrainerKind::random_forest && n_trees <= 0) {
        throw std::invalid_argument("n_trees must be positive");
    }
    if (kind == TrainerKind::logistic_regression) {
        if (lr_iterations <= 0) throw std::invalid_argument("lr_iterations must be positive");
        if (!(lr_step > 0.0)) throw std::invalid_argument("lr_step must be positive");
    }
}

double Tree::score(const Eigen::RowVectorXd& x) const {
    int node = 0;
    for (;;) {
        const auto& n = nodes[static_cast<std::size_t>(node)];
        if (n.feature < 0) return n.positive_fraction;
        node = x[n.feature] <= n.threshold ? n.left : n.right;
    }
}

double Model::score(Eigen::RowVectorXd x) const {
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        if (std::isnan(x[j])) x[j] = impute_means[j];
    }
    if (kind == TrainerKind::logistic_regression) {
        double z = lr_intercept;
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            z += lr_weights[j] * (x[j] - lr_mean[j]) / lr_scale[j];
        }
        return 1.0 / (1.0 + std::exp(-z));
    }
    double sum = 0.0;
    for (const auto& tree : trees) sum += tree.score(x);
    return sum / static_cast<double>(trees.size());
}

std::vector<int> Model::predict(const LabeledDataset& data) const {
    std::vector<int> out(static_cast<std::size_t>(data.size()));
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        out[static_cast<std::size_t>(i)] = predict(data.features.row(i));
    }
    return out;
}

Model train(const TrainerSpec& spec, const LabeledDataset& data, std::uint64_t seed) {
    spec.validate();
    WeightedRows rows = prepare(spec, data);
    Model model;
    model.kind = spec.kind;
    model.impute_means = rows.means;

    switch (spec.kind) {
    case TrainerKind::logistic_regression:
        fit_logistic(spec, rows, model);
        break;
    case TrainerKind::decision_tree:
        model.trees.push_back(
            fit_tree(rows.x, rows.y, rows.w, spec.effective_max_depth(), 0, nullptr));
        break;
    case TrainerKind::random_forest: {
        const Eigen::Index n = rows.x.rows();
        const int f = static_cast<int>(rows.x.cols());
        const int per_split = static_cast<int>(
            std::ceil(std::sqrt(static_cast<double>(f))));
        model.trees.reserve(static_cast<std::size_t>(spec.n_trees));
        for (int t = 0; t < spec.n_trees; ++t) {
            RandomStream rng(derive_seed(seed, "tree", static_cast<std::uint64_t>(t)));
            Eigen::MatrixXd bx(n, rows.x.cols());
            Eigen::VectorXi by(n);
            Eigen::VectorXd bw(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto pick = static_cast<Eigen::Index>(
                    rng.next_below(static_cast<std::uint64_t>(n)));
                bx.row(i) = rows.x.row(pick);
                by[i] = rows.y[pick];
                bw[i] = rows.w[pick];
            }
            // a bootstrap can lose one class entirely; such a tree is a
            // constant vote rather than an error
            model.trees.push_back(
                fit_tree(bx, by, bw, spec.effective_max_depth(), per_split, &rng));
        }
        break;
    }
    }
    return model;
}

} // namespace lda
