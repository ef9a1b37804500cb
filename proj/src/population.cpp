#include "lda/population.hpp"

#include <set>
#include <stdexcept>
#include <utility>

namespace lda {

GroupTally tally(const LabeledDataset& dataset) {
    if (dataset.size() == 0) throw std::invalid_argument("empty population");
    GroupTally t;
    for (Eigen::Index i = 0; i < dataset.size(); ++i) {
        int g = dataset.groups[i];
        int y = dataset.labels[i];
        if (g != 1 && g != 2) throw std::invalid_argument("group outside {1,2}");
        if (y != 0 && y != 1) throw std::invalid_argument("label outside {0,1}");
        if (g == 1) {
            (y == 1 ? t.n_1_pos : t.n_1_neg) += 1;
        } else {
            (y == 1 ? t.n_2_pos : t.n_2_neg) += 1;
        }
    }
    return t;
}

Metrics metrics(const GroupTally& t, const CellClassifier& c, double lambda) {
    if (t.n_pos() == 0 || t.n_neg() == 0) throw std::invalid_argument("degenerate labels");
    if (t.n_1() == 0 || t.n_2() == 0) throw std::invalid_argument("empty group");
    if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");

    auto cell = [](double p, std::int64_t n) { return p * static_cast<double>(n); };
    Metrics m;
    m.sr_1 = (cell(c.p_1_pos, t.n_1_pos) + cell(c.p_1_neg, t.n_1_neg)) /
             static_cast<double>(t.n_1());
    m.sr_2 = (cell(c.p_2_pos, t.n_2_pos) + cell(c.p_2_neg, t.n_2_neg)) /
             static_cast<double>(t.n_2());
    m.delta = m.sr_1 - m.sr_2;
    m.tpr = (cell(c.p_1_pos, t.n_1_pos) + cell(c.p_2_pos, t.n_2_pos)) /
            static_cast<double>(t.n_pos());
    m.fpr = (cell(c.p_1_neg, t.n_1_neg) + cell(c.p_2_neg, t.n_2_neg)) /
            static_cast<double>(t.n_neg());
    m.utility = m.tpr - lambda * m.fpr;
    return m;
}

Metrics evaluate_decisions(const LabeledDataset& dataset, const std::vector<int>& decisions,
                           double lambda) {
    if (decisions.size() != static_cast<std::size_t>(dataset.size())) {
        throw std::invalid_argument("decisions size mismatch");
    }
    GroupTally t = tally(dataset);
    if (t.n_pos() == 0 || t.n_neg() == 0) throw std::invalid_argument("degenerate labels");
    if (t.n_1() == 0 || t.n_2() == 0) throw std::invalid_argument("empty group");
    if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");

    std::int64_t sel_1 = 0, sel_2 = 0, tp = 0, fp = 0;
    for (Eigen::Index i = 0; i < dataset.size(); ++i) {
        int d = decisions[static_cast<std::size_t>(i)];
        if (d != 0 && d != 1) throw std::invalid_argument("decision outside {0,1}");
        if (d == 0) continue;
        (dataset.groups[i] == 1 ? sel_1 : sel_2) += 1;
        (dataset.labels[i] == 1 ? tp : fp) += 1;
    }
    Metrics m;
    m.sr_1 = static_cast<double>(sel_1) / static_cast<double>(t.n_1());
    m.sr_2 = static_cast<double>(sel_2) / static_cast<double>(t.n_2());
    m.delta = m.sr_1 - m.sr_2;
    m.tpr = static_cast<double>(tp) / static_cast<double>(t.n_pos());
    m.fpr = static_cast<double>(fp) / static_cast<double>(t.n_neg());
    m.utility = m.tpr - lambda * m.fpr;
    return m;
}

namespace {

// Feature rows as comparable keys; exact equality is the right notion
// because "identical applicants" means identical feature vectors.
std::vector<double> row_key(const LabeledDataset& d, Eigen::Index i) {
    std::vector<double> key(static_cast<std::size_t>(d.features.cols()));
    for (Eigen::Index j = 0; j < d.features.cols(); ++j) {
        key[static_cast<std::size_t>(j)] = d.features(i, j);
    }
    return key;
}

} // namespace

PathologicalTranscript pathological_rule(const LabeledDataset& pre_deploy,
                                         const LabeledDataset& post_deploy) {
    if (pre_deploy.size() == 0 || post_deploy.size() == 0) {
        throw std::invalid_argument("empty population");
    }

    std::set<std::vector<double>> seen;
    for (Eigen::Index i = 0; i < pre_deploy.size(); ++i) {
        if (!seen.insert(row_key(pre_deploy, i)).second) {
            throw std::invalid_argument("identicality assumption violated");
        }
    }
    std::set<std::vector<double>> post_seen;
    for (Eigen::Index i = 0; i < post_deploy.size(); ++i) {
        auto key = row_key(post_deploy, i);
        if (!post_seen.insert(key).second) {
            throw std::invalid_argument("identicality assumption violated");
        }
        if (pre_deploy.features.cols() == post_deploy.features.cols() && seen.count(key)) {
            throw std::invalid_argument("identicality assumption violated");
        }
    }

    PathologicalTranscript out;
    out.pre_decisions.reserve(static_cast<std::size_t>(pre_deploy.size()));
    std::int64_t correct = 0;
    for (Eigen::Index i = 0; i < pre_deploy.size(); ++i) {
        int decision = pre_deploy.labels[i];
        out.pre_decisions.push_back(decision);
        if (decision == pre_deploy.labels[i]) ++correct;
    }
    out.pre_accuracy = static_cast<double>(correct) / static_cast<double>(pre_deploy.size());

    out.post_decisions.assign(static_cast<std::size_t>(post_deploy.size()), 1);
    std::int64_t sel_1 = 0, n_1 = 0, sel_2 = 0, n_2 = 0;
    for (Eigen::Index i = 0; i < post_deploy.size(); ++i) {
        if (post_deploy.groups[i] == 1) {
            ++n_1;
            sel_1 += out.post_decisions[static_cast<std::size_t>(i)];
        } else {
            ++n_2;
            sel_2 += out.post_decisions[static_cast<std::size_t>(i)];
        }
    }
    // A group absent from the post-deployment data contributes the vacuous
    // selection rate 1 (every member of an empty group is selected).
    double sr_1 = n_1 > 0 ? static_cast<double>(sel_1) / static_cast<double>(n_1) : 1.0;
    double sr_2 = n_2 > 0 ? static_cast<double>(sel_2) / static_cast<double>(n_2) : 1.0;
    out.post_disparity = sr_1 - sr_2;
    return out;
}

} // namespace lda
