#pragma once

#include "lda/population.hpp"
#include "lda/rng.hpp"

#include <cstdint>
#include <string>

namespace lda::testing {

// Expands a tally into a one-feature dataset whose rows are pairwise
// distinct (feature = row index).
inline LabeledDataset make_dataset(const GroupTally& t, const std::string& name = "synth") {
    LabeledDataset d;
    d.name = name;
    d.feature_names = {"x"};
    auto n = t.total();
    d.features.resize(n, 1);
    d.groups.resize(n);
    d.labels.resize(n);
    Eigen::Index row = 0;
    auto fill = [&](std::int64_t count, int g, int y) {
        for (std::int64_t i = 0; i < count; ++i, ++row) {
            d.features(row, 0) = static_cast<double>(row);
            d.groups[row] = g;
            d.labels[row] = y;
        }
    };
    fill(t.n_1_pos, 1, 1);
    fill(t.n_1_neg, 1, 0);
    fill(t.n_2_pos, 2, 1);
    fill(t.n_2_neg, 2, 0);
    return d;
}

// Independent per-row recomputation of the metrics of a deterministic
// classifier: selects the first k_{g,y} rows of each cell of the dataset
// built by make_dataset and counts outcomes directly.
inline Metrics enumerate_metrics(const GroupTally& t, std::int64_t k1p, std::int64_t k1n,
                                 std::int64_t k2p, std::int64_t k2n, double lambda) {
    LabeledDataset d = make_dataset(t);
    std::int64_t taken_1p = 0, taken_1n = 0, taken_2p = 0, taken_2n = 0;
    std::int64_t sel_1 = 0, sel_2 = 0, tp = 0, fp = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        int g = d.groups[i], y = d.labels[i];
        bool select = false;
        if (g == 1 && y == 1) select = taken_1p++ < k1p;
        if (g == 1 && y == 0) select = taken_1n++ < k1n;
        if (g == 2 && y == 1) select = taken_2p++ < k2p;
        if (g == 2 && y == 0) select = taken_2n++ < k2n;
        if (!select) continue;
        (g == 1 ? sel_1 : sel_2) += 1;
        (y == 1 ? tp : fp) += 1;
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

// Random tally with every cell in [1, max_cell]: nonempty groups and both
// labels present, so all metric denominators are positive.
inline GroupTally random_tally(RandomStream& rng, std::int64_t max_cell) {
    GroupTally t;
    t.n_1_pos = 1 + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(max_cell)));
    t.n_1_neg = 1 + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(max_cell)));
    t.n_2_pos = 1 + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(max_cell)));
    t.n_2_neg = 1 + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(max_cell)));
    return t;
}

inline CellClassifier random_classifier(RandomStream& rng) {
    return CellClassifier{rng.next_unit(), rng.next_unit(), rng.next_unit(), rng.next_unit()};
}

} // namespace lda::testing
