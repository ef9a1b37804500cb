#pragma once

#include "lda/population.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace lda {

enum class FeatureKind { categorical, numeric };

struct FeatureColumn {
    std::string name;
    FeatureKind kind = FeatureKind::numeric;
};

struct Schema {
    std::string dataset_name;
    std::vector<FeatureColumn> feature_columns;
    std::string group_column;
    std::map<std::string, int> group_mapping; // exactly two raw values -> {1, 2}
    std::string label_column;
    std::set<std::string> positive_values; // raw label spellings of the positive class
    std::set<std::string> negative_values; // anything outside both sets drops the row

    void validate() const; // throws std::invalid_argument on violation
};

Schema adult_schema();
Schema german_schema();

// Column-name / value overrides supplied as a JSON object; unspecified
// fields keep the base schema's values.
Schema schema_from_json(const std::string& json_text, const Schema& base);

struct LoadReport {
    int dropped_rows = 0; // rows without a mappable group or label
};

// Categorical vocabularies are collected from the whole file (sorted for
// stable encodings) and one-hot expanded; missing fields ("", "?") become
// the "missing" category or NaN for numerics.  Rows whose group or label
// cannot be mapped are dropped and counted in the report.
LabeledDataset load_csv(const std::string& path, const Schema& schema,
                        LoadReport* report = nullptr);

// Gaussian-feature dataset with a controlled group share and per-group
// base rates; two features carry signal_strength of label mean shift, one
// is pure noise, one correlates with the group only.
LabeledDataset synthetic_dataset(int n_rows, double group_balance,
                                 std::pair<double, double> base_rates,
                                 double signal_strength, std::uint64_t seed);

} // namespace lda
