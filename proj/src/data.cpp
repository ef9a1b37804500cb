#include "lda/data.hpp"

#include "lda/csv.hpp"
#include "lda/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace lda {

namespace {

std::string norm_value(std::string_view s) {
    std::string out = csv::trim(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// "m" matches "male" and vice versa: the published files disagree on
// whether the protected attribute is spelled out or single-letter coded.
bool group_value_matches(const std::string& raw, const std::string& key) {
    if (raw == key) return true;
    if (key.size() == 1 && !raw.empty() && raw[0] == key[0]) return true;
    if (raw.size() == 1 && !key.empty() && key[0] == raw[0]) return true;
    return false;
}

bool is_missing(const std::string& normed) { return normed.empty() || normed == "?"; }

double parse_numeric(const std::string& raw) {
    std::string t = csv::trim(raw);
    if (t.empty() || t == "?") return std::numeric_limits<double>::quiet_NaN();
    const char* begin = t.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + t.size()) return std::numeric_limits<double>::quiet_NaN();
    return v;
}

} // namespace

void Schema::validate() const {
    std::set<std::string> names;
    for (const auto& col : feature_columns) {
        if (col.name.empty()) throw std::invalid_argument("schema: empty feature column name");
        if (!names.insert(col.name).second) {
            throw std::invalid_argument("schema: duplicate column " + col.name);
        }
    }
    if (group_column.empty() || label_column.empty()) {
        throw std::invalid_argument("schema: group and label columns are required");
    }
    if (names.count(group_column) || names.count(label_column) ||
        group_column == label_column) {
        throw std::invalid_argument("schema: group/label columns must be distinct features");
    }
    if (group_mapping.size() != 2) {
        throw std::invalid_argument("schema: group mapping must cover exactly two raw values");
    }
    std::set<int> ids;
    for (const auto& [raw, id] : group_mapping) ids.insert(id);
    if (ids != std::set<int>{1, 2}) {
        throw std::invalid_argument("schema: group mapping must target groups 1 and 2");
    }
    if (positive_values.empty() || negative_values.empty()) {
        throw std::invalid_argument("schema: label value sets must be nonempty");
    }
}

Schema adult_schema() {
    Schema s;
    s.dataset_name = "adult";
    s.feature_columns = {{"maritalstatus", FeatureKind::categorical},
                         {"hoursperweek", FeatureKind::numeric},
                         {"education", FeatureKind::categorical},
                         {"workclass", FeatureKind::categorical}};
    s.group_column = "gender";
    s.group_mapping = {{"M", 1}, {"F", 2}};
    s.label_column = "income";
    s.positive_values = {">50k", ">50k.", "1"};
    s.negative_values = {"<=50k", "<=50k.", "0"};
    return s;
}

Schema german_schema() {
    Schema s;
    s.dataset_name = "german";
    s.feature_columns = {{"credit_history_category", FeatureKind::categorical},
                         {"credit_amount", FeatureKind::numeric},
                         {"unemployment_category", FeatureKind::categorical},
                         {"installment_rate_percentage_income", FeatureKind::numeric},
                         {"present_residence_duration", FeatureKind::numeric}};
    s.group_column = "gender";
    s.group_mapping = {{"M", 1}, {"F", 2}};
    s.label_column = "creditworthiness";
    s.positive_values = {"1", "good"};
    s.negative_values = {"2", "0", "bad"};
    return s;
}

Schema schema_from_json(const std::string& json_text, const Schema& base) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("schema json: ") + e.what());
    }
    Schema s = base;
    if (j.contains("dataset_name")) s.dataset_name = j["dataset_name"].get<std::string>();
    if (j.contains("group_column")) s.group_column = j["group_column"].get<std::string>();
    if (j.contains("label_column")) s.label_column = j["label_column"].get<std::string>();
    if (j.contains("group_mapping")) {
        s.group_mapping.clear();
        for (auto it = j["group_mapping"].begin(); it != j["group_mapping"].end(); ++it) {
            s.group_mapping[it.key()] = it.value().get<int>();
        }
    }
    if (j.contains("positive_values")) {
        s.positive_values.clear();
        for (const auto& v : j["positive_values"]) {
            s.positive_values.insert(norm_value(v.get<std::string>()));
        }
    }
    if (j.contains("negative_values")) {
        s.negative_values.clear();
        for (const auto& v : j["negative_values"]) {
            s.negative_values.insert(norm_value(v.get<std::string>()));
        }
    }
    if (j.contains("feature_columns")) {
        s.feature_columns.clear();
        for (const auto& col : j["feature_columns"]) {
            FeatureColumn fc;
            fc.name = col.at("name").get<std::string>();
            auto kind = col.at("kind").get<std::string>();
            if (kind == "categorical") {
                fc.kind = FeatureKind::categorical;
            } else if (kind == "numeric") {
                fc.kind = FeatureKind::numeric;
            } else {
                throw std::invalid_argument("schema json: unknown feature kind " + kind);
            }
            s.feature_columns.push_back(std::move(fc));
        }
    }
    s.validate();
    return s;
}

LabeledDataset load_csv(const std::string& path, const Schema& schema, LoadReport* report) {
    schema.validate();
    auto table = csv::read_file(path);

    auto locate = [&](const std::string& name) {
        int c = table.find_column(name);
        if (c < 0) throw std::runtime_error("missing column: " + name);
        return static_cast<std::size_t>(c);
    };
    std::vector<std::size_t> feature_idx;
    feature_idx.reserve(schema.feature_columns.size());
    for (const auto& col : schema.feature_columns) feature_idx.push_back(locate(col.name));
    const std::size_t group_idx = locate(schema.group_column);
    const std::size_t label_idx = locate(schema.label_column);

    std::vector<std::pair<std::string, int>> mapping; // normalized raw value -> group
    for (const auto& [raw, id] : schema.group_mapping) mapping.emplace_back(norm_value(raw), id);

    auto cell = [&](const std::vector<std::string>& row, std::size_t c) -> std::string {
        return c < row.size() ? csv::trim(row[c]) : std::string();
    };
    auto map_group = [&](const std::string& raw) {
        const std::string n = norm_value(raw);
        if (is_missing(n)) return 0;
        for (const auto& [key, id] : mapping) {
            if (group_value_matches(n, key)) return id;
        }
        return 0;
    };
    auto map_label = [&](const std::string& raw) {
        const std::string n = norm_value(raw);
        if (schema.positive_values.count(n)) return 1;
        if (schema.negative_values.count(n)) return 0;
        return -1;
    };

    // Vocabulary pass over the whole file so encodings do not depend on
    // which rows survive or how the data is later split.
    std::vector<std::set<std::string>> vocab(schema.feature_columns.size());
    for (const auto& row : table.rows) {
        for (std::size_t f = 0; f < schema.feature_columns.size(); ++f) {
            if (schema.feature_columns[f].kind != FeatureKind::categorical) continue;
            std::string v = norm_value(cell(row, feature_idx[f]));
            vocab[f].insert(is_missing(v) ? "missing" : v);
        }
    }

    LabeledDataset data;
    data.name = schema.dataset_name;
    std::vector<std::vector<std::string>> categories(schema.feature_columns.size());
    std::vector<std::size_t> offset(schema.feature_columns.size());
    std::size_t width = 0;
    for (std::size_t f = 0; f < schema.feature_columns.size(); ++f) {
        offset[f] = width;
        const auto& col = schema.feature_columns[f];
        if (col.kind == FeatureKind::numeric) {
            data.feature_names.push_back(col.name);
            width += 1;
        } else {
            categories[f].assign(vocab[f].begin(), vocab[f].end());
            for (const auto& v : categories[f]) data.feature_names.push_back(col.name + "=" + v);
            width += categories[f].size();
        }
    }

    std::vector<Eigen::Index> keep;
    std::vector<int> groups, labels;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        int g = map_group(cell(table.rows[r], group_idx));
        int y = map_label(cell(table.rows[r], label_idx));
        if (g == 0 || y < 0) continue;
        keep.push_back(static_cast<Eigen::Index>(r));
        groups.push_back(g);
        labels.push_back(y);
    }
    if (report) report->dropped_rows = static_cast<int>(table.rows.size() - keep.size());
    if (keep.empty()) throw std::runtime_error("no usable rows in " + path);

    data.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(keep.size()),
                                          static_cast<Eigen::Index>(width));
    data.groups.resize(static_cast<Eigen::Index>(keep.size()));
    data.labels.resize(static_cast<Eigen::Index>(keep.size()));
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(keep.size()); ++i) {
        const auto& row = table.rows[static_cast<std::size_t>(keep[i])];
        data.groups(i) = groups[static_cast<std::size_t>(i)];
        data.labels(i) = labels[static_cast<std::size_t>(i)];
        for (std::size_t f = 0; f < schema.feature_columns.size(); ++f) {
            const std::string raw = cell(row, feature_idx[f]);
            if (schema.feature_columns[f].kind == FeatureKind::numeric) {
                data.features(i, static_cast<Eigen::Index>(offset[f])) = parse_numeric(raw);
            } else {
                std::string v = norm_value(raw);
                if (is_missing(v)) v = "missing";
                auto& cats = categories[f];
                auto it = std::lower_bound(cats.begin(), cats.end(), v);
                data.features(i, static_cast<Eigen::Index>(
                                     offset[f] + static_cast<std::size_t>(it - cats.begin()))) =
                    1.0;
            }
        }
    }
    return data;
}

LabeledDataset synthetic_dataset(int n_rows, double group_balance,
                                 std::pair<double, double> base_rates,
                                 double signal_strength, std::uint64_t seed) {
    if (n_rows <= 0) throw std::invalid_argument("n_rows must be positive");
    if (!(group_balance > 0.0 && group_balance < 1.0)) {
        throw std::invalid_argument("group_balance must lie inside (0, 1)");
    }
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(base_rates.first) || !in_unit(base_rates.second)) {
        throw std::invalid_argument("infeasible base rates");
    }
    if (!(signal_strength >= 0.0)) {
        throw std::invalid_argument("signal_strength must be nonnegative");
    }

    RandomStream rng(seed);
    LabeledDataset data;
    data.name = "synthetic";
    data.feature_names = {"f0", "f1", "f2", "f3"};
    data.features.resize(n_rows, 4);
    data.groups.resize(n_rows);
    data.labels.resize(n_rows);
    for (int i = 0; i < n_rows; ++i) {
        const int g = rng.next_unit() < group_balance ? 1 : 2;
        const double rate = g == 1 ? base_rates.first : base_rates.second;
        const int y = rng.next_unit() < rate ? 1 : 0;
        const double shift = signal_strength * (2 * y - 1);
        data.features(i, 0) = shift + rng.next_gaussian();
        data.features(i, 1) = shift + rng.next_gaussian();
        data.features(i, 2) = rng.next_gaussian();
        data.features(i, 3) = (g == 1 ? 0.5 : -0.5) + rng.next_gaussian();
        data.groups(i) = g;
        data.labels(i) = y;
    }
    return data;
}

} // namespace lda
