#include "wsdt/reference.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "wsdt/csv.hpp"
#include "wsdt/error.hpp"

#include <json.hpp>

namespace wsdt {

namespace {

struct ClassMasses {
    std::vector<double> mass;  // per class
    double total = 0.0;

    double gini() const {
        if (total <= 0) return 0.0;
        double acc = 1.0;
        for (double m : mass) acc -= (m / total) * (m / total);
        return acc;
    }

    std::uint32_t majority() const {
        std::uint32_t best = 0;
        for (std::uint32_t c = 1; c < mass.size(); ++c)
            if (mass[c] > mass[best]) best = c;
        return best;
    }
};

ClassMasses masses_of(const CaptureSet& s, const BinarizedDataset& ds) {
    ClassMasses out;
    out.mass.assign(ds.n_classes(), 0.0);
    s.bits.for_each_set([&](std::size_t i) {
        out.mass[ds.labels[i]] += ds.weights[i];
        out.total += ds.weights[i];
    });
    return out;
}

struct GreedyNode {
    bool is_leaf = true;
    std::uint32_t label = 0;
    std::size_t column = 0;
    std::unique_ptr<GreedyNode> zero, one;
};

std::unique_ptr<GreedyNode> grow(const CaptureSet& s, int depth_left, const BinarizedDataset& ds,
                                 const GreedyConfig& cfg, std::set<std::size_t>& used_columns) {
    auto node = std::make_unique<GreedyNode>();
    const ClassMasses here = masses_of(s, ds);
    node->label = here.majority();
    if (depth_left == 0 || here.gini() == 0.0) return node;

    // Weighted-Gini split selection; ties go to the smallest column index.
    double best_impurity = std::numeric_limits<double>::infinity();
    std::size_t best_column = ds.n_columns();
    CaptureSet best_one, best_zero;
    for (std::size_t j = 0; j < ds.n_columns(); ++j) {
        CaptureSet one = capture_and(s, ds.columns[j], 1);
        if (one.empty()) continue;
        CaptureSet zero = capture_and(s, ds.columns[j], 0);
        if (zero.empty()) continue;
        const ClassMasses m1 = masses_of(one, ds);
        const ClassMasses m0 = masses_of(zero, ds);
        if (m1.total < cfg.min_leaf_weight || m0.total < cfg.min_leaf_weight) continue;
        const double impurity = (m1.total * m1.gini() + m0.total * m0.gini()) / here.total;
        if (impurity < best_impurity) {
            best_impurity = impurity;
            best_column = j;
            best_one = std::move(one);
            best_zero = std::move(zero);
        }
    }
    // Zero-gain splits are allowed (they can pay off a level deeper); only a
    // strictly worse impurity stops growth.
    if (best_column == ds.n_columns() || best_impurity > here.gini()) return node;

    node->is_leaf = false;
    node->column = best_column;
    used_columns.insert(best_column);
    node->one = grow(best_one, depth_left - 1, ds, cfg, used_columns);
    node->zero = grow(best_zero, depth_left - 1, ds, cfg, used_columns);
    return node;
}

std::uint32_t route(const GreedyNode* node, const BinarizedDataset& ds, std::size_t row) {
    while (!node->is_leaf) node = ds.columns[node->column].test(row) ? node->one.get() : node->zero.get();
    return node->label;
}

struct Stump {
    std::size_t column;
    int polarity;  // predicted positive when bit == polarity
    double alpha;
};

// One-vs-rest AdaBoost over single-column stumps.
std::vector<Stump> boost_class(std::uint32_t cls, int rounds, const BinarizedDataset& ds,
                               std::set<std::size_t>& used_columns) {
    const std::size_t n = ds.n();
    std::vector<double> boost_weights = ds.weights;
    std::vector<Stump> stumps;

    for (int round = 0; round < rounds; ++round) {
        double total = 0.0;
        for (double w : boost_weights) total += w;
        if (total <= 0) break;

        double best_err = std::numeric_limits<double>::infinity();
        Stump best{0, 1, 0.0};
        for (std::size_t j = 0; j < ds.n_columns(); ++j) {
            for (int polarity : {1, 0}) {
                double err = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const bool positive = ds.columns[j].test(i) == (polarity == 1);
                    const bool target = ds.labels[i] == cls;
                    if (positive != target) err += boost_weights[i];
                }
                if (err < best_err) {
                    best_err = err;
                    best = Stump{j, polarity, 0.0};
                }
            }
        }

        const double eps = std::clamp(best_err / total, 1e-10, 1.0 - 1e-10);
        best.alpha = 0.5 * std::log((1.0 - eps) / eps);
        stumps.push_back(best);
        used_columns.insert(best.column);

        for (std::size_t i = 0; i < n; ++i) {
            const bool positive = ds.columns[best.column].test(i) == (best.polarity == 1);
            const bool target = ds.labels[i] == cls;
            boost_weights[i] *= std::exp(positive == target ? -best.alpha : best.alpha);
        }
    }
    return stumps;
}

ThresholdSet thresholds_from_columns(const std::set<std::size_t>& used, const BinarizedDataset& ds) {
    ThresholdSet set;
    for (std::size_t column : used) {
        const ColumnOrigin& origin = ds.origins[column];
        set.entries.push_back(ThresholdEntry{origin.feature, origin.feature_name, origin.kind,
                                             origin.threshold, origin.category});
    }
    return set;
}

}  // namespace

ReferenceFit fit_greedy(const BinarizedDataset& ds, const GreedyConfig& cfg) {
    if (cfg.max_depth < 1) raise(ErrorCode::InvalidArgument, "max_depth must be >= 1");
    if (cfg.rounds < 1) raise(ErrorCode::InvalidArgument, "rounds must be >= 1");

    std::set<std::size_t> used_columns;
    std::vector<std::uint32_t> preds(ds.n());

    if (cfg.rounds == 1) {
        const CaptureSet root = CaptureSet::all(ds.n());
        const std::unique_ptr<GreedyNode> tree = grow(root, cfg.max_depth, ds, cfg, used_columns);
        for (std::size_t i = 0; i < ds.n(); ++i) preds[i] = route(tree.get(), ds, i);
    } else {
        std::vector<std::vector<Stump>> per_class(ds.n_classes());
        for (std::uint32_t c = 0; c < ds.n_classes(); ++c)
            per_class[c] = boost_class(c, cfg.rounds, ds, used_columns);
        for (std::size_t i = 0; i < ds.n(); ++i) {
            std::uint32_t best_class = 0;
            double best_score = -std::numeric_limits<double>::infinity();
            for (std::uint32_t c = 0; c < ds.n_classes(); ++c) {
                double score = 0.0;
                for (const Stump& stump : per_class[c]) {
                    const bool positive = ds.columns[stump.column].test(i) == (stump.polarity == 1);
                    score += positive ? stump.alpha : -stump.alpha;
                }
                if (score > best_score) {
                    best_score = score;
                    best_class = c;
                }
            }
            preds[i] = best_class;
        }
    }

    ReferenceFit fit;
    fit.predictions = ReferencePredictions::from_preds(std::move(preds), ds);
    fit.thresholds = thresholds_from_columns(used_columns, ds);
    return fit;
}

ReferencePredictions load_reference_text(std::string_view text, const BinarizedDataset& ds) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            if (!current.empty() && current.back() == '\r') current.pop_back();
            lines.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) lines.push_back(current);
    while (!lines.empty() && lines.back().empty()) lines.pop_back();

    if (lines.size() != ds.n())
        raise(ErrorCode::RowCountMismatch, "reference file has " + std::to_string(lines.size()) +
                                               " rows, dataset has " + std::to_string(ds.n()));

    std::vector<std::uint32_t> preds(ds.n());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& token = lines[i];
        // Original label strings first, then bare remapped ids.
        const auto it = std::find(ds.label_names.begin(), ds.label_names.end(), token);
        if (it != ds.label_names.end()) {
            preds[i] = static_cast<std::uint32_t>(it - ds.label_names.begin());
            continue;
        }
        unsigned long long id = 0;
        const char* first = token.data();
        const char* last = first + token.size();
        const auto result = std::from_chars(first, last, id);
        if (result.ec != std::errc() || result.ptr != last || id >= ds.n_classes())
            raise(ErrorCode::UnknownLabel, "'" + token + "' at row " + std::to_string(i));
        preds[i] = static_cast<std::uint32_t>(id);
    }
    return ReferencePredictions::from_preds(std::move(preds), ds);
}

ReferencePredictions load_reference(const std::string& path, const BinarizedDataset& ds) {
    return load_reference_text(read_text(path), ds);
}

std::string threshold_set_to_json(const ThresholdSet& set) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    auto entries = nlohmann::ordered_json::array();
    for (const ThresholdEntry& entry : set.entries) {
        nlohmann::ordered_json e;
        e["feature"] = entry.feature_name;
        if (entry.kind == FeatureKind::Numeric) {
            e["threshold"] = entry.threshold;
        } else {
            e["category"] = entry.category;
        }
        entries.push_back(std::move(e));
    }
    doc["thresholds"] = std::move(entries);
    return doc.dump(2) + "\n";
}

ThresholdSet threshold_set_from_json(std::string_view text, const RawDataset& raw) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::InvalidArgument, std::string("threshold set is not valid JSON: ") + e.what());
    }
    ThresholdSet set;
    for (const auto& e : doc.at("thresholds")) {
        const std::string name = e.at("feature").get<std::string>();
        std::size_t feature = raw.features.size();
        for (std::size_t f = 0; f < raw.features.size(); ++f)
            if (raw.features[f].name == name) {
                feature = f;
                break;
            }
        if (feature == raw.features.size())
            raise(ErrorCode::UnknownFeature, "threshold set references unknown feature '" + name + "'");
        ThresholdEntry entry;
        entry.feature = feature;
        entry.feature_name = name;
        if (e.contains("threshold")) {
            entry.kind = FeatureKind::Numeric;
            entry.threshold = e.at("threshold").get<double>();
        } else {
            entry.kind = FeatureKind::Categorical;
            entry.category = e.at("category").get<std::string>();
        }
        set.entries.push_back(std::move(entry));
    }
    return set;
}

}  // namespace wsdt
