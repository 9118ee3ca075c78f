#include "wsdt/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "wsdt/base64.hpp"
#include "wsdt/error.hpp"
#include "wsdt/numeric.hpp"

#include <json.hpp>

namespace wsdt {

namespace {

bool parse_double(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = first + text.size();
    auto result = std::from_chars(first, last, out);
    return result.ec == std::errc() && result.ptr == last;
}

bool parse_int64(const std::string& text, long long& out) {
    const char* first = text.data();
    const char* last = first + text.size();
    auto result = std::from_chars(first, last, out);
    return result.ec == std::errc() && result.ptr == last;
}

std::vector<std::string> remap_labels(const std::vector<std::string>& raw,
                                      std::vector<std::uint32_t>& out_ids) {
    std::set<std::string> distinct(raw.begin(), raw.end());
    std::vector<std::string> names(distinct.begin(), distinct.end());

    // Numeric-looking label sets sort numerically so that e.g. "10" follows "2".
    bool all_ints = true;
    std::vector<long long> parsed(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!parse_int64(names[i], parsed[i])) {
            all_ints = false;
            break;
        }
    }
    if (all_ints) {
        std::vector<std::size_t> order(names.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return parsed[a] < parsed[b]; });
        std::vector<std::string> sorted;
        sorted.reserve(names.size());
        for (std::size_t i : order) sorted.push_back(names[i]);
        names = std::move(sorted);
    }

    std::map<std::string, std::uint32_t> ids;
    for (std::size_t i = 0; i < names.size(); ++i) ids[names[i]] = static_cast<std::uint32_t>(i);
    out_ids.clear();
    out_ids.reserve(raw.size());
    for (const auto& s : raw) out_ids.push_back(ids.at(s));
    return names;
}

}  // namespace

RawDataset ingest_csv_text(std::string_view text, const std::string& label_column,
                           const std::optional<std::string>& weight_column, const std::string& origin) {
    const CsvTable table = parse_csv(text);
    if (table.rows.empty()) raise(ErrorCode::EmptyDataset, origin + " has a header but no rows");

    const std::size_t label_idx = table.column_index(label_column);
    if (label_idx == CsvTable::npos)
        raise(ErrorCode::MissingColumn, "label column '" + label_column + "' not in " + origin);

    std::optional<std::size_t> weight_idx;
    if (weight_column) {
        const std::size_t idx = table.column_index(*weight_column);
        if (idx == CsvTable::npos)
            raise(ErrorCode::MissingColumn, "weight column '" + *weight_column + "' not in " + origin);
        weight_idx = idx;
    }

    RawDataset ds;
    ds.raw_header = table.header;
    ds.raw_cells = table.rows;
    ds.label_column = label_idx;
    ds.weight_column = weight_idx;

    const std::size_t n = table.rows.size();

    // Labels.
    std::vector<std::string> raw_labels;
    raw_labels.reserve(n);
    for (const auto& row : table.rows) raw_labels.push_back(row[label_idx]);
    ds.label_names = remap_labels(raw_labels, ds.labels);

    // Weights.
    ds.weights.assign(n, 1.0);
    if (weight_idx) {
        bool any_positive = false;
        for (std::size_t r = 0; r < n; ++r) {
            const std::string& cell = table.rows[r][*weight_idx];
            double w;
            if (!parse_double(cell, w) || !std::isfinite(w))
                raise(ErrorCode::NonNumericWeight,
                      "weight '" + cell + "' at row " + std::to_string(r) + " of " + origin);
            if (w < 0)
                raise(ErrorCode::NegativeWeight,
                      "weight " + cell + " at row " + std::to_string(r) + " of " + origin);
            ds.weights[r] = w;
            any_positive = any_positive || w > 0;
        }
        if (!any_positive) raise(ErrorCode::AllZeroWeights, "every weight in " + origin + " is zero");
    }

    // Feature columns: every column except label and weight, type-inferred.
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c == label_idx || (weight_idx && c == *weight_idx)) continue;
        Feature feature;
        feature.name = table.header[c];

        bool numeric = true;
        std::vector<double> values(n);
        for (std::size_t r = 0; r < n; ++r) {
            const std::string& cell = table.rows[r][c];
            if (cell.empty())
                raise(ErrorCode::MissingValue,
                      "empty value in column '" + feature.name + "' at row " + std::to_string(r));
            if (numeric && !parse_double(cell, values[r])) numeric = false;
        }
        if (numeric) {
            for (std::size_t r = 0; r < n; ++r)
                if (!std::isfinite(values[r]))
                    raise(ErrorCode::NonFiniteValue,
                          "non-finite value in column '" + feature.name + "' at row " + std::to_string(r));
            feature.kind = FeatureKind::Numeric;
            feature.numeric = std::move(values);
        } else {
            feature.kind = FeatureKind::Categorical;
            std::set<std::string> distinct;
            for (std::size_t r = 0; r < n; ++r) distinct.insert(table.rows[r][c]);
            feature.categories.assign(distinct.begin(), distinct.end());
            std::map<std::string, std::uint32_t> codes;
            for (std::size_t i = 0; i < feature.categories.size(); ++i)
                codes[feature.categories[i]] = static_cast<std::uint32_t>(i);
            feature.codes.resize(n);
            for (std::size_t r = 0; r < n; ++r) feature.codes[r] = codes.at(table.rows[r][c]);
        }
        ds.features.push_back(std::move(feature));
    }
    return ds;
}

RawDataset ingest_csv(const std::string& path, const std::string& label_column,
                      const std::optional<std::string>& weight_column) {
    return ingest_csv_text(read_text(path), label_column, weight_column, path);
}

RawDataset ingest_csv_features(std::string_view text, const std::string& origin) {
    const CsvTable table = parse_csv(text);
    if (table.rows.empty()) raise(ErrorCode::EmptyDataset, origin + " has a header but no rows");
    // Reuse the full ingest path with a synthetic label column appended.
    CsvTable augmented = table;
    std::string label_name = "__row_label";
    while (augmented.column_index(label_name) != CsvTable::npos) label_name += "_";
    augmented.header.push_back(label_name);
    for (auto& row : augmented.rows) row.push_back("0");
    RawDataset ds = ingest_csv_text(write_csv(augmented), label_name, std::nullopt, origin);
    ds.raw_header = table.header;
    ds.raw_cells = table.rows;
    return ds;
}

namespace {

BitVector threshold_column(const Feature& f, double threshold) {
    BitVector bits(f.numeric.size());
    for (std::size_t i = 0; i < f.numeric.size(); ++i)
        if (f.numeric[i] <= threshold) bits.set(i);
    return bits;
}

BitVector category_column(const Feature& f, std::uint32_t code) {
    BitVector bits(f.codes.size());
    for (std::size_t i = 0; i < f.codes.size(); ++i)
        if (f.codes[i] == code) bits.set(i);
    return bits;
}

struct ColumnBuilder {
    std::vector<BitVector> columns;
    std::vector<ColumnOrigin> origins;

    // Keeps the first origin seen for a bit pattern; callers add candidates in
    // ascending (feature, threshold/category) order, so first == smallest.
    void add(BitVector bits, ColumnOrigin origin) {
        const std::size_t count = bits.popcount();
        if (count == 0 || count == bits.size()) return;  // constant, no split point
        for (const auto& existing : columns)
            if (existing == bits) return;
        columns.push_back(std::move(bits));
        origins.push_back(std::move(origin));
    }
};

BinarizedDataset finish(const RawDataset& raw, ColumnBuilder&& builder) {
    if (builder.columns.empty())
        raise(ErrorCode::NoInformativeColumns, "no informative binary column could be built");
    BinarizedDataset ds;
    ds.columns = std::move(builder.columns);
    ds.origins = std::move(builder.origins);
    ds.labels = raw.labels;
    ds.label_names = raw.label_names;
    ds.weights = raw.weights;
    ds.total_weight = pairwise_sum(ds.weights);
    if (ds.total_weight <= 0) raise(ErrorCode::ZeroTotalWeight, "total weight is zero");
    ds.unit_weights = std::all_of(ds.weights.begin(), ds.weights.end(), [](double w) { return w == 1.0; });
    return ds;
}

}  // namespace

BinarizedDataset binarize_all(const RawDataset& raw) {
    if (raw.n() == 0) raise(ErrorCode::EmptyDataset, "cannot binarize an empty dataset");
    ColumnBuilder builder;
    for (std::size_t f = 0; f < raw.features.size(); ++f) {
        const Feature& feature = raw.features[f];
        if (feature.kind == FeatureKind::Numeric) {
            std::vector<double> distinct = feature.numeric;
            std::sort(distinct.begin(), distinct.end());
            distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
            for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
                const double mid = distinct[i] + (distinct[i + 1] - distinct[i]) / 2.0;
                builder.add(threshold_column(feature, mid),
                            ColumnOrigin{f, feature.name, FeatureKind::Numeric, mid, {}});
            }
        } else {
            for (std::uint32_t code = 0; code < feature.categories.size(); ++code) {
                builder.add(category_column(feature, code),
                            ColumnOrigin{f, feature.name, FeatureKind::Categorical, 0.0,
                                         feature.categories[code]});
            }
        }
    }
    return finish(raw, std::move(builder));
}

BinarizedDataset binarize_guessed(const RawDataset& raw, const ThresholdSet& thresholds) {
    if (thresholds.empty()) raise(ErrorCode::EmptyThresholdSet, "threshold set is empty");
    ColumnBuilder builder;
    for (const ThresholdEntry& entry : thresholds.entries) {
        if (entry.feature >= raw.features.size())
            raise(ErrorCode::UnknownFeature, "feature index " + std::to_string(entry.feature) + " out of range");
        const Feature& feature = raw.features[entry.feature];
        if (entry.kind != feature.kind)
            raise(ErrorCode::UnknownFeature, "feature '" + feature.name + "' kind mismatch in threshold set");
        if (feature.kind == FeatureKind::Numeric) {
            if (!std::isfinite(entry.threshold))
                raise(ErrorCode::NonFiniteValue, "non-finite threshold for feature '" + feature.name + "'");
            builder.add(threshold_column(feature, entry.threshold),
                        ColumnOrigin{entry.feature, feature.name, FeatureKind::Numeric, entry.threshold, {}});
        } else {
            const auto it = std::find(feature.categories.begin(), feature.categories.end(), entry.category);
            if (it == feature.categories.end())
                raise(ErrorCode::UnknownCategory,
                      "category '" + entry.category + "' not present in feature '" + feature.name + "'");
            const auto code = static_cast<std::uint32_t>(it - feature.categories.begin());
            builder.add(category_column(feature, code),
                        ColumnOrigin{entry.feature, feature.name, FeatureKind::Categorical, 0.0, entry.category});
        }
    }
    return finish(raw, std::move(builder));
}

CaptureSet capture_and(const CaptureSet& s, const BitVector& column, int polarity) {
    if (polarity != 0 && polarity != 1) raise(ErrorCode::InvalidArgument, "polarity must be 0 or 1");
    return polarity == 1 ? CaptureSet{s.bits.and_with(column)} : CaptureSet{s.bits.and_not(column)};
}

std::string export_binarized_json(const BinarizedDataset& ds) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["rows"] = ds.n();
    auto columns = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < ds.n_columns(); ++c) {
        const ColumnOrigin& origin = ds.origins[c];
        nlohmann::ordered_json col;
        col["feature"] = origin.feature;
        col["name"] = origin.feature_name;
        if (origin.kind == FeatureKind::Numeric) {
            col["kind"] = "threshold";
            col["threshold"] = origin.threshold;
        } else {
            col["kind"] = "category";
            col["category"] = origin.category;
        }
        // Bits packed LSB-first into bytes: byte b, bit k -> row 8*b + k.
        std::vector<std::uint8_t> bytes((ds.n() + 7) / 8, 0);
        ds.columns[c].for_each_set([&](std::size_t i) { bytes[i >> 3] |= std::uint8_t(1u << (i & 7)); });
        col["bits"] = base64_encode(bytes);
        columns.push_back(std::move(col));
    }
    doc["columns"] = std::move(columns);
    doc["labels"] = ds.labels;
    doc["label_names"] = ds.label_names;
    doc["weights"] = ds.weights;
    return doc.dump(2);
}

BinarizedDataset with_weights(const BinarizedDataset& ds, std::vector<double> weights) {
    if (weights.size() != ds.n()) raise(ErrorCode::LengthMismatch, "weight vector length mismatch");
    BinarizedDataset out = ds;
    out.weights = std::move(weights);
    out.total_weight = pairwise_sum(out.weights);
    if (out.total_weight <= 0) raise(ErrorCode::ZeroTotalWeight, "total weight is zero");
    out.unit_weights = std::all_of(out.weights.begin(), out.weights.end(), [](double w) { return w == 1.0; });
    return out;
}

}  // namespace wsdt
