#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wsdt/bitvector.hpp"
#include "wsdt/csv.hpp"

namespace wsdt {

enum class FeatureKind { Numeric, Categorical };

struct Feature {
    std::string name;
    FeatureKind kind = FeatureKind::Numeric;
    std::vector<double> numeric;         // per-row values when Numeric
    std::vector<std::uint32_t> codes;    // per-row category codes when Categorical
    std::vector<std::string> categories; // code -> category string, sorted
};

/// Tabular dataset after ingestion: typed feature columns, labels remapped to
/// a contiguous {0..K} range, per-sample non-negative weights, and the raw
/// cell text kept so transformed CSVs round-trip losslessly.
struct RawDataset {
    std::vector<Feature> features;
    std::vector<std::uint32_t> labels;      // remapped ids
    std::vector<std::string> label_names;   // id -> original label string
    std::vector<double> weights;
    std::vector<std::vector<std::string>> raw_cells;  // original row cells (all columns)
    std::vector<std::string> raw_header;
    std::size_t label_column = 0;
    std::optional<std::size_t> weight_column;

    std::size_t n() const { return labels.size(); }
    std::size_t n_features() const { return features.size(); }
    std::size_t n_classes() const { return label_names.size(); }
};

struct ColumnOrigin {
    std::size_t feature;         // raw feature index
    std::string feature_name;
    FeatureKind kind;
    double threshold = 0.0;      // Numeric: bit i = 1 iff x <= threshold
    std::string category;        // Categorical: bit i = 1 iff x == category

    bool operator==(const ColumnOrigin&) const = default;
};

/// Columnar binary view of a dataset: one bitvector per binary feature plus
/// labels and weights. Immutable after construction; safe to share across
/// threads.
struct BinarizedDataset {
    std::vector<BitVector> columns;
    std::vector<ColumnOrigin> origins;      // aligned with columns
    std::vector<std::uint32_t> labels;
    std::vector<std::string> label_names;
    std::vector<double> weights;
    double total_weight = 0.0;
    bool unit_weights = false;

    std::size_t n() const { return labels.size(); }
    std::size_t n_columns() const { return columns.size(); }
    std::size_t n_classes() const { return label_names.size(); }
};

/// The set of samples owned by a subproblem, as a bitvector over rows.
struct CaptureSet {
    BitVector bits;

    static CaptureSet all(std::size_t n) { return CaptureSet{BitVector::ones(n)}; }
    std::size_t count() const { return bits.popcount(); }
    bool empty() const { return bits.none(); }
    bool operator==(const CaptureSet&) const = default;
};

struct ThresholdEntry {
    std::size_t feature;
    std::string feature_name;
    FeatureKind kind;
    double threshold = 0.0;
    std::string category;
};

/// Guessed binarization: the (feature, threshold) and (feature, category)
/// pairs the search is restricted to.
struct ThresholdSet {
    std::vector<ThresholdEntry> entries;

    bool empty() const { return entries.empty(); }
};

RawDataset ingest_csv(const std::string& path, const std::string& label_column,
                      const std::optional<std::string>& weight_column = std::nullopt);

/// Same as ingest_csv but over in-memory CSV text; `origin` only names the
/// source in error messages.
RawDataset ingest_csv_text(std::string_view text, const std::string& label_column,
                           const std::optional<std::string>& weight_column = std::nullopt,
                           const std::string& origin = "<memory>");

/// All columns treated as features, placeholder labels. Prediction over raw
/// rows only needs features resolved by name.
RawDataset ingest_csv_features(std::string_view text, const std::string& origin = "<memory>");

/// One column per midpoint between consecutive distinct values of each
/// numeric feature (bit = 1 iff value <= midpoint), one one-hot column per
/// category of each categorical feature. Constant and duplicate bit-columns
/// are dropped; the lexicographically smallest (feature, threshold) origin
/// is kept for duplicates.
BinarizedDataset binarize_all(const RawDataset& raw);

/// Columns restricted to the supplied threshold/category pairs.
BinarizedDataset binarize_guessed(const RawDataset& raw, const ThresholdSet& thresholds);

CaptureSet capture_and(const CaptureSet& s, const BitVector& column, int polarity);

/// Debug export: documented columnar JSON (origins + base64 bit payload).
std::string export_binarized_json(const BinarizedDataset& ds);

/// Replaces the weight vector (rescaling, duplication-count experiments).
BinarizedDataset with_weights(const BinarizedDataset& ds, std::vector<double> weights);

}  // namespace wsdt
