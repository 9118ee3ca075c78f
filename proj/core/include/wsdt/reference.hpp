#pragma once

#include <string>
#include <vector>

#include "wsdt/data.hpp"
#include "wsdt/objective.hpp"

namespace wsdt {

struct GreedyConfig {
    int max_depth = 2;
    double min_leaf_weight = 0.0;
    int rounds = 1;  // 1 = a single greedy tree; >1 = boosted stumps
};

struct ReferenceFit {
    ReferencePredictions predictions;  // training-set predictions
    ThresholdSet thresholds;           // (feature, threshold/category) pairs actually split on
};

/// Built-in stand-in for an external reference model. rounds == 1 fits a
/// weighted-Gini greedy tree; rounds > 1 fits one-vs-rest boosted stumps
/// with weighted exponential updates, predicting by weighted vote.
ReferenceFit fit_greedy(const BinarizedDataset& ds, const GreedyConfig& cfg);

/// One label per line, row-aligned with the training data. Labels may be the
/// original label strings or remapped ids in {0..K}.
ReferencePredictions load_reference(const std::string& path, const BinarizedDataset& ds);
ReferencePredictions load_reference_text(std::string_view text, const BinarizedDataset& ds);

std::string threshold_set_to_json(const ThresholdSet& set);
ThresholdSet threshold_set_from_json(std::string_view text, const RawDataset& raw);

}  // namespace wsdt
