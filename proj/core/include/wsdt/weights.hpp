#pragma once

#include <cstdint>
#include <vector>

#include "wsdt/data.hpp"

namespace wsdt {

enum class DupNormalization {
    MaxWeight,  // divide by max(w): scales into (0, 1]
    SumWeight,  // divide by sum(w): the pseudocode variant, for comparison
    None,       // weights used as-is (integer-weight exactness path)
};

struct DupConfig {
    int p = 10;  // duplication factor, 1 <= p <= 99
    DupNormalization normalization = DupNormalization::MaxWeight;
    double size_cap_factor = 100.0;  // error when sum of counts exceeds cap * N
};

struct DupCounts {
    std::vector<std::uint64_t> counts;   // copies per source row, each >= 1
    std::vector<double> scaled_weights;  // c * w, the pre-rounding weights
    double scale = 1.0;                  // c
    double epsilon = 0.0;                // max_i |c*w_i - counts_i|
    std::uint64_t total = 0;             // sum of counts
};

/// Normalize, scale by p, round half-to-even, clamp to >= 1.
DupCounts duplication_counts(const std::vector<double>& weights, const DupConfig& cfg);

struct DuplicatedRaw {
    RawDataset dataset;                   // unit weights, rows repeated
    std::vector<std::size_t> source_row;  // per output row
    DupCounts counts;
};

DuplicatedRaw duplicate(const RawDataset& ds, const DupConfig& cfg);

/// Row-replicated binarized dataset (unit weights). Bit patterns per source
/// row are preserved, so every tree scores it exactly like integer weights.
BinarizedDataset duplicate_binarized(const BinarizedDataset& ds, const DupCounts& counts);

struct SampleConfig {
    double r = 1.0;  // sampling ratio; S = round(r * N)
    std::uint64_t seed = 0;
};

/// S i.i.d. draws with replacement, P(row i) = w_i / sum(w). Deterministic
/// given the seed (mt19937_64 + inverse-CDF over the weight prefix sums).
std::vector<std::size_t> sample_indices(const std::vector<double>& weights, const SampleConfig& cfg);

RawDataset weighted_sample(const RawDataset& ds, const SampleConfig& cfg);

/// Affine map sending min(costs) -> lo and max(costs) -> hi.
/// allow_constant maps an all-equal vector to hi instead of erroring.
std::vector<double> scale_costs(const std::vector<double>& costs, double lo, double hi,
                                bool allow_constant = false);

/// Misclassification cost scheme for the treatment-regime case study:
/// 0 when correct; otherwise 200 + 3*age for label 0, 100 + 3*age for
/// label 1, 300 flat for label 2.
double lalonde_cost(int label, double age, bool misclassified);

}  // namespace wsdt
