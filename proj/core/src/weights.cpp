#include "wsdt/weights.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wsdt/error.hpp"
#include "wsdt/numeric.hpp"

namespace wsdt {

namespace {

// Round half to even, the documented rounding mode for count construction.
std::uint64_t round_half_even(double x) {
    const double r = std::nearbyint(x);  // default FE_TONEAREST is half-to-even
    return r < 0 ? 0 : static_cast<std::uint64_t>(r);
}

}  // namespace

DupCounts duplication_counts(const std::vector<double>& weights, const DupConfig& cfg) {
    if (cfg.p < 1 || cfg.p > 99) raise(ErrorCode::InvalidArgument, "duplication factor p must be in [1, 99]");
    if (weights.empty()) raise(ErrorCode::EmptyDataset, "no weights");
    const double max_w = *std::max_element(weights.begin(), weights.end());
    if (max_w <= 0) raise(ErrorCode::AllZeroWeights, "all weights are zero");
    for (double w : weights)
        if (w < 0 || !std::isfinite(w)) raise(ErrorCode::NegativeWeight, "weights must be finite and >= 0");

    DupCounts out;
    switch (cfg.normalization) {
        case DupNormalization::MaxWeight:
            out.scale = static_cast<double>(cfg.p) / max_w;
            break;
        case DupNormalization::SumWeight:
            out.scale = static_cast<double>(cfg.p) / pairwise_sum(weights);
            break;
        case DupNormalization::None:
            out.scale = 1.0;
            break;
    }

    out.counts.resize(weights.size());
    out.scaled_weights.resize(weights.size());
    out.epsilon = 0.0;
    out.total = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double scaled = out.scale * weights[i];
        out.scaled_weights[i] = scaled;
        std::uint64_t count = round_half_even(scaled);
        if (count == 0) count = 1;  // never drop a sample
        out.counts[i] = count;
        out.total += count;
        out.epsilon = std::max(out.epsilon, std::abs(scaled - static_cast<double>(count)));
    }

    const double cap = cfg.size_cap_factor * static_cast<double>(weights.size());
    if (static_cast<double>(out.total) > cap)
        raise(ErrorCode::OutputTooLarge, "duplicated size " + std::to_string(out.total) +
                                             " exceeds cap " + std::to_string(static_cast<std::uint64_t>(cap)));
    return out;
}

DuplicatedRaw duplicate(const RawDataset& ds, const DupConfig& cfg) {
    DuplicatedRaw out;
    out.counts = duplication_counts(ds.weights, cfg);

    RawDataset& dup = out.dataset;
    dup.raw_header = ds.raw_header;
    dup.label_names = ds.label_names;
    dup.label_column = ds.label_column;
    dup.weight_column = ds.weight_column;

    for (std::size_t i = 0; i < ds.n(); ++i) {
        for (std::uint64_t c = 0; c < out.counts.counts[i]; ++c) {
            dup.labels.push_back(ds.labels[i]);
            dup.weights.push_back(1.0);
            dup.raw_cells.push_back(ds.raw_cells[i]);
            out.source_row.push_back(i);
        }
    }

    dup.features.reserve(ds.features.size());
    for (const Feature& f : ds.features) {
        Feature copy;
        copy.name = f.name;
        copy.kind = f.kind;
        copy.categories = f.categories;
        for (std::size_t i = 0; i < ds.n(); ++i) {
            for (std::uint64_t c = 0; c < out.counts.counts[i]; ++c) {
                if (f.kind == FeatureKind::Numeric)
                    copy.numeric.push_back(f.numeric[i]);
                else
                    copy.codes.push_back(f.codes[i]);
            }
        }
        dup.features.push_back(std::move(copy));
    }
    return out;
}

BinarizedDataset duplicate_binarized(const BinarizedDataset& ds, const DupCounts& counts) {
    if (counts.counts.size() != ds.n()) raise(ErrorCode::LengthMismatch, "counts length mismatch");
    BinarizedDataset out;
    const std::size_t total = static_cast<std::size_t>(counts.total);
    out.origins = ds.origins;
    out.label_names = ds.label_names;
    out.labels.reserve(total);
    for (std::size_t i = 0; i < ds.n(); ++i)
        for (std::uint64_t c = 0; c < counts.counts[i]; ++c) out.labels.push_back(ds.labels[i]);
    out.weights.assign(total, 1.0);
    out.total_weight = static_cast<double>(total);
    out.unit_weights = true;
    out.columns.reserve(ds.n_columns());
    for (const BitVector& column : ds.columns) {
        BitVector expanded(total);
        std::size_t row = 0;
        for (std::size_t i = 0; i < ds.n(); ++i) {
            const bool bit = column.test(i);
            for (std::uint64_t c = 0; c < counts.counts[i]; ++c, ++row)
                if (bit) expanded.set(row);
        }
        out.columns.push_back(std::move(expanded));
    }
    return out;
}

std::vector<std::size_t> sample_indices(const std::vector<double>& weights, const SampleConfig& cfg) {
    if (cfg.r <= 0) raise(ErrorCode::InvalidArgument, "sampling ratio r must be positive");
    if (weights.empty()) raise(ErrorCode::EmptyDataset, "no weights");
    std::vector<double> prefix(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0 || !std::isfinite(weights[i]))
            raise(ErrorCode::NegativeWeight, "weights must be finite and >= 0");
        acc += weights[i];
        prefix[i] = acc;
    }
    if (acc <= 0) raise(ErrorCode::ZeroTotalWeight, "total weight is zero");

    const auto n = static_cast<double>(weights.size());
    const auto s = static_cast<std::uint64_t>(std::llround(cfg.r * n));
    if (s < 1) raise(ErrorCode::ZeroSampleSize, "round(r * N) must be at least 1");

    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> draws;
    draws.reserve(s);
    for (std::uint64_t k = 0; k < s; ++k) {
        // 53-bit uniform in [0, 1); avoids distribution objects so the stream
        // is identical across standard library implementations.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double target = u * acc;
        const auto it = std::upper_bound(prefix.begin(), prefix.end(), target);
        draws.push_back(std::min<std::size_t>(static_cast<std::size_t>(it - prefix.begin()),
                                              weights.size() - 1));
    }
    return draws;
}

RawDataset weighted_sample(const RawDataset& ds, const SampleConfig& cfg) {
    const std::vector<std::size_t> draws = sample_indices(ds.weights, cfg);
    RawDataset out;
    out.raw_header = ds.raw_header;
    out.label_names = ds.label_names;
    out.label_column = ds.label_column;
    out.weight_column = ds.weight_column;
    for (std::size_t i : draws) {
        out.labels.push_back(ds.labels[i]);
        out.weights.push_back(1.0);
        out.raw_cells.push_back(ds.raw_cells[i]);
    }
    out.features.reserve(ds.features.size());
    for (const Feature& f : ds.features) {
        Feature copy;
        copy.name = f.name;
        copy.kind = f.kind;
        copy.categories = f.categories;
        for (std::size_t i : draws) {
            if (f.kind == FeatureKind::Numeric)
                copy.numeric.push_back(f.numeric[i]);
            else
                copy.codes.push_back(f.codes[i]);
        }
        out.features.push_back(std::move(copy));
    }
    return out;
}

std::vector<double> scale_costs(const std::vector<double>& costs, double lo, double hi,
                                bool allow_constant) {
    if (costs.empty()) raise(ErrorCode::EmptyDataset, "no costs");
    if (!(hi > lo) || !(lo > 0))
        raise(ErrorCode::InvalidArgument, "need hi > lo > 0 for cost scaling");
    const auto [min_it, max_it] = std::minmax_element(costs.begin(), costs.end());
    const double min_c = *min_it, max_c = *max_it;
    if (min_c == max_c) {
        if (!allow_constant) raise(ErrorCode::DegenerateRange, "all costs are equal");
        return std::vector<double>(costs.size(), hi);
    }
    std::vector<double> out;
    out.reserve(costs.size());
    for (double c : costs) out.push_back(lo + (c - min_c) / (max_c - min_c) * (hi - lo));
    return out;
}

double lalonde_cost(int label, double age, bool misclassified) {
    if (label < 0 || label > 2) raise(ErrorCode::InvalidArgument, "label must be 0, 1 or 2");
    if (!misclassified) return 0.0;
    switch (label) {
        case 0: return 200.0 + 3.0 * age;
        case 1: return 100.0 + 3.0 * age;
        default: return 300.0;
    }
}

}  // namespace wsdt
