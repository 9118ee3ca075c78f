#include "wsdt/objective.hpp"

#include <bit>
#include <limits>

#include "wsdt/error.hpp"
#include "wsdt/numeric.hpp"

namespace wsdt {

ReferencePredictions ReferencePredictions::from_preds(std::vector<std::uint32_t> preds,
                                                      const BinarizedDataset& ds) {
    if (preds.size() != ds.n()) raise(ErrorCode::LengthMismatch, "reference predictions length mismatch");
    ReferencePredictions out;
    out.mismatch_mask = BitVector(ds.n());
    for (std::size_t i = 0; i < preds.size(); ++i)
        if (preds[i] != ds.labels[i]) out.mismatch_mask.set(i);
    out.preds = std::move(preds);
    return out;
}

LossKernel::LossKernel(const BinarizedDataset& ds, KernelMode mode) : ds_(&ds), mode_(mode) {
    if (mode == KernelMode::Bitcount && !ds.unit_weights)
        raise(ErrorCode::KernelModeMismatch, "bitcount kernel requires unit weights");
    if (ds.total_weight <= 0) raise(ErrorCode::ZeroTotalWeight, "total weight must be positive");
    label_masks_.reserve(ds.n_classes());
    for (std::uint32_t c = 0; c < ds.n_classes(); ++c) {
        BitVector mask(ds.n());
        for (std::size_t i = 0; i < ds.n(); ++i)
            if (ds.labels[i] == c) mask.set(i);
        label_masks_.push_back(std::move(mask));
    }
}

namespace {

// Hot loops are fused over raw words so no intermediate bitvector is built.

inline double popcount_and_not(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    std::size_t total = 0;
    for (std::size_t k = 0; k < a.size(); ++k) total += std::size_t(std::popcount(a[k] & ~b[k]));
    return static_cast<double>(total);
}

inline double popcount_and(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    std::size_t total = 0;
    for (std::size_t k = 0; k < a.size(); ++k) total += std::size_t(std::popcount(a[k] & b[k]));
    return static_cast<double>(total);
}

inline double weight_sum_and_not(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                 const std::vector<double>& weights) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        std::uint64_t w = a[k] & ~b[k];
        while (w) {
            acc += weights[k * 64 + std::size_t(std::countr_zero(w))];
            w &= w - 1;
        }
    }
    return acc;
}

inline double weight_sum_and(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                             const std::vector<double>& weights) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        std::uint64_t w = a[k] & b[k];
        while (w) {
            acc += weights[k * 64 + std::size_t(std::countr_zero(w))];
            w &= w - 1;
        }
    }
    return acc;
}

inline double weight_sum(std::span<const std::uint64_t> a, const std::vector<double>& weights) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        std::uint64_t w = a[k];
        while (w) {
            acc += weights[k * 64 + std::size_t(std::countr_zero(w))];
            w &= w - 1;
        }
    }
    return acc;
}

}  // namespace

double LossKernel::subset_loss_mass(const CaptureSet& s, std::uint32_t label) const {
    if (label >= label_masks_.size()) raise(ErrorCode::InvalidArgument, "class id out of range");
    const auto& mask = label_masks_[label];
    if (mode_ == KernelMode::Bitcount) return popcount_and_not(s.bits.words(), mask.words());
    return weight_sum_and_not(s.bits.words(), mask.words(), ds_->weights);
}

double LossKernel::capture_mass(const CaptureSet& s) const {
    if (mode_ == KernelMode::Bitcount) return static_cast<double>(s.bits.popcount());
    return weight_sum(s.bits.words(), ds_->weights);
}

double LossKernel::masked_mass(const CaptureSet& s, const BitVector& mask) const {
    if (mode_ == KernelMode::Bitcount) return popcount_and(s.bits.words(), mask.words());
    return weight_sum_and(s.bits.words(), mask.words(), ds_->weights);
}

LossKernel::LeafChoice LossKernel::best_leaf(const CaptureSet& s) const {
    if (s.empty()) raise(ErrorCode::EmptyCaptureSet, "best_leaf on an empty capture set");
    LeafChoice best{0, std::numeric_limits<double>::infinity()};
    for (std::uint32_t c = 0; c < label_masks_.size(); ++c) {
        const double mass = subset_loss_mass(s, c);
        if (mass < best.loss_mass) best = LeafChoice{c, mass};
    }
    return best;
}

double weighted_loss(const Tree& tree, const BinarizedDataset& ds) {
    if (ds.total_weight <= 0) raise(ErrorCode::ZeroTotalWeight, "total weight must be positive");
    const std::vector<std::uint32_t> preds = predict(tree, ds);
    std::vector<double> mismatch;
    mismatch.reserve(ds.n());
    for (std::size_t i = 0; i < ds.n(); ++i)
        if (preds[i] != ds.labels[i]) mismatch.push_back(ds.weights[i]);
    return pairwise_sum(mismatch) / ds.total_weight;
}

double objective_value(const Tree& tree, const BinarizedDataset& ds, double lambda) {
    if (lambda < 0) raise(ErrorCode::InvalidArgument, "lambda must be non-negative");
    return weighted_loss(tree, ds) + lambda * static_cast<double>(leaf_count(tree));
}

double lb_guess(const CaptureSet& s, const ReferencePredictions& ref, const BinarizedDataset& ds,
                double lambda, const LossKernel& kernel) {
    if (ref.preds.size() != ds.n()) raise(ErrorCode::LengthMismatch, "reference predictions length mismatch");
    return kernel.masked_mass(s, ref.mismatch_mask) / ds.total_weight + lambda;
}

double loss_mass_sweep(const LossKernel& kernel) {
    const BinarizedDataset& ds = kernel.dataset();
    const CaptureSet root = CaptureSet::all(ds.n());
    double acc = 0.0;
    for (std::size_t j = 0; j < ds.n_columns(); ++j) {
        const CaptureSet one = capture_and(root, ds.columns[j], 1);
        const CaptureSet zero = capture_and(root, ds.columns[j], 0);
        if (one.bits.any()) acc += kernel.best_leaf(one).loss_mass;
        if (zero.bits.any()) acc += kernel.best_leaf(zero).loss_mass;
    }
    return acc;
}

}  // namespace wsdt
