#pragma once

#include <cstdint>
#include <vector>

#include "wsdt/data.hpp"
#include "wsdt/model.hpp"

namespace wsdt {

enum class KernelMode { Bitcount, WeightedDot };

/// Per-sample predictions of a reference model plus the mask of samples it
/// gets wrong. Drives lower-bound guessing.
struct ReferencePredictions {
    std::vector<std::uint32_t> preds;
    BitVector mismatch_mask;  // bit i set iff y_i != pred_i

    static ReferencePredictions from_preds(std::vector<std::uint32_t> preds, const BinarizedDataset& ds);
};

/// Loss-mass computation over capture sets. Two interchangeable backends:
///   Bitcount     — AND + popcount; valid only at unit weights.
///   WeightedDot  — walks set bits of the mismatch vector and sums weights.
/// Masses are unnormalized (in units of total weight); divide by
/// ds.total_weight at API boundaries.
class LossKernel {
  public:
    LossKernel(const BinarizedDataset& ds, KernelMode mode);

    KernelMode mode() const { return mode_; }
    const BinarizedDataset& dataset() const { return *ds_; }
    const BitVector& label_mask(std::uint32_t label) const { return label_masks_[label]; }

    /// Weight mass of mismatches in s when predicting `label`:
    /// sum over i in s with y_i != label of w_i.
    double subset_loss_mass(const CaptureSet& s, std::uint32_t label) const;

    /// Weight mass of s itself.
    double capture_mass(const CaptureSet& s) const;

    /// Weight mass of s AND mask.
    double masked_mass(const CaptureSet& s, const BitVector& mask) const;

    struct LeafChoice {
        std::uint32_t label;
        double loss_mass;
    };

    /// Class minimizing subset_loss_mass; ties go to the smallest class id.
    LeafChoice best_leaf(const CaptureSet& s) const;

  private:
    const BinarizedDataset* ds_;
    KernelMode mode_;
    std::vector<BitVector> label_masks_;
};

/// Eq. form: weighted misclassification mass divided by total weight.
double weighted_loss(const Tree& tree, const BinarizedDataset& ds);

/// weighted_loss + lambda * leaf_count.
double objective_value(const Tree& tree, const BinarizedDataset& ds, double lambda);

/// Guessed lower bound for a subproblem: reference mismatch mass on s,
/// normalized, plus one leaf worth of regularization.
double lb_guess(const CaptureSet& s, const ReferencePredictions& ref, const BinarizedDataset& ds,
                double lambda, const LossKernel& kernel);

/// The search hot loop in isolation: for every column, capture both sides of
/// the split and pick the best leaf for each. Returns accumulated loss mass
/// (also keeps the compiler from discarding the work when benchmarked).
double loss_mass_sweep(const LossKernel& kernel);

}  // namespace wsdt
