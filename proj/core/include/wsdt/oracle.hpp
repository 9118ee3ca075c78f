#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wsdt/data.hpp"
#include "wsdt/model.hpp"
#include "wsdt/objective.hpp"

namespace wsdt {

struct OracleResult {
    double objective;
    Tree tree;
};

/// Exhaustive ground truth on small instances (columns <= 6, depth <= 3):
/// enumerates every binary tree shape of depth <= d, then every column
/// assignment, labelling leaves by weighted majority. Shares no code with the
/// search module's pruning or memoization.
OracleResult brute_force(const BinarizedDataset& ds, int depth_limit, double lambda);

/// Second, independent enumerator (plain depth-budget recursion, no shapes,
/// no memoization). brute_force and brute_force_recursive must always agree.
OracleResult brute_force_recursive(const BinarizedDataset& ds, int depth_limit, double lambda);

struct BoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;  // lhs <= rhs + 1e-12
    std::string witness; // compact JSON of the inputs that produced the report
};

/// Guessed-mode performance guarantee: the guessed search objective is no
/// worse than reference mismatch mass plus the oracle-optimal tree's errors
/// on reference-correct samples, plus its leaf penalty.
BoundReport check_theorem1(const BinarizedDataset& ds, int depth_limit, double lambda,
                           const ReferencePredictions& ref);

/// Weight-rounding statistics feeding the duplication error bound.
struct RoundingStats {
    double eta;      // max_i w_i / w~_i
    double zeta;     // max_i w~_i / w_i
    double psi;      // max over both vectors / min over both vectors
    double epsilon;  // max_i |w_i - w~_i|
};

RoundingStats rounding_stats(const std::vector<double>& w, const std::vector<double>& w_rounded);

/// Duplication-rounding bound: |R(t*) - R~(t~)| against the eta/zeta/psi/eps
/// expression, with both optima found by brute force. `ds` must carry the
/// pre-rounding weights (the scaled weights the counts were rounded from);
/// the bound is meaningless across an uncompensated rescaling.
BoundReport check_theorem2(const BinarizedDataset& ds, const std::vector<double>& w_rounded,
                           int depth_limit, double lambda);

struct SamplingTail {
    double epsilon;
    double empirical;              // fraction of repetitions with |L~ - L_w| >= eps
    double bound_mean;             // 2 exp(-2 S eps^2), asserted
    double bound_printed_body;     // 2 exp(-2 eps^2 / S), reported only
    double bound_printed_appendix; // 2 exp(-2 eps^2 / S^2), reported only
    bool holds;                    // Wilson 99% lower bound of empirical <= bound_mean
};

struct SamplingReport {
    std::uint64_t sample_size = 0;  // S = round(r * N)
    std::uint64_t repetitions = 0;
    double loss_weighted = 0.0;     // L_w on the full weighted dataset
    double mean_sampled = 0.0;      // mean of L~ across repetitions
    double stderr_mean = 0.0;
    bool unbiased = false;          // |mean - L_w| <= 3 * stderr (+1e-12)
    std::vector<SamplingTail> tails;
    bool holds = false;             // all tails hold and unbiased
};

/// Monte Carlo concentration check for weighted sampling. The asserted bound
/// is the standard Hoeffding form for a mean of S i.i.d. [0,1] draws; the two
/// printed exponents are reported alongside without being asserted.
SamplingReport check_theorem3(const BinarizedDataset& ds, const Tree& tree, double r,
                              const std::vector<double>& epsilon_grid, std::uint64_t repetitions,
                              std::uint64_t seed);

/// 99% Wilson score interval lower bound for k successes out of n.
double wilson_lower_99(std::uint64_t k, std::uint64_t n);

}  // namespace wsdt
