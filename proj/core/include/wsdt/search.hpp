#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "wsdt/data.hpp"
#include "wsdt/digest.hpp"
#include "wsdt/model.hpp"
#include "wsdt/objective.hpp"

namespace wsdt {

enum class SearchMode { Exact, Guessed };

enum class Optimality { ProvedOptimal, GuessCertified, TimedOutBestKnown };

const char* optimality_name(Optimality o);
const char* search_mode_name(SearchMode m);
const char* kernel_mode_name(KernelMode m);

struct SearchConfig {
    double lambda = 0.0;
    int depth_limit = 1;
    SearchMode mode = SearchMode::Exact;
    KernelMode kernel = KernelMode::WeightedDot;
    std::optional<ReferencePredictions> reference;  // required iff mode == Guessed
    std::optional<double> time_limit_seconds;
    int threads = 1;       // >1 parallelizes the root split loop in exact mode
    bool use_cache = true; // memoization on/off (off only changes work, not results)
    bool trace = false;
};

struct TraceEvent {
    char kind;  // 'O' opened, 'C' closed
    Digest128 key;
    int depth;
    std::size_t captured;
    double value_mass;  // resolved value for 'C', leaf bound for 'O'
};

struct SearchResult {
    Tree tree;
    double objective_value = 0.0;
    std::uint64_t node_count_explored = 0;
    std::uint64_t cache_hits = 0;
    double elapsed_seconds = 0.0;
    Optimality optimality = Optimality::ProvedOptimal;
    std::vector<TraceEvent> trace;
};

/// 128-bit digest of (capture bits, depth budget). The cache stores the bits
/// alongside each entry, so a collision would be detected rather than
/// silently merging two subproblems.
Digest128 canonical_key(const BitVector& bits, int depth);

/// Minimizes weighted loss + lambda * leaves subject to depth(t) <= depth
/// limit. Exact mode proves optimality; guessed mode resolves subproblems at
/// the reference lower-bound certificate. Output is schedule-independent:
/// equal-objective trees are ordered by (leaf count, preorder encoding) and
/// the minimum always wins.
SearchResult optimize(const BinarizedDataset& ds, const SearchConfig& cfg);

/// Search internals exposed at subproblem granularity (used by tests; the
/// normal entry point is optimize()).
class Optimizer {
  public:
    Optimizer(const BinarizedDataset& ds, const SearchConfig& cfg);
    ~Optimizer();

    struct Solution {
        double value_mass;  // loss mass + lambda * total_weight * leaves
        Tree tree;
        int leaves;
    };

    SearchResult run();
    Solution solve_subproblem(const CaptureSet& s, int depth);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace wsdt
