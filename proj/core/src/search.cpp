#include "wsdt/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "wsdt/error.hpp"

namespace wsdt {

const char* optimality_name(Optimality o) {
    switch (o) {
        case Optimality::ProvedOptimal: return "proved-optimal";
        case Optimality::GuessCertified: return "guess-certified";
        case Optimality::TimedOutBestKnown: return "timed-out-best-known";
    }
    return "?";
}

const char* search_mode_name(SearchMode m) { return m == SearchMode::Exact ? "exact" : "guessed"; }

const char* kernel_mode_name(KernelMode m) { return m == KernelMode::Bitcount ? "bitcount" : "weighted-dot"; }

Digest128 canonical_key(const BitVector& bits, int depth) {
    const auto words = bits.words();
    const std::uint64_t seed =
        (static_cast<std::uint64_t>(bits.size()) << 8) ^ static_cast<std::uint64_t>(depth);
    return digest128(std::as_bytes(words), seed);
}

namespace {

struct TimeoutSignal {};

using Clock = std::chrono::steady_clock;

}  // namespace

struct Optimizer::Impl {
    const BinarizedDataset& ds;
    SearchConfig cfg;
    LossKernel kernel;
    double leaf_penalty;  // lambda * total_weight; one unit per leaf, mass scale

    struct CacheEntry {
        BitVector bits;
        int depth;
        double value;
        Tree tree;
        int leaves;
    };
    std::unordered_map<Digest128, std::unique_ptr<CacheEntry>> cache;
    std::mutex cache_mutex;

    std::atomic<std::uint64_t> nodes_explored{0};
    std::atomic<std::uint64_t> cache_hits{0};
    std::optional<Clock::time_point> deadline;
    std::atomic<bool> timed_out{false};

    std::vector<TraceEvent> trace;
    std::mutex trace_mutex;

    // Best complete root candidate so far; what a timeout returns.
    Solution root_best{0.0, Tree{}, 0};
    bool root_best_set = false;
    std::atomic<double> root_best_value{0.0};
    std::mutex root_mutex;

    Impl(const BinarizedDataset& ds_, const SearchConfig& cfg_)
        : ds(ds_), cfg(cfg_), kernel(ds_, cfg_.kernel), leaf_penalty(cfg_.lambda * ds_.total_weight) {}

    void check_deadline() const {
        if (deadline && Clock::now() > *deadline) throw TimeoutSignal{};
    }

    void record(char kind, const Digest128& key, int depth, std::size_t captured, double value) {
        if (!cfg.trace) return;
        std::lock_guard<std::mutex> lock(trace_mutex);
        trace.push_back(TraceEvent{kind, key, depth, captured, value});
    }

    static bool better(const Solution& a, const Solution& b) {
        if (a.value_mass != b.value_mass) return a.value_mass < b.value_mass;
        if (a.leaves != b.leaves) return a.leaves < b.leaves;
        return a.tree.preorder_key() < b.tree.preorder_key();
    }

    const CacheEntry* lookup(const Digest128& key, const BitVector& bits, int depth) {
        std::lock_guard<std::mutex> lock(cache_mutex);
        const auto it = cache.find(key);
        if (it == cache.end()) return nullptr;
        if (it->second->depth != depth || !(it->second->bits == bits))
            raise(ErrorCode::DigestCollision, "subproblem digest collision detected");
        return it->second.get();
    }

    void store(const Digest128& key, const BitVector& bits, int depth, const Solution& sol) {
        auto entry = std::make_unique<CacheEntry>(CacheEntry{bits, depth, sol.value_mass, sol.tree, sol.leaves});
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache.try_emplace(key, std::move(entry));  // first resolution wins; equal anyway
    }

    // Cached exact value when the child subproblem is already resolved, else
    // the one-leaf minimum (zero loss, one unit of regularization).
    double child_bound(const BitVector& bits, int depth) {
        if (cfg.use_cache) {
            const Digest128 key = canonical_key(bits, depth);
            std::lock_guard<std::mutex> lock(cache_mutex);
            const auto it = cache.find(key);
            if (it != cache.end() && it->second->depth == depth && it->second->bits == bits)
                return it->second->value;
        }
        return leaf_penalty;
    }

    struct SplitCandidate {
        double stump_mass;
        std::int32_t column;
        CaptureSet zero;  // column bit = 0
        CaptureSet one;   // column bit = 1
    };

    // Splits ordered by the loss mass of their best two-leaf realization;
    // degenerate splits (an empty side) are dropped.
    std::vector<SplitCandidate> ordered_splits(const CaptureSet& s) {
        std::vector<SplitCandidate> splits;
        splits.reserve(ds.n_columns());
        for (std::size_t j = 0; j < ds.n_columns(); ++j) {
            CaptureSet one = capture_and(s, ds.columns[j], 1);
            if (one.empty()) continue;
            CaptureSet zero = capture_and(s, ds.columns[j], 0);
            if (zero.empty()) continue;
            const double stump =
                kernel.best_leaf(zero).loss_mass + kernel.best_leaf(one).loss_mass;
            splits.push_back(SplitCandidate{stump, static_cast<std::int32_t>(j), std::move(zero), std::move(one)});
        }
        std::sort(splits.begin(), splits.end(), [](const SplitCandidate& a, const SplitCandidate& b) {
            if (a.stump_mass != b.stump_mass) return a.stump_mass < b.stump_mass;
            return a.column < b.column;
        });
        return splits;
    }

    static bool same_class_leaf_pair(const Solution& l, const Solution& r) {
        return l.leaves == 1 && r.leaves == 1 && l.tree.nodes.size() == 1 && r.tree.nodes.size() == 1 &&
               l.tree.nodes[0].label == r.tree.nodes[0].label;
    }

    Solution solve(const CaptureSet& s, int depth) {
        check_deadline();
        const Digest128 key = canonical_key(s.bits, depth);
        if (cfg.use_cache) {
            if (const CacheEntry* hit = lookup(key, s.bits, depth)) {
                cache_hits.fetch_add(1, std::memory_order_relaxed);
                return Solution{hit->value, hit->tree, hit->leaves};
            }
        }
        nodes_explored.fetch_add(1, std::memory_order_relaxed);

        const LossKernel::LeafChoice leaf = kernel.best_leaf(s);
        record('O', key, depth, s.count(), leaf.loss_mass + leaf_penalty);
        Solution best{leaf.loss_mass + leaf_penalty, Tree::leaf(leaf.label), 1};

        if (depth > 0 && leaf.loss_mass > 0.0 && !guessed_leaf_rule(s, best)) {
            const double certificate = guess_certificate(s);
            for (const SplitCandidate& split : ordered_splits(s)) {
                check_deadline();
                const double bound =
                    child_bound(split.zero.bits, depth - 1) + child_bound(split.one.bits, depth - 1);
                if (bound > best.value_mass) continue;
                Solution zero = solve(split.zero, depth - 1);
                if (zero.value_mass + child_bound(split.one.bits, depth - 1) > best.value_mass) continue;
                Solution one = solve(split.one, depth - 1);
                if (same_class_leaf_pair(zero, one)) continue;
                Solution candidate{zero.value_mass + one.value_mass,
                                   Tree::split(split.column, zero.tree, one.tree),
                                   zero.leaves + one.leaves};
                if (better(candidate, best)) best = std::move(candidate);
                if (cfg.mode == SearchMode::Guessed && best.value_mass <= certificate) break;
            }
        }

        if (cfg.use_cache) store(key, s.bits, depth, best);
        record('C', key, depth, s.count(), best.value_mass);
        return best;
    }

    // Appendix case 1: a leaf is good enough when its bound is within one
    // unit of regularization of the guessed lower bound.
    bool guessed_leaf_rule(const CaptureSet& s, const Solution& leaf_candidate) {
        if (cfg.mode != SearchMode::Guessed) return false;
        return leaf_candidate.value_mass <= guess_certificate(s) + leaf_penalty;
    }

    // lb_guess in mass units: mismatch mass of the reference on s, plus one
    // unit of regularization.
    double guess_certificate(const CaptureSet& s) {
        if (cfg.mode != SearchMode::Guessed) return -1.0;
        return kernel.masked_mass(s, cfg.reference->mismatch_mask) + leaf_penalty;
    }

    void offer_root(const Solution& candidate) {
        std::lock_guard<std::mutex> lock(root_mutex);
        if (!root_best_set || better(candidate, root_best)) {
            root_best = candidate;
            root_best_set = true;
            root_best_value.store(candidate.value_mass, std::memory_order_relaxed);
        }
    }

    // Root subproblem. Same candidate logic as solve(), plus incumbent
    // tracking for timeouts and an optional parallel split loop.
    void solve_root(const CaptureSet& s, int depth) {
        const Digest128 key = canonical_key(s.bits, depth);
        nodes_explored.fetch_add(1, std::memory_order_relaxed);
        const LossKernel::LeafChoice leaf = kernel.best_leaf(s);
        record('O', key, depth, s.count(), leaf.loss_mass + leaf_penalty);
        offer_root(Solution{leaf.loss_mass + leaf_penalty, Tree::leaf(leaf.label), 1});

        if (depth > 0 && leaf.loss_mass > 0.0 && !guessed_leaf_rule(s, root_best)) {
            const double certificate = guess_certificate(s);
            const std::vector<SplitCandidate> splits = ordered_splits(s);
            if (cfg.mode == SearchMode::Exact && cfg.threads > 1) {
                run_parallel_root(splits, depth);
            } else {
                for (const SplitCandidate& split : splits) {
                    check_deadline();
                    if (!try_split(split, depth, root_best_value.load(std::memory_order_relaxed))) continue;
                    if (cfg.mode == SearchMode::Guessed &&
                        root_best_value.load(std::memory_order_relaxed) <= certificate)
                        break;
                }
            }
        }
        record('C', key, depth, s.count(), root_best.value_mass);
    }

    // Evaluates one root split against the shared incumbent. Returns false
    // when pruned.
    bool try_split(const SplitCandidate& split, int depth, double incumbent_value) {
        const double bound =
            child_bound(split.zero.bits, depth - 1) + child_bound(split.one.bits, depth - 1);
        if (bound > incumbent_value) return false;
        Solution zero = solve(split.zero, depth - 1);
        if (zero.value_mass + child_bound(split.one.bits, depth - 1) > incumbent_value) return false;
        Solution one = solve(split.one, depth - 1);
        if (same_class_leaf_pair(zero, one)) return false;
        offer_root(Solution{zero.value_mass + one.value_mass,
                            Tree::split(split.column, zero.tree, one.tree), zero.leaves + one.leaves});
        return true;
    }

    void run_parallel_root(const std::vector<SplitCandidate>& splits, int depth) {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            try {
                for (;;) {
                    const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                    if (i >= splits.size() || timed_out.load(std::memory_order_relaxed)) return;
                    check_deadline();
                    try_split(splits[i], depth, root_best_value.load(std::memory_order_relaxed));
                }
            } catch (const TimeoutSignal&) {
                timed_out.store(true, std::memory_order_relaxed);
            }
        };
        std::vector<std::thread> threads;
        const int extra = std::min(cfg.threads - 1, static_cast<int>(splits.size()));
        threads.reserve(static_cast<std::size_t>(std::max(extra, 0)));
        for (int t = 0; t < extra; ++t) threads.emplace_back(worker);
        worker();
        for (auto& th : threads) th.join();
        if (timed_out.load(std::memory_order_relaxed)) throw TimeoutSignal{};
    }
};

Optimizer::Optimizer(const BinarizedDataset& ds, const SearchConfig& cfg)
    : impl_(std::make_unique<Impl>(ds, cfg)) {
    if (cfg.depth_limit < 1) raise(ErrorCode::InfeasibleDepth, "depth limit must be at least 1");
    if (cfg.lambda < 0) raise(ErrorCode::InvalidArgument, "lambda must be non-negative");
    if (cfg.mode == SearchMode::Guessed && !cfg.reference)
        raise(ErrorCode::InvalidArgument, "guessed mode requires reference predictions");
    if (cfg.reference && cfg.reference->preds.size() != ds.n())
        raise(ErrorCode::LengthMismatch, "reference predictions do not match dataset size");
}

Optimizer::~Optimizer() = default;

Optimizer::Solution Optimizer::solve_subproblem(const CaptureSet& s, int depth) {
    if (s.empty()) raise(ErrorCode::EmptyCaptureSet, "cannot solve an empty subproblem");
    return impl_->solve(s, depth);
}

SearchResult Optimizer::run() {
    const auto start = Clock::now();
    if (impl_->cfg.time_limit_seconds)
        impl_->deadline = start + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(*impl_->cfg.time_limit_seconds));

    SearchResult result;
    const CaptureSet root = CaptureSet::all(impl_->ds.n());
    try {
        impl_->solve_root(root, impl_->cfg.depth_limit);
        result.optimality = impl_->cfg.mode == SearchMode::Exact ? Optimality::ProvedOptimal
                                                                 : Optimality::GuessCertified;
    } catch (const TimeoutSignal&) {
        result.optimality = Optimality::TimedOutBestKnown;
    }

    result.tree = collapse(impl_->root_best.tree);
    result.objective_value = objective_value(result.tree, impl_->ds, impl_->cfg.lambda);
    result.node_count_explored = impl_->nodes_explored.load();
    result.cache_hits = impl_->cache_hits.load();
    result.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    result.trace = std::move(impl_->trace);
    return result;
}

SearchResult optimize(const BinarizedDataset& ds, const SearchConfig& cfg) {
    Optimizer optimizer(ds, cfg);
    return optimizer.run();
}

}  // namespace wsdt
