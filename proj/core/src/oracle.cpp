#include "wsdt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>

#include "wsdt/error.hpp"
#include "wsdt/search.hpp"
#include "wsdt/weights.hpp"

#include <json.hpp>

namespace wsdt {

namespace {

constexpr double kBoundSlack = 1e-12;
constexpr std::size_t kMaxColumns = 6;
constexpr int kMaxDepth = 3;

struct Candidate {
    double value;  // loss mass + leaf_penalty * leaves
    Tree tree;
    int leaves;
};

bool better(const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.leaves != b.leaves) return a.leaves < b.leaves;
    return a.tree.preorder_key() < b.tree.preorder_key();
}

bool same_class_leaf_pair(const Candidate& l, const Candidate& r) {
    return l.leaves == 1 && r.leaves == 1 && l.tree.nodes.size() == 1 && r.tree.nodes.size() == 1 &&
           l.tree.nodes[0].label == r.tree.nodes[0].label;
}

struct Shape {
    bool leaf = true;
    std::shared_ptr<const Shape> zero, one;
};

std::vector<std::shared_ptr<const Shape>> all_shapes(int depth) {
    std::vector<std::shared_ptr<const Shape>> shapes;
    shapes.push_back(std::make_shared<Shape>());
    if (depth == 0) return shapes;
    const auto subshapes = all_shapes(depth - 1);
    for (const auto& zero : subshapes)
        for (const auto& one : subshapes)
            shapes.push_back(std::make_shared<Shape>(Shape{false, zero, one}));
    return shapes;
}

void check_feasible(const BinarizedDataset& ds, int depth_limit) {
    if (depth_limit < 0) raise(ErrorCode::InvalidArgument, "depth limit must be non-negative");
    if (ds.n_columns() > kMaxColumns || depth_limit > kMaxDepth)
        raise(ErrorCode::TooLargeToEnumerate,
              std::to_string(ds.n_columns()) + " columns at depth " + std::to_string(depth_limit));
}

// Minimum over all column assignments of a fixed shape on capture set s.
// nullopt when every split at some internal shape node is degenerate.
std::optional<Candidate> eval_shape(const Shape& shape, const CaptureSet& s, const LossKernel& kernel,
                                    const BinarizedDataset& ds, double leaf_penalty) {
    if (shape.leaf) {
        const auto leaf = kernel.best_leaf(s);
        return Candidate{leaf.loss_mass + leaf_penalty, Tree::leaf(leaf.label), 1};
    }
    std::optional<Candidate> best;
    for (std::size_t j = 0; j < ds.n_columns(); ++j) {
        CaptureSet one = capture_and(s, ds.columns[j], 1);
        if (one.empty()) continue;
        CaptureSet zero = capture_and(s, ds.columns[j], 0);
        if (zero.empty()) continue;
        const auto zs = eval_shape(*shape.zero, zero, kernel, ds, leaf_penalty);
        if (!zs) continue;
        const auto os = eval_shape(*shape.one, one, kernel, ds, leaf_penalty);
        if (!os) continue;
        if (same_class_leaf_pair(*zs, *os)) continue;
        Candidate candidate{zs->value + os->value,
                            Tree::split(static_cast<std::int32_t>(j), zs->tree, os->tree),
                            zs->leaves + os->leaves};
        if (!best || better(candidate, *best)) best = std::move(candidate);
    }
    return best;
}

Candidate recurse_budget(const CaptureSet& s, int depth, const LossKernel& kernel,
                         const BinarizedDataset& ds, double leaf_penalty) {
    const auto leaf = kernel.best_leaf(s);
    Candidate best{leaf.loss_mass + leaf_penalty, Tree::leaf(leaf.label), 1};
    if (depth == 0) return best;
    for (std::size_t j = 0; j < ds.n_columns(); ++j) {
        CaptureSet one = capture_and(s, ds.columns[j], 1);
        if (one.empty()) continue;
        CaptureSet zero = capture_and(s, ds.columns[j], 0);
        if (zero.empty()) continue;
        Candidate zs = recurse_budget(zero, depth - 1, kernel, ds, leaf_penalty);
        Candidate os = recurse_budget(one, depth - 1, kernel, ds, leaf_penalty);
        if (same_class_leaf_pair(zs, os)) continue;
        Candidate candidate{zs.value + os.value,
                            Tree::split(static_cast<std::int32_t>(j), zs.tree, os.tree),
                            zs.leaves + os.leaves};
        if (better(candidate, best)) best = std::move(candidate);
    }
    return best;
}

std::string instance_witness(const BinarizedDataset& ds, int depth_limit, double lambda) {
    nlohmann::ordered_json doc;
    doc["rows"] = ds.n();
    doc["columns"] = ds.n_columns();
    doc["classes"] = ds.n_classes();
    doc["depth"] = depth_limit;
    doc["lambda"] = lambda;
    doc["weights"] = ds.weights;
    doc["labels"] = ds.labels;
    auto cols = nlohmann::json::array();
    for (const auto& column : ds.columns) {
        std::string bits(ds.n(), '0');
        column.for_each_set([&](std::size_t i) { bits[i] = '1'; });
        cols.push_back(bits);
    }
    doc["column_bits"] = std::move(cols);
    return doc.dump();
}

}  // namespace

OracleResult brute_force(const BinarizedDataset& ds, int depth_limit, double lambda) {
    check_feasible(ds, depth_limit);
    const LossKernel kernel(ds, KernelMode::WeightedDot);
    const double leaf_penalty = lambda * ds.total_weight;
    const CaptureSet root = CaptureSet::all(ds.n());

    std::optional<Candidate> best;
    for (const auto& shape : all_shapes(depth_limit)) {
        const auto candidate = eval_shape(*shape, root, kernel, ds, leaf_penalty);
        if (!candidate) continue;
        if (!best || better(*candidate, *best)) best = *candidate;
    }
    return OracleResult{objective_value(best->tree, ds, lambda), best->tree};
}

OracleResult brute_force_recursive(const BinarizedDataset& ds, int depth_limit, double lambda) {
    check_feasible(ds, depth_limit);
    const LossKernel kernel(ds, KernelMode::WeightedDot);
    const double leaf_penalty = lambda * ds.total_weight;
    const Candidate best = recurse_budget(CaptureSet::all(ds.n()), depth_limit, kernel, ds, leaf_penalty);
    return OracleResult{objective_value(best.tree, ds, lambda), best.tree};
}

BoundReport check_theorem1(const BinarizedDataset& ds, int depth_limit, double lambda,
                           const ReferencePredictions& ref) {
    SearchConfig cfg;
    cfg.lambda = lambda;
    cfg.depth_limit = depth_limit;
    cfg.mode = SearchMode::Guessed;
    cfg.kernel = KernelMode::WeightedDot;
    cfg.reference = ref;
    const SearchResult guessed = optimize(ds, cfg);

    const OracleResult oracle = brute_force(ds, depth_limit, lambda);
    const std::vector<std::uint32_t> star_preds = predict(oracle.tree, ds);

    double mc_mass = 0.0;
    double cc_error_mass = 0.0;
    for (std::size_t i = 0; i < ds.n(); ++i) {
        if (ref.mismatch_mask.test(i)) {
            mc_mass += ds.weights[i];
        } else if (star_preds[i] != ds.labels[i]) {
            cc_error_mass += ds.weights[i];
        }
    }

    BoundReport report;
    report.lhs = guessed.objective_value;
    report.rhs = (mc_mass + cc_error_mass) / ds.total_weight +
                 lambda * static_cast<double>(leaf_count(oracle.tree));
    report.holds = report.lhs <= report.rhs + kBoundSlack;
    report.witness = instance_witness(ds, depth_limit, lambda);
    return report;
}

RoundingStats rounding_stats(const std::vector<double>& w, const std::vector<double>& w_rounded) {
    if (w.size() != w_rounded.size() || w.empty())
        raise(ErrorCode::LengthMismatch, "weight vectors must be non-empty and equal-length");
    RoundingStats stats{0.0, 0.0, 0.0, 0.0};
    double overall_max = 0.0;
    double overall_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] <= 0 || w_rounded[i] <= 0)
            raise(ErrorCode::NonpositiveWeight, "ratio statistics need strictly positive weights");
        stats.eta = std::max(stats.eta, w[i] / w_rounded[i]);
        stats.zeta = std::max(stats.zeta, w_rounded[i] / w[i]);
        stats.epsilon = std::max(stats.epsilon, std::abs(w[i] - w_rounded[i]));
        overall_max = std::max({overall_max, w[i], w_rounded[i]});
        overall_min = std::min({overall_min, w[i], w_rounded[i]});
    }
    stats.psi = overall_max / overall_min;
    return stats;
}

BoundReport check_theorem2(const BinarizedDataset& ds, const std::vector<double>& w_rounded,
                           int depth_limit, double lambda) {
    const RoundingStats stats = rounding_stats(ds.weights, w_rounded);

    const OracleResult original = brute_force(ds, depth_limit, lambda);
    const OracleResult rounded = brute_force(with_weights(ds, w_rounded), depth_limit, lambda);

    BoundReport report;
    report.lhs = std::abs(original.objective - rounded.objective);
    report.rhs = std::max(((stats.zeta - 1.0) * stats.psi + stats.epsilon) / stats.zeta,
                          ((stats.eta - 1.0) * stats.psi + stats.epsilon) / stats.eta);
    report.holds = report.lhs <= report.rhs + kBoundSlack;
    report.witness = instance_witness(ds, depth_limit, lambda);
    return report;
}

double wilson_lower_99(std::uint64_t k, std::uint64_t n) {
    if (n == 0) return 0.0;
    const double z = 2.5758293035489004;  // two-sided 99%
    const double nf = static_cast<double>(n);
    const double p = static_cast<double>(k) / nf;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nf;
    const double center = p + z2 / (2.0 * nf);
    const double spread = z * std::sqrt(p * (1.0 - p) / nf + z2 / (4.0 * nf * nf));
    return std::max(0.0, (center - spread) / denom);
}

SamplingReport check_theorem3(const BinarizedDataset& ds, const Tree& tree, double r,
                              const std::vector<double>& epsilon_grid, std::uint64_t repetitions,
                              std::uint64_t seed) {
    if (repetitions < 1) raise(ErrorCode::InvalidArgument, "need at least one repetition");

    SamplingReport report;
    report.repetitions = repetitions;
    report.loss_weighted = weighted_loss(tree, ds);

    // Per-row mismatch indicators; a sampled loss is just their mean over draws.
    const std::vector<std::uint32_t> preds = predict(tree, ds);
    std::vector<std::uint8_t> mismatch(ds.n());
    for (std::size_t i = 0; i < ds.n(); ++i) mismatch[i] = preds[i] != ds.labels[i] ? 1 : 0;

    std::vector<double> losses;
    losses.reserve(repetitions);
    for (std::uint64_t rep = 0; rep < repetitions; ++rep) {
        SampleConfig cfg{r, seed + rep};
        const std::vector<std::size_t> draws = sample_indices(ds.weights, cfg);
        report.sample_size = draws.size();
        std::uint64_t errors = 0;
        for (std::size_t i : draws) errors += mismatch[i];
        losses.push_back(static_cast<double>(errors) / static_cast<double>(draws.size()));
    }

    double mean = 0.0;
    for (double l : losses) mean += l;
    mean /= static_cast<double>(losses.size());
    double var = 0.0;
    for (double l : losses) var += (l - mean) * (l - mean);
    var = losses.size() > 1 ? var / static_cast<double>(losses.size() - 1) : 0.0;
    report.mean_sampled = mean;
    report.stderr_mean = std::sqrt(var / static_cast<double>(losses.size()));
    report.unbiased =
        std::abs(mean - report.loss_weighted) <= 3.0 * report.stderr_mean + kBoundSlack;

    const double s = static_cast<double>(report.sample_size);
    bool all_hold = report.unbiased;
    for (double eps : epsilon_grid) {
        SamplingTail tail;
        tail.epsilon = eps;
        std::uint64_t exceed = 0;
        for (double l : losses)
            if (std::abs(l - report.loss_weighted) >= eps) ++exceed;
        tail.empirical = static_cast<double>(exceed) / static_cast<double>(repetitions);
        tail.bound_mean = 2.0 * std::exp(-2.0 * s * eps * eps);
        tail.bound_printed_body = 2.0 * std::exp(-2.0 * eps * eps / s);
        tail.bound_printed_appendix = 2.0 * std::exp(-2.0 * eps * eps / (s * s));
        tail.holds = wilson_lower_99(exceed, repetitions) <= tail.bound_mean;
        all_hold = all_hold && tail.holds;
        report.tails.push_back(tail);
    }
    report.holds = all_hold;
    return report;
}

}  // namespace wsdt
