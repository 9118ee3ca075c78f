// Acceptance suite: one criterion per run_* function, one PASS/FAIL line each.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "testgen.hpp"
#include "wsdt/model.hpp"
#include "wsdt/numeric.hpp"
#include "wsdt/objective.hpp"
#include "wsdt/oracle.hpp"
#include "wsdt/search.hpp"
#include "wsdt/train.hpp"
#include "wsdt/weights.hpp"

using namespace wsdt;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %d. %s — %s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(), detail.c_str());
    if (!pass) ++failures;
}

constexpr double kRelTol = 1e-12;
const std::vector<double> kLambdas = {0.0, 0.01, 0.05, 0.1};

// 1. Exact-mode search equals the brute-force oracle on 500 random instances.
void run_oracle_optimality() {
    const auto start = Clock::now();
    std::mt19937_64 rng(20240001);
    int checked = 0, wrong = 0;
    for (int i = 0; i < 500; ++i) {
        const bool unit = i % 2 == 0;
        const auto ds = testgen::random_instance(rng, {.unit_weights = unit});
        const double lambda = kLambdas[i % kLambdas.size()];
        const int depth = 1 + i % 3;

        SearchConfig cfg;
        cfg.lambda = lambda;
        cfg.depth_limit = depth;
        cfg.kernel = unit ? KernelMode::Bitcount : KernelMode::WeightedDot;
        const auto result = optimize(ds, cfg);
        const auto oracle = brute_force(ds, depth, lambda);
        ++checked;
        const bool equal = unit ? result.objective_value == oracle.objective
                                : nearly_equal_rel(result.objective_value, oracle.objective, kRelTol);
        if (!equal) ++wrong;
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    report(1, "oracle optimality",
           wrong == 0 && seconds < 120.0,
           std::to_string(checked) + " instances, " + std::to_string(wrong) + " mismatches, " +
               std::to_string(seconds) + "s (< 120s)");
}

// 2. Theorem 1 certificate across four reference model families.
void run_theorem1() {
    std::mt19937_64 rng(20240002);
    int checked = 0, violated = 0;
    for (int i = 0; i < 500; ++i) {
        const auto ds = testgen::random_instance(rng);
        const double lambda = kLambdas[i % kLambdas.size()];
        const int depth = 1 + i % 3;

        std::vector<ReferencePredictions> refs;
        refs.push_back(ReferencePredictions::from_preds(ds.labels, ds));  // perfect
        refs.push_back(
            ReferencePredictions::from_preds(std::vector<std::uint32_t>(ds.n(), 0), ds));  // constant
        refs.push_back(fit_greedy(ds, GreedyConfig{2, 0.0, 1}).predictions);  // greedy depth 2
        std::vector<std::uint32_t> random_preds(ds.n());
        for (auto& p : random_preds) p = static_cast<std::uint32_t>(rng() % ds.n_classes());
        refs.push_back(ReferencePredictions::from_preds(std::move(random_preds), ds));  // random labels

        for (const auto& ref : refs) {
            ++checked;
            if (!check_theorem1(ds, depth, lambda, ref).holds) ++violated;
        }
    }
    report(2, "theorem 1 certificate", violated == 0,
           std::to_string(checked) + " checks, " + std::to_string(violated) + " violations");
}

// 3. Theorem 2 bound for duplication-rounded weights, p in {2, 5, 10, 50}.
void run_theorem2() {
    std::mt19937_64 rng(20240003);
    const std::vector<int> ps = {2, 5, 10, 50};
    int checked = 0, violated = 0;
    for (int i = 0; i < 500; ++i) {
        const auto ds = testgen::random_instance(rng, {.max_rows = 25});
        DupConfig cfg;
        cfg.p = ps[i % ps.size()];
        const auto counts = duplication_counts(ds.weights, cfg);
        const auto scaled = with_weights(ds, counts.scaled_weights);
        const std::vector<double> rounded(counts.counts.begin(), counts.counts.end());
        ++checked;
        if (!check_theorem2(scaled, rounded, 1 + i % 3, kLambdas[i % kLambdas.size()]).holds) ++violated;
    }
    report(3, "theorem 2 bound", violated == 0,
           std::to_string(checked) + " instances, " + std::to_string(violated) + " violations");
}

// 4. Duplication is exactly integer reweighting, for trees and for optima.
void run_duplication_exactness() {
    std::mt19937_64 rng(20240004);
    int tree_checks = 0, tree_mismatch = 0, opt_checks = 0, opt_mismatch = 0;
    for (int i = 0; i < 60; ++i) {
        const auto ds = testgen::random_instance(rng);
        DupConfig cfg;
        cfg.p = std::vector<int>{2, 5, 10, 50}[i % 4];
        const auto counts = duplication_counts(ds.weights, cfg);
        const auto duplicated = duplicate_binarized(ds, counts);
        const auto reweighted =
            with_weights(ds, std::vector<double>(counts.counts.begin(), counts.counts.end()));
        const double lambda = kLambdas[i % kLambdas.size()];

        for (int probe = 0; probe < 10; ++probe) {
            const Tree tree = testgen::random_tree(rng, ds, 3);
            ++tree_checks;
            if (!nearly_equal_rel(objective_value(tree, duplicated, lambda),
                                  objective_value(tree, reweighted, lambda), kRelTol))
                ++tree_mismatch;
        }

        SearchConfig dup_cfg;
        dup_cfg.lambda = lambda;
        dup_cfg.depth_limit = 2;
        dup_cfg.kernel = KernelMode::Bitcount;
        SearchConfig direct_cfg = dup_cfg;
        direct_cfg.kernel = KernelMode::WeightedDot;
        ++opt_checks;
        if (!nearly_equal_rel(optimize(duplicated, dup_cfg).objective_value,
                              optimize(reweighted, direct_cfg).objective_value, kRelTol))
            ++opt_mismatch;
    }
    report(4, "duplication exactness", tree_mismatch == 0 && opt_mismatch == 0,
           std::to_string(tree_checks) + " tree identities (" + std::to_string(tree_mismatch) +
               " off), " + std::to_string(opt_checks) + " optimizer identities (" +
               std::to_string(opt_mismatch) + " off)");
}

// 5. Sampling concentration: mean-form Hoeffding bound plus unbiasedness.
void run_sampling_concentration() {
    std::mt19937_64 rng(20240005);
    const std::vector<std::uint64_t> sample_sizes = {50, 200, 1000};
    const std::vector<double> eps_grid = {0.05, 0.1, 0.2};
    int checked = 0, violated = 0;
    for (int pair = 0; pair < 3; ++pair) {
        const auto ds = testgen::random_instance(
            rng, {.min_rows = 30, .max_rows = 40, .unit_weights = pair == 0});
        const Tree tree = brute_force(ds, 2, 0.01).tree;
        for (std::uint64_t s : sample_sizes) {
            const double r = static_cast<double>(s) / static_cast<double>(ds.n());
            const auto rep = check_theorem3(ds, tree, r, eps_grid, 5000, 20240005 + pair);
            ++checked;
            if (!rep.holds) ++violated;
        }
    }
    report(5, "sampling concentration", violated == 0,
           std::to_string(checked) + " (dataset, S) cells, " + std::to_string(violated) +
               " violations (5000 seeds each)");
}

// 6. Kernel gap at N = 1e5 / 50 columns, plus the duplication-vs-direct
// ordering on q in {0, 100, 1000} percent.
void run_kernel_gap() {
    const std::size_t n = 100000, columns = 50;
    std::mt19937_64 rng(20240006);
    BinarizedDataset base;
    base.labels.resize(n);
    for (auto& l : base.labels) l = static_cast<std::uint32_t>(rng() & 1);
    base.label_names = {"0", "1"};
    base.weights.assign(n, 1.0);
    base.total_weight = static_cast<double>(n);
    base.unit_weights = true;
    for (std::size_t j = 0; j < columns; ++j) {
        BitVector bits(n);
        for (std::size_t i = 0; i < n; ++i)
            if (rng() & 1) bits.set(i);
        base.columns.push_back(std::move(bits));
        base.origins.push_back(ColumnOrigin{j, "f" + std::to_string(j), FeatureKind::Numeric, 0.5, {}});
    }

    auto median_ms = [](auto&& fn) {
        std::vector<double> times;
        volatile double sink = 0.0;
        for (int rep = 0; rep < 5; ++rep) {
            const auto start = Clock::now();
            sink = sink + fn();
            times.push_back(std::chrono::duration<double, std::milli>(Clock::now() - start).count());
        }
        std::sort(times.begin(), times.end());
        return times[2];
    };

    const LossKernel bit_kernel(base, KernelMode::Bitcount);
    const LossKernel dot_kernel(base, KernelMode::WeightedDot);
    const double bit_ms = median_ms([&] { return loss_mass_sweep(bit_kernel); });
    const double dot_ms = median_ms([&] { return loss_mass_sweep(dot_kernel); });
    const bool gap_ok = dot_ms >= 10.0 * bit_ms;

    bool ordering_ok = true;
    std::string ordering_detail;
    for (int q : {0, 100, 1000}) {
        std::vector<double> weights(n, 1.0);
        const std::uint64_t extra = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(q) / 100;
        for (std::uint64_t e = 0; e < extra; ++e) weights[e % n] += 1.0;

        DupCounts counts;
        counts.counts.assign(weights.begin(), weights.end());
        counts.total = 0;
        for (auto c : counts.counts) counts.total += c;
        const auto duplicated = duplicate_binarized(base, counts);
        const auto direct = with_weights(base, weights);

        const LossKernel dup_kernel(duplicated, KernelMode::Bitcount);
        const LossKernel direct_kernel(direct, KernelMode::WeightedDot);
        const double dup_ms = median_ms([&] { return loss_mass_sweep(dup_kernel); });
        const double direct_ms = median_ms([&] { return loss_mass_sweep(direct_kernel); });
        ordering_ok = ordering_ok && dup_ms <= direct_ms;
        ordering_detail += " q=" + std::to_string(q) + "%: dup " + std::to_string(dup_ms) +
                           "ms vs direct " + std::to_string(direct_ms) + "ms;";
    }

    report(6, "kernel gap (scaled-down)", gap_ok && ordering_ok,
           "bitcount " + std::to_string(bit_ms) + "ms vs weighted-dot " + std::to_string(dot_ms) +
               "ms (need >= 10x);" + ordering_detail);
}

// 7. Exact-mode leaf counts are non-increasing in lambda.
void run_regularization_monotonicity() {
    std::mt19937_64 rng(20240007);
    const std::vector<double> lambdas = {0.0, 0.01, 0.02, 0.05, 0.1};
    int checked = 0, violations = 0;
    for (int i = 0; i < 60; ++i) {
        const auto ds = testgen::random_instance(rng);
        std::size_t previous = std::numeric_limits<std::size_t>::max();
        for (double lambda : lambdas) {
            SearchConfig cfg;
            cfg.lambda = lambda;
            cfg.depth_limit = 3;
            const std::size_t leaves = leaf_count(optimize(ds, cfg).tree);
            ++checked;
            if (leaves > previous) ++violations;
            previous = leaves;
        }
    }
    report(7, "regularization monotonicity", violations == 0,
           std::to_string(checked) + " lambda steps, " + std::to_string(violations) + " increases");
}

// 8. Byte-identical model files across reruns and thread counts.
void run_determinism() {
    std::mt19937_64 rng(20240008);
    std::string csv = "f0,f1,f2,y,w\n";
    for (int i = 0; i < 60; ++i) {
        csv += std::to_string(rng() % 8) + "," + std::to_string(rng() % 8) + "," +
               std::to_string(rng() % 4) + "," + std::to_string(rng() % 3) + "," +
               std::to_string(1 + rng() % 9) + "\n";
    }
    TrainOptions options;
    options.data_path = "acceptance.csv";
    options.label_column = "y";
    options.weight_column = "w";
    options.depth = 3;
    options.lambda = 0.01;
    options.threads = 1;
    const auto first = run_train_text(options, csv);
    const auto second = run_train_text(options, csv);
    options.threads = 8;
    const auto threaded = run_train_text(options, csv);
    const bool identical =
        first.model_bytes == second.model_bytes && first.model_bytes == threaded.model_bytes;
    report(8, "determinism", identical,
           identical ? "model bytes identical across reruns and --threads 1 vs 8"
                     : "model bytes diverged");
}

// 9. Treatment-cost recipe spot values.
void run_lalonde_recipe() {
    const bool costs_ok = lalonde_cost(0, 30.0, true) == 290.0 && lalonde_cost(2, 41.0, true) == 300.0 &&
                          lalonde_cost(1, 30.0, true) == 190.0 && lalonde_cost(0, 30.0, false) == 0.0;
    const auto scaled = scale_costs({0.0, 150.0, 300.0}, 1.0, 100.0);
    const bool scale_ok = scaled.front() == 1.0 && scaled.back() == 100.0 &&
                          std::abs(scaled[1] - 50.5) < 1e-12;
    report(9, "treatment cost recipe", costs_ok && scale_ok,
           "cost(0, age 30) = 290, cost(2) = 300, endpoints -> [1, 100]");
}

}  // namespace

int main() {
    const auto start = Clock::now();
    run_oracle_optimality();
    run_theorem1();
    run_theorem2();
    run_duplication_exactness();
    run_sampling_concentration();
    run_kernel_gap();
    run_regularization_monotonicity();
    run_determinism();
    run_lalonde_recipe();
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("%d criterion(s) failed; total %.1fs\n", failures, seconds);
    return failures == 0 ? 0 : 1;
}
