#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wsdt/csv.hpp"
#include "wsdt/data.hpp"
#include "wsdt/error.hpp"
#include "wsdt/model.hpp"
#include "wsdt/numeric.hpp"
#include "wsdt/objective.hpp"
#include "wsdt/oracle.hpp"
#include "wsdt/reference.hpp"
#include "wsdt/search.hpp"
#include "wsdt/train.hpp"
#include "wsdt/version.hpp"
#include "wsdt/weights.hpp"

namespace {

using nlohmann::ordered_json;

int default_threads() {
    if (const char* env = std::getenv("WSDT_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

// ---------------------------------------------------------------- train ----

struct TrainArgs {
    wsdt::TrainOptions options;
    std::string mode = "exact";
    std::string binarize = "all";
    std::string reference_path;
    std::string thresholds_path;
    std::string weight_column;
    double time_limit = 0.0;
    std::string out;
    std::string manifest_path;
    std::string export_thresholds;
    bool json = false;
};

int run_train_cmd(TrainArgs& args) {
    wsdt::TrainOptions& opt = args.options;
    opt.mode = args.mode == "guessed" ? wsdt::SearchMode::Guessed : wsdt::SearchMode::Exact;
    opt.binarize = args.binarize == "guessed" ? wsdt::BinarizeMode::Guessed : wsdt::BinarizeMode::All;
    if (!args.weight_column.empty()) opt.weight_column = args.weight_column;
    if (!args.reference_path.empty()) opt.reference_path = args.reference_path;
    if (!args.thresholds_path.empty()) opt.thresholds_path = args.thresholds_path;
    if (args.time_limit > 0) opt.time_limit_seconds = args.time_limit;

    if (opt.mode == wsdt::SearchMode::Guessed && !opt.reference_path && !opt.fit_reference) {
        std::cerr << "train: --mode guessed needs --reference or --fit-reference\n";
        return 2;
    }
    if (opt.binarize == wsdt::BinarizeMode::Guessed && !opt.fit_reference && !opt.thresholds_path) {
        std::cerr << "train: --binarize guessed needs --fit-reference or --thresholds\n";
        return 2;
    }

    const std::string text = wsdt::read_text(opt.data_path);
    wsdt::TrainOutput output = wsdt::run_train_text(opt, text);
    wsdt::write_file_atomic(args.out, output.model_bytes);
    const std::string manifest_path =
        args.manifest_path.empty() ? args.out + ".manifest.json" : args.manifest_path;
    wsdt::write_file_atomic(manifest_path, output.manifest_bytes);

    if (!args.export_thresholds.empty()) {
        const wsdt::RawDataset raw = wsdt::ingest_csv_text(text, opt.label_column, opt.weight_column);
        const wsdt::ReferenceFit fit = wsdt::fit_greedy(wsdt::binarize_all(raw), opt.reference_config);
        wsdt::write_file_atomic(args.export_thresholds, wsdt::threshold_set_to_json(fit.thresholds));
    }

    if (args.json) {
        ordered_json doc;
        doc["objective"] = output.result.objective_value;
        doc["leaves"] = wsdt::leaf_count(output.result.tree);
        doc["depth"] = wsdt::depth(output.result.tree);
        doc["optimality"] = wsdt::optimality_name(output.result.optimality);
        doc["elapsed_seconds"] = output.result.elapsed_seconds;
        doc["model"] = args.out;
        doc["manifest"] = manifest_path;
        std::cout << doc.dump() << "\n";
    } else {
        std::cout << "objective " << output.result.objective_value << "  leaves "
                  << wsdt::leaf_count(output.result.tree) << "  depth " << wsdt::depth(output.result.tree)
                  << "  elapsed " << output.result.elapsed_seconds << "s  optimality "
                  << wsdt::optimality_name(output.result.optimality) << "\n";
    }
    return 0;
}

// -------------------------------------------------- predict / evaluate ----

int run_predict_cmd(const std::string& model_path, const std::string& data_path,
                    const std::string& out, bool json) {
    const wsdt::ModelFile model = wsdt::deserialize(wsdt::read_text(model_path));
    const wsdt::RawDataset raw = wsdt::ingest_csv_features(wsdt::read_text(data_path), data_path);
    const std::vector<std::uint32_t> preds = wsdt::predict_raw(model, raw);

    std::string csv = "row,prediction\n";
    for (std::size_t i = 0; i < preds.size(); ++i)
        csv += std::to_string(i) + "," + wsdt::csv_quote(model.label_names[preds[i]]) + "\n";
    wsdt::write_file_atomic(out, csv);
    if (json) {
        ordered_json doc;
        doc["rows"] = preds.size();
        doc["out"] = out;
        std::cout << doc.dump() << "\n";
    }
    return 0;
}

int run_evaluate_cmd(const std::string& model_path, const std::string& data_path,
                     const std::string& label, const std::string& weight, const std::string& out,
                     bool json) {
    const wsdt::ModelFile model = wsdt::deserialize(wsdt::read_text(model_path));
    const std::optional<std::string> weight_col =
        weight.empty() ? std::nullopt : std::optional<std::string>(weight);
    const wsdt::RawDataset raw =
        wsdt::ingest_csv_text(wsdt::read_text(data_path), label, weight_col, data_path);
    const std::vector<std::uint32_t> preds = wsdt::predict_raw(model, raw);

    const std::size_t k = model.label_names.size();
    std::vector<std::vector<std::uint64_t>> confusion(k, std::vector<std::uint64_t>(k, 0));
    std::uint64_t unknown_actual = 0;
    double mismatch_mass = 0.0;
    std::uint64_t correct = 0;
    for (std::size_t i = 0; i < raw.n(); ++i) {
        const std::string& actual = raw.label_names[raw.labels[i]];
        const std::string& predicted = model.label_names[preds[i]];
        const auto it = std::find(model.label_names.begin(), model.label_names.end(), actual);
        if (it == model.label_names.end()) {
            ++unknown_actual;
            mismatch_mass += raw.weights[i];
            continue;
        }
        const auto actual_id = static_cast<std::size_t>(it - model.label_names.begin());
        ++confusion[actual_id][preds[i]];
        if (actual == predicted) {
            ++correct;
        } else {
            mismatch_mass += raw.weights[i];
        }
    }
    const double total_weight = wsdt::pairwise_sum(raw.weights);

    ordered_json doc;
    doc["schema_version"] = 1;
    doc["weighted_loss"] = mismatch_mass / total_weight;
    doc["accuracy"] = static_cast<double>(correct) / static_cast<double>(raw.n());
    doc["leaves"] = wsdt::leaf_count(model.tree);
    doc["depth"] = wsdt::depth(model.tree);
    doc["labels"] = model.label_names;
    doc["confusion"] = confusion;  // confusion[actual][predicted]
    if (unknown_actual > 0) doc["unknown_actual_labels"] = unknown_actual;
    const std::string payload = doc.dump(2) + "\n";
    if (!out.empty()) wsdt::write_file_atomic(out, payload);
    if (json || out.empty()) std::cout << (json ? doc.dump() + "\n" : payload);
    return 0;
}

// ------------------------------------------------- duplicate / sample ----

wsdt::CsvTable rows_without_weight(const wsdt::RawDataset& ds, const std::vector<std::size_t>& rows,
                                   const std::vector<std::size_t>* provenance) {
    wsdt::CsvTable table;
    for (std::size_t c = 0; c < ds.raw_header.size(); ++c) {
        if (ds.weight_column && c == *ds.weight_column) continue;
        table.header.push_back(ds.raw_header[c]);
    }
    if (provenance) table.header.push_back("__source_row");
    for (std::size_t idx = 0; idx < rows.size(); ++idx) {
        std::vector<std::string> row;
        for (std::size_t c = 0; c < ds.raw_header.size(); ++c) {
            if (ds.weight_column && c == *ds.weight_column) continue;
            row.push_back(ds.raw_cells[rows[idx]][c]);
        }
        if (provenance) row.push_back(std::to_string((*provenance)[idx]));
        table.rows.push_back(std::move(row));
    }
    return table;
}

int run_duplicate_cmd(const std::string& data, const std::string& label, const std::string& weight,
                      int p, const std::string& norm, double cap, const std::string& out,
                      bool provenance, bool json) {
    const std::optional<std::string> weight_col =
        weight.empty() ? std::nullopt : std::optional<std::string>(weight);
    const wsdt::RawDataset raw = wsdt::ingest_csv_text(wsdt::read_text(data), label, weight_col, data);
    wsdt::DupConfig cfg;
    cfg.p = p;
    cfg.size_cap_factor = cap;
    if (norm == "sum") cfg.normalization = wsdt::DupNormalization::SumWeight;
    if (norm == "none") cfg.normalization = wsdt::DupNormalization::None;
    const wsdt::DuplicatedRaw dup = wsdt::duplicate(raw, cfg);

    std::vector<std::size_t> rows(dup.dataset.n());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    // Output rows come from the duplicated dataset; cells were copied from the
    // source rows, so indexing through dup.dataset keeps provenance aligned.
    wsdt::CsvTable table =
        rows_without_weight(dup.dataset, rows, provenance ? &dup.source_row : nullptr);
    wsdt::write_file_atomic(out, wsdt::write_csv(table));
    if (json) {
        ordered_json doc;
        doc["rows"] = dup.dataset.n();
        doc["epsilon"] = dup.counts.epsilon;
        doc["scale"] = dup.counts.scale;
        doc["out"] = out;
        std::cout << doc.dump() << "\n";
    }
    return 0;
}

int run_sample_cmd(const std::string& data, const std::string& label, const std::string& weight,
                   double r, std::uint64_t seed, const std::string& out, bool json) {
    const std::optional<std::string> weight_col =
        weight.empty() ? std::nullopt : std::optional<std::string>(weight);
    const wsdt::RawDataset raw = wsdt::ingest_csv_text(wsdt::read_text(data), label, weight_col, data);
    const std::vector<std::size_t> draws = wsdt::sample_indices(raw.weights, wsdt::SampleConfig{r, seed});
    wsdt::CsvTable table = rows_without_weight(raw, draws, nullptr);
    wsdt::write_file_atomic(out, wsdt::write_csv(table));
    if (json) {
        ordered_json doc;
        doc["rows"] = draws.size();
        doc["out"] = out;
        std::cout << doc.dump() << "\n";
    }
    return 0;
}

// ----------------------------------------------------------------- bench ----

wsdt::BinarizedDataset synthetic_unit(std::size_t n, std::size_t columns, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    wsdt::BinarizedDataset ds;
    ds.labels.resize(n);
    for (auto& l : ds.labels) l = static_cast<std::uint32_t>(rng() & 1);
    ds.label_names = {"0", "1"};
    ds.weights.assign(n, 1.0);
    ds.total_weight = static_cast<double>(n);
    ds.unit_weights = true;
    for (std::size_t j = 0; j < columns; ++j) {
        wsdt::BitVector bits(n);
        for (std::size_t i = 0; i < n; ++i)
            if (rng() & 1) bits.set(i);
        ds.columns.push_back(std::move(bits));
        ds.origins.push_back(wsdt::ColumnOrigin{j, "f" + std::to_string(j), wsdt::FeatureKind::Numeric,
                                                0.5, {}});
    }
    return ds;
}

// q% of the rows gain one extra copy per 100%: the direct path keeps N rows
// with integer weights, the duplicated path materializes the copies at unit
// weight.
std::vector<double> q_weights(std::size_t n, int q_percent) {
    std::vector<double> weights(n, 1.0);
    const std::uint64_t extra = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(q_percent) / 100;
    for (std::uint64_t e = 0; e < extra; ++e) weights[e % n] += 1.0;
    return weights;
}

double median_sweep_ms(const wsdt::LossKernel& kernel, int repeats) {
    std::vector<double> times;
    volatile double sink = 0.0;
    for (int rep = 0; rep < repeats; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        sink = sink + wsdt::loss_mass_sweep(kernel);
        times.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                            .count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

int run_bench_cmd(const std::string& kernel, std::vector<std::size_t> sizes, std::size_t columns,
                  int repeats, std::vector<int> q_grid, const std::string& out) {
    std::string csv = "kernel,n,q_percent,wall_ms\n";
    for (std::size_t n : sizes) {
        const wsdt::BinarizedDataset base = synthetic_unit(n, columns, 42);
        for (int q : q_grid) {
            if (kernel == "weighted-dot" || kernel == "both") {
                const wsdt::BinarizedDataset direct = wsdt::with_weights(base, q_weights(n, q));
                const wsdt::LossKernel k(direct, wsdt::KernelMode::WeightedDot);
                csv += "weighted-dot," + std::to_string(n) + "," + std::to_string(q) + "," +
                       std::to_string(median_sweep_ms(k, repeats)) + "\n";
            }
            if (kernel == "bitcount" || kernel == "both") {
                const std::vector<double> weights = q_weights(n, q);
                wsdt::DupCounts counts;
                counts.counts.assign(weights.begin(), weights.end());
                counts.total = 0;
                for (auto c : counts.counts) counts.total += c;
                const wsdt::BinarizedDataset dup = wsdt::duplicate_binarized(base, counts);
                const wsdt::LossKernel k(dup, wsdt::KernelMode::Bitcount);
                csv += "bitcount," + std::to_string(n) + "," + std::to_string(q) + "," +
                       std::to_string(median_sweep_ms(k, repeats)) + "\n";
            }
        }
    }
    wsdt::write_file_atomic(out, csv);
    return 0;
}

// ---------------------------------------------------------------- verify ----

wsdt::BinarizedDataset random_instance(std::mt19937_64& rng, bool unit_weights) {
    const std::size_t n = 8 + rng() % 33;        // 8..40
    const std::size_t columns = 2 + rng() % 5;   // 2..6
    const std::size_t classes = 2 + rng() % 2;   // 2..3
    wsdt::BinarizedDataset ds;
    ds.labels.resize(n);
    for (auto& l : ds.labels) l = static_cast<std::uint32_t>(rng() % classes);
    for (std::size_t c = 0; c < classes; ++c) ds.label_names.push_back(std::to_string(c));
    ds.weights.resize(n);
    for (auto& w : ds.weights)
        w = unit_weights ? 1.0 : 0.1 + static_cast<double>(rng() % 1000) / 100.0;
    ds.total_weight = wsdt::pairwise_sum(ds.weights);
    ds.unit_weights = unit_weights;
    for (std::size_t j = 0; j < columns; ++j) {
        for (;;) {
            wsdt::BitVector bits(n);
            for (std::size_t i = 0; i < n; ++i)
                if (rng() & 1) bits.set(i);
            const std::size_t ones = bits.popcount();
            if (ones == 0 || ones == n) continue;
            const bool duplicate = std::any_of(ds.columns.begin(), ds.columns.end(),
                                               [&](const wsdt::BitVector& c) { return c == bits; });
            if (duplicate) continue;
            ds.columns.push_back(std::move(bits));
            break;
        }
        ds.origins.push_back(wsdt::ColumnOrigin{j, "f" + std::to_string(j), wsdt::FeatureKind::Numeric,
                                                0.5, {}});
    }
    return ds;
}

int run_verify_cmd(int instances, std::uint64_t seed, const std::string& out) {
    std::mt19937_64 rng(seed);
    const double lambdas[] = {0.0, 0.01, 0.05, 0.1};
    const int ps[] = {2, 5, 10, 50};

    ordered_json checks = ordered_json::array();
    bool all_hold = true;
    auto push_check = [&](const std::string& name, int count, int failures) {
        ordered_json c;
        c["name"] = name;
        c["instances"] = count;
        c["failures"] = failures;
        c["holds"] = failures == 0;
        checks.push_back(std::move(c));
        all_hold = all_hold && failures == 0;
    };

    int fail_exact = 0, fail_double = 0, fail_thm1 = 0, fail_thm2 = 0;
    for (int i = 0; i < instances; ++i) {
        const double lambda = lambdas[i % 4];
        const int depth = 1 + i % 3;
        wsdt::BinarizedDataset ds = random_instance(rng, i % 2 == 0);

        const wsdt::OracleResult oracle = wsdt::brute_force(ds, depth, lambda);
        const wsdt::OracleResult recursive = wsdt::brute_force_recursive(ds, depth, lambda);
        if (oracle.objective != recursive.objective) ++fail_double;

        wsdt::SearchConfig cfg;
        cfg.lambda = lambda;
        cfg.depth_limit = depth;
        cfg.kernel = ds.unit_weights ? wsdt::KernelMode::Bitcount : wsdt::KernelMode::WeightedDot;
        const wsdt::SearchResult result = wsdt::optimize(ds, cfg);
        if (!wsdt::nearly_equal_rel(result.objective_value, oracle.objective, 1e-12)) ++fail_exact;

        // Theorem 1 under a greedy reference.
        const wsdt::ReferenceFit fit = wsdt::fit_greedy(ds, wsdt::GreedyConfig{2, 0.0, 1});
        if (!wsdt::check_theorem1(ds, depth, lambda, fit.predictions).holds) ++fail_thm1;

        // Theorem 2 with duplication-rounded weights.
        if (!ds.unit_weights) {
            wsdt::DupConfig dup_cfg;
            dup_cfg.p = ps[i % 4];
            const wsdt::DupCounts counts = wsdt::duplication_counts(ds.weights, dup_cfg);
            std::vector<double> rounded(counts.counts.begin(), counts.counts.end());
            const wsdt::BinarizedDataset scaled = wsdt::with_weights(ds, counts.scaled_weights);
            if (!wsdt::check_theorem2(scaled, rounded, depth, lambda).holds) ++fail_thm2;
        }
    }
    push_check("exact-vs-oracle", instances, fail_exact);
    push_check("double-oracle-agreement", instances, fail_double);
    push_check("theorem1", instances, fail_thm1);
    push_check("theorem2", instances, fail_thm2);

    // Theorem 3 on one fixed pair.
    {
        wsdt::BinarizedDataset ds = random_instance(rng, false);
        const wsdt::OracleResult oracle = wsdt::brute_force(ds, 2, 0.01);
        const wsdt::SamplingReport report =
            wsdt::check_theorem3(ds, oracle.tree, 5.0, {0.05, 0.1, 0.2}, 2000, seed);
        push_check("theorem3", 1, report.holds ? 0 : 1);
    }

    ordered_json doc;
    doc["schema_version"] = 1;
    doc["seed"] = seed;
    doc["checks"] = std::move(checks);
    doc["holds"] = all_hold;
    const std::string payload = doc.dump(2) + "\n";
    if (out.empty() || out == "-")
        std::cout << payload;
    else
        wsdt::write_file_atomic(out, payload);
    return all_hold ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Provably optimal sparse decision trees with per-sample weights"};
    app.set_version_flag("--version", wsdt::kToolVersion);
    app.require_subcommand(1);

    // train
    TrainArgs train_args;
    train_args.options.threads = default_threads();
    auto* train = app.add_subcommand("train", "Fit an optimal weighted tree");
    train->add_option("--data", train_args.options.data_path, "CSV path or - for stdin")->required();
    train->add_option("--label", train_args.options.label_column, "label column name")->required();
    train->add_option("--weight", train_args.weight_column, "weight column name");
    train->add_option("--depth", train_args.options.depth, "depth limit d (>= 1)")->required();
    train->add_option("--lambda", train_args.options.lambda, "per-leaf penalty")->required();
    train->add_option("--mode", train_args.mode, "exact|guessed")
        ->check(CLI::IsMember({"exact", "guessed"}));
    train->add_option("--kernel", train_args.options.kernel, "auto|bitcount|weighted-dot")
        ->check(CLI::IsMember({"auto", "bitcount", "weighted-dot"}));
    train->add_option("--binarize", train_args.binarize, "all|guessed")
        ->check(CLI::IsMember({"all", "guessed"}));
    train->add_option("--reference", train_args.reference_path, "reference predictions file");
    train->add_flag("--fit-reference", train_args.options.fit_reference,
                    "fit the built-in reference learner");
    train->add_option("--ref-depth", train_args.options.reference_config.max_depth,
                      "reference learner depth");
    train->add_option("--ref-rounds", train_args.options.reference_config.rounds,
                      "boosting rounds (1 = greedy tree)");
    train->add_option("--thresholds", train_args.thresholds_path, "threshold set JSON");
    train->add_option("--export-thresholds", train_args.export_thresholds,
                      "write the fitted reference's threshold set JSON");
    train->add_option("--time-limit", train_args.time_limit, "seconds; best-known on expiry");
    train->add_option("--threads", train_args.options.threads, "search worker threads");
    train->add_flag("--trace", train_args.options.trace, "collect a search trace");
    train->add_option("--out", train_args.out, "model output path")->required();
    train->add_option("--manifest", train_args.manifest_path, "manifest path (default <out>.manifest.json)");
    train->add_flag("--json", train_args.json, "machine-readable stdout");

    // predict
    std::string p_model, p_data, p_out;
    bool p_json = false;
    auto* predict = app.add_subcommand("predict", "Write per-row predictions CSV");
    predict->add_option("--model", p_model)->required();
    predict->add_option("--data", p_data, "CSV path or - for stdin")->required();
    predict->add_option("--out", p_out, "predictions CSV path")->required();
    predict->add_flag("--json", p_json);

    // evaluate
    std::string e_model, e_data, e_label, e_weight, e_out;
    bool e_json = false;
    auto* evaluate = app.add_subcommand("evaluate", "Weighted loss and confusion counts");
    evaluate->add_option("--model", e_model)->required();
    evaluate->add_option("--data", e_data)->required();
    evaluate->add_option("--label", e_label)->required();
    evaluate->add_option("--weight", e_weight);
    evaluate->add_option("--out", e_out, "metrics JSON path (default stdout)");
    evaluate->add_flag("--json", e_json);

    // duplicate
    std::string d_data, d_label, d_weight, d_norm = "max", d_out;
    int d_p = 10;
    double d_cap = 100.0;
    bool d_prov = false, d_json = false;
    auto* duplicate = app.add_subcommand("duplicate", "Integer-duplicate weighted rows");
    duplicate->add_option("--data", d_data)->required();
    duplicate->add_option("--label", d_label)->required();
    duplicate->add_option("--weight", d_weight);
    duplicate->add_option("--p", d_p, "duplication factor (1..99)")->required();
    duplicate->add_option("--norm", d_norm, "max|sum|none")->check(CLI::IsMember({"max", "sum", "none"}));
    duplicate->add_option("--cap", d_cap, "size cap as a multiple of N");
    duplicate->add_option("--out", d_out)->required();
    duplicate->add_flag("--provenance", d_prov, "append a __source_row column");
    duplicate->add_flag("--json", d_json);

    // sample
    std::string s_data, s_label, s_weight, s_out;
    double s_r = 1.0;
    std::uint64_t s_seed = 0;
    bool s_json = false;
    auto* sample = app.add_subcommand("sample", "Weight-proportional sampling with replacement");
    sample->add_option("--data", s_data)->required();
    sample->add_option("--label", s_label)->required();
    sample->add_option("--weight", s_weight);
    sample->add_option("--r", s_r, "sample S = round(r*N) rows")->required();
    sample->add_option("--seed", s_seed);
    sample->add_option("--out", s_out)->required();
    sample->add_flag("--json", s_json);

    // bench
    std::string b_kernel = "both", b_out = "-";
    std::vector<std::size_t> b_sizes = {100000};
    std::size_t b_columns = 50;
    int b_repeats = 5;
    std::vector<int> b_q = {0, 100, 1000};
    auto* bench = app.add_subcommand("bench", "Loss-kernel sweep timings CSV");
    bench->add_option("--kernel", b_kernel)->check(CLI::IsMember({"bitcount", "weighted-dot", "both"}));
    bench->add_option("--sizes", b_sizes, "dataset sizes");
    bench->add_option("--columns", b_columns, "binary columns");
    bench->add_option("--repeats", b_repeats, "repeats per cell (median reported)");
    bench->add_option("--q", b_q, "duplication percentages");
    bench->add_option("--out", b_out, "CSV path or - for stdout");

    // verify
    int v_instances = 60;
    std::uint64_t v_seed = 1;
    std::string v_out;
    auto* verify = app.add_subcommand("verify", "Run oracle and theorem checkers");
    verify->add_option("--instances", v_instances, "random instances per check");
    verify->add_option("--seed", v_seed);
    verify->add_option("--out", v_out, "report JSON path (default stdout)");

    // export-binarized
    std::string x_data, x_label, x_weight, x_out;
    auto* exportb = app.add_subcommand("export-binarized", "Debug columnar JSON of the binarized data");
    exportb->add_option("--data", x_data)->required();
    exportb->add_option("--label", x_label)->required();
    exportb->add_option("--weight", x_weight);
    exportb->add_option("--out", x_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (train->parsed()) return run_train_cmd(train_args);
        if (predict->parsed()) return run_predict_cmd(p_model, p_data, p_out, p_json);
        if (evaluate->parsed()) return run_evaluate_cmd(e_model, e_data, e_label, e_weight, e_out, e_json);
        if (duplicate->parsed())
            return run_duplicate_cmd(d_data, d_label, d_weight, d_p, d_norm, d_cap, d_out, d_prov, d_json);
        if (sample->parsed()) return run_sample_cmd(s_data, s_label, s_weight, s_r, s_seed, s_out, s_json);
        if (bench->parsed()) return run_bench_cmd(b_kernel, b_sizes, b_columns, b_repeats, b_q, b_out);
        if (verify->parsed()) return run_verify_cmd(v_instances, v_seed, v_out);
        if (exportb->parsed()) {
            const std::optional<std::string> weight_col =
                x_weight.empty() ? std::nullopt : std::optional<std::string>(x_weight);
            const wsdt::RawDataset raw =
                wsdt::ingest_csv_text(wsdt::read_text(x_data), x_label, weight_col, x_data);
            wsdt::write_file_atomic(x_out, wsdt::export_binarized_json(wsdt::binarize_all(raw)) + "\n");
            return 0;
        }
    } catch (const wsdt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
