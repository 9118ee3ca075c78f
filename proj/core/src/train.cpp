#include "wsdt/train.hpp"

#include <chrono>

#include "wsdt/csv.hpp"
#include "wsdt/digest.hpp"
#include "wsdt/error.hpp"
#include "wsdt/version.hpp"

#include <json.hpp>

namespace wsdt {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

KernelMode resolve_kernel(const std::string& requested, const BinarizedDataset& ds) {
    if (requested == "auto") return ds.unit_weights ? KernelMode::Bitcount : KernelMode::WeightedDot;
    if (requested == "bitcount") return KernelMode::Bitcount;  // ctor rejects non-unit weights
    if (requested == "weighted-dot") return KernelMode::WeightedDot;
    raise(ErrorCode::InvalidArgument, "unknown kernel '" + requested + "'");
}

}  // namespace

TrainOutput run_train_text(const TrainOptions& options, std::string_view csv_text) {
    if (options.mode == SearchMode::Guessed && !options.reference_path && !options.fit_reference)
        raise(ErrorCode::InvalidArgument, "guessed mode needs --reference or --fit-reference");
    if (options.binarize == BinarizeMode::Guessed && !options.fit_reference && !options.thresholds_path)
        raise(ErrorCode::InvalidArgument, "guessed binarization needs --fit-reference or --thresholds");

    const std::string fingerprint = digest128(csv_text).hex();

    const auto t_total = Clock::now();
    auto t_phase = Clock::now();
    const RawDataset raw = ingest_csv_text(csv_text, options.label_column, options.weight_column,
                                           options.data_path);
    const double ingest_ms = ms_since(t_phase);

    // Reference fitting happens on the full binarization; guessed
    // binarization then restricts columns to the thresholds it used.
    t_phase = Clock::now();
    BinarizedDataset full = binarize_all(raw);
    std::optional<ReferenceFit> fit;
    std::optional<ReferencePredictions> reference;
    if (options.fit_reference) {
        fit = fit_greedy(full, options.reference_config);
        reference = fit->predictions;
    } else if (options.reference_path) {
        reference = load_reference(*options.reference_path, full);
    }
    const double reference_ms = ms_since(t_phase);

    t_phase = Clock::now();
    BinarizedDataset binarized;
    if (options.binarize == BinarizeMode::All) {
        binarized = std::move(full);
    } else if (options.thresholds_path) {
        binarized = binarize_guessed(raw, threshold_set_from_json(read_text(*options.thresholds_path), raw));
    } else {
        binarized = binarize_guessed(raw, fit->thresholds);
    }
    const double binarize_ms = ms_since(t_phase);

    SearchConfig cfg;
    cfg.lambda = options.lambda;
    cfg.depth_limit = options.depth;
    cfg.mode = options.mode;
    cfg.kernel = resolve_kernel(options.kernel, binarized);
    cfg.reference = std::move(reference);
    cfg.time_limit_seconds = options.time_limit_seconds;
    cfg.threads = options.threads;
    cfg.trace = options.trace;

    t_phase = Clock::now();
    SearchResult result = optimize(binarized, cfg);
    const double search_ms = ms_since(t_phase);

    ModelMetadata metadata;
    metadata.lambda = options.lambda;
    metadata.depth_limit = options.depth;
    metadata.mode = search_mode_name(options.mode);
    metadata.kernel = kernel_mode_name(cfg.kernel);
    metadata.objective = result.objective_value;
    metadata.dataset_fingerprint = fingerprint;
    metadata.tool_version = kToolVersion;

    TrainOutput out;
    out.model = make_model(result.tree, binarized, metadata);
    out.model_bytes = serialize(out.model);

    nlohmann::ordered_json manifest;
    manifest["schema_version"] = 1;
    manifest["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    nlohmann::ordered_json config;
    config["data"] = options.data_path;
    config["label"] = options.label_column;
    config["weight"] = options.weight_column ? nlohmann::ordered_json(*options.weight_column)
                                             : nlohmann::ordered_json(nullptr);
    config["depth"] = options.depth;
    config["lambda"] = options.lambda;
    config["mode"] = search_mode_name(options.mode);
    config["kernel"] = kernel_mode_name(cfg.kernel);
    config["binarize"] = options.binarize == BinarizeMode::All ? "all" : "guessed";
    config["reference"] = options.fit_reference
                              ? nlohmann::ordered_json("fit-reference")
                              : (options.reference_path ? nlohmann::ordered_json(*options.reference_path)
                                                        : nlohmann::ordered_json(nullptr));
    config["thresholds"] = options.thresholds_path ? nlohmann::ordered_json(*options.thresholds_path)
                                                   : nlohmann::ordered_json(nullptr);
    config["time_limit_seconds"] = options.time_limit_seconds
                                       ? nlohmann::ordered_json(*options.time_limit_seconds)
                                       : nlohmann::ordered_json(nullptr);
    config["threads"] = options.threads;
    manifest["config"] = std::move(config);
    nlohmann::ordered_json dataset;
    dataset["path"] = options.data_path;
    dataset["fingerprint"] = fingerprint;
    dataset["rows"] = raw.n();
    dataset["features"] = raw.n_features();
    dataset["classes"] = raw.n_classes();
    dataset["binary_columns"] = binarized.n_columns();
    manifest["dataset"] = std::move(dataset);
    nlohmann::ordered_json timings;
    timings["ingest_ms"] = ingest_ms;
    timings["reference_ms"] = reference_ms;
    timings["binarize_ms"] = binarize_ms;
    timings["search_ms"] = search_ms;
    timings["total_ms"] = ms_since(t_total);
    manifest["timings"] = std::move(timings);
    nlohmann::ordered_json summary;
    summary["objective"] = result.objective_value;
    summary["leaves"] = leaf_count(result.tree);
    summary["depth"] = depth(result.tree);
    summary["optimality"] = optimality_name(result.optimality);
    summary["nodes_explored"] = result.node_count_explored;
    summary["cache_hits"] = result.cache_hits;
    summary["elapsed_seconds"] = result.elapsed_seconds;
    manifest["result"] = std::move(summary);
    out.manifest_bytes = manifest.dump(2) + "\n";

    out.result = std::move(result);
    return out;
}

TrainOutput run_train(const TrainOptions& options) {
    return run_train_text(options, read_text(options.data_path));
}

}  // namespace wsdt
