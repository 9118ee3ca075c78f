#pragma once

#include <optional>
#include <string>

#include "wsdt/model.hpp"
#include "wsdt/reference.hpp"
#include "wsdt/search.hpp"

namespace wsdt {

enum class BinarizeMode { All, Guessed };

struct TrainOptions {
    std::string data_path;  // file path or "-" for stdin
    std::string label_column;
    std::optional<std::string> weight_column;
    int depth = 3;
    double lambda = 0.01;
    SearchMode mode = SearchMode::Exact;
    std::string kernel = "auto";  // auto | bitcount | weighted-dot
    BinarizeMode binarize = BinarizeMode::All;
    std::optional<std::string> reference_path;   // external predictions, one label/line
    bool fit_reference = false;                  // built-in reference learner
    GreedyConfig reference_config;
    std::optional<std::string> thresholds_path;  // external threshold set JSON
    std::optional<double> time_limit_seconds;
    int threads = 1;
    bool trace = false;
};

struct TrainOutput {
    std::string model_bytes;
    std::string manifest_bytes;
    ModelFile model;
    SearchResult result;
};

/// End-to-end training: ingest, (optionally) fit the reference, binarize,
/// search, and produce model + manifest bytes. Deterministic for a fixed
/// option set and input bytes, including across thread counts.
TrainOutput run_train(const TrainOptions& options);

/// Same pipeline over in-memory CSV text (tests, stdin handling).
TrainOutput run_train_text(const TrainOptions& options, std::string_view csv_text);

}  // namespace wsdt
