#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wsdt/data.hpp"

namespace wsdt {

/// Binary decision tree over binarized columns, stored as an index-based node
/// pool (value semantics, cheap to copy at the sizes this project handles).
/// Routing: column bit 1 -> one_child, bit 0 -> zero_child.
struct Tree {
    struct Node {
        std::int32_t column = -1;   // -1 marks a leaf
        std::uint32_t label = 0;    // class id when leaf
        std::int32_t zero = -1;     // child indices when internal
        std::int32_t one = -1;
    };

    std::vector<Node> nodes;
    std::int32_t root = -1;

    bool valid() const { return root >= 0 && static_cast<std::size_t>(root) < nodes.size(); }
    bool is_leaf(std::int32_t idx) const { return nodes[idx].column < 0; }

    static Tree leaf(std::uint32_t label);
    static Tree split(std::int32_t column, const Tree& zero_child, const Tree& one_child);

    bool operator==(const Tree& other) const { return preorder_key() == other.preorder_key(); }

    /// Canonical preorder encoding: (0, label) for a leaf, (1, column) for an
    /// internal node, zero child before one child. Injective over trees and
    /// prefix-free, so lexicographic comparison is a total order.
    std::vector<std::int64_t> preorder_key() const;
};

std::size_t leaf_count(const Tree& tree);
std::size_t depth(const Tree& tree);

std::vector<std::uint32_t> predict(const Tree& tree, const BinarizedDataset& ds);
std::uint32_t predict_row(const Tree& tree, const BinarizedDataset& ds, std::size_t row);

/// Collapses internal nodes whose children are leaves of the same class.
/// Optimal trees never contain such splits; this is a post-search guard.
Tree collapse(const Tree& tree);

struct ModelMetadata {
    double lambda = 0.0;
    int depth_limit = 1;
    std::string mode;     // "exact" | "guessed"
    std::string kernel;   // "bitcount" | "weighted-dot"
    double objective = 0.0;
    std::string dataset_fingerprint;
    std::string tool_version;

    bool operator==(const ModelMetadata&) const = default;
};

/// On-disk model: schema version, recursive tree JSON, provenance for every
/// column the tree uses, the label remap table, and training metadata. Field
/// order is fixed so identical models serialize to identical bytes.
struct ModelFile {
    int schema_version = 1;
    Tree tree;
    std::vector<std::pair<std::int32_t, ColumnOrigin>> columns;  // used column id -> origin
    std::vector<std::string> label_names;
    ModelMetadata metadata;

    bool operator==(const ModelFile& other) const;
};

ModelFile make_model(const Tree& tree, const BinarizedDataset& ds, ModelMetadata metadata);

std::string serialize(const ModelFile& model);
ModelFile deserialize(std::string_view bytes);

/// Routes raw feature rows through the tree using the stored provenance
/// (threshold / category tests), without re-binarizing.
std::vector<std::uint32_t> predict_raw(const ModelFile& model, const RawDataset& raw);

}  // namespace wsdt
