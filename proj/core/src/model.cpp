#include "wsdt/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "wsdt/error.hpp"

#include <json.hpp>

namespace wsdt {

Tree Tree::leaf(std::uint32_t label) {
    Tree t;
    t.nodes.push_back(Node{-1, label, -1, -1});
    t.root = 0;
    return t;
}

Tree Tree::split(std::int32_t column, const Tree& zero_child, const Tree& one_child) {
    Tree t;
    t.nodes.reserve(zero_child.nodes.size() + one_child.nodes.size() + 1);
    auto append = [&t](const Tree& src) -> std::int32_t {
        const auto offset = static_cast<std::int32_t>(t.nodes.size());
        for (const Node& node : src.nodes) {
            Node copy = node;
            if (copy.zero >= 0) copy.zero += offset;
            if (copy.one >= 0) copy.one += offset;
            t.nodes.push_back(copy);
        }
        return offset + src.root;
    };
    const std::int32_t zero_root = append(zero_child);
    const std::int32_t one_root = append(one_child);
    t.nodes.push_back(Node{column, 0, zero_root, one_root});
    t.root = static_cast<std::int32_t>(t.nodes.size()) - 1;
    return t;
}

std::vector<std::int64_t> Tree::preorder_key() const {
    std::vector<std::int64_t> key;
    key.reserve(nodes.size() * 2);
    std::function<void(std::int32_t)> visit = [&](std::int32_t idx) {
        const Node& node = nodes[idx];
        if (node.column < 0) {
            key.push_back(0);
            key.push_back(static_cast<std::int64_t>(node.label));
        } else {
            key.push_back(1);
            key.push_back(node.column);
            visit(node.zero);
            visit(node.one);
        }
    };
    if (valid()) visit(root);
    return key;
}

namespace {

std::size_t count_leaves(const Tree& t, std::int32_t idx) {
    const Tree::Node& node = t.nodes[idx];
    if (node.column < 0) return 1;
    return count_leaves(t, node.zero) + count_leaves(t, node.one);
}

std::size_t node_depth(const Tree& t, std::int32_t idx) {
    const Tree::Node& node = t.nodes[idx];
    if (node.column < 0) return 0;
    return 1 + std::max(node_depth(t, node.zero), node_depth(t, node.one));
}

}  // namespace

std::size_t leaf_count(const Tree& tree) { return count_leaves(tree, tree.root); }
std::size_t depth(const Tree& tree) { return node_depth(tree, tree.root); }

std::uint32_t predict_row(const Tree& tree, const BinarizedDataset& ds, std::size_t row) {
    std::int32_t idx = tree.root;
    while (!tree.is_leaf(idx)) {
        const Tree::Node& node = tree.nodes[idx];
        idx = ds.columns[static_cast<std::size_t>(node.column)].test(row) ? node.one : node.zero;
    }
    return tree.nodes[idx].label;
}

std::vector<std::uint32_t> predict(const Tree& tree, const BinarizedDataset& ds) {
    for (const Tree::Node& node : tree.nodes)
        if (node.column >= 0 && static_cast<std::size_t>(node.column) >= ds.n_columns())
            raise(ErrorCode::ColumnOutOfRange,
                  "tree references column " + std::to_string(node.column) + " but dataset has " +
                      std::to_string(ds.n_columns()));
    std::vector<std::uint32_t> out(ds.n());
    for (std::size_t i = 0; i < ds.n(); ++i) out[i] = predict_row(tree, ds, i);
    return out;
}

Tree collapse(const Tree& tree) {
    std::function<Tree(std::int32_t)> rebuild = [&](std::int32_t idx) -> Tree {
        const Tree::Node& node = tree.nodes[idx];
        if (node.column < 0) return Tree::leaf(node.label);
        Tree zero = rebuild(node.zero);
        Tree one = rebuild(node.one);
        const bool both_leaves = zero.nodes.size() == 1 && one.nodes.size() == 1 &&
                                 zero.nodes[0].column < 0 && one.nodes[0].column < 0;
        if (both_leaves && zero.nodes[0].label == one.nodes[0].label) return zero;
        return Tree::split(node.column, zero, one);
    };
    return rebuild(tree.root);
}

namespace {

nlohmann::ordered_json tree_to_json(const Tree& tree, std::int32_t idx) {
    const Tree::Node& node = tree.nodes[idx];
    nlohmann::ordered_json out;
    if (node.column < 0) {
        out["leaf"] = node.label;
    } else {
        out["column"] = node.column;
        out["zero"] = tree_to_json(tree, node.zero);
        out["one"] = tree_to_json(tree, node.one);
    }
    return out;
}

std::int32_t tree_from_json(const nlohmann::json& doc, Tree& tree) {
    if (doc.contains("leaf")) {
        if (!doc["leaf"].is_number_unsigned())
            raise(ErrorCode::MalformedModel, "leaf class must be a non-negative integer");
        tree.nodes.push_back(Tree::Node{-1, doc["leaf"].get<std::uint32_t>(), -1, -1});
        return static_cast<std::int32_t>(tree.nodes.size()) - 1;
    }
    if (!doc.contains("column") || !doc.contains("zero") || !doc.contains("one"))
        raise(ErrorCode::MalformedModel, "internal node needs column/zero/one");
    const std::int32_t zero = tree_from_json(doc["zero"], tree);
    const std::int32_t one = tree_from_json(doc["one"], tree);
    tree.nodes.push_back(Tree::Node{doc["column"].get<std::int32_t>(), 0, zero, one});
    return static_cast<std::int32_t>(tree.nodes.size()) - 1;
}

nlohmann::ordered_json origin_to_json(std::int32_t column, const ColumnOrigin& origin) {
    nlohmann::ordered_json out;
    out["column"] = column;
    out["feature"] = origin.feature;
    out["name"] = origin.feature_name;
    if (origin.kind == FeatureKind::Numeric) {
        out["kind"] = "threshold";
        out["threshold"] = origin.threshold;
    } else {
        out["kind"] = "category";
        out["category"] = origin.category;
    }
    return out;
}

}  // namespace

bool ModelFile::operator==(const ModelFile& other) const {
    return schema_version == other.schema_version && tree == other.tree && columns == other.columns &&
           label_names == other.label_names && metadata == other.metadata;
}

ModelFile make_model(const Tree& tree, const BinarizedDataset& ds, ModelMetadata metadata) {
    ModelFile model;
    model.tree = tree;
    model.label_names = ds.label_names;
    model.metadata = std::move(metadata);
    std::map<std::int32_t, ColumnOrigin> used;
    for (const Tree::Node& node : tree.nodes) {
        if (node.column < 0) continue;
        if (static_cast<std::size_t>(node.column) >= ds.n_columns())
            raise(ErrorCode::ColumnOutOfRange, "tree column out of range for dataset");
        used.emplace(node.column, ds.origins[static_cast<std::size_t>(node.column)]);
    }
    model.columns.assign(used.begin(), used.end());
    return model;
}

std::string serialize(const ModelFile& model) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = model.schema_version;
    doc["tree"] = tree_to_json(model.tree, model.tree.root);
    auto columns = nlohmann::ordered_json::array();
    for (const auto& [column, origin] : model.columns) columns.push_back(origin_to_json(column, origin));
    doc["columns"] = std::move(columns);
    doc["labels"] = model.label_names;
    nlohmann::ordered_json meta;
    meta["lambda"] = model.metadata.lambda;
    meta["depth_limit"] = model.metadata.depth_limit;
    meta["mode"] = model.metadata.mode;
    meta["kernel"] = model.metadata.kernel;
    meta["objective"] = model.metadata.objective;
    meta["dataset_fingerprint"] = model.metadata.dataset_fingerprint;
    meta["tool_version"] = model.metadata.tool_version;
    doc["metadata"] = std::move(meta);
    return doc.dump(2) + "\n";
}

ModelFile deserialize(std::string_view bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::MalformedModel, std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("schema_version"))
        raise(ErrorCode::MalformedModel, "missing schema_version");
    const int version = doc["schema_version"].get<int>();
    if (version != 1)
        raise(ErrorCode::SchemaVersionMismatch, "schema_version " + std::to_string(version) + ", expected 1");

    ModelFile model;
    model.schema_version = version;
    try {
        model.tree.root = tree_from_json(doc.at("tree"), model.tree);
        for (const auto& col : doc.at("columns")) {
            ColumnOrigin origin;
            origin.feature = col.at("feature").get<std::size_t>();
            origin.feature_name = col.at("name").get<std::string>();
            const std::string kind = col.at("kind").get<std::string>();
            if (kind == "threshold") {
                origin.kind = FeatureKind::Numeric;
                origin.threshold = col.at("threshold").get<double>();
            } else if (kind == "category") {
                origin.kind = FeatureKind::Categorical;
                origin.category = col.at("category").get<std::string>();
            } else {
                raise(ErrorCode::MalformedModel, "unknown column kind '" + kind + "'");
            }
            model.columns.emplace_back(col.at("column").get<std::int32_t>(), std::move(origin));
        }
        model.label_names = doc.at("labels").get<std::vector<std::string>>();
        const auto& meta = doc.at("metadata");
        model.metadata.lambda = meta.at("lambda").get<double>();
        model.metadata.depth_limit = meta.at("depth_limit").get<int>();
        model.metadata.mode = meta.at("mode").get<std::string>();
        model.metadata.kernel = meta.at("kernel").get<std::string>();
        model.metadata.objective = meta.at("objective").get<double>();
        model.metadata.dataset_fingerprint = meta.at("dataset_fingerprint").get<std::string>();
        model.metadata.tool_version = meta.at("tool_version").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::MalformedModel, std::string("bad model structure: ") + e.what());
    }

    // Every column the tree references must have provenance.
    for (const Tree::Node& node : model.tree.nodes) {
        if (node.column < 0) continue;
        const bool known = std::any_of(model.columns.begin(), model.columns.end(),
                                       [&](const auto& entry) { return entry.first == node.column; });
        if (!known)
            raise(ErrorCode::MalformedModel, "tree references column " + std::to_string(node.column) +
                                                 " with no provenance entry");
    }
    return model;
}

std::vector<std::uint32_t> predict_raw(const ModelFile& model, const RawDataset& raw) {
    // Resolve each used column's origin against the raw features by name.
    std::map<std::int32_t, std::pair<const Feature*, const ColumnOrigin*>> resolved;
    for (const auto& [column, origin] : model.columns) {
        const Feature* match = nullptr;
        for (const Feature& f : raw.features)
            if (f.name == origin.feature_name) {
                match = &f;
                break;
            }
        if (match == nullptr || match->kind != origin.kind)
            raise(ErrorCode::FeatureMismatch, "feature '" + origin.feature_name +
                                                  "' required by the model is absent or mistyped");
        resolved[column] = {match, &origin};
    }

    auto bit_for = [&](std::int32_t column, std::size_t row) -> bool {
        const auto& [feature, origin] = resolved.at(column);
        if (origin->kind == FeatureKind::Numeric) return feature->numeric[row] <= origin->threshold;
        return feature->categories[feature->codes[row]] == origin->category;
    };

    std::vector<std::uint32_t> out(raw.n());
    for (std::size_t row = 0; row < raw.n(); ++row) {
        std::int32_t idx = model.tree.root;
        while (!model.tree.is_leaf(idx)) {
            const Tree::Node& node = model.tree.nodes[idx];
            idx = bit_for(node.column, row) ? node.one : node.zero;
        }
        out[row] = model.tree.nodes[idx].label;
    }
    return out;
}

}  // namespace wsdt
