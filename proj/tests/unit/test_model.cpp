#include <doctest.h>

#include <random>

#include "testgen.hpp"
#include "wsdt/model.hpp"

using namespace wsdt;

TEST_CASE("single leaf predicts a constant") {
    const auto ds = testgen::xor_dataset();
    const auto preds = predict(Tree::leaf(1), ds);
    CHECK(preds == std::vector<std::uint32_t>{1, 1, 1, 1});
}

TEST_CASE("stump routes by the column bit") {
    const auto ds = testgen::xor_dataset();
    const Tree stump = Tree::split(0, Tree::leaf(0), Tree::leaf(1));
    const auto preds = predict(stump, ds);
    for (std::size_t i = 0; i < ds.n(); ++i)
        CHECK(preds[i] == (ds.columns[0].test(i) ? 1u : 0u));
}

TEST_CASE("xor tree classifies the xor dataset perfectly") {
    const auto ds = testgen::xor_dataset();
    const auto preds = predict(testgen::xor_tree(), ds);
    CHECK(preds == ds.labels);
}

TEST_CASE("leaf_count and depth structural cases") {
    CHECK(leaf_count(Tree::leaf(0)) == 1);
    CHECK(depth(Tree::leaf(0)) == 0);
    const Tree stump = Tree::split(0, Tree::leaf(0), Tree::leaf(1));
    CHECK(leaf_count(stump) == 2);
    CHECK(depth(stump) == 1);
    const Tree full = testgen::xor_tree();
    CHECK(leaf_count(full) == 4);
    CHECK(depth(full) == 2);
}

TEST_CASE("leaf count never exceeds 2^depth") {
    std::mt19937_64 rng(5);
    const auto ds = testgen::xor_dataset();
    for (int trial = 0; trial < 50; ++trial) {
        const Tree t = testgen::random_tree(rng, ds, 3);
        CHECK(leaf_count(t) <= (std::size_t{1} << depth(t)));
    }
}

TEST_CASE("predict rejects out-of-range columns") {
    const auto ds = testgen::xor_dataset();
    const Tree bad = Tree::split(7, Tree::leaf(0), Tree::leaf(1));
    CHECK_THROWS_AS((void)predict(bad, ds), Error);
}

TEST_CASE("collapse merges same-class sibling leaves") {
    const Tree wasteful = Tree::split(0, Tree::leaf(1), Tree::leaf(1));
    const Tree collapsed = collapse(wasteful);
    CHECK(leaf_count(collapsed) == 1);
    CHECK(collapsed.nodes[collapsed.root].label == 1);
    // Nested: both arms collapse, then the root collapses too.
    const Tree nested = Tree::split(0, wasteful, Tree::leaf(1));
    CHECK(leaf_count(collapse(nested)) == 1);
    // A genuine split stays.
    const Tree real = Tree::split(0, Tree::leaf(0), Tree::leaf(1));
    CHECK(collapse(real) == real);
}

namespace {

ModelFile sample_model(const Tree& tree) {
    const auto ds = testgen::xor_dataset();
    ModelMetadata meta;
    meta.lambda = 0.01;
    meta.depth_limit = 2;
    meta.mode = "exact";
    meta.kernel = "bitcount";
    meta.objective = 0.04;
    meta.dataset_fingerprint = "abc123";
    meta.tool_version = "0.1.0";
    return make_model(tree, ds, meta);
}

}  // namespace

TEST_CASE("serialize/deserialize round trip is structural identity") {
    std::mt19937_64 rng(11);
    const auto ds = testgen::xor_dataset();
    for (int trial = 0; trial < 30; ++trial) {
        const ModelFile model = sample_model(testgen::random_tree(rng, ds, 2));
        const ModelFile back = deserialize(serialize(model));
        CHECK(back == model);
        // Byte-stable: re-serializing the deserialized model gives identical bytes.
        CHECK(serialize(back) == serialize(model));
    }
}

TEST_CASE("truncated model bytes are rejected") {
    const std::string bytes = serialize(sample_model(testgen::xor_tree()));
    try {
        deserialize(bytes.substr(0, bytes.size() / 2));
        FAIL("expected MalformedModel");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MalformedModel);
    }
}

TEST_CASE("future schema versions are rejected") {
    std::string bytes = serialize(sample_model(testgen::xor_tree()));
    const auto pos = bytes.find("\"schema_version\": 1");
    REQUIRE(pos != std::string::npos);
    bytes.replace(pos, 19, "\"schema_version\": 2");
    try {
        deserialize(bytes);
        FAIL("expected SchemaVersionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SchemaVersionMismatch);
    }
}

TEST_CASE("serialized models never contain same-class sibling leaves") {
    std::mt19937_64 rng(13);
    const auto ds = testgen::xor_dataset();
    for (int trial = 0; trial < 30; ++trial) {
        const Tree t = collapse(testgen::random_tree(rng, ds, 3));
        for (const auto& node : t.nodes) {
            if (node.column < 0) continue;
            const auto& zero = t.nodes[node.zero];
            const auto& one = t.nodes[node.one];
            if (zero.column < 0 && one.column < 0) CHECK(zero.label != one.label);
        }
    }
}

TEST_CASE("predict_raw resolves provenance by feature name") {
    const auto raw = ingest_csv_text("x0,x1,y\n0,0,0\n0,1,1\n1,0,1\n1,1,0\n", "y");
    const auto ds = binarize_all(raw);
    ModelMetadata meta;
    meta.mode = "exact";
    meta.kernel = "bitcount";
    const ModelFile model = make_model(testgen::xor_tree(), ds, meta);
    const auto preds = predict_raw(model, raw);
    CHECK(preds == ds.labels);

    const auto missing = ingest_csv_text("x0,z,y\n0,0,0\n1,1,1\n", "y");
    try {
        predict_raw(model, missing);
        FAIL("expected FeatureMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FeatureMismatch);
    }
}
