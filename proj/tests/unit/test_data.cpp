#include <doctest.h>

#include <random>

#include "testgen.hpp"
#include "wsdt/base64.hpp"
#include "wsdt/data.hpp"

#include <json.hpp>

using namespace wsdt;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("ingest parses weights directly") {
    const auto ds = ingest_csv_text("a,y,w\n1,0,1\n2,1,2\n3,0,3\n", "y", std::string("w"));
    CHECK(ds.weights == std::vector<double>{1, 2, 3});
    CHECK(ds.n() == 3);
    CHECK(ds.n_features() == 1);
}

TEST_CASE("missing weight column defaults every weight to 1") {
    const auto ds = ingest_csv_text("a,y\n1,0\n2,1\n", "y");
    CHECK(ds.weights == std::vector<double>{1.0, 1.0});
}

TEST_CASE("negative weight names the offending row") {
    std::string csv = "a,y,w\n";
    for (int i = 0; i < 5; ++i) csv += "1,0,1\n";
    csv += "9,1,-1\n";
    try {
        ingest_csv_text(csv, "y", std::string("w"));
        FAIL("expected NegativeWeight");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeWeight);
        CHECK(std::string(e.what()).find("row 5") != std::string::npos);
    }
}

TEST_CASE("ingest error cases") {
    CHECK(code_of([] { ingest_csv_text("a,y\n1,0\n", "nope"); }) == ErrorCode::MissingColumn);
    CHECK(code_of([] { ingest_csv_text("a,y\n1,0\n", "y", std::string("nope")); }) ==
          ErrorCode::MissingColumn);
    CHECK(code_of([] { ingest_csv_text("a,y\n", "y"); }) == ErrorCode::EmptyDataset);
    CHECK(code_of([] { ingest_csv_text("a,y,w\n1,0,abc\n", "y", std::string("w")); }) ==
          ErrorCode::NonNumericWeight);
    CHECK(code_of([] { ingest_csv_text("a,y\n,0\n", "y"); }) == ErrorCode::MissingValue);
    CHECK(code_of([] { ingest_csv_text("a,y,w\n1,0,0\n2,1,0\n", "y", std::string("w")); }) ==
          ErrorCode::AllZeroWeights);
}

TEST_CASE("labels remap to a contiguous range, numerically when possible") {
    const auto ds = ingest_csv_text("a,y\n1,10\n2,2\n3,10\n4,0\n", "y");
    CHECK(ds.label_names == std::vector<std::string>{"0", "2", "10"});
    CHECK(ds.labels == std::vector<std::uint32_t>{2, 1, 2, 0});
}

TEST_CASE("rfc4180 quoting") {
    const auto ds = ingest_csv_text("a,y\n\"x,\"\"1\"\"\",c1\nplain,c2\n", "y");
    CHECK(ds.features[0].kind == FeatureKind::Categorical);
    CHECK(ds.features[0].categories[ds.features[0].codes[0]] == "x,\"1\"");
    CHECK(code_of([] { parse_csv("a,y\n\"broken,0\n"); }) == ErrorCode::MalformedCsv);
}

TEST_CASE("binarize_all emits midpoints of distinct values") {
    const auto raw = ingest_csv_text("f,y\n1,0\n2,1\n4,0\n", "y");
    const auto ds = binarize_all(raw);
    REQUIRE(ds.n_columns() == 2);
    CHECK(ds.origins[0].threshold == doctest::Approx(1.5));
    CHECK(ds.origins[1].threshold == doctest::Approx(3.0));
    // bit = 1 iff value <= threshold
    CHECK(ds.columns[0].test(0));
    CHECK(!ds.columns[0].test(1));
    CHECK(!ds.columns[0].test(2));
    CHECK(ds.columns[1].test(0));
    CHECK(ds.columns[1].test(1));
    CHECK(!ds.columns[1].test(2));
}

TEST_CASE("constant features emit no columns") {
    const auto raw = ingest_csv_text("c,f,y\n5,1,0\n5,2,1\n5,3,0\n", "y");
    const auto ds = binarize_all(raw);
    for (const auto& origin : ds.origins) CHECK(origin.feature_name == "f");
}

TEST_CASE("binary 0/1 feature yields one column at threshold 0.5") {
    const auto raw = ingest_csv_text("f,y\n0,0\n1,1\n0,0\n", "y");
    const auto ds = binarize_all(raw);
    REQUIRE(ds.n_columns() == 1);
    CHECK(ds.origins[0].threshold == doctest::Approx(0.5));
    // <=-orientation: the bit marks value 0, i.e. the complement of the raw column.
    CHECK(ds.columns[0].test(0));
    CHECK(!ds.columns[0].test(1));
    CHECK(ds.columns[0].test(2));
}

TEST_CASE("all-constant data has no informative column") {
    const auto raw = ingest_csv_text("f,y\n7,0\n7,1\n", "y");
    CHECK(code_of([&] { binarize_all(raw); }) == ErrorCode::NoInformativeColumns);
}

TEST_CASE("duplicate bit-columns are dropped keeping the smallest origin") {
    // f and g produce identical bits; f comes first.
    const auto raw = ingest_csv_text("f,g,y\n1,10,0\n2,20,1\n", "y");
    const auto ds = binarize_all(raw);
    REQUIRE(ds.n_columns() == 1);
    CHECK(ds.origins[0].feature_name == "f");
}

TEST_CASE("categorical features one-hot per category") {
    const auto raw = ingest_csv_text("color,y\nred,0\nblue,1\nred,0\ngreen,1\n", "y");
    const auto ds = binarize_all(raw);
    CHECK(ds.n_columns() == 3);  // blue, green, red
    for (const auto& origin : ds.origins) CHECK(origin.kind == FeatureKind::Categorical);
}

TEST_CASE("binarize_guessed with the full midpoint set matches binarize_all") {
    const auto raw = ingest_csv_text("f,g,y\n1,4,0\n2,5,1\n4,6,0\n", "y");
    const auto full = binarize_all(raw);
    ThresholdSet set;
    for (const auto& origin : full.origins)
        set.entries.push_back(ThresholdEntry{origin.feature, origin.feature_name, origin.kind,
                                             origin.threshold, origin.category});
    const auto guessed = binarize_guessed(raw, set);
    REQUIRE(guessed.n_columns() == full.n_columns());
    for (std::size_t j = 0; j < full.n_columns(); ++j) {
        CHECK(guessed.columns[j] == full.columns[j]);
        CHECK(guessed.origins[j] == full.origins[j]);
    }
}

TEST_CASE("binarize_guessed restrictions and errors") {
    const auto raw = ingest_csv_text("f,color,y\n1,red,0\n2,blue,1\n4,red,0\n", "y");
    ThresholdSet one;
    one.entries.push_back(ThresholdEntry{0, "f", FeatureKind::Numeric, 1.5, {}});
    const auto ds = binarize_guessed(raw, one);
    CHECK(ds.n_columns() == 1);
    CHECK(ds.origins[0].threshold == doctest::Approx(1.5));

    ThresholdSet cat;
    cat.entries.push_back(ThresholdEntry{1, "color", FeatureKind::Categorical, 0.0, "red"});
    const auto ds2 = binarize_guessed(raw, cat);
    CHECK(ds2.n_columns() == 1);
    CHECK(ds2.origins[0].category == "red");

    ThresholdSet bad;
    bad.entries.push_back(ThresholdEntry{1, "color", FeatureKind::Categorical, 0.0, "mauve"});
    CHECK(code_of([&] { binarize_guessed(raw, bad); }) == ErrorCode::UnknownCategory);
    CHECK(code_of([&] { binarize_guessed(raw, ThresholdSet{}); }) == ErrorCode::EmptyThresholdSet);
}

TEST_CASE("capture_and literal cases") {
    BitVector s = BitVector::ones(4);
    BitVector col(4);
    col.set(0);
    col.set(2);
    const auto one = capture_and(CaptureSet{s}, col, 1);
    CHECK(one.bits.test(0));
    CHECK(!one.bits.test(1));
    CHECK(one.bits.test(2));
    CHECK(!one.bits.test(3));
    const auto zero = capture_and(CaptureSet{s}, col, 0);
    CHECK(!zero.bits.test(0));
    CHECK(zero.bits.test(1));
    CHECK(zero.count() == 2);
    const auto empty = capture_and(CaptureSet{BitVector(4)}, col, 1);
    CHECK(empty.empty());
}

TEST_CASE("partition property on random capture sets") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 150;
        BitVector s(n), col(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rng() & 1) s.set(i);
            if (rng() & 1) col.set(i);
        }
        const auto one = capture_and(CaptureSet{s}, col, 1);
        const auto zero = capture_and(CaptureSet{s}, col, 0);
        CHECK(one.bits.or_with(zero.bits) == s);
        CHECK(one.bits.and_with(zero.bits).none());
    }
}

TEST_CASE("binarization distinguishes samples that differ on a numeric feature") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + rng() % 8;
        std::string csv = "f0,f1,y\n";
        std::vector<std::array<int, 2>> rows;
        for (std::size_t i = 0; i < n; ++i) {
            const int a = static_cast<int>(rng() % 4);
            const int b = static_cast<int>(rng() % 4);
            rows.push_back({a, b});
            csv += std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(rng() % 2) + "\n";
        }
        const auto raw = ingest_csv_text(csv, "y");
        bool informative = false;
        for (const auto& f : raw.features)
            for (std::size_t i = 1; i < n; ++i) informative |= f.numeric[i] != f.numeric[0];
        if (!informative) continue;
        const auto ds = binarize_all(raw);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = i + 1; k < n; ++k) {
                if (rows[i] == rows[k]) continue;
                bool separated = false;
                for (const auto& column : ds.columns) separated |= column.test(i) != column.test(k);
                CHECK(separated);
            }
    }
}

TEST_CASE("ingest then binarize is deterministic over identical bytes") {
    const std::string csv = "f,g,y,w\n1.5,a,0,2\n2.5,b,1,1\n0.5,a,1,1\n";
    const auto a = binarize_all(ingest_csv_text(csv, "y", std::string("w")));
    const auto b = binarize_all(ingest_csv_text(csv, "y", std::string("w")));
    REQUIRE(a.n_columns() == b.n_columns());
    for (std::size_t j = 0; j < a.n_columns(); ++j) {
        CHECK(a.columns[j] == b.columns[j]);
        CHECK(a.origins[j] == b.origins[j]);
    }
}

TEST_CASE("columnar JSON export round-trips bits") {
    const auto raw = ingest_csv_text("f,y\n1,0\n2,1\n4,0\n", "y");
    const auto ds = binarize_all(raw);
    const auto doc = nlohmann::json::parse(export_binarized_json(ds));
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["rows"] == 3);
    REQUIRE(doc["columns"].size() == ds.n_columns());
    for (std::size_t j = 0; j < ds.n_columns(); ++j) {
        const auto bytes = base64_decode(doc["columns"][j]["bits"].get<std::string>());
        for (std::size_t i = 0; i < ds.n(); ++i) {
            const bool bit = (bytes[i >> 3] >> (i & 7)) & 1;
            CHECK(bit == ds.columns[j].test(i));
        }
    }
}
