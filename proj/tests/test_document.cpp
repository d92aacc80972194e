#include <filesystem>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace qwalk;

namespace {

const std::filesystem::path walks_dir = QWALK_WALKS_DIR;

std::string error_of(const std::string& text) {
  try {
    walk_from_json(parse_json_text(text));
  } catch (const DocumentError& e) {
    return e.what();
  }
  return "";
}

bool same_walk(const Walk& a, const Walk& b) {
  if (a.kind() != b.kind() || a.steps().steps() != b.steps().steps()) return false;
  if ((a.coin().matrix() - b.coin().matrix()).max_abs() > 1e-15) return false;
  for (std::size_t k = 0; k < a.steps().size(); ++k)
    if ((a.projection(k) - b.projection(k)).max_abs() > 0.0) return false;
  return true;
}

}  // namespace

TEST(Documents, SampleWalksLoad) {
  EXPECT_TRUE(same_walk(load_walk(walks_dir / "std-grover-2d.json"), std_walk(2)));
  EXPECT_TRUE(same_walk(load_walk(walks_dir / "std-grover-3d.json"), std_walk(3)));
  EXPECT_TRUE(same_walk(load_walk(walks_dir / "lazy-grover-1d.json"), lazy_walk(1)));
  EXPECT_TRUE(same_walk(load_walk(walks_dir / "lazy-grover-2d.json"), lazy_walk(2)));
  EXPECT_TRUE(same_walk(load_walk(walks_dir / "triangular6.json"), triangular_walk()));
  EXPECT_TRUE(same_walk(load_walk(walks_dir / "product-triangular3.json"), product_triangular_walk()));
  EXPECT_TRUE(same_walk(load_walk(walks_dir / "fourier-2d.json"), fourier_walk_2d()));
  EXPECT_TRUE(same_walk(load_walk(walks_dir / "wkkk-2d.json"), std_walk(2, wkkk_coin(0.3))));
  EXPECT_TRUE(same_walk(load_walk(walks_dir / "sbj-lazy-1d.json"), lazy_walk(1, sbj_coin(0.4))));
  // H^2 = I with one-dimensional eigenspaces: a reflection coin given as a plain matrix
  const Walk h = load_walk(walks_dir / "hadamard-1d.json");
  EXPECT_EQ(h.coin().primary_class(), CoinClass::Reflection);
}

TEST(Documents, ComplexEntriesAndReflectionCoins) {
  const Walk w = walk_from_json(parse_json_text(R"({
    "dimension": 1, "steps": [[1], [-1]],
    "projections": {"partition": [[0], [1]]},
    "coin": {"matrix": [[0, [0, 1]], [[0, 1], 0]]}})"));
  EXPECT_EQ(w.coin().matrix()(0, 1), I_unit);
  const Walk r = walk_from_json(parse_json_text(R"({"builtin": "lazy", "dimension": 1,
    "coin": {"builtin": "reflection", "vector": [0.6, 0, [0, 0.8]]}})"));
  EXPECT_EQ(r.coin().primary_class(), CoinClass::Reflection);
}

TEST(Documents, ErrorsCarryAJsonPointer) {
  EXPECT_EQ(error_of(R"({"dimension": 1})"), "/: missing member \"steps\"");
  EXPECT_EQ(error_of(R"({"dimension": 0, "steps": [[1]]})"), "/dimension: dimension must be at least 1");
  EXPECT_EQ(error_of(R"({"dimension": 1, "steps": [[1], ["a"]], "projections": {}, "coin": {}})"),
            "/steps/1/0: expected an integer");
  EXPECT_EQ(error_of(R"({"dimension": 1, "steps": [[1], [-1]], "projections": {"partition": [[0], [1]]},
                        "coin": {"matrix": [[0, 1], [1]]}})"),
            "/coin/matrix/1: row has 1 entries, expected 2");
  EXPECT_EQ(error_of(R"({"dimension": 1, "steps": [[1], [-1]], "projections": {"partition": [[0], [1]]},
                        "coin": {"builtin": "hadamard"}})"),
            "/coin/builtin: unknown coin 'hadamard'");
  EXPECT_EQ(error_of(R"({"dimension": 1, "steps": [[1], [-1]], "projections": {"basis": 1}, "coin": {}})"),
            "/projections: expected \"partition\" or \"matrices\"");
  EXPECT_EQ(error_of(R"({"builtin": "std", "dimension": 2, "coin": {"builtin": "wkkk", "p": 2}})").rfind("/coin/p: ", 0),
            0u);
  EXPECT_EQ(error_of(R"({"builtin": "hex"})").rfind("/builtin: ", 0), 0u);
  EXPECT_EQ(error_of(R"([1, 2])"), "/: walk document must be an object");
}

TEST(Documents, ValidationFailuresFromFiles) {
  const std::filesystem::path data = QWALK_WALKS_DIR "/../tests/data";
  try {
    load_walk(data / "non-unitary-coin.json");
    FAIL();
  } catch (const DocumentError& e) {
    EXPECT_EQ(e.pointer(), "/coin");
    EXPECT_NE(std::string(e.what()).find("coin not unitary"), std::string::npos);
  }
  try {
    load_walk(data / "overlapping-projections.json");
    FAIL();
  } catch (const DocumentError& e) {
    EXPECT_NE(std::string(e.what()).find("orthogonality"), std::string::npos);
  }
  try {
    load_walk(data / "malformed.json");
    FAIL();
  } catch (const DocumentError& e) {
    EXPECT_NE(std::string(e.what()).find("malformed JSON"), std::string::npos);
  }
  try {
    load_walk(data / "bad-entry.json");
    FAIL();
  } catch (const DocumentError& e) {
    EXPECT_EQ(e.pointer(), "/coin/matrix/1/1");
  }
  EXPECT_THROW(load_walk(data / "missing.json"), DocumentError);
}

TEST(Serialization, ReportsRoundTripByteForByte) {
  ScanOptions opts;
  opts.keep_witnesses = true;
  opts.max_witnesses = 2;
  const auto rep = criterion_grover(std_walk(2), -1, TorusGrid::standard(2, 8), opts);
  Json j;
  j["grid"] = grid_json(TorusGrid::standard(2, 8));
  j["report"] = to_json(rep);
  const std::string text = dump(j);
  EXPECT_EQ(dump(parse_json_text(text)), text);
  EXPECT_EQ(j["report"]["verdict"], "present");
  EXPECT_EQ(j["report"]["witnesses"].size(), 2u);
  EXPECT_EQ(text.back(), '\n');
}

TEST(Serialization, ComplexNumbersAreNumberPairs) {
  EXPECT_EQ(to_json(cplx(0.5, -2.0)).dump(), "[0.5,-2.0]");
  const CVector v{1.0, I_unit};
  EXPECT_EQ(to_json(std::span<const cplx>(v)).dump(), "[[1.0,0.0],[0.0,1.0]]");
  WienerCheck w;
  w.lhs = 0.25;
  w.contributions.push_back({1.0, 0.2, 1e-9, "eigenfunction"});
  const Json j = to_json(w);
  EXPECT_EQ(j["contributions"][0]["method"], "eigenfunction");
  EXPECT_EQ(dump(parse_json_text(dump(j))), dump(j));
}
