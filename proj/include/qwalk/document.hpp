#ifndef QWALK_DOCUMENT_HPP
#define QWALK_DOCUMENT_HPP

// JSON walk documents and report serialization.
//
// A walk document is either a built-in reference
//
//   {"builtin": "lazy", "dimension": 1, "coin": {...}}
//
// or a full definition
//
//   {"dimension": 2,
//    "steps": [[1,0], [-1,0], [0,1], [0,-1]],
//    "projections": {"partition": [[0], [1], [2], [3]]},
//    "coin": {"builtin": "grover"},
//    "kind": "plain"}
//
// "projections" may instead be {"matrices": [...]}, one D x D matrix per step.
// Coins: {"builtin": "grover"|"fourier"}, {"builtin": "reflection", "vector": v},
// {"builtin": "wkkk", "p": p}, {"builtin": "sbj", "rho": rho} or {"matrix": m}.
// Complex entries are numbers or [re, im] pairs; matrices are arrays of rows.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwalk/criteria.hpp"
#include "qwalk/deformation.hpp"
#include "qwalk/eigenspace.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

using Json = nlohmann::ordered_json;

class DocumentError : public std::runtime_error {
public:
  DocumentError(std::string pointer, const std::string& message)
      : std::runtime_error((pointer.empty() ? std::string("/") : pointer) + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

private:
  std::string pointer_;
};

namespace detail {

inline const Json& member(const Json& obj, const std::string& key, const std::string& at) {
  if (!obj.is_object()) throw DocumentError(at, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw DocumentError(at, "missing member \"" + key + "\"");
  return *it;
}

inline double number(const Json& j, const std::string& at) {
  if (!j.is_number()) throw DocumentError(at, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw DocumentError(at, "number is not finite");
  return v;
}

inline int integer(const Json& j, const std::string& at) {
  if (!j.is_number_integer()) throw DocumentError(at, "expected an integer");
  return j.get<int>();
}

inline std::string child(const std::string& at, std::size_t i) { return at + "/" + std::to_string(i); }
inline std::string child(const std::string& at, const std::string& key) { return at + "/" + key; }

// Translates library errors raised while building a piece of the walk.
template <class F>
auto located(const std::string& at, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const DocumentError&) {
    throw;
  } catch (const std::exception& e) {
    throw DocumentError(at, e.what());
  }
}

}  // namespace detail

inline cplx parse_complex(const Json& j, const std::string& at) {
  if (j.is_number()) return detail::number(j, at);
  if (j.is_array() && j.size() == 2)
    return {detail::number(j[0], detail::child(at, 0)), detail::number(j[1], detail::child(at, 1))};
  throw DocumentError(at, "expected a number or an [re, im] pair");
}

inline CVector parse_vector(const Json& j, const std::string& at) {
  if (!j.is_array() || j.empty()) throw DocumentError(at, "expected a non-empty array");
  CVector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(parse_complex(j[i], detail::child(at, i)));
  return v;
}

inline CMatrix parse_matrix(const Json& j, const std::string& at) {
  if (!j.is_array() || j.empty()) throw DocumentError(at, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  std::vector<cplx> data;
  for (std::size_t r = 0; r < rows; ++r) {
    const CVector row = parse_vector(j[r], detail::child(at, r));
    if (r == 0) cols = row.size();
    if (row.size() != cols) {
      throw DocumentError(detail::child(at, r), "row has " + std::to_string(row.size()) + " entries, expected " +
                                                    std::to_string(cols));
    }
    data.insert(data.end(), row.begin(), row.end());
  }
  return CMatrix(rows, cols, std::move(data));
}

inline Coin parse_coin(const Json& j, std::size_t coin_dim, const std::string& at) {
  if (!j.is_object()) throw DocumentError(at, "expected an object");
  if (j.contains("matrix")) {
    const std::string mat_at = detail::child(at, "matrix");
    CMatrix m = parse_matrix(j["matrix"], mat_at);
    if (coin_dim != 0 && (m.rows() != coin_dim || m.cols() != coin_dim)) {
      throw DocumentError(mat_at, "coin is " + m.shape() + ", expected " + std::to_string(coin_dim) + "x" +
                                      std::to_string(coin_dim));
    }
    return detail::located(at, [&] { return Coin::from_matrix(std::move(m)); });
  }
  const Json& name_json = detail::member(j, "builtin", at);
  if (!name_json.is_string()) throw DocumentError(detail::child(at, "builtin"), "expected a string");
  const std::string name = name_json.get<std::string>();
  const int dim = static_cast<int>(coin_dim);
  if (name == "grover") return detail::located(at, [&] { return grover_coin(dim); });
  if (name == "fourier") return detail::located(at, [&] { return fourier_coin(dim); });
  if (name == "reflection") {
    const std::string v_at = detail::child(at, "vector");
    const CVector mu = parse_vector(detail::member(j, "vector", at), v_at);
    if (coin_dim != 0 && mu.size() != coin_dim)
      throw DocumentError(v_at, "vector has length " + std::to_string(mu.size()) + ", expected " +
                                    std::to_string(coin_dim));
    return detail::located(v_at, [&] { return reflection_coin(mu); });
  }
  if (name == "wkkk") {
    const double p = detail::number(detail::member(j, "p", at), detail::child(at, "p"));
    return detail::located(detail::child(at, "p"), [&] { return wkkk_coin(p); });
  }
  if (name == "sbj") {
    const double rho = detail::number(detail::member(j, "rho", at), detail::child(at, "rho"));
    return detail::located(detail::child(at, "rho"), [&] { return sbj_coin(rho); });
  }
  throw DocumentError(detail::child(at, "builtin"), "unknown coin '" + name + "'");
}

inline WalkKind parse_kind(const Json& doc) {
  if (!doc.contains("kind")) return WalkKind::Plain;
  const Json& k = doc["kind"];
  if (k == "plain") return WalkKind::Plain;
  if (k == "product") return WalkKind::Product;
  throw DocumentError("/kind", "expected \"plain\" or \"product\"");
}

inline std::size_t builtin_coin_dimension(const std::string& name, std::size_t d) {
  if (name == "std") return 2 * d;
  if (name == "lazy") return 2 * d + 1;
  if (name == "triangular6") return 6;
  if (name == "product-triangular3") return 3;
  if (name == "fourier2d") return 4;
  return 0;
}

inline Walk walk_from_json(const Json& doc) {
  if (!doc.is_object()) throw DocumentError("", "walk document must be an object");

  if (doc.contains("builtin")) {
    const Json& n = doc["builtin"];
    if (!n.is_string()) throw DocumentError("/builtin", "expected a string");
    const std::string name = n.get<std::string>();
    std::size_t d = 2;
    if (name == "std" || name == "lazy") {
      const int v = detail::integer(detail::member(doc, "dimension", ""), "/dimension");
      if (v < 1) throw DocumentError("/dimension", "dimension must be at least 1");
      d = static_cast<std::size_t>(v);
    }
    std::optional<Coin> coin;
    if (doc.contains("coin")) coin = parse_coin(doc["coin"], builtin_coin_dimension(name, d), "/coin");
    return detail::located("/builtin", [&] { return builtin_walk(name, d, std::move(coin)); });
  }

  const int dv = detail::integer(detail::member(doc, "dimension", ""), "/dimension");
  if (dv < 1) throw DocumentError("/dimension", "dimension must be at least 1");
  const auto d = static_cast<std::size_t>(dv);

  const Json& steps_json = detail::member(doc, "steps", "");
  if (!steps_json.is_array() || steps_json.empty()) throw DocumentError("/steps", "expected a non-empty array");
  std::vector<LatticePoint> steps;
  for (std::size_t a = 0; a < steps_json.size(); ++a) {
    const std::string at = detail::child("/steps", a);
    const Json& s = steps_json[a];
    if (!s.is_array()) throw DocumentError(at, "expected an integer vector");
    LatticePoint x;
    for (std::size_t j = 0; j < s.size(); ++j) x.push_back(detail::integer(s[j], detail::child(at, j)));
    steps.push_back(std::move(x));
  }
  StepSet step_set = detail::located("/steps", [&] { return StepSet(d, steps); });

  const Json& proj = detail::member(doc, "projections", "");
  std::optional<ResolutionOfUnity> res;
  if (proj.contains("partition")) {
    const Json& part = proj["partition"];
    if (!part.is_array()) throw DocumentError("/projections/partition", "expected an array of index lists");
    std::vector<std::vector<std::size_t>> blocks;
    std::size_t dim = 0;
    for (std::size_t a = 0; a < part.size(); ++a) {
      const std::string at = detail::child("/projections/partition", a);
      if (!part[a].is_array()) throw DocumentError(at, "expected an index list");
      std::vector<std::size_t> block;
      for (std::size_t i = 0; i < part[a].size(); ++i) {
        const int idx = detail::integer(part[a][i], detail::child(at, i));
        if (idx < 0) throw DocumentError(detail::child(at, i), "index must be non-negative");
        block.push_back(static_cast<std::size_t>(idx));
        dim = std::max(dim, static_cast<std::size_t>(idx) + 1);
      }
      blocks.push_back(std::move(block));
    }
    if (proj.contains("dimension")) {
      dim = static_cast<std::size_t>(detail::integer(proj["dimension"], "/projections/dimension"));
    }
    res = detail::located("/projections/partition", [&] { return ResolutionOfUnity::from_partition(dim, blocks); });
  } else if (proj.contains("matrices")) {
    const Json& mats = proj["matrices"];
    if (!mats.is_array() || mats.empty()) throw DocumentError("/projections/matrices", "expected a non-empty array");
    std::vector<CMatrix> ps;
    for (std::size_t a = 0; a < mats.size(); ++a) ps.push_back(parse_matrix(mats[a], detail::child("/projections/matrices", a)));
    res = detail::located("/projections/matrices", [&] { return ResolutionOfUnity(std::move(ps)); });
  } else {
    throw DocumentError("/projections", "expected \"partition\" or \"matrices\"");
  }

  Coin coin = parse_coin(detail::member(doc, "coin", ""), res->dimension(), "/coin");
  const WalkKind kind = parse_kind(doc);
  return detail::located("/projections", [&] { return Walk(std::move(step_set), std::move(*res), std::move(coin), kind); });
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DocumentError("", std::string("malformed JSON: ") + e.what());
  }
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError("", "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

inline Walk load_walk(const std::filesystem::path& path) { return walk_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Serialization

inline Json to_json(cplx v) { return Json::array({v.real(), v.imag()}); }

inline Json to_json(std::span<const cplx> v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline Json angles_json(const TorusPoint& z) {
  Json a = Json::array();
  for (const auto& c : z.coords()) a.push_back(std::arg(c));
  return a;
}

inline Json to_json(const SpectralReport& r) {
  Json j;
  j["omega"] = to_json(r.omega);
  j["criterion"] = r.criterion;
  j["verdict"] = to_string(r.verdict);
  j["min_sigma"] = r.min_sigma;
  j["max_sigma"] = r.max_sigma;
  j["points_tested"] = r.points_tested;
  j["points_skipped"] = r.points_skipped;
  j["points_vanishing"] = r.points_vanishing;
  j["points_separated"] = r.points_separated;
  Json off = Json::array();
  for (const auto& z : r.offending) off.push_back(angles_json(z));
  j["offending_angles"] = std::move(off);
  if (!r.witnesses.empty()) {
    Json ws = Json::array();
    for (const auto& w : r.witnesses) ws.push_back(Json{{"angles", angles_json(w.z)}, {"psi", to_json(w.psi)}});
    j["witnesses"] = std::move(ws);
  }
  return j;
}

inline Json grid_json(const TorusGrid& g) {
  return Json{{"dimension", g.dimension}, {"points_per_axis", g.points_per_axis}, {"offsets", g.offsets}};
}

inline Json to_json(const WienerCheck& w) {
  Json j;
  j["lhs"] = w.lhs;
  j["rhs"] = w.rhs;
  j["gap"] = w.gap;
  j["eigenvalues"] = to_json(w.eigenvalues);
  Json cs = Json::array();
  for (const auto& c : w.contributions) {
    cs.push_back(Json{{"omega", to_json(c.omega)},
                      {"weight", c.weight},
                      {"error_estimate", c.error_estimate},
                      {"method", c.method}});
  }
  j["contributions"] = std::move(cs);
  return j;
}

/// Two-space indented text with a trailing newline; doubles print in shortest
/// round-trip form, so dump(parse(dump(j))) == dump(j).
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace qwalk

#endif  // QWALK_DOCUMENT_HPP
