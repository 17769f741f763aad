#ifndef DIGAPPROX_SERIALIZATION_HPP
#define DIGAPPROX_SERIALIZATION_HPP

// JSON and GraphViz forms of assignments, approximations, caches and edge
// weights. All node numbers are one-based on the wire.

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "digapprox/errors.hpp"
#include "digapprox/graph_core.hpp"
#include "digapprox/mwdst.hpp"

namespace digapprox {

using Json = nlohmann::json;

namespace detail {

inline Json one_based(const ParentSet& set) {
  Json out = Json::array();
  for (NodeId j : set) out.push_back(j + 1);
  return out;
}

inline ParentSet zero_based(const Json& members, int m) {
  if (!members.is_array()) throw ValidationError("parent set must be a JSON array");
  ParentSet set;
  for (const auto& v : members) {
    if (!v.is_number_integer()) throw ValidationError("parent set members must be integers");
    const int j = v.get<int>();
    if (j < 1 || j > m) throw ValidationError("parent " + std::to_string(j) + " out of range");
    set.push_back(j - 1);
  }
  return canonical(std::move(set));
}

template <typename T>
T required(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(std::string("missing JSON field \"") + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ValidationError(std::string("bad JSON field \"") + key + "\"");
  }
}

}  // namespace detail

inline Json to_json(const ParentAssignment& assignment, int K) {
  Json parents = Json::array();
  for (const auto& p : assignment.parents()) parents.push_back(detail::one_based(p));
  return Json{{"m", assignment.m()}, {"K", K}, {"parents", parents}};
}

inline ParentAssignment assignment_from_json(const Json& j) {
  const int m = detail::required<int>(j, "m");
  const Json& parents = j.at("parents");
  if (!parents.is_array() || static_cast<int>(parents.size()) != m) {
    throw ValidationError("\"parents\" must list one set per node");
  }
  std::vector<ParentSet> sets;
  for (const auto& p : parents) sets.push_back(detail::zero_based(p, m));
  return ParentAssignment(std::move(sets));
}

inline Json to_json(const ScoredApproximation& approx, int K) {
  Json out = to_json(approx.assignment, K);
  out["score"] = approx.score;
  if (approx.root) {
    out["root"] = *approx.root + 1;
    Json tree = Json::array();
    for (const auto& p : approx.tree_parent) tree.push_back(p ? Json(*p + 1) : Json(nullptr));
    out["tree_parent"] = tree;
  }
  return out;
}

inline Json to_json(const DirectedInfoCache& cache) {
  Json entries = Json::array();
  for (NodeId i = 0; i < cache.m(); ++i) {
    for (const auto& [set, value] : cache.entries(i)) {
      entries.push_back(Json{{"target", i + 1}, {"set", detail::one_based(set)}, {"value", value}});
    }
  }
  return Json{{"m", cache.m()}, {"K", cache.K()}, {"entries", entries}};
}

inline DirectedInfoCache cache_from_json(const Json& j) {
  const int m = detail::required<int>(j, "m");
  const int K = detail::required<int>(j, "K");
  DirectedInfoCache cache(m, K);
  if (!j.contains("entries") || !j.at("entries").is_array()) {
    throw ValidationError("cache JSON needs an \"entries\" array");
  }
  for (const auto& e : j.at("entries")) {
    const int target = detail::required<int>(e, "target");
    if (target < 1 || target > m) throw ValidationError("cache target out of range");
    const double value = detail::required<double>(e, "value");
    cache.insert(target - 1, detail::zero_based(e.at("set"), m), value);
  }
  return cache;
}

/// Edge weights as {"m": m, "weights": rows} with rows[j][i] the weight of
/// j -> i (one-based nodes, zero-based rows) and null for forbidden edges.
inline Json to_json(const EdgeWeights& weights) {
  Json rows = Json::array();
  for (NodeId j = 0; j < weights.m(); ++j) {
    Json row = Json::array();
    for (NodeId i = 0; i < weights.m(); ++i) {
      row.push_back(weights.allowed(j, i) ? Json(weights.weight(j, i)) : Json(nullptr));
    }
    rows.push_back(row);
  }
  return Json{{"m", weights.m()}, {"weights", rows}};
}

inline EdgeWeights weights_from_json(const Json& j) {
  const int m = detail::required<int>(j, "m");
  EdgeWeights w(m);
  const Json& rows = j.at("weights");
  if (!rows.is_array() || static_cast<int>(rows.size()) != m) {
    throw ValidationError("\"weights\" must have m rows");
  }
  for (NodeId a = 0; a < m; ++a) {
    if (!rows[a].is_array() || static_cast<int>(rows[a].size()) != m) {
      throw ValidationError("each weight row must have m entries");
    }
    for (NodeId b = 0; b < m; ++b) {
      if (a == b) continue;
      if (rows[a][b].is_null()) {
        w.forbid(a, b);
      } else {
        w.set(a, b, rows[a][b].get<double>());
      }
    }
  }
  return w;
}

/// GraphViz digraph with an edge j -> i for every parent; the root of a
/// connected approximation is drawn doubled and tree edges bold.
inline std::string to_dot(const ParentAssignment& assignment, std::optional<NodeId> root = {},
                          const std::vector<std::optional<NodeId>>& tree_parent = {}) {
  std::ostringstream os;
  os << "digraph approximation {\n";
  for (NodeId i = 0; i < assignment.m(); ++i) {
    os << "  X" << i + 1;
    if (root && *root == i) os << " [shape=doublecircle, style=bold]";
    os << ";\n";
  }
  for (NodeId i = 0; i < assignment.m(); ++i) {
    for (NodeId j : assignment[i]) {
      os << "  X" << j + 1 << " -> X" << i + 1;
      const bool tree = i < static_cast<NodeId>(tree_parent.size()) && tree_parent[i] &&
                        *tree_parent[i] == j;
      if (tree) os << " [style=bold]";
      os << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

inline std::string to_dot(const ScoredApproximation& approx) {
  return to_dot(approx.assignment, approx.root, approx.tree_parent);
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace digapprox

#endif  // DIGAPPROX_SERIALIZATION_HPP
