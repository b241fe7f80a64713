#include "coarse/io.hpp"

#include <algorithm>
#include <fstream>

#include "coarse/common.hpp"

namespace coarse {
namespace {

using nlohmann::json;

const json& need(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw validation_error(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw validation_error(where + "/" + key + ": missing field");
  return *it;
}

std::size_t as_index(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw validation_error(where + ": expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

double as_real(const json& j, const std::string& where) {
  if (!j.is_number()) throw validation_error(where + ": expected a number");
  return j.get<double>();
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw validation_error(where + ": expected a string");
  return j.get<std::string>();
}

const json& as_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw validation_error(where + ": expected an array");
  return j;
}

std::vector<std::size_t> index_array(const json& j, const std::string& where) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < as_array(j, where).size(); ++i) {
    out.push_back(as_index(j[i], where + "/" + std::to_string(i)));
  }
  return out;
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw validation_error(path + ": " + e.what());
  }
  return j;
}

FiniteMetricSpace parse_space(const json& j, std::vector<std::string>* warnings) {
  FiniteMetricSpace X;
  X.n = as_index(need(j, "n", ""), "/n");
  const json& rows = as_array(need(j, "dist", ""), "/dist");
  if (rows.size() != X.n) {
    throw validation_error("/dist: has " + std::to_string(rows.size()) + " rows, expected " +
                           std::to_string(X.n));
  }
  X.dist.resize(X.n * X.n);
  for (std::size_t i = 0; i < X.n; ++i) {
    const std::string where = "/dist/" + std::to_string(i);
    const json& row = as_array(rows[i], where);
    if (row.size() != X.n) {
      throw validation_error(where + ": has " + std::to_string(row.size()) +
                             " entries, expected " + std::to_string(X.n));
    }
    for (std::size_t k = 0; k < X.n; ++k) {
      X.dist[i * X.n + k] = as_real(row[k], where + "/" + std::to_string(k));
    }
  }
  if (j.contains("labels")) {
    const json& labels = as_array(j["labels"], "/labels");
    if (labels.size() != X.n) {
      throw validation_error("/labels: has " + std::to_string(labels.size()) +
                             " entries, expected " + std::to_string(X.n));
    }
    for (std::size_t i = 0; i < X.n; ++i) {
      X.labels.push_back(as_string(labels[i], "/labels/" + std::to_string(i)));
    }
  }
  const SpaceValidation v = validate_space(X);
  if (warnings) {
    if (v.pseudometric) warnings->push_back("distinct points at distance 0: a pseudometric");
    warnings->insert(warnings->end(), v.notes.begin(), v.notes.end());
  }
  return X;
}

json space_to_json(const FiniteMetricSpace& X) {
  json rows = json::array();
  for (std::size_t i = 0; i < X.n; ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < X.n; ++k) row.push_back(X(i, k));
    rows.push_back(std::move(row));
  }
  json j{{"n", X.n}, {"dist", std::move(rows)}};
  if (!X.labels.empty()) j["labels"] = X.labels;
  return j;
}

Graph parse_graph(const json& j) {
  Graph G;
  G.n = as_index(need(j, "n", ""), "/n");
  const json& edges = as_array(need(j, "edges", ""), "/edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "/edges/" + std::to_string(i);
    const json& e = as_array(edges[i], where);
    if (e.size() != 2) throw validation_error(where + ": expected a pair");
    G.edges.emplace_back(as_index(e[0], where + "/0"), as_index(e[1], where + "/1"));
  }
  validate_graph(G);
  return G;
}

json graph_to_json(const Graph& G) {
  json edges = json::array();
  for (const auto& [a, b] : G.edges) edges.push_back(json::array({a, b}));
  return json{{"n", G.n}, {"edges", std::move(edges)}};
}

Cover parse_cover(const json& j, const FiniteMetricSpace& X) {
  Cover U;
  const json& elements = as_array(need(j, "elements", ""), "/elements");
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const std::string where = "/elements/" + std::to_string(i);
    CoverElement e;
    e.label = as_string(need(elements[i], "label", where), where + "/label");
    e.points = index_array(need(elements[i], "points", where), where + "/points");
    std::sort(e.points.begin(), e.points.end());
    e.points.erase(std::unique(e.points.begin(), e.points.end()), e.points.end());
    U.elements.push_back(std::move(e));
  }
  validate_cover(X, U);
  return U;
}

json cover_to_json(const Cover& U) {
  json elements = json::array();
  for (const CoverElement& e : U.elements) {
    elements.push_back(json{{"label", e.label}, {"points", e.points}});
  }
  return json{{"elements", std::move(elements)}};
}

PartitionOfUnity parse_pou(const json& j, const FiniteMetricSpace& X) {
  PartitionOfUnity f;
  const json& labels = as_array(need(j, "labels", ""), "/labels");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    f.labels.push_back(as_string(labels[i], "/labels/" + std::to_string(i)));
  }
  const json& values = need(j, "values", "");
  if (!values.is_object()) throw validation_error("/values: expected an object");
  f.values.resize(X.n);
  for (const auto& [key, row] : values.items()) {
    const std::string where = "/values/" + key;
    std::size_t x = 0;
    try {
      x = std::stoull(key);
    } catch (...) {
      throw validation_error(where + ": key is not a point index");
    }
    if (x >= X.n) throw validation_error(where + ": point out of range");
    if (!row.is_object()) throw validation_error(where + ": expected an object");
    std::vector<std::pair<std::size_t, double>> entries;
    for (const auto& [label, w] : row.items()) {
      const auto it = std::find(f.labels.begin(), f.labels.end(), label);
      if (it == f.labels.end()) {
        throw validation_error(where + "/" + label + ": unknown label");
      }
      entries.emplace_back(static_cast<std::size_t>(it - f.labels.begin()),
                           as_real(w, where + "/" + label));
    }
    f.values[x] = make_sparse(std::move(entries));
  }
  validate_pou(X, f);
  return f;
}

json pou_to_json(const PartitionOfUnity& f) {
  json values = json::object();
  for (std::size_t x = 0; x < f.values.size(); ++x) {
    json row = json::object();
    for (const auto& [id, w] : f.values[x].entries) row[f.labels[id]] = w;
    values[std::to_string(x)] = std::move(row);
  }
  return json{{"labels", f.labels}, {"values", std::move(values)}};
}

PropertyAWitness parse_witness(const json& j, const FiniteMetricSpace& X) {
  PropertyAWitness W;
  W.S_bound = real_from_json(need(j, "S_bound", ""), "/S_bound");
  const json& A = need(j, "A", "");
  if (!A.is_object()) throw validation_error("/A: expected an object");
  W.A.resize(X.n);
  for (const auto& [key, rows] : A.items()) {
    const std::string where = "/A/" + key;
    std::size_t x = 0;
    try {
      x = std::stoull(key);
    } catch (...) {
      throw validation_error(where + ": key is not a point index");
    }
    if (x >= X.n) throw validation_error(where + ": point out of range");
    for (std::size_t i = 0; i < as_array(rows, where).size(); ++i) {
      const std::string pair_where = where + "/" + std::to_string(i);
      const json& pair = as_array(rows[i], pair_where);
      if (pair.size() != 2) throw validation_error(pair_where + ": expected a pair");
      W.A[x].emplace_back(as_index(pair[0], pair_where + "/0"),
                          as_index(pair[1], pair_where + "/1"));
    }
    std::sort(W.A[x].begin(), W.A[x].end());
  }
  validate_witness(X, W);
  return W;
}

json witness_to_json(const PropertyAWitness& W) {
  json A = json::object();
  for (std::size_t x = 0; x < W.A.size(); ++x) {
    json rows = json::array();
    for (const auto& [p, level] : W.A[x]) rows.push_back(json::array({p, level}));
    A[std::to_string(x)] = std::move(rows);
  }
  return json{{"S_bound", real_to_json(W.S_bound)}, {"A", std::move(A)}};
}

ProbabilityMeasure parse_measure(const json& j, const FiniteMetricSpace& X) {
  ProbabilityMeasure mu;
  const json& weights = as_array(need(j, "weights", ""), "/weights");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    mu.weights.push_back(as_real(weights[i], "/weights/" + std::to_string(i)));
  }
  validate_measure(X, mu);
  return mu;
}

json measure_to_json(const ProbabilityMeasure& mu) { return json{{"weights", mu.weights}}; }

FiniteGroup parse_group(const json& j, std::vector<std::string>* warnings) {
  FiniteGroup G;
  G.order = as_index(need(j, "order", ""), "/order");
  const json& rows = as_array(need(j, "table", ""), "/table");
  if (rows.size() != G.order) {
    throw validation_error("/table: has " + std::to_string(rows.size()) + " rows, expected " +
                           std::to_string(G.order));
  }
  for (std::size_t a = 0; a < G.order; ++a) {
    const std::string where = "/table/" + std::to_string(a);
    const json& row = as_array(rows[a], where);
    if (row.size() != G.order) {
      throw validation_error(where + ": has " + std::to_string(row.size()) +
                             " entries, expected " + std::to_string(G.order));
    }
    for (std::size_t b = 0; b < G.order; ++b) {
      G.table.push_back(as_index(row[b], where + "/" + std::to_string(b)));
    }
  }
  G.identity = as_index(need(j, "identity", ""), "/identity");
  G.generators = index_array(need(j, "generators", ""), "/generators");
  const GroupValidation v = validate_group(G);
  if (warnings) warnings->insert(warnings->end(), v.notes.begin(), v.notes.end());
  return G;
}

json group_to_json(const FiniteGroup& G) {
  json rows = json::array();
  for (std::size_t a = 0; a < G.order; ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < G.order; ++b) row.push_back(G.mul(a, b));
    rows.push_back(std::move(row));
  }
  return json{{"order", G.order},
              {"table", std::move(rows)},
              {"identity", G.identity},
              {"generators", G.generators}};
}

json real_to_json(double v) {
  if (v == kInfinity) return json("inf");
  return json(v);
}

double real_from_json(const json& j, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInfinity;
    throw validation_error(where + ": expected a number or \"inf\"");
  }
  return as_real(j, where);
}

json report_to_json(const Report& r) {
  return json{{"op", r.op},
              {"inputs", r.inputs},
              {"results", r.results},
              {"certificate", r.certificate},
              {"violated", r.violated}};
}

Report report_from_json(const json& j) {
  Report r;
  r.op = as_string(need(j, "op", ""), "/op");
  r.inputs = need(j, "inputs", "");
  r.results = need(j, "results", "");
  r.certificate = as_string(need(j, "certificate", ""), "/certificate");
  r.violated = as_string(need(j, "violated", ""), "/violated");
  if (r.certificate != "holds" && r.certificate != "fails" &&
      r.certificate != "not-applicable") {
    throw validation_error("/certificate: expected holds, fails, or not-applicable");
  }
  return r;
}

}  // namespace coarse
