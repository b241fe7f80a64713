#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "coarse/cover.hpp"
#include "coarse/graph.hpp"
#include "coarse/group.hpp"
#include "coarse/measures.hpp"
#include "coarse/metric_space.hpp"
#include "coarse/pou.hpp"

namespace coarse {

// Reads and parses a JSON file; validation_error on a missing file or a
// syntax error, carrying the path.
nlohmann::json load_json_file(const std::string& path);

// Parsers validate the instance before returning. Schema violations raise
// validation_error with a JSON-pointer location; invariant violations raise
// whatever the validator raises. Warnings (pseudometric spaces, normalized
// generating sets) are appended when a sink is given.

// {"n": int, "dist": [[float]], "labels": [string]?}
FiniteMetricSpace parse_space(const nlohmann::json& j,
                              std::vector<std::string>* warnings = nullptr);
nlohmann::json space_to_json(const FiniteMetricSpace& X);

// {"n": int, "edges": [[int,int]]}
Graph parse_graph(const nlohmann::json& j);
nlohmann::json graph_to_json(const Graph& G);

// {"elements": [{"label": string, "points": [int]}]}
Cover parse_cover(const nlohmann::json& j, const FiniteMetricSpace& X);
nlohmann::json cover_to_json(const Cover& U);

// {"labels": [string], "values": {"point_index": {"label": float}}}
PartitionOfUnity parse_pou(const nlohmann::json& j, const FiniteMetricSpace& X);
nlohmann::json pou_to_json(const PartitionOfUnity& f);

// {"S_bound": float, "A": {"point_index": [[point, int]]}}
PropertyAWitness parse_witness(const nlohmann::json& j, const FiniteMetricSpace& X);
nlohmann::json witness_to_json(const PropertyAWitness& W);

// {"weights": [float]}
ProbabilityMeasure parse_measure(const nlohmann::json& j, const FiniteMetricSpace& X);
nlohmann::json measure_to_json(const ProbabilityMeasure& mu);

// {"order": int, "table": [[int]], "identity": int, "generators": [int]}
FiniteGroup parse_group(const nlohmann::json& j, std::vector<std::string>* warnings = nullptr);
nlohmann::json group_to_json(const FiniteGroup& G);

// Infinity-aware real: finite numbers as-is, +inf as the string "inf".
nlohmann::json real_to_json(double v);
double real_from_json(const nlohmann::json& j, const std::string& where);

struct Report {
  std::string op;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  std::string certificate;  // "holds" | "fails" | "not-applicable"
  std::string violated;     // populated when certificate == "fails"

  bool operator==(const Report&) const = default;
};

nlohmann::json report_to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

}  // namespace coarse
