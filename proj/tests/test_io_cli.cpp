#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "coarse/common.hpp"
#include "coarse/graph.hpp"
#include "coarse/group.hpp"
#include "coarse/io.hpp"
#include "coarse/pou.hpp"
#include "coarse/rng.hpp"

#include "test_util.hpp"

using namespace coarse;
using nlohmann::json;
using testutil::throws_containing;

TEST_CASE("space json round trip preserves distances and labels") {
  Rng rng(811);
  for (int t = 0; t < 10; ++t) {
    FiniteMetricSpace X = testutil::random_grid_space(rng, 6 + rng.below(5));
    FiniteMetricSpace Y = parse_space(space_to_json(X));
    REQUIRE(Y.n == X.n);
    for (std::size_t i = 0; i < X.n; ++i) {
      for (std::size_t k = 0; k < X.n; ++k) CHECK(Y(i, k) == X(i, k));
    }
    CHECK(Y.labels.empty());
  }

  FiniteMetricSpace X = testutil::space_from_coords({0.0, 1.0, 3.5});
  X.labels = {"a", "b", "c"};
  FiniteMetricSpace Y = parse_space(space_to_json(X));
  CHECK(Y.labels == X.labels);
}

TEST_CASE("space parser pinpoints schema violations") {
  CHECK(throws_containing<validation_error>([] { parse_space(json::array()); },
                                            "expected an object"));
  CHECK(throws_containing<validation_error>([] { parse_space(json{{"dist", json::array()}}); },
                                            "/n: missing field"));
  CHECK(throws_containing<validation_error>(
      [] { parse_space(json{{"n", 2}, {"dist", {{0, 1}}}}); }, "/dist: has 1 rows, expected 2"));
  CHECK(throws_containing<validation_error>(
      [] { parse_space(json{{"n", 2}, {"dist", {{0, 1}, {1}}}}); },
      "/dist/1: has 1 entries, expected 2"));
  CHECK(throws_containing<validation_error>(
      [] { parse_space(json{{"n", 2}, {"dist", {{0, 1}, {"x", 0}}}}); },
      "/dist/1/0: expected a number"));
  CHECK(throws_containing<validation_error>(
      [] {
        parse_space(json{{"n", 2}, {"dist", {{0, 1}, {1, 0}}}, {"labels", {"only"}}});
      },
      "/labels: has 1 entries, expected 2"));
}

TEST_CASE("space parser surfaces pseudometric warnings") {
  json j{{"n", 2}, {"dist", {{0, 0}, {0, 0}}}};
  std::vector<std::string> warnings;
  parse_space(j, &warnings);
  REQUIRE(!warnings.empty());
  CHECK(warnings[0].find("pseudometric") != std::string::npos);
}

TEST_CASE("graph json round trip and schema errors") {
  Rng rng(812);
  for (int t = 0; t < 10; ++t) {
    Graph G = testutil::random_connected_graph(rng, 5 + rng.below(6), 3);
    Graph H = parse_graph(graph_to_json(G));
    CHECK(H.n == G.n);
    CHECK(H.edges == G.edges);
  }

  CHECK(throws_containing<validation_error>(
      [] { parse_graph(json{{"n", 3}, {"edges", {{0, 1, 2}}}}); }, "/edges/0: expected a pair"));
  CHECK(throws_containing<validation_error>(
      [] { parse_graph(json{{"n", 3}, {"edges", {{0, -1}}}}); },
      "/edges/0/1: expected a nonnegative integer"));
  CHECK(throws_containing<validation_error>([] { parse_graph(json{{"n", 3}}); },
                                            "/edges: missing field"));
}

TEST_CASE("cover json round trip runs the cover validator") {
  const FiniteMetricSpace X = graph_metric(cycle_graph(6));
  const Cover U = testutil::arc_cover(6, 3, 2, 3);
  Cover V = parse_cover(cover_to_json(U), X);
  REQUIRE(V.elements.size() == U.elements.size());
  for (std::size_t e = 0; e < U.elements.size(); ++e) {
    CHECK(V.elements[e].label == U.elements[e].label);
    CHECK(V.elements[e].points == U.elements[e].points);
  }

  CHECK(throws_containing<validation_error>(
      [&] { parse_cover(json{{"elements", {{{"points", {0, 1}}}}}}, X); },
      "/elements/0/label: missing field"));
  // Point 5 left uncovered: the instance validator fires after parsing.
  CHECK(throws_containing<validation_error>(
      [&] {
        parse_cover(json{{"elements",
                          {{{"label", "A"}, {"points", {0, 1, 2}}},
                           {{"label", "B"}, {"points", {3, 4}}}}}},
                    X);
      },
      "5"));
}

TEST_CASE("pou json round trip preserves values") {
  Rng rng(813);
  const FiniteMetricSpace X = testutil::random_grid_space(rng, 8);
  const PartitionOfUnity f = testutil::random_pou(rng, 8, 4);
  PartitionOfUnity g = parse_pou(pou_to_json(f), X);
  REQUIRE(g.labels == f.labels);
  REQUIRE(g.values.size() == f.values.size());
  for (std::size_t x = 0; x < f.values.size(); ++x) CHECK(sparse_equal(g.values[x], f.values[x]));

  json j = pou_to_json(f);
  j["values"]["abc"] = json::object();
  CHECK(throws_containing<validation_error>([&] { parse_pou(j, X); },
                                            "/values/abc: key is not a point index"));
  json j2 = pou_to_json(f);
  j2["values"]["99"] = json::object();
  CHECK(throws_containing<validation_error>([&] { parse_pou(j2, X); },
                                            "/values/99: point out of range"));
  json j3 = pou_to_json(f);
  j3["values"]["0"]["nosuch"] = 0.5;
  CHECK(throws_containing<validation_error>([&] { parse_pou(j3, X); },
                                            "/values/0/nosuch: unknown label"));
}

TEST_CASE("witness json round trip preserves the pair lists") {
  const FiniteMetricSpace X = graph_metric(cycle_graph(24));
  const PartitionOfUnity f = barycentric_from_cover(X, testutil::arc_cover(24, 24, 1, 12));
  const PropertyAWitness W = pou_to_witness(X, f, 2.0, 1.0);
  PropertyAWitness V = parse_witness(witness_to_json(W), X);
  CHECK(V.S_bound == W.S_bound);
  REQUIRE(V.A.size() == W.A.size());
  for (std::size_t x = 0; x < W.A.size(); ++x) CHECK(V.A[x] == W.A[x]);

  json j = witness_to_json(W);
  j["A"]["zzz"] = json::array();
  CHECK(throws_containing<validation_error>([&] { parse_witness(j, X); },
                                            "/A/zzz: key is not a point index"));
  json j2 = witness_to_json(W);
  j2["A"]["0"] = json::array({json::array({0, 1, 2})});
  CHECK(throws_containing<validation_error>([&] { parse_witness(j2, X); },
                                            "/A/0/0: expected a pair"));
  json j3 = witness_to_json(W);
  j3["S_bound"] = "huge";
  CHECK(throws_containing<validation_error>([&] { parse_witness(j3, X); },
                                            "/S_bound: expected a number or \"inf\""));
}

TEST_CASE("measure json round trip runs the measure validator") {
  Rng rng(814);
  const FiniteMetricSpace X = testutil::random_grid_space(rng, 7);
  const ProbabilityMeasure mu = testutil::random_measure(rng, 7);
  ProbabilityMeasure nu = parse_measure(measure_to_json(mu), X);
  CHECK(nu.weights == mu.weights);

  CHECK(throws_containing<validation_error>(
      [&] { parse_measure(json{{"weights", {0.5, "x"}}}, X); }, "/weights/1: expected a number"));
  CHECK(throws_containing<validation_error>(
      [&] {
        parse_measure(json{{"weights", {0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2}}}, X);
      },
      "sum"));
}

TEST_CASE("group json round trip preserves the normalized table") {
  FiniteGroup G = cyclic_group(6);
  FiniteGroup H = parse_group(group_to_json(G));
  CHECK(H.order == G.order);
  CHECK(H.table == G.table);
  CHECK(H.identity == G.identity);
  CHECK(H.generators == G.generators);

  // Parsing normalizes the generating set, exactly like the validator.
  json j = group_to_json(cyclic_group(4));
  j["generators"] = {0, 1};
  std::vector<std::string> warnings;
  FiniteGroup K = parse_group(j, &warnings);
  CHECK(K.generators == std::vector<std::size_t>{1, 3});
  bool dropped = false, added = false;
  for (const std::string& w : warnings) {
    if (w.find("dropped the identity") != std::string::npos) dropped = true;
    if (w.find("added inverses") != std::string::npos) added = true;
  }
  CHECK(dropped);
  CHECK(added);

  CHECK(throws_containing<validation_error>(
      [] {
        json bad = group_to_json(cyclic_group(3));
        bad["table"][0] = {0, 1};
        parse_group(bad);
      },
      "/table/0: has 2 entries, expected 3"));
}

TEST_CASE("reals serialize with an explicit infinity token") {
  CHECK(real_to_json(2.5) == json(2.5));
  CHECK(real_to_json(kInfinity) == json("inf"));
  CHECK(real_from_json(json(2.5), "/x") == 2.5);
  CHECK(real_from_json(json("inf"), "/x") == kInfinity);
  CHECK(throws_containing<validation_error>([] { real_from_json(json("lots"), "/x"); },
                                            "/x: expected a number or \"inf\""));
}

TEST_CASE("report json round trip") {
  Report r;
  r.op = "cheeger";
  r.inputs = json{{"graph", "c6.json"}, {"eps", 0.5}};
  r.results = json{{"constant", 0.6667}};
  r.certificate = "holds";
  r.violated = "";
  CHECK(report_from_json(report_to_json(r)) == r);

  Report f;
  f.op = "ula-scan";
  f.results = json{{"found", false}};
  f.certificate = "fails";
  f.violated = "no admissible element";
  CHECK(report_from_json(report_to_json(f)) == f);

  json bad = report_to_json(r);
  bad["certificate"] = "maybe";
  CHECK(throws_containing<validation_error>(
      [&] { report_from_json(bad); }, "/certificate: expected holds, fails, or not-applicable"));
  CHECK(throws_containing<validation_error>([] { report_from_json(json::object()); },
                                            "/op: missing field"));
}

TEST_CASE("json file loading reports the path on failure") {
  CHECK(throws_containing<validation_error>([] { load_json_file("/nonexistent/nope.json"); },
                                            "cannot open"));

  const std::string path = "io_test_broken.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK(throws_containing<validation_error>([&] { load_json_file(path); }, path));

  const std::string good = "io_test_good.json";
  {
    std::ofstream out(good);
    out << R"({"n": 1, "dist": [[0]]})";
  }
  FiniteMetricSpace X = parse_space(load_json_file(good));
  CHECK(X.n == 1);
  std::remove(path.c_str());
  std::remove(good.c_str());
}
