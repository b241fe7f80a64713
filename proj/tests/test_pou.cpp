#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "coarse/common.hpp"
#include "coarse/cover.hpp"
#include "coarse/graph.hpp"
#include "coarse/l1.hpp"
#include "coarse/metric_space.hpp"
#include "coarse/pou.hpp"
#include "coarse/rng.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace coarse;
using namespace testutil;

namespace {

PartitionOfUnity two_block_pou() {
  // {0,1} -> L, {2,3} -> R on the 4-point path
  PartitionOfUnity f;
  f.labels = {"L", "R"};
  f.values = {make_sparse({{0, 1.0}}), make_sparse({{0, 1.0}}), make_sparse({{1, 1.0}}),
              make_sparse({{1, 1.0}})};
  return f;
}

}  // namespace

TEST_CASE("validate_pou names the failing point") {
  FiniteMetricSpace X = graph_metric(path_graph(3));
  PartitionOfUnity f;
  f.labels = {"A", "B"};
  f.values = {make_sparse({{0, 1.0}}), make_sparse({{0, 0.5}, {1, 0.5}}),
              make_sparse({{1, 1.0}})};
  CHECK_NOTHROW(validate_pou(X, f));

  SUBCASE("bad total") {
    f.values[1] = make_sparse({{0, 0.5}, {1, 0.4}});
    CHECK(throws_containing<validation_error>([&] { validate_pou(X, f); }, "point 1"));
  }
  SUBCASE("negative weight") {
    f.values[2] = make_sparse({{0, 1.5}, {1, -0.5}});
    CHECK(throws_containing<validation_error>([&] { validate_pou(X, f); }, "point 2"));
  }
  SUBCASE("label id out of range") {
    f.values[0] = make_sparse({{7, 1.0}});
    CHECK(throws_containing<validation_error>([&] { validate_pou(X, f); }, "7"));
  }
  SUBCASE("wrong point count") {
    f.values.pop_back();
    CHECK_THROWS_AS(validate_pou(X, f), validation_error);
  }
}

TEST_CASE("barycentric flag detects uniform carriers") {
  PartitionOfUnity f = two_block_pou();
  CHECK(barycentric_flag(f).is_barycentric);
  f.values[0] = make_sparse({{0, 0.75}, {1, 0.25}});
  CHECK(!barycentric_flag(f).is_barycentric);
  f.values[0] = make_sparse({{0, 0.5}, {1, 0.5}});
  auto flag = barycentric_flag(f);
  CHECK(flag.is_barycentric);
  CHECK(flag.carrier_sizes == std::vector<std::size_t>{2, 1, 1, 1});
}

TEST_CASE("pou metrics on the two-block path partition") {
  FiniteMetricSpace X = graph_metric(path_graph(4));
  PartitionOfUnity f = two_block_pou();
  auto m = pou_metrics(X, f, 1.5);
  CHECK(m.lipschitz_number == doctest::Approx(1.0));
  CHECK(m.coboundedness == 1.0);
  CHECK(m.lebesgue == 1.0);
  REQUIRE(m.variation_at_r.has_value());
  CHECK(*m.variation_at_r == doctest::Approx(2.0));

  auto pre = carrier_preimages(X, f);
  REQUIRE(pre.size() == 2);
  CHECK(pre[0] == std::vector<std::size_t>{0, 1});
  CHECK(pre[1] == std::vector<std::size_t>{2, 3});
}

TEST_CASE("simplex bounds: frozen cases and the sandwich on random pairs") {
  SUBCASE("equal sizes make lower1 exact") {
    auto b = simplex_bounds({0, 1}, {1, 2});
    CHECK(b.lower1 == doctest::Approx(1.0));
    CHECK(b.lower2 == doctest::Approx(1.0));
    CHECK(b.exact == doctest::Approx(1.0));
    CHECK(b.upper == doctest::Approx(2.0));
  }
  SUBCASE("disjoint sets sit at the l1 diameter") {
    auto b = simplex_bounds({0, 1, 2}, {5});
    CHECK(b.exact == doctest::Approx(2.0));
    CHECK(b.upper >= b.exact);
  }
  SUBCASE("identical sets") {
    auto b = simplex_bounds({3, 4}, {3, 4});
    CHECK(b.lower1 == 0.0);
    CHECK(b.exact == 0.0);
    CHECK(b.upper == 0.0);
  }
  SUBCASE("nested sets") {
    // A = {0..3}, B = {0}: exact = 3/4 + |1/4-1| = 1.5
    auto b = simplex_bounds({0, 1, 2, 3}, {0});
    CHECK(b.lower1 == doctest::Approx(0.75));
    CHECK(b.exact == doctest::Approx(1.5));
    CHECK(b.upper == doctest::Approx(6.0));
  }
  SUBCASE("random sandwich") {
    Rng rng(41);
    for (int iter = 0; iter < 2000; ++iter) {
      auto A = random_subset(rng, 20);
      auto B = random_subset(rng, 20);
      auto b = simplex_bounds(A, B);
      CHECK(le(b.lower1, b.lower2));
      CHECK(le(b.lower2, b.exact));
      CHECK(le(b.exact, b.upper));
    }
  }
  SUBCASE("empty input is rejected") {
    CHECK_THROWS_AS(simplex_bounds({}, {0}), validation_error);
  }
}

TEST_CASE("normalize scales rows to norm 1 and rejects degenerate rows") {
  FiniteMetricSpace X = graph_metric(path_graph(2));
  SUBCASE("scaling") {
    auto f = normalize({"A", "B"}, {make_sparse({{0, 2.0}, {1, 6.0}}), make_sparse({{1, 5.0}})});
    validate_pou(X, f);
    CHECK(f.values[0].entries[0].second == doctest::Approx(0.25));
    CHECK(f.values[0].entries[1].second == doctest::Approx(0.75));
    CHECK(f.values[1].entries[0].second == doctest::Approx(1.0));
  }
  SUBCASE("zero row") {
    CHECK(throws_containing<validation_error>(
        [&] { normalize({"A"}, {make_sparse({{0, 1.0}}), make_sparse({})}); }, "zero total"));
  }
  SUBCASE("negative entry") {
    CHECK_THROWS_AS(normalize({"A", "B"},
                              {make_sparse({{0, 2.0}, {1, -1.0}}), make_sparse({{0, 1.0}})}),
                    validation_error);
  }
}

TEST_CASE("contract preserves totals, never increases lipschitz, never shrinks lebesgue") {
  Rng rng(42);
  for (int iter = 0; iter < 15; ++iter) {
    FiniteMetricSpace X = random_grid_space(rng, 4 + rng.below(8));
    std::size_t k = 3 + rng.below(4);
    PartitionOfUnity f = random_pou(rng, X.n, k);
    std::size_t k2 = 1 + rng.below(2);
    std::vector<std::size_t> alpha(k);
    std::vector<std::string> new_labels;
    for (std::size_t w = 0; w < k2; ++w) new_labels.push_back("M" + std::to_string(w));
    bool used0 = false;
    for (std::size_t v = 0; v < k; ++v) {
      alpha[v] = rng.below(k2);
      if (alpha[v] == 0) used0 = true;
    }
    if (!used0) alpha[0] = 0;
    for (std::size_t w = 1; w < k2; ++w) {
      if (std::find(alpha.begin(), alpha.end(), w) == alpha.end()) alpha[rng.below(k)] = w;
    }

    PartitionOfUnity g = contract(f, alpha, new_labels);
    validate_pou(X, g);
    auto mf = pou_metrics(X, f);
    auto mg = pou_metrics(X, g);
    CHECK(le(mg.lipschitz_number, mf.lipschitz_number));
    CHECK(ge(mg.lebesgue, mf.lebesgue));
    for (std::size_t x = 0; x < X.n; ++x) {
      for (std::size_t y = 0; y < X.n; ++y) {
        CHECK(le(l1_distance(g.values[x], g.values[y]), l1_distance(f.values[x], f.values[y])));
      }
    }
  }
}

TEST_CASE("contract validates the label map") {
  PartitionOfUnity f = two_block_pou();
  CHECK(throws_containing<validation_error>(
      [&] { contract(f, {0}, {"M"}); }, "label map"));
  CHECK(throws_containing<validation_error>(
      [&] { contract(f, {0, 5}, {"M"}); }, "outside"));
  CHECK(throws_containing<validation_error>(
      [&] { contract(f, {0, 0}, {"M", "N"}); }, "misses"));
}

TEST_CASE("barycentric_from_cover spreads points over their horizons") {
  FiniteMetricSpace X = graph_metric(cycle_graph(6));
  Cover U = arc_cover(6, 6, 1, 3);
  PartitionOfUnity f = barycentric_from_cover(X, U);
  validate_pou(X, f);
  CHECK(barycentric_flag(f).is_barycentric);
  for (std::size_t x = 0; x < X.n; ++x) {
    CHECK(f.values[x].entries.size() == 3);  // each point sits in three arcs
    for (auto& [id, w] : f.values[x].entries) CHECK(w == doctest::Approx(1.0 / 3.0));
  }
  auto m = pou_metrics(X, f);
  CHECK(m.coboundedness == 2.0);
}

TEST_CASE("barycentric expansion preserves the metric picture and contracts back") {
  Rng rng(43);
  for (int iter = 0; iter < 30; ++iter) {
    FiniteMetricSpace X = random_grid_space(rng, 3 + rng.below(8));
    std::size_t k = 2 + rng.below(4);
    long long m = 2 + static_cast<long long>(rng.below(6));
    IntegerWeights F;
    for (std::size_t v = 0; v < k; ++v) F.labels.push_back("V" + std::to_string(v));
    for (std::size_t x = 0; x < X.n; ++x) {
      // random composition of m over the k labels
      std::vector<long long> row(k, 0);
      for (long long t = 0; t < m; ++t) row[rng.below(k)] += 1;
      std::vector<std::pair<std::size_t, long long>> entries;
      for (std::size_t v = 0; v < k; ++v) {
        if (row[v] > 0) entries.push_back({v, row[v]});
      }
      F.values.push_back(entries);
    }

    Expansion e = barycentric_expansion(X, F);
    validate_pou(X, e.pou);
    auto flag = barycentric_flag(e.pou);
    CHECK(flag.is_barycentric);
    for (std::size_t x = 0; x < X.n; ++x) {
      CHECK(flag.carrier_sizes[x] == static_cast<std::size_t>(m));
    }

    std::vector<SparseVec> raw;
    for (const auto& row : F.values) {
      std::vector<std::pair<std::size_t, double>> entries;
      for (auto& [v, c] : row) entries.push_back({v, static_cast<double>(c)});
      raw.push_back(make_sparse(std::move(entries)));
    }
    PartitionOfUnity base = normalize(F.labels, std::move(raw));

    for (std::size_t x = 0; x < X.n; ++x) {
      for (std::size_t y = x + 1; y < X.n; ++y) {
        CHECK(nearly_equal(l1_distance(e.pou.values[x], e.pou.values[y]),
                           l1_distance(base.values[x], base.values[y])));
      }
    }
    PartitionOfUnity back = contract(e.pou, e.parent, F.labels);
    for (std::size_t x = 0; x < X.n; ++x) {
      CHECK(sparse_equal(back.values[x], base.values[x]));
    }
    auto me = pou_metrics(X, e.pou);
    auto mb = pou_metrics(X, base);
    CHECK(nearly_equal(me.lipschitz_number, mb.lipschitz_number));
    CHECK(nearly_equal(me.coboundedness, mb.coboundedness));
    CHECK(nearly_equal(me.lebesgue, mb.lebesgue));
  }
}

TEST_CASE("integer weights must have a constant per-point total") {
  FiniteMetricSpace X = graph_metric(path_graph(2));
  IntegerWeights F;
  F.labels = {"A", "B"};
  F.values = {{{0, 3}}, {{0, 1}, {1, 1}}};
  CHECK(throws_containing<validation_error>([&] { barycentric_expansion(X, F); },
                                            "totals differ"));
}

TEST_CASE("greedy ball partition on the 4-path") {
  FiniteMetricSpace X = graph_metric(path_graph(4));
  std::vector<std::size_t> base{0, 1, 2, 3};
  GreedyBallResult r = greedy_ball_pou(X, base, 1.0);
  REQUIRE(r.cover.elements.size() == 3);
  CHECK(r.cover.elements[0].label == "W1");
  CHECK(r.cover.elements[0].points == std::vector<std::size_t>{0, 1});
  CHECK(r.cover.elements[1].points == std::vector<std::size_t>{2});
  CHECK(r.cover.elements[2].points == std::vector<std::size_t>{3});
  auto m = pou_metrics(X, r.pou);
  CHECK(le(m.coboundedness, 6.0));
  CHECK(ge(m.lebesgue, 1.0));
}

TEST_CASE("greedy ball partition requires a dense base") {
  FiniteMetricSpace X = graph_metric(path_graph(4));
  CHECK(throws_containing<precondition_error>(
      [&] { greedy_ball_pou(X, {0}, 1.0); }, "not dense"));
  CHECK_THROWS_AS(greedy_ball_pou(X, {0, 9}, 1.0), precondition_error);
  CHECK_THROWS_AS(greedy_ball_pou(X, {0, 1, 2, 3}, 0.0), precondition_error);
}

TEST_CASE("greedy ball postconditions on random spaces") {
  Rng rng(44);
  for (int iter = 0; iter < 15; ++iter) {
    FiniteMetricSpace X = random_grid_space(rng, 4 + rng.below(12));
    double diam = space_diameter(X);
    double r = 0.25 + rng.real() * std::max(diam, 0.5);
    std::vector<std::size_t> base(X.n);
    for (std::size_t i = 0; i < X.n; ++i) base[i] = i;
    GreedyBallResult g = greedy_ball_pou(X, base, r);
    validate_cover(X, g.cover);
    validate_pou(X, g.pou);
    auto m = pou_metrics(X, g.pou);
    CHECK(le(m.coboundedness, 6.0 * r));
    CHECK(ge(m.lebesgue, r));
  }
}

TEST_CASE("relabel_product anchors carriers inside their preimages") {
  FiniteMetricSpace X = graph_metric(path_graph(4));
  PartitionOfUnity f = two_block_pou();
  RelabelResult r = relabel_product(X, f, 1.0);
  REQUIRE(r.g.labels.size() == 2);
  CHECK(r.g.labels[0] == "0:1");
  CHECK(r.g.labels[1] == "2:1");
  CHECK(r.new_label_pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(r.new_label_pairs[1] == std::pair<std::size_t, std::size_t>{2, 1});
  for (std::size_t x = 0; x < X.n; ++x) {
    CHECK(sparse_equal(r.g.values[x], f.values[x]));
  }
  CHECK(throws_containing<precondition_error>(
      [&] { relabel_product(X, f, 0.5); }, "diameter"));
}

TEST_CASE("witness validation names the failing point") {
  FiniteMetricSpace X = graph_metric(path_graph(3));
  PropertyAWitness W;
  W.S_bound = 1.0;
  W.A = {{{0, 1}}, {{0, 1}, {1, 1}}, {{2, 1}}};
  CHECK_NOTHROW(validate_witness(X, W));

  SUBCASE("empty set") {
    W.A[1].clear();
    CHECK(throws_containing<validation_error>([&] { validate_witness(X, W); }, "point 1"));
  }
  SUBCASE("level zero") {
    W.A[0] = {{0, 0}};
    CHECK(throws_containing<validation_error>([&] { validate_witness(X, W); }, "level 0"));
  }
  SUBCASE("reach beyond the bound") {
    W.A[0] = {{2, 1}};
    CHECK(throws_containing<validation_error>([&] { validate_witness(X, W); }, "beyond"));
  }
}

TEST_CASE("pou_to_witness rejects unfit partitions") {
  FiniteMetricSpace X = graph_metric(path_graph(4));
  SUBCASE("not barycentric") {
    PartitionOfUnity f = two_block_pou();
    f.values[0] = make_sparse({{0, 0.75}, {1, 0.25}});
    CHECK(throws_containing<precondition_error>(
        [&] { pou_to_witness(X, f, 1.0, 1.0); }, "barycentric"));
  }
  SUBCASE("too steep") {
    PartitionOfUnity f = two_block_pou();  // lipschitz 1
    CHECK(throws_containing<precondition_error>(
        [&] { pou_to_witness(X, f, 1.0, 1.0); }, "exceeds"));
  }
}

TEST_CASE("witness/partition round trip on cycle arc partitions") {
  const std::size_t n = 24, len = 12;
  FiniteMetricSpace X = graph_metric(cycle_graph(n));
  PartitionOfUnity f = barycentric_from_cover(X, arc_cover(n, n, 1, len));
  auto mf = pou_metrics(X, f);
  CHECK(mf.lipschitz_number == doctest::Approx(2.0 / (len + 1)));

  const double R = 2.0, eps = 1.0;
  PropertyAWitness W = pou_to_witness(X, f, R, eps);
  CHECK(W.S_bound == doctest::Approx(len - 1.0));
  for (std::size_t x = 0; x < n; ++x) CHECK(W.A[x].size() == len);

  PartitionOfUnity f2 = witness_to_pou(X, W, 1.0);
  auto m2 = pou_metrics(X, f2);
  CHECK(nearly_equal(m2.coboundedness, W.S_bound));
  CHECK(nearly_equal(m2.lipschitz_number, mf.lipschitz_number));

  PropertyAWitness W2 = pou_to_witness(X, f2, R, eps);
  CHECK(nearly_equal(W2.S_bound, W.S_bound));
  for (std::size_t x = 0; x < n; ++x) {
    CHECK(W2.A[x].size() == W.A[x].size());
  }
}

TEST_CASE("witness_to_pou rejects disjoint sets inside the threshold") {
  FiniteMetricSpace X = graph_metric(path_graph(2));
  PropertyAWitness W;
  W.S_bound = 0.0;
  W.A = {{{0, 1}}, {{1, 1}}};
  validate_witness(X, W);
  // eps = 0.5 puts the threshold at (2-eps)/eps = 3 > 1
  CHECK(throws_containing<precondition_error>(
      [&] { witness_to_pou(X, W, 0.5); }, "disjoint"));
  CHECK_THROWS_AS(witness_to_pou(X, W, 0.0), precondition_error);
}
