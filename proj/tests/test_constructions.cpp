#include <algorithm>
#include <cmath>
#include <vector>

#include "coarse/common.hpp"
#include "coarse/constructions.hpp"
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

TEST_CASE("horizon ratio on the unit line with the singleton cover") {
  FiniteMetricSpace X = graph_metric(path_graph(3));
  Cover U = make_cover({{0}, {1}, {2}});
  AmenabilityReport rep = horizon_ratio(X, U, 1.0, 2.0);
  CHECK(rep.min_ratio == doctest::Approx(1.0 / 3.0));
  CHECK(rep.worst_point == 1);
  REQUIRE(rep.horizon_sizes.size() == 3);
  CHECK(rep.horizon_sizes[0] == std::pair<std::size_t, std::size_t>{1, 2});
  CHECK(rep.horizon_sizes[1] == std::pair<std::size_t, std::size_t>{1, 3});
  CHECK_THROWS_AS(horizon_ratio(X, U, 2.0, 1.0), precondition_error);
  CHECK_THROWS_AS(horizon_ratio(X, U, 0.0, 1.0), precondition_error);
}

TEST_CASE("horizon ratio against a direct scan on random instances") {
  Rng rng(51);
  for (int iter = 0; iter < 20; ++iter) {
    FiniteMetricSpace X = random_grid_space(rng, 4 + rng.below(10));
    Cover U = random_cover(rng, X.n, 2 + rng.below(4));
    double r = 0.5 + rng.real() * 2.0;
    double s = r + 0.5 + rng.real() * 2.0;
    AmenabilityReport rep = horizon_ratio(X, U, r, s);
    double worst = 2.0;
    for (std::size_t x = 0; x < X.n; ++x) {
      auto small = horizon(X, U, ball(X, x, r)).size();
      auto large = horizon(X, U, ball(X, x, s)).size();
      CHECK(rep.horizon_sizes[x] == std::pair<std::size_t, std::size_t>{small, large});
      worst = std::min(worst, static_cast<double>(small) / static_cast<double>(large));
    }
    CHECK(rep.min_ratio == doctest::Approx(worst));
  }
}

TEST_CASE("averaging flattens an arc partition at the promised rate") {
  const std::size_t n = 24;
  FiniteMetricSpace X = graph_metric(cycle_graph(n));
  Cover U = arc_cover(n, n / 2, 2, 12);  // 12 arcs of length 12
  PartitionOfUnity f = barycentric_from_cover(X, U);
  double delta = pou_metrics(X, f).lipschitz_number;

  for (double eps : {8.0, 10.0, 16.0}) {
    double M = family_diameter(X, U) + 1.0 / eps;
    REQUIRE(lt(delta, eps / (2.0 * M + 1.0)));
    PartitionOfUnity g = average_pou(X, f, U, eps);
    validate_pou(X, g);
    auto m = pou_metrics(X, g);
    CHECK(ge(m.lebesgue, 1.0 / eps));
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = x + 1; y < n; ++y) {
        double lhs = l1_distance(g.values[x], g.values[y]);
        CHECK(le(lhs, delta * (2.0 * M + X(x, y)) + delta));
      }
    }
  }
}

TEST_CASE("averaging rejects partitions that vary too fast") {
  FiniteMetricSpace X = graph_metric(path_graph(4));
  Cover U = make_cover({{0, 1}, {2, 3}});
  PartitionOfUnity f = barycentric_from_cover(X, U);  // lipschitz 1
  CHECK(throws_containing<precondition_error>(
      [&] { average_pou(X, f, U, 0.5); }, "lipschitz"));
  CHECK_THROWS_AS(average_pou(X, f, U, 0.0), precondition_error);
}

TEST_CASE("averaging validates explicit basepoints") {
  FiniteMetricSpace X = graph_metric(cycle_graph(6));
  Cover U = arc_cover(6, 6, 1, 3);
  PartitionOfUnity f = barycentric_from_cover(X, U);
  // constant partitions average to themselves no matter the basepoints
  PartitionOfUnity c;
  c.labels = {"O"};
  for (std::size_t x = 0; x < 6; ++x) c.values.push_back(make_sparse({{0, 1.0}}));
  std::vector<std::size_t> base{0, 1, 2, 3, 4, 5};
  PartitionOfUnity g = average_pou(X, c, U, 2.0, base);
  for (std::size_t x = 0; x < 6; ++x) CHECK(sparse_equal(g.values[x], c.values[x]));
  CHECK(throws_containing<validation_error>(
      [&] { average_pou(X, c, U, 2.0, std::vector<std::size_t>{0, 1}); }, "one basepoint"));
  CHECK(throws_containing<validation_error>(
      [&] { average_pou(X, c, U, 2.0, std::vector<std::size_t>{0, 1, 2, 3, 4, 9}); }, "9"));
}

TEST_CASE("rounding: frozen single-point traces") {
  FiniteMetricSpace X;
  X.n = 1;
  X.dist = {0.0};

  SUBCASE("uneven split corrects onto the heaviest label") {
    PartitionOfUnity g;
    g.labels = {"A", "B"};
    g.values = {make_sparse({{0, 2.0 / 3.0}, {1, 1.0 / 3.0}})};
    RoundingParams p;
    p.n = 1;
    p.m = 8;  // minimal admissible at eps = 2: 2*2/2 + 2*3 = 8
    p.eps = 2.0;
    RoundingResult r = round_to_barycentric(X, g, p);
    REQUIRE(r.integer_field.values[0].size() == 2);
    CHECK(r.integer_field.values[0][0] == std::pair<std::size_t, long long>{0, 6});
    CHECK(r.integer_field.values[0][1] == std::pair<std::size_t, long long>{1, 2});
    CHECK(r.h.values[0].entries[0].second == doctest::Approx(0.75));
    CHECK(r.h.values[0].entries[1].second == doctest::Approx(0.25));
    CHECK(l1_distance(r.h.values[0], g.values[0]) <= (2.0 * p.n + 2.0) / p.m + 1e-12);
  }
  SUBCASE("even split needs no correction") {
    PartitionOfUnity g;
    g.labels = {"A", "B"};
    g.values = {make_sparse({{0, 0.5}, {1, 0.5}})};
    RoundingParams p;
    p.n = 1;
    p.m = 8;
    p.eps = 2.0;
    RoundingResult r = round_to_barycentric(X, g, p);
    CHECK(r.integer_field.values[0][0] == std::pair<std::size_t, long long>{0, 4});
    CHECK(r.integer_field.values[0][1] == std::pair<std::size_t, long long>{1, 4});
    CHECK(sparse_equal(r.h.values[0], g.values[0]));
  }
  SUBCASE("tiny weights survive into the carrier") {
    PartitionOfUnity g;
    g.labels = {"A", "B"};
    g.values = {make_sparse({{0, 0.99}, {1, 0.01}})};
    RoundingParams p;
    p.n = 1;
    p.m = 10;
    p.eps = 2.0;
    RoundingResult r = round_to_barycentric(X, g, p);
    // 0 < G(B) = 0.1 < 1 rounds up to 1, the deficit lands on A
    CHECK(r.integer_field.values[0][1] == std::pair<std::size_t, long long>{1, 1});
    CHECK(r.integer_field.values[0][0] == std::pair<std::size_t, long long>{0, 9});
  }
}

TEST_CASE("rounding guards its parameters") {
  FiniteMetricSpace X = graph_metric(path_graph(2));
  PartitionOfUnity g;
  g.labels = {"A", "B", "C"};
  g.values = {make_sparse({{0, 0.5}, {1, 0.5}}), make_sparse({{1, 0.25}, {2, 0.75}})};
  RoundingParams p;
  p.n = 1;
  p.m = 4;  // too small: needs 2*2/1 + 2*3 = 10
  p.eps = 1.0;
  CHECK(throws_containing<precondition_error>(
      [&] { round_to_barycentric(X, g, p); }, "m too small"));
  p.m = 10;
  CHECK_NOTHROW(round_to_barycentric(X, g, p));
  p.n = 0;  // carriers of size 2 now exceed n+1
  p.m = 4;  // >= 2/1 + 2
  CHECK(throws_containing<precondition_error>(
      [&] { round_to_barycentric(X, g, p); }, "carrier bound"));
}

TEST_CASE("rounding random partitions keeps carriers and the drift bound") {
  Rng rng(52);
  for (int iter = 0; iter < 40; ++iter) {
    FiniteMetricSpace X = random_grid_space(rng, 2 + rng.below(6));
    std::size_t dim = 1 + rng.below(3);
    PartitionOfUnity g = random_pou(rng, X.n, dim + 1);  // carriers <= n+1 automatically
    RoundingParams p;
    p.n = dim;
    p.eps = 0.5 + rng.real() * 2.0;
    double needed = 2.0 * (dim + 1) / p.eps + static_cast<double>((dim + 1) * (dim + 2));
    p.m = static_cast<long long>(std::ceil(needed)) + static_cast<long long>(rng.below(10));
    RoundingResult r = round_to_barycentric(X, g, p);
    validate_pou(X, r.h);
    for (std::size_t x = 0; x < X.n; ++x) {
      long long total = 0;
      for (auto& [v, c] : r.integer_field.values[x]) total += c;
      CHECK(total == p.m);
      REQUIRE(r.h.values[x].entries.size() == g.values[x].entries.size());
      for (std::size_t t = 0; t < g.values[x].entries.size(); ++t) {
        CHECK(r.h.values[x].entries[t].first == g.values[x].entries[t].first);
      }
      CHECK(le(l1_distance(r.h.values[x], g.values[x]), (2.0 * dim + 2.0) / p.m));
    }
    auto flag = barycentric_flag(r.expansion.pou);
    CHECK(flag.is_barycentric);
  }
}

TEST_CASE("cover-to-partition on thick cycle arcs") {
  const std::size_t n = 24;
  FiniteMetricSpace X = graph_metric(cycle_graph(n));
  Cover U = arc_cover(n, n / 2, 2, 12);
  REQUIRE(ge(lebesgue_number(X, U), 4.0));

  for (double mu : {0.3, 0.4, 0.5}) {
    PartitionOfUnity g = amenable_cover_to_pou(X, U, 1.0, mu);
    validate_pou(X, g);
    CHECK(barycentric_flag(g).is_barycentric);
    auto m = pou_metrics(X, g);
    CHECK(ge(m.lebesgue, 2.0));
    for (std::size_t x = 0; x < n; ++x) {
      std::size_t y = (x + 1) % n;  // distance 1 < r is impossible; check at r via x itself
      CHECK(lt(l1_distance(g.values[x], g.values[y]) / 2.0, 2.0 * mu));
    }
  }
}

TEST_CASE("cover-to-partition preconditions name the obstruction") {
  FiniteMetricSpace X = graph_metric(cycle_graph(12));
  SUBCASE("thin cover fails the lebesgue requirement") {
    Cover U = arc_cover(12, 12, 1, 3);  // lebesgue 2 < 4
    CHECK(throws_containing<precondition_error>(
        [&] { amenable_cover_to_pou(X, U, 1.0, 0.3); }, "Lebesgue"));
  }
  SUBCASE("bad horizon ratio names the worst point") {
    // 0 and 1.5 are within 2r of each other but only share one element,
    // while the far point keeps the lebesgue number large
    FiniteMetricSpace Y = space_from_coords({0.0, 1.5, 10.0});
    Cover U = make_cover({{0, 1}, {1, 2}});
    REQUIRE(ge(lebesgue_number(Y, U), 4.0));
    CHECK(throws_containing<precondition_error>(
        [&] { amenable_cover_to_pou(Y, U, 1.0, 0.3); }, "ratio"));
  }
}

TEST_CASE("strong certificate mode checks the coupled scales") {
  const std::size_t n = 96;
  FiniteMetricSpace X = graph_metric(cycle_graph(n));
  Cover U = arc_cover(n, n / 2, 2, 80);
  // r = 4, eps = 0.5: needs r > max(1/eps, (2-eps)/eps) = 3 and mu <= 0.125
  PartitionOfUnity g = amenable_cover_to_pou(X, U, 4.0, 0.125, 0.5);
  auto m = pou_metrics(X, g);
  CHECK(gt(m.lebesgue, 2.0));
  CHECK(throws_containing<precondition_error>(
      [&] { amenable_cover_to_pou(X, U, 2.0, 0.1, 0.5); }, "strong certificate"));
  CHECK(throws_containing<precondition_error>(
      [&] { amenable_cover_to_pou(X, U, 4.0, 0.2, 0.5); }, "eps/4"));
}

TEST_CASE("ratio bound from the induced partition on hypercubes") {
  SUBCASE("Q3 with radius-2 Hamming balls") {
    FiniteMetricSpace X = graph_metric(hypercube_graph(3));
    std::vector<std::vector<std::size_t>> els;
    for (std::size_t c = 0; c < X.n; ++c) {
      std::vector<std::size_t> pts;
      for (std::size_t y = 0; y < X.n; ++y) {
        if (le(X(c, y), 2.0)) pts.push_back(y);
      }
      els.push_back(pts);
    }
    Cover U = make_cover(els);
    PartitionOfUnity f = barycentric_from_cover(X, U);
    auto mf = pou_metrics(X, f);
    CHECK(mf.lipschitz_number == doctest::Approx(1.0 / 7.0));
    RatioBound rb = ratio_bound_from_pou(X, U, 1.5, mf.lipschitz_number, 4);
    CHECK(rb.report.min_ratio == doctest::Approx(7.0 / 8.0));
    CHECK(ge(rb.report.min_ratio, rb.bound));
  }
  SUBCASE("closed-form value of the bound") {
    // M = 2, s = 1, mu = 0.1: 1/(1 + 2*0.2/0.8) = 2/3
    const std::size_t n = 40, len = 20;
    FiniteMetricSpace X = graph_metric(cycle_graph(n));
    Cover U = arc_cover(n, n, 1, len);
    PartitionOfUnity f = barycentric_from_cover(X, U);
    REQUIRE(le(pou_metrics(X, f).lipschitz_number, 0.1));
    RatioBound rb = ratio_bound_from_pou(X, U, 1.0, 0.1, 2);
    CHECK(rb.bound == doctest::Approx(2.0 / 3.0));
    CHECK(rb.report.min_ratio == doctest::Approx(1.0));
  }
  SUBCASE("overload rejection") {
    FiniteMetricSpace X = graph_metric(cycle_graph(6));
    Cover U = arc_cover(6, 6, 1, 3);
    CHECK(throws_containing<precondition_error>(
        [&] { ratio_bound_from_pou(X, U, 3.0, 0.3, 4); }, "below 1"));
  }
}
