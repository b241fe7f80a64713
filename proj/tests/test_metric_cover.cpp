#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "coarse/common.hpp"
#include "coarse/cover.hpp"
#include "coarse/graph.hpp"
#include "coarse/metric_space.hpp"
#include "coarse/rng.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace coarse;
using namespace testutil;

TEST_CASE("validate_space names the offending indices") {
  FiniteMetricSpace X = space_from_coords({0.0, 1.0, 3.0, 7.0});
  CHECK_NOTHROW(validate_space(X));

  SUBCASE("asymmetry") {
    X.at(2, 3) = 5.0;
    CHECK(throws_containing<validation_error>([&] { validate_space(X); }, "(2,3)"));
  }
  SUBCASE("nonzero diagonal") {
    X.at(1, 1) = 0.5;
    CHECK(throws_containing<validation_error>([&] { validate_space(X); }, "(1,1)"));
  }
  SUBCASE("triangle violation") {
    X.at(0, 3) = 100.0;
    X.at(3, 0) = 100.0;
    CHECK(throws_containing<validation_error>([&] { validate_space(X); }, "triangle"));
  }
  SUBCASE("negative distance") {
    X.at(0, 1) = -1.0;
    X.at(1, 0) = -1.0;
    CHECK_THROWS_AS(validate_space(X), validation_error);
  }
  SUBCASE("pseudometric is flagged, not rejected") {
    FiniteMetricSpace P = space_from_coords({0.0, 0.0, 2.0});
    auto v = validate_space(P);
    CHECK(v.pseudometric);
    REQUIRE(!v.notes.empty());
    CHECK(v.notes[0].find("0,1") != std::string::npos);
  }
}

TEST_CASE("balls are open") {
  FiniteMetricSpace X = graph_metric(path_graph(4));
  CHECK(ball(X, 1, 1.0) == std::vector<std::size_t>{1});
  CHECK(ball(X, 1, 1.5) == std::vector<std::size_t>{0, 1, 2});
  CHECK(ball(X, 0, 10.0) == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(ball(X, 2, 2.0) == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("set_distance, subset_diameter, neighborhood against definition scans") {
  Rng rng(101);
  for (int iter = 0; iter < 30; ++iter) {
    FiniteMetricSpace X = random_grid_space(rng, 3 + rng.below(10));
    auto A = random_subset(rng, X.n);
    double r = 0.5 + rng.real() * 4.0;

    for (std::size_t x = 0; x < X.n; ++x) {
      double want = kInfinity;
      for (std::size_t a : A) want = std::min(want, X(x, a));
      CHECK(set_distance(X, x, A) == want);
    }

    double diam = 0.0;
    for (std::size_t a : A)
      for (std::size_t b : A) diam = std::max(diam, X(a, b));
    CHECK(subset_diameter(X, A) == diam);

    auto nb = neighborhood(X, A, r);
    std::set<std::size_t> got(nb.begin(), nb.end());
    for (std::size_t x = 0; x < X.n; ++x) {
      bool inside = std::find(A.begin(), A.end(), x) != A.end() || lt(set_distance(X, x, A), r);
      CHECK(got.count(x) == (inside ? 1u : 0u));
    }
  }
}

TEST_CASE("cover validation errors name the problem") {
  FiniteMetricSpace X = graph_metric(cycle_graph(6));
  SUBCASE("missing points are listed") {
    Cover U = make_cover({{0, 1}, {2, 3}});
    CHECK(throws_containing<validation_error>([&] { validate_cover(X, U); }, "5"));
  }
  SUBCASE("out of range point") {
    Cover U = make_cover({{0, 1, 2, 3, 4, 5, 9}});
    CHECK(throws_containing<validation_error>([&] { validate_cover(X, U); }, "9"));
  }
  SUBCASE("duplicate label") {
    Cover U = make_cover({{0, 1, 2}, {3, 4, 5}});
    U.elements[1].label = U.elements[0].label;
    CHECK(throws_containing<validation_error>([&] { validate_cover(X, U); }, "duplicate"));
  }
  SUBCASE("empty element") {
    Cover U = make_cover({{0, 1, 2, 3, 4, 5}});
    U.elements.push_back({"E", {}});
    CHECK_THROWS_AS(validate_cover(X, U), validation_error);
  }
}

TEST_CASE("horizon matches the definition and the bitset index") {
  Rng rng(202);
  for (int iter = 0; iter < 25; ++iter) {
    FiniteMetricSpace X = random_grid_space(rng, 4 + rng.below(10));
    Cover U = random_cover(rng, X.n, 2 + rng.below(5));
    HorizonIndex idx(X, U);
    auto A = random_subset(rng, X.n);

    std::vector<std::size_t> want;
    for (std::size_t e = 0; e < U.elements.size(); ++e) {
      bool meets = false;
      for (std::size_t p : U.elements[e].points) {
        if (std::find(A.begin(), A.end(), p) != A.end()) meets = true;
      }
      if (meets) want.push_back(e);
    }
    CHECK(horizon(X, U, A).elements == want);

    double r = 0.5 + rng.real() * 3.0;
    for (std::size_t x = 0; x < X.n; ++x) {
      CHECK(idx.count_point(x) == horizon(X, U, {x}).size());
      CHECK(idx.count_ball(x, r) == horizon(X, U, ball(X, x, r)).size());
      CHECK(idx.ball_horizon(x, r).elements == horizon(X, U, ball(X, x, r)).elements);
    }
  }
}

TEST_CASE("family diameter and lebesgue number on the cycle arc cover") {
  FiniteMetricSpace X = graph_metric(cycle_graph(6));
  Cover U = arc_cover(6, 6, 1, 3);
  CHECK(family_diameter(X, U) == 2.0);
  CHECK(lebesgue_number(X, U) == 2.0);
  CHECK(multiplicity(X, U) == 3);
}

TEST_CASE("lebesgue number is the largest radius whose balls fit") {
  Rng rng(303);
  for (int iter = 0; iter < 25; ++iter) {
    FiniteMetricSpace X = random_grid_space(rng, 4 + rng.below(10));
    Cover U = random_cover(rng, X.n, 2 + rng.below(4));
    double leb = lebesgue_number(X, U);

    auto fits = [&](std::size_t x, double r) {
      auto B = ball(X, x, r);
      for (const auto& el : U.elements) {
        std::set<std::size_t> pts(el.points.begin(), el.points.end());
        bool ok = true;
        for (std::size_t b : B) {
          if (!pts.count(b)) ok = false;
        }
        if (ok) return true;
      }
      return false;
    };

    if (leb == kInfinity) {
      // some element is the whole space; every ball fits
      for (std::size_t x = 0; x < X.n; ++x) CHECK(fits(x, 1e9));
      continue;
    }
    if (leb > 1e-6) {
      for (std::size_t x = 0; x < X.n; ++x) CHECK(fits(x, leb - 1e-6));
    }
    bool some_ball_escapes = false;
    for (std::size_t x = 0; x < X.n; ++x) {
      if (!fits(x, leb + 1e-6)) some_ball_escapes = true;
    }
    CHECK(some_ball_escapes);
  }
}

TEST_CASE("thicken grows elements and the lebesgue number") {
  Rng rng(404);
  FiniteMetricSpace C6 = graph_metric(cycle_graph(6));
  Cover arcs = arc_cover(6, 6, 1, 3);
  Cover fat = thicken(C6, arcs, 1.5);
  CHECK(fat.elements.size() == arcs.elements.size());
  CHECK(fat.elements[0].label == arcs.elements[0].label);
  CHECK(fat.elements[0].points.size() == 5);
  CHECK(ge(lebesgue_number(C6, fat), 2.0));

  for (int iter = 0; iter < 20; ++iter) {
    FiniteMetricSpace X = random_grid_space(rng, 4 + rng.below(10));
    Cover U = random_cover(rng, X.n, 2 + rng.below(4));
    double s = 0.5 + rng.real() * 3.0;
    double leb = lebesgue_number(X, U);
    Cover V = thicken(X, U, s);
    validate_cover(X, V);
    for (std::size_t e = 0; e < U.elements.size(); ++e) {
      std::set<std::size_t> grown(V.elements[e].points.begin(), V.elements[e].points.end());
      for (std::size_t p : U.elements[e].points) CHECK(grown.count(p) == 1);
    }
    double leb2 = lebesgue_number(X, V);
    CHECK(ge(leb2, std::min(leb, 1e18)));
    CHECK(ge(leb2, s));
  }
}

TEST_CASE("shrink keeps exactly the points whose r-ball stays inside") {
  Rng rng(505);
  for (int iter = 0; iter < 20; ++iter) {
    FiniteMetricSpace X = random_grid_space(rng, 4 + rng.below(10));
    Cover U = random_cover(rng, X.n, 2 + rng.below(4));
    double r = 0.5 + rng.real() * 2.0;
    auto small = shrink(X, U, r);
    REQUIRE(small.size() == U.elements.size());
    for (std::size_t e = 0; e < U.elements.size(); ++e) {
      std::set<std::size_t> orig(U.elements[e].points.begin(), U.elements[e].points.end());
      std::set<std::size_t> kept(small[e].points.begin(), small[e].points.end());
      for (std::size_t x = 0; x < X.n; ++x) {
        bool ball_inside = orig.count(x) > 0;
        if (ball_inside) {
          for (std::size_t y : ball(X, x, r)) {
            if (!orig.count(y)) ball_inside = false;
          }
        }
        // kept iff x survives: not within r of the complement
        bool survives = kept.count(x) > 0;
        CHECK(survives == ball_inside);
      }
    }
  }
}

TEST_CASE("separated nets are r-separated and r-dense") {
  Rng rng(606);
  FiniteMetricSpace C6 = graph_metric(cycle_graph(6));
  CHECK(separated_net(C6, 2.0) == std::vector<std::size_t>{0, 2, 4});
  CHECK(separated_net(C6, 3.0) == std::vector<std::size_t>{0, 3});
  CHECK(separated_net(C6, 3.5) == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(separated_net(C6, 0.0), precondition_error);

  for (int iter = 0; iter < 20; ++iter) {
    FiniteMetricSpace X = random_grid_space(rng, 3 + rng.below(12));
    double r = 0.5 + rng.real() * 4.0;
    auto net = separated_net(X, r);
    REQUIRE(!net.empty());
    CHECK(net[0] == 0);
    for (std::size_t i = 0; i < net.size(); ++i) {
      for (std::size_t j = i + 1; j < net.size(); ++j) {
        CHECK(ge(X(net[i], net[j]), r));
      }
    }
    for (std::size_t x = 0; x < X.n; ++x) {
      CHECK(lt(set_distance(X, x, net), r));
    }
  }
}

TEST_CASE("coarse disjoint union separates blocks by the diameter sum") {
  FiniteMetricSpace A = graph_metric(cycle_graph(4));   // diameter 2
  FiniteMetricSpace B = graph_metric(path_graph(3));    // diameter 2
  FiniteMetricSpace U = coarse_disjoint_union({A, B});
  REQUIRE(U.n == 7);
  validate_space(U);
  CHECK(U(0, 2) == 2.0);
  CHECK(U(4, 6) == 2.0);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 4; j < 7; ++j) CHECK(U(i, j) == 4.0);
  }
  CHECK(U.labels[0] == "b0:0");
  CHECK(U.labels[4] == "b1:0");
  CHECK(space_diameter(U) == 4.0);
}
