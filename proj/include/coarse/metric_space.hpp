#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace coarse {

// A finite (pseudo)metric space: n points, dense symmetric distance matrix.
// All balls in this library are open: B(x,r) = {y : d(x,y) < r}, with the
// global tolerance deciding strictness.
struct FiniteMetricSpace {
  std::size_t n = 0;
  std::vector<double> dist;           // row-major, n*n
  std::vector<std::string> labels;    // optional; empty or size n

  double operator()(std::size_t i, std::size_t j) const { return dist[i * n + j]; }
  double& at(std::size_t i, std::size_t j) { return dist[i * n + j]; }
};

struct SpaceValidation {
  bool pseudometric = false;          // distinct points at distance 0
  std::vector<std::string> notes;
};

// Checks the metric axioms (diagonal, symmetry, triangle, nonnegativity) up
// to the global tolerance. Distinct points at distance ~0 flag the space as
// a pseudometric instead of rejecting it. Throws validation_error naming the
// offending indices otherwise.
SpaceValidation validate_space(const FiniteMetricSpace& X);

// Open ball around x, sorted point indices. r <= tol gives the empty set.
std::vector<std::size_t> ball(const FiniteMetricSpace& X, std::size_t x, double r);

// min distance from x to A; +inf for empty A.
double set_distance(const FiniteMetricSpace& X, std::size_t x, const std::vector<std::size_t>& A);

// max pairwise distance inside A; 0 for singletons and the empty set.
double subset_diameter(const FiniteMetricSpace& X, const std::vector<std::size_t>& A);

double space_diameter(const FiniteMetricSpace& X);

// {y : d(y,S) < s} UNION S. The union keeps S itself when s = 0.
std::vector<std::size_t> neighborhood(const FiniteMetricSpace& X,
                                      const std::vector<std::size_t>& S, double s);

// Block metric on the disjoint union: distances kept inside each factor and
// d(x,y) = diam(X_i) + diam(X_j) across factors i != j. Point labels are
// prefixed "b<i>:". Two singleton factors sit at distance 0, so the result
// can be a pseudometric; the caller sees that via validate_space.
FiniteMetricSpace coarse_disjoint_union(const std::vector<FiniteMetricSpace>& factors);

// Greedy r-separated net in point-index order. Every point of X lies within
// distance < r of the result (maximality), and net points are pairwise >= r
// apart. Requires r > 0.
std::vector<std::size_t> separated_net(const FiniteMetricSpace& X, double r);

}  // namespace coarse
