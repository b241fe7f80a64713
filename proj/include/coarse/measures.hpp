#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "coarse/cover.hpp"
#include "coarse/metric_space.hpp"

namespace coarse {

// Weights are plain IEEE nonnegative reals summing to 1 within the global
// tolerance. Measure comparisons downstream are plain strict inequalities;
// the tolerance stays out of them.
struct ProbabilityMeasure {
  std::vector<double> weights;  // size n
};

void validate_measure(const FiniteMetricSpace& X, const ProbabilityMeasure& mu);

// Points of strictly positive weight, sorted.
std::vector<std::size_t> support(const ProbabilityMeasure& mu);

double measure_of(const ProbabilityMeasure& mu, const std::vector<std::size_t>& points);

// { x not in E : d(x, E) < R }, sorted. Empty for E empty or E the whole
// space. The closed flag switches to d(x, E) <= R.
std::vector<std::size_t> r_boundary(const FiniteMetricSpace& X,
                                    const std::vector<std::size_t>& E, double R,
                                    bool closed = false);

// mu(boundary of E at R) < eps * mu(E), strict plain comparison. E nonempty.
bool ula_witness_check(const FiniteMetricSpace& X, const ProbabilityMeasure& mu,
                       const std::vector<std::size_t>& E, double R, double eps);

struct BoundaryScanResult {
  std::size_t index = 0;  // into U.elements
  std::string label;
  std::vector<std::size_t> element;
  double boundary_mass = 0.0;
  double element_mass = 0.0;
};

// Finds a cover element whose R-boundary is mu-light: mass < eps * element
// mass. Precondition (checked on every support point): the point horizon is
// more than 1/(1+eps) of the R-ball horizon. Under it a qualifying element
// must exist, so coming up empty raises an internal-inconsistency error.
// Elements are scanned in lexicographic label order, first hit wins. Also
// verifies the exact double count
//   sum_s mu(boundary of U_s) = sum_x mu(x) * (|hor(B(x,R))| - |hor({x})|).
BoundaryScanResult scan_boundary_set(const FiniteMetricSpace& X, const ProbabilityMeasure& mu,
                                     const Cover& U, double R, double eps);

// Nonempty subsets, pairwise at distance >= R.
struct DisjointFamily {
  std::vector<std::vector<std::size_t>> members;
  double R = 0.0;
};

void validate_family(const FiniteMetricSpace& X, const DisjointFamily& family);

// Given a rescaled restricted measure, produces a subset of diameter <= S
// whose R-boundary has mass < eps times the subset's mass. The bound
// parameters live in the closure.
using SetFinder =
    std::function<std::vector<std::size_t>(const FiniteMetricSpace&, const ProbabilityMeasure&)>;

// Exhaustive oracle over subsets of the handed measure's support (at most 20
// support points): among qualifying sets picks the heaviest, ties to the
// earliest in enumeration order.
SetFinder brute_force_finder(double R, double S, double eps);

// Scans the cover for a light-boundary element and returns its point set.
SetFinder cover_scan_finder(Cover U, double R, double eps);

// Greedy sparsification: pick a heaviest support set Y of mass >= (1+c)/2,
// repeatedly cut out finder sets intersected with what is left of Y, and
// remove their open R-neighborhoods until Y is exhausted. finder_eps is the
// tolerance the finder promises, needed for the entry check
// (1+c)/(2(1+finder_eps)) > c. The result is R-disjoint, each member has
// diameter <= S, and the total mass exceeds c; all three are verified.
DisjointFamily msp_greedy(const FiniteMetricSpace& X, const ProbabilityMeasure& mu, double R,
                          double S, const SetFinder& finder, double finder_eps, double c);

struct UlaSelection {
  std::size_t index = 0;  // into family.members
  std::vector<std::size_t> member;
  double boundary_mass = 0.0;
  double member_mass = 0.0;
};

// From a 2R-disjoint family of total mass > max(1 - eps/2, 1/2), returns the
// first member whose R-boundary is mu-light. Existence is guaranteed:
// members and their R-boundaries are pairwise disjoint, so the boundary
// masses sum to at most eps/2 < eps times the total member mass.
UlaSelection msp_to_ula(const FiniteMetricSpace& X, const ProbabilityMeasure& mu,
                        const DisjointFamily& family, double R, double eps);

}  // namespace coarse
