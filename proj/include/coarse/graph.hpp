#pragma once

#include <cstdint>
#include <vector>

#include "coarse/cover.hpp"
#include "coarse/metric_space.hpp"
#include "coarse/rational.hpp"
#include "coarse/rng.hpp"

namespace coarse {

// Undirected simple graph. Edges are unordered pairs without loops.
struct Graph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

// Range, loop and multi-edge checks. Throws validation_error.
void validate_graph(const Graph& G);

// Sorted neighbor lists.
std::vector<std::vector<std::size_t>> adjacency(const Graph& G);

bool is_connected(const Graph& G);
std::size_t max_degree(const Graph& G);

// All-pairs shortest-path metric with unit edge weights, exact integers.
// Requires a connected graph.
FiniteMetricSpace graph_metric(const Graph& G);

// Length of the shortest cycle; +inf for forests. Exact: for every edge,
// the shortest cycle through it is 1 + the shortest path avoiding it.
double girth(const Graph& G);

// Edges with exactly one endpoint in A.
std::vector<std::pair<std::size_t, std::size_t>> edge_boundary(const Graph& G,
                                                               const std::vector<std::size_t>& A);

struct CheegerResult {
  Rational h;
  std::vector<std::size_t> argmin;
  bool exact = true;
};

// Exact minimum of |boundary(A)|/|A| over nonempty A with |A| <= n/2,
// lexicographically least minimizer. Exhaustive, so the vertex count is
// capped; beyond the cap use cheeger_sweep.
CheegerResult cheeger_constant(const Graph& G, std::size_t cap = 22);

// Heuristic upper bound from prefix cuts of BFS orders, every start vertex.
CheegerResult cheeger_sweep(const Graph& G);

// True iff max degree <= k and the exact Cheeger constant is at least eps.
bool expander_check(const Graph& G, std::size_t k, double eps);

// Points outside A whose open 2-ball meets A. On unit-weight graph metrics
// this is the set of outside points at distance exactly 1 from A.
std::vector<std::size_t> halo(const FiniteMetricSpace& X, const std::vector<std::size_t>& A);

struct HaloSearchResult {
  Rational min_ratio;
  std::vector<std::size_t> argmin;
  bool exhaustive = true;
};

// Minimum of |halo(A)|/|A| over nonempty A with |A| <= max_size
// (1 <= max_size < n). Exhaustive while the subset count stays below
// 10^7, otherwise seeded random subsets.
HaloSearchResult halo_ratio_search(const FiniteMetricSpace& X, std::size_t max_size,
                                   std::uint64_t seed = 0, std::size_t samples = 100000);

// Same search over sets of bounded diameter instead of bounded size:
// A ranges over subsets with subset_diameter(A) <= max_diam, enumerated
// inside closed max_diam-balls around each point.
HaloSearchResult halo_ratio_search_diameter(const FiniteMetricSpace& X, double max_diam,
                                            std::uint64_t seed = 0, std::size_t samples = 100000);

struct DoubleCountResult {
  unsigned long long lhs = 0;  // sum over elements of |halo(U_s)|
  unsigned long long rhs = 0;  // sum over points of |hor(B(x,2))| - |hor(B(x,1))|
  Rational p_min;              // worst |hor(B(x,1))| / |hor(B(x,2))|
  std::size_t p_argmin = 0;
  Rational c_min;              // worst |halo(U_s)| / |U_s|
  std::size_t c_argmin = 0;
  bool vacuous = false;        // c_min = 0: the counting bound says nothing
  bool bound_ok = true;        // p_min <= 1/(1+c_min) when not vacuous
};

// The pair-counting identity behind the expander obstruction, plus the
// derived bound. The identity lhs = rhs holds unconditionally and is
// asserted; the bound is reported.
DoubleCountResult double_counting_check(const Graph& G, const Cover& U);

// True iff |halo(A)| >= |A| for every nonempty A of admissible vertices
// with |A| <= M. Requires every admissible vertex to have degree >= 3 and
// girth(G) > 4M. Defaults to all vertices admissible.
bool girth_halo_check(const Graph& G, std::size_t M,
                      const std::vector<std::size_t>* admissible = nullptr);

// Finite prefix of a graph sequence; members must be connected.
struct GraphSequence {
  std::vector<Graph> members;
};

// Coarse disjoint union of the members' graph metrics.
FiniteMetricSpace sequence_space(const GraphSequence& seq);

struct LightExpanderCertificate {
  Rational min_ratio;  // over every member and every checked subset
  std::size_t worst_member = 0;
  std::vector<std::size_t> worst_set;
  bool exhaustive = true;
};

// Halo ratio lower bound over all members at subset sizes up to max_size.
// Certifies only the checked prefix and sizes.
LightExpanderCertificate light_expander_certificate(const GraphSequence& seq,
                                                    std::size_t max_size, std::uint64_t seed = 0,
                                                    std::size_t samples = 100000);

// Built-in families.
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph complete_graph(std::size_t n);
Graph hypercube_graph(std::size_t dim);
Graph petersen_graph();
// d-regular tree with the root at the center, cut at the given radius.
Graph truncated_tree(std::size_t degree, std::size_t radius);
// Seeded configuration model, resampled until simple and connected.
Graph random_regular_graph(std::size_t n, std::size_t degree, std::uint64_t seed);

}  // namespace coarse
