#include "coarse/graph.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <set>

#include "coarse/common.hpp"

namespace coarse {
namespace {

constexpr std::size_t kNoDist = static_cast<std::size_t>(-1);

// BFS distances from start; skip_u/skip_v (when valid) remove one edge.
std::vector<std::size_t> bfs(const std::vector<std::vector<std::size_t>>& adj, std::size_t start,
                             std::size_t skip_u = kNoDist, std::size_t skip_v = kNoDist) {
  std::vector<std::size_t> dist(adj.size(), kNoDist);
  std::deque<std::size_t> queue{start};
  dist[start] = 0;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : adj[v]) {
      if ((v == skip_u && w == skip_v) || (v == skip_v && w == skip_u)) continue;
      if (dist[w] == kNoDist) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

void check_point_set(std::size_t n, const std::vector<std::size_t>& A, const char* what) {
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i] >= n) {
      throw validation_error(std::string(what) + " references point " + std::to_string(A[i]) +
                             " outside the space");
    }
    if (i > 0 && A[i] <= A[i - 1]) {
      throw validation_error(std::string(what) + " must be sorted and duplicate-free");
    }
  }
}

// Bitsets of near-neighbors ({y != x : d(x,y) < 2}) for fast halo counting.
struct HaloMask {
  std::size_t n, words;
  std::vector<std::uint64_t> near;

  explicit HaloMask(const FiniteMetricSpace& X) : n(X.n), words((X.n + 63) / 64) {
    near.assign(n * words, 0);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (y != x && lt(X(x, y), 2.0)) near[x * words + y / 64] |= 1ULL << (y % 64);
      }
    }
  }

  std::size_t halo_count(const std::vector<std::size_t>& A) const {
    std::vector<std::uint64_t> acc(words, 0);
    for (std::size_t a : A) {
      const std::uint64_t* row = &near[a * words];
      for (std::size_t w = 0; w < words; ++w) acc[w] |= row[w];
    }
    for (std::size_t a : A) acc[a / 64] &= ~(1ULL << (a % 64));
    std::size_t count = 0;
    for (std::uint64_t w : acc) count += static_cast<std::size_t>(std::popcount(w));
    return count;
  }
};

// Number of nonempty subsets of size <= kmax, saturating.
double subset_count(std::size_t n, std::size_t kmax) {
  double total = 0.0, binom = 1.0;
  for (std::size_t k = 1; k <= kmax && k <= n; ++k) {
    binom *= static_cast<double>(n - k + 1) / static_cast<double>(k);
    total += binom;
    if (total > 1e15) return total;
  }
  return total;
}

template <typename Visit>
void for_each_combination(std::size_t n, std::size_t k, Visit&& visit) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    visit(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

struct RatioTracker {
  bool any = false;
  Rational best;
  std::vector<std::size_t> argmin;

  void offer(const Rational& ratio, const std::vector<std::size_t>& set) {
    if (!any || ratio < best || (ratio == best && set < argmin)) {
      any = true;
      best = ratio;
      argmin = set;
    }
  }
};

}  // namespace

void validate_graph(const Graph& G) {
  if (G.n == 0) throw validation_error("graph has no vertices");
  std::vector<std::pair<std::size_t, std::size_t>> canon;
  canon.reserve(G.edges.size());
  for (const auto& [u, v] : G.edges) {
    if (u >= G.n || v >= G.n) {
      throw validation_error("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                             ") leaves the vertex range");
    }
    if (u == v) throw validation_error("loop at vertex " + std::to_string(u));
    canon.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(canon.begin(), canon.end());
  auto dup = std::adjacent_find(canon.begin(), canon.end());
  if (dup != canon.end()) {
    throw validation_error("repeated edge (" + std::to_string(dup->first) + ", " +
                           std::to_string(dup->second) + ")");
  }
}

std::vector<std::vector<std::size_t>> adjacency(const Graph& G) {
  std::vector<std::vector<std::size_t>> adj(G.n);
  for (const auto& [u, v] : G.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

bool is_connected(const Graph& G) {
  if (G.n == 0) return false;
  const auto dist = bfs(adjacency(G), 0);
  return std::find(dist.begin(), dist.end(), kNoDist) == dist.end();
}

std::size_t max_degree(const Graph& G) {
  std::vector<std::size_t> deg(G.n, 0);
  for (const auto& [u, v] : G.edges) ++deg[u], ++deg[v];
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

FiniteMetricSpace graph_metric(const Graph& G) {
  validate_graph(G);
  const auto adj = adjacency(G);
  FiniteMetricSpace X;
  X.n = G.n;
  X.dist.assign(G.n * G.n, 0.0);
  for (std::size_t v = 0; v < G.n; ++v) {
    const auto dist = bfs(adj, v);
    for (std::size_t w = 0; w < G.n; ++w) {
      if (dist[w] == kNoDist) {
        throw precondition_error("graph is disconnected: vertex " + std::to_string(w) +
                                 " is unreachable from " + std::to_string(v));
      }
      X.at(v, w) = static_cast<double>(dist[w]);
    }
  }
  return X;
}

double girth(const Graph& G) {
  validate_graph(G);
  const auto adj = adjacency(G);
  std::size_t best = kNoDist;
  for (const auto& [u, v] : G.edges) {
    const auto dist = bfs(adj, u, u, v);
    if (dist[v] != kNoDist && dist[v] + 1 < best) best = dist[v] + 1;
  }
  return best == kNoDist ? kInfinity : static_cast<double>(best);
}

std::vector<std::pair<std::size_t, std::size_t>> edge_boundary(
    const Graph& G, const std::vector<std::size_t>& A) {
  validate_graph(G);
  check_point_set(G.n, A, "vertex set");
  std::vector<bool> in(G.n, false);
  for (std::size_t a : A) in[a] = true;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& e : G.edges) {
    if (in[e.first] != in[e.second]) out.push_back(e);
  }
  return out;
}

CheegerResult cheeger_constant(const Graph& G, std::size_t cap) {
  validate_graph(G);
  if (G.n < 2) throw precondition_error("the boundary ratio needs at least two vertices");
  if (G.n > cap || G.n > 31) {
    throw precondition_error("exhaustive search capped at " + std::to_string(std::min<std::size_t>(cap, 31)) +
                             " vertices, got " + std::to_string(G.n) +
                             "; cheeger_sweep gives a labeled upper bound");
  }
  std::vector<std::uint32_t> adj_mask(G.n, 0);
  for (const auto& [u, v] : G.edges) {
    adj_mask[u] |= 1u << v;
    adj_mask[v] |= 1u << u;
  }
  CheegerResult out;
  bool any = false;
  const std::uint32_t full = (G.n == 31) ? 0x7fffffffu : ((1u << G.n) - 1u);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::size_t size = static_cast<std::size_t>(std::popcount(mask));
    if (2 * size > G.n) continue;
    std::size_t boundary = 0;
    for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) {
      const std::size_t v = static_cast<std::size_t>(std::countr_zero(rest));
      boundary += static_cast<std::size_t>(std::popcount(adj_mask[v] & ~mask));
    }
    const Rational ratio = make_rational(static_cast<long long>(boundary),
                                         static_cast<long long>(size));
    if (any && out.h < ratio) continue;
    std::vector<std::size_t> set;
    set.reserve(size);
    for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) {
      set.push_back(static_cast<std::size_t>(std::countr_zero(rest)));
    }
    if (!any || ratio < out.h || set < out.argmin) {
      any = true;
      out.h = ratio;
      out.argmin = std::move(set);
    }
  }
  out.exact = true;
  return out;
}

CheegerResult cheeger_sweep(const Graph& G) {
  validate_graph(G);
  if (G.n < 2) throw precondition_error("the boundary ratio needs at least two vertices");
  const auto adj = adjacency(G);
  RatioTracker tracker;
  for (std::size_t start = 0; start < G.n; ++start) {
    std::vector<std::size_t> order;
    {
      const auto dist = bfs(adj, start);
      order.reserve(G.n);
      std::vector<std::size_t> tmp(G.n);
      for (std::size_t v = 0; v < G.n; ++v) tmp[v] = v;
      std::stable_sort(tmp.begin(), tmp.end(), [&](std::size_t a, std::size_t b) {
        const std::size_t da = dist[a] == kNoDist ? G.n : dist[a];
        const std::size_t db = dist[b] == kNoDist ? G.n : dist[b];
        return da != db ? da < db : a < b;
      });
      order = std::move(tmp);
    }
    std::vector<bool> in(G.n, false);
    long long boundary = 0;
    std::vector<std::size_t> prefix;
    for (std::size_t i = 0; 2 * (i + 1) <= G.n; ++i) {
      const std::size_t v = order[i];
      long long inside = 0;
      for (std::size_t w : adj[v]) {
        if (in[w]) ++inside;
      }
      boundary += static_cast<long long>(adj[v].size()) - 2 * inside;
      in[v] = true;
      prefix.push_back(v);
      std::vector<std::size_t> sorted_prefix = prefix;
      std::sort(sorted_prefix.begin(), sorted_prefix.end());
      tracker.offer(make_rational(boundary, static_cast<long long>(i + 1)), sorted_prefix);
    }
  }
  CheegerResult out;
  out.h = tracker.best;
  out.argmin = tracker.argmin;
  out.exact = false;
  return out;
}

bool expander_check(const Graph& G, std::size_t k, double eps) {
  const CheegerResult res = cheeger_constant(G);
  return max_degree(G) <= k && ge(to_double(res.h), eps);
}

std::vector<std::size_t> halo(const FiniteMetricSpace& X, const std::vector<std::size_t>& A) {
  check_point_set(X.n, A, "point set");
  std::vector<bool> in(X.n, false);
  for (std::size_t a : A) in[a] = true;
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < X.n; ++x) {
    if (in[x]) continue;
    for (std::size_t a : A) {
      if (lt(X(x, a), 2.0)) {
        out.push_back(x);
        break;
      }
    }
  }
  return out;
}

HaloSearchResult halo_ratio_search(const FiniteMetricSpace& X, std::size_t max_size,
                                   std::uint64_t seed, std::size_t samples) {
  if (max_size == 0 || max_size >= X.n) {
    throw precondition_error("subset size bound must lie in [1, n-1]");
  }
  const HaloMask mask(X);
  RatioTracker tracker;
  HaloSearchResult out;
  auto offer = [&](const std::vector<std::size_t>& set) {
    tracker.offer(make_rational(static_cast<long long>(mask.halo_count(set)),
                                static_cast<long long>(set.size())),
                  set);
  };
  if (subset_count(X.n, max_size) <= 1e7) {
    for (std::size_t k = 1; k <= max_size; ++k) {
      for_each_combination(X.n, k, offer);
    }
    out.exhaustive = true;
  } else {
    Rng rng(seed);
    for (std::size_t t = 0; t < samples; ++t) {
      const std::size_t k = 1 + static_cast<std::size_t>(rng.below(max_size));
      offer(sample_without_replacement(rng, X.n, k));
    }
    out.exhaustive = false;
  }
  out.min_ratio = tracker.best;
  out.argmin = tracker.argmin;
  return out;
}

HaloSearchResult halo_ratio_search_diameter(const FiniteMetricSpace& X, double max_diam,
                                            std::uint64_t seed, std::size_t samples) {
  if (max_diam < 0.0) throw precondition_error("diameter bound must be nonnegative");
  if (X.n < 2) throw precondition_error("the search needs at least two points");
  const HaloMask mask(X);
  std::vector<std::vector<std::size_t>> balls(X.n);
  double total = 0.0;
  for (std::size_t x = 0; x < X.n; ++x) {
    for (std::size_t y = 0; y < X.n; ++y) {
      if (y != x && le(X(x, y), max_diam)) balls[x].push_back(y);
    }
    if (balls[x].size() < 63) total += static_cast<double>(1ULL << balls[x].size());
    else total = 2e15;
  }

  RatioTracker tracker;
  auto offer = [&](std::vector<std::size_t> set) {
    if (set.size() == X.n) return;  // the whole space has an empty halo
    std::sort(set.begin(), set.end());
    if (!le(subset_diameter(X, set), max_diam)) return;
    tracker.offer(make_rational(static_cast<long long>(mask.halo_count(set)),
                                static_cast<long long>(set.size())),
                  set);
  };
  HaloSearchResult out;
  if (total <= 1e7) {
    for (std::size_t x = 0; x < X.n; ++x) {
      const auto& others = balls[x];
      const std::uint64_t spread = 1ULL << others.size();
      for (std::uint64_t bits = 0; bits < spread; ++bits) {
        std::vector<std::size_t> set{x};
        for (std::size_t i = 0; i < others.size(); ++i) {
          if (bits & (1ULL << i)) set.push_back(others[i]);
        }
        offer(std::move(set));
      }
    }
    out.exhaustive = true;
  } else {
    Rng rng(seed);
    for (std::size_t t = 0; t < samples; ++t) {
      const std::size_t x = static_cast<std::size_t>(rng.below(X.n));
      std::vector<std::size_t> set{x};
      for (std::size_t y : balls[x]) {
        if (rng.coin()) set.push_back(y);
      }
      offer(std::move(set));
    }
    out.exhaustive = false;
  }
  if (tracker.argmin.empty()) {
    throw internal_inconsistency_error("diameter search visited no admissible subset");
  }
  out.min_ratio = tracker.best;
  out.argmin = tracker.argmin;
  return out;
}

DoubleCountResult double_counting_check(const Graph& G, const Cover& U) {
  const FiniteMetricSpace X = graph_metric(G);
  validate_cover(X, U);
  const HaloMask mask(X);
  DoubleCountResult out;
  bool any_c = false;
  for (std::size_t s = 0; s < U.elements.size(); ++s) {
    const std::size_t count = mask.halo_count(U.elements[s].points);
    out.lhs += count;
    const Rational c = make_rational(static_cast<long long>(count),
                                     static_cast<long long>(U.elements[s].points.size()));
    if (!any_c || c < out.c_min) {
      any_c = true;
      out.c_min = c;
      out.c_argmin = s;
    }
  }
  HorizonIndex index(X, U);
  bool any_p = false;
  for (std::size_t x = 0; x < X.n; ++x) {
    const std::size_t small = index.count_ball(x, 1.0);
    const std::size_t large = index.count_ball(x, 2.0);
    if (small == 0 || large < small) {
      throw internal_inconsistency_error("horizon counts at point " + std::to_string(x) +
                                         " are not nested");
    }
    out.rhs += large - small;
    const Rational p = make_rational(static_cast<long long>(small), static_cast<long long>(large));
    if (!any_p || p < out.p_min) {
      any_p = true;
      out.p_min = p;
      out.p_argmin = x;
    }
  }
  if (out.lhs != out.rhs) {
    throw internal_inconsistency_error("pair counts disagree: " + std::to_string(out.lhs) +
                                       " by elements, " + std::to_string(out.rhs) + " by points");
  }
  out.vacuous = (out.c_min.num == 0);
  if (out.vacuous) {
    out.bound_ok = true;
  } else {
    const Rational cap = make_rational(out.c_min.den, out.c_min.num + out.c_min.den);
    out.bound_ok = (out.p_min <= cap);
  }
  return out;
}

bool girth_halo_check(const Graph& G, std::size_t M, const std::vector<std::size_t>* admissible) {
  validate_graph(G);
  if (M == 0) throw precondition_error("subset size bound must be positive");
  std::vector<std::size_t> pool;
  if (admissible) {
    check_point_set(G.n, *admissible, "admissible set");
    pool = *admissible;
  } else {
    pool.resize(G.n);
    for (std::size_t v = 0; v < G.n; ++v) pool[v] = v;
  }
  const auto adj = adjacency(G);
  for (std::size_t v : pool) {
    if (adj[v].size() < 3) {
      throw precondition_error("admissible vertex " + std::to_string(v) + " has degree " +
                               std::to_string(adj[v].size()) + ", need at least 3");
    }
  }
  const double g = girth(G);
  if (!(g > 4.0 * static_cast<double>(M))) {
    throw precondition_error("girth " + std::to_string(g) + " is not above 4M = " +
                             std::to_string(4 * M));
  }
  if (subset_count(pool.size(), M) > 1e7) {
    throw precondition_error("exhaustive halo scan is infeasible at this size");
  }

  std::vector<bool> in(G.n, false);
  bool ok = true;
  auto visit = [&](const std::vector<std::size_t>& idx) {
    if (!ok) return;
    for (std::size_t i : idx) in[pool[i]] = true;
    std::set<std::size_t> boundary;
    for (std::size_t i : idx) {
      for (std::size_t w : adj[pool[i]]) {
        if (!in[w]) boundary.insert(w);
      }
    }
    if (boundary.size() < idx.size()) ok = false;
    for (std::size_t i : idx) in[pool[i]] = false;
  };
  for (std::size_t k = 1; k <= M && k <= pool.size() && ok; ++k) {
    for_each_combination(pool.size(), k, visit);
  }
  return ok;
}

FiniteMetricSpace sequence_space(const GraphSequence& seq) {
  if (seq.members.empty()) throw validation_error("graph sequence is empty");
  std::vector<FiniteMetricSpace> blocks;
  blocks.reserve(seq.members.size());
  for (std::size_t i = 0; i < seq.members.size(); ++i) {
    if (!is_connected(seq.members[i])) {
      throw precondition_error("sequence member " + std::to_string(i) + " is disconnected");
    }
    blocks.push_back(graph_metric(seq.members[i]));
  }
  return coarse_disjoint_union(blocks);
}

LightExpanderCertificate light_expander_certificate(const GraphSequence& seq,
                                                    std::size_t max_size, std::uint64_t seed,
                                                    std::size_t samples) {
  if (seq.members.empty()) throw validation_error("graph sequence is empty");
  LightExpanderCertificate out;
  bool any = false;
  for (std::size_t i = 0; i < seq.members.size(); ++i) {
    if (seq.members[i].n <= max_size) {
      throw precondition_error("sequence member " + std::to_string(i) + " has only " +
                               std::to_string(seq.members[i].n) +
                               " vertices, not above the size bound");
    }
    const HaloSearchResult res =
        halo_ratio_search(graph_metric(seq.members[i]), max_size, seed + i, samples);
    out.exhaustive = out.exhaustive && res.exhaustive;
    if (!any || res.min_ratio < out.min_ratio) {
      any = true;
      out.min_ratio = res.min_ratio;
      out.worst_member = i;
      out.worst_set = res.argmin;
    }
  }
  return out;
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw validation_error("a cycle needs at least 3 vertices");
  Graph G{n, {}};
  for (std::size_t v = 0; v < n; ++v) G.edges.emplace_back(v, (v + 1) % n);
  return G;
}

Graph path_graph(std::size_t n) {
  if (n == 0) throw validation_error("a path needs at least 1 vertex");
  Graph G{n, {}};
  for (std::size_t v = 0; v + 1 < n; ++v) G.edges.emplace_back(v, v + 1);
  return G;
}

Graph complete_graph(std::size_t n) {
  if (n == 0) throw validation_error("a complete graph needs at least 1 vertex");
  Graph G{n, {}};
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w = v + 1; w < n; ++w) G.edges.emplace_back(v, w);
  }
  return G;
}

Graph hypercube_graph(std::size_t dim) {
  if (dim == 0 || dim > 20) throw validation_error("hypercube dimension must lie in [1, 20]");
  const std::size_t n = static_cast<std::size_t>(1) << dim;
  Graph G{n, {}};
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t b = 0; b < dim; ++b) {
      const std::size_t bit = static_cast<std::size_t>(1) << b;
      if (!(v & bit)) G.edges.emplace_back(v, v | bit);
    }
  }
  return G;
}

Graph petersen_graph() {
  Graph G{10, {}};
  for (std::size_t i = 0; i < 5; ++i) {
    G.edges.emplace_back(i, (i + 1) % 5);
    G.edges.emplace_back(i, i + 5);
    G.edges.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  return G;
}

Graph truncated_tree(std::size_t degree, std::size_t radius) {
  if (degree < 2) throw validation_error("tree degree must be at least 2");
  Graph G{1, {}};
  std::vector<std::size_t> frontier{0};
  for (std::size_t depth = 0; depth < radius; ++depth) {
    std::vector<std::size_t> next;
    for (std::size_t v : frontier) {
      const std::size_t children = (depth == 0) ? degree : degree - 1;
      for (std::size_t c = 0; c < children; ++c) {
        const std::size_t w = G.n++;
        G.edges.emplace_back(v, w);
        next.push_back(w);
      }
    }
    frontier = std::move(next);
  }
  return G;
}

Graph random_regular_graph(std::size_t n, std::size_t degree, std::uint64_t seed) {
  if (degree == 0 || degree >= n) throw precondition_error("degree must lie in [1, n-1]");
  if ((n * degree) % 2 != 0) throw precondition_error("n*degree must be even");
  Rng rng(seed);
  for (std::size_t attempt = 0; attempt < 2000; ++attempt) {
    std::vector<std::size_t> stubs;
    stubs.reserve(n * degree);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t d = 0; d < degree; ++d) stubs.push_back(v);
    }
    for (std::size_t i = stubs.size(); i > 1; --i) {
      std::swap(stubs[i - 1], stubs[rng.below(i)]);
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    bool simple = true;
    for (std::size_t i = 0; i + 1 < stubs.size() && simple; i += 2) {
      const std::size_t u = std::min(stubs[i], stubs[i + 1]);
      const std::size_t v = std::max(stubs[i], stubs[i + 1]);
      if (u == v || !seen.emplace(u, v).second) simple = false;
    }
    if (!simple) continue;
    Graph G{n, {seen.begin(), seen.end()}};
    if (is_connected(G)) return G;
  }
  throw precondition_error("could not sample a simple connected regular graph at these parameters");
}

}  // namespace coarse
