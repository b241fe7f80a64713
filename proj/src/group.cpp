#include "coarse/group.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "coarse/common.hpp"
#include "coarse/l1.hpp"
#include "coarse/pou.hpp"

namespace coarse {
namespace {

std::size_t symmetric_difference_size(const std::vector<std::size_t>& a,
                                      const std::vector<std::size_t>& b) {
  std::size_t i = 0, j = 0, count = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++count, ++i;
    } else if (b[j] < a[i]) {
      ++count, ++j;
    } else {
      ++i, ++j;
    }
  }
  return count + (a.size() - i) + (b.size() - j);
}

std::vector<std::size_t> left_translate(const FiniteGroup& G, std::size_t x,
                                        const std::vector<std::size_t>& F) {
  std::vector<std::size_t> out;
  out.reserve(F.size());
  for (std::size_t y : F) out.push_back(G.mul(x, y));
  std::sort(out.begin(), out.end());
  return out;
}

// Word lengths from the identity along the generators.
std::vector<std::size_t> word_lengths(const FiniteGroup& G) {
  constexpr std::size_t kFar = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(G.order, kFar);
  std::vector<std::size_t> queue{G.identity};
  dist[G.identity] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t a = queue[head];
    for (std::size_t g : G.generators) {
      const std::size_t b = G.mul(a, g);
      if (dist[b] == kFar) {
        dist[b] = dist[a] + 1;
        queue.push_back(b);
      }
    }
  }
  for (std::size_t a = 0; a < G.order; ++a) {
    if (dist[a] == kFar) {
      throw validation_error("generators do not generate: element " + std::to_string(a) +
                             " is unreachable");
    }
  }
  return dist;
}

}  // namespace

GroupValidation validate_group(FiniteGroup& G, std::uint64_t assoc_seed) {
  GroupValidation out;
  if (G.order == 0) throw validation_error("group has no elements");
  if (G.table.size() != G.order * G.order) {
    throw validation_error("multiplication table has " + std::to_string(G.table.size()) +
                           " entries, expected " + std::to_string(G.order * G.order));
  }
  for (std::size_t v : G.table) {
    if (v >= G.order) throw validation_error("table entry " + std::to_string(v) + " out of range");
  }
  if (G.identity >= G.order) throw validation_error("identity index out of range");
  for (std::size_t a = 0; a < G.order; ++a) {
    if (G.mul(G.identity, a) != a || G.mul(a, G.identity) != a) {
      throw validation_error("element " + std::to_string(a) + " breaks the identity law");
    }
  }
  std::vector<bool> seen(G.order);
  for (std::size_t a = 0; a < G.order; ++a) {
    std::fill(seen.begin(), seen.end(), false);
    for (std::size_t b = 0; b < G.order; ++b) {
      if (seen[G.mul(a, b)]) {
        throw validation_error("row " + std::to_string(a) + " is not a permutation");
      }
      seen[G.mul(a, b)] = true;
    }
    std::fill(seen.begin(), seen.end(), false);
    for (std::size_t b = 0; b < G.order; ++b) {
      if (seen[G.mul(b, a)]) {
        throw validation_error("column " + std::to_string(a) + " is not a permutation");
      }
      seen[G.mul(b, a)] = true;
    }
  }
  for (std::size_t a = 0; a < G.order; ++a) {
    std::size_t inv = G.order;
    for (std::size_t b = 0; b < G.order; ++b) {
      if (G.mul(a, b) == G.identity) {
        inv = b;
        break;
      }
    }
    if (inv == G.order || G.mul(inv, a) != G.identity) {
      throw validation_error("element " + std::to_string(a) + " has no two-sided inverse");
    }
  }
  if (G.order <= 256) {
    for (std::size_t a = 0; a < G.order; ++a) {
      for (std::size_t b = 0; b < G.order; ++b) {
        for (std::size_t c = 0; c < G.order; ++c) {
          if (G.mul(G.mul(a, b), c) != G.mul(a, G.mul(b, c))) {
            throw validation_error("associativity fails at (" + std::to_string(a) + ", " +
                                   std::to_string(b) + ", " + std::to_string(c) + ")");
          }
        }
      }
    }
  } else {
    Rng rng(assoc_seed);
    for (std::size_t t = 0; t < 200000; ++t) {
      const std::size_t a = rng.below(G.order);
      const std::size_t b = rng.below(G.order);
      const std::size_t c = rng.below(G.order);
      if (G.mul(G.mul(a, b), c) != G.mul(a, G.mul(b, c))) {
        throw validation_error("associativity fails at (" + std::to_string(a) + ", " +
                               std::to_string(b) + ", " + std::to_string(c) + ")");
      }
    }
    out.notes.push_back("associativity checked on 200000 sampled triples");
  }

  std::sort(G.generators.begin(), G.generators.end());
  G.generators.erase(std::unique(G.generators.begin(), G.generators.end()), G.generators.end());
  for (std::size_t g : G.generators) {
    if (g >= G.order) throw validation_error("generator " + std::to_string(g) + " out of range");
  }
  if (std::binary_search(G.generators.begin(), G.generators.end(), G.identity)) {
    G.generators.erase(std::find(G.generators.begin(), G.generators.end(), G.identity));
    out.notes.push_back("dropped the identity from the generating set");
  }
  {
    std::vector<std::size_t> sym = G.generators;
    bool grew = false;
    for (std::size_t g : G.generators) {
      const std::size_t inv = inverse(G, g);
      if (!std::binary_search(G.generators.begin(), G.generators.end(), inv)) {
        sym.push_back(inv);
        grew = true;
      }
    }
    if (grew) {
      std::sort(sym.begin(), sym.end());
      sym.erase(std::unique(sym.begin(), sym.end()), sym.end());
      G.generators = std::move(sym);
      out.notes.push_back("added inverses to symmetrize the generating set");
    }
  }
  if (G.order > 1 && G.generators.empty()) {
    throw validation_error("nontrivial group with an empty generating set");
  }
  word_lengths(G);
  return out;
}

std::size_t inverse(const FiniteGroup& G, std::size_t a) {
  for (std::size_t b = 0; b < G.order; ++b) {
    if (G.mul(a, b) == G.identity) return b;
  }
  throw validation_error("element " + std::to_string(a) + " has no inverse");
}

FiniteGroup cyclic_group(std::size_t N) {
  if (N == 0) throw validation_error("cyclic group order must be positive");
  FiniteGroup G;
  G.order = N;
  G.identity = 0;
  G.table.resize(N * N);
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t b = 0; b < N; ++b) G.table[a * N + b] = (a + b) % N;
  }
  if (N == 2) {
    G.generators = {1};
  } else if (N > 2) {
    G.generators = {1, N - 1};
  }
  return G;
}

Graph cayley_graph(const FiniteGroup& G) {
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t a = 0; a < G.order; ++a) {
    for (std::size_t g : G.generators) {
      const std::size_t b = G.mul(a, g);
      if (a != b) edges.emplace(std::min(a, b), std::max(a, b));
    }
  }
  return Graph{G.order, {edges.begin(), edges.end()}};
}

ProductSpace product_group_space(const FiniteGroup& G, std::size_t n, std::size_t table_cap,
                                 std::uint64_t seed) {
  FiniteGroup base = G;
  validate_group(base, seed);
  if (base.order < 2) throw precondition_error("the factor group must be nontrivial");
  if (n == 0) throw precondition_error("the power must be at least 1");
  std::size_t order = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (order > table_cap / base.order) {
      throw precondition_error("product order exceeds the table cap " +
                               std::to_string(table_cap));
    }
    order *= base.order;
  }

  const std::size_t o = base.order;
  ProductSpace out;
  out.group.order = order;
  out.group.table.resize(order * order);
  for (std::size_t a = 0; a < order; ++a) {
    for (std::size_t b = 0; b < order; ++b) {
      std::size_t va = a, vb = b, scale = 1, prod = 0;
      for (std::size_t i = 0; i < n; ++i) {
        prod += base.mul(va % o, vb % o) * scale;
        va /= o, vb /= o, scale *= o;
      }
      out.group.table[a * order + b] = prod;
    }
  }
  {
    std::size_t e = 0, scale = 1;
    for (std::size_t i = 0; i < n; ++i) {
      e += base.identity * scale;
      scale *= o;
    }
    out.group.identity = e;
    scale = 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t g : base.generators) {
        out.group.generators.push_back(e + scale * g - scale * base.identity);
      }
      scale *= o;
    }
  }
  validate_group(out.group, seed);
  out.graph = cayley_graph(out.group);

  const FiniteMetricSpace factor_metric = graph_metric(cayley_graph(base));
  const auto adj = adjacency(out.graph);
  auto l1_of_pair = [&](std::size_t a, std::size_t b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += factor_metric(a % o, b % o);
      a /= o, b /= o;
    }
    return sum;
  };
  auto verify_from = [&](std::size_t src) {
    constexpr std::size_t kFar = static_cast<std::size_t>(-1);
    std::vector<std::size_t> dist(order, kFar);
    std::vector<std::size_t> queue{src};
    dist[src] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t v = queue[head];
      for (std::size_t w : adj[v]) {
        if (dist[w] == kFar) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
      }
    }
    for (std::size_t b = 0; b < order; ++b) {
      if (dist[b] == kFar ||
          !nearly_equal(static_cast<double>(dist[b]), l1_of_pair(src, b))) {
        throw internal_inconsistency_error(
            "product metric differs from the factor-sum metric between " + std::to_string(src) +
            " and " + std::to_string(b));
      }
    }
  };
  if (order <= 1024) {
    for (std::size_t a = 0; a < order; ++a) verify_from(a);
  } else {
    Rng rng(seed);
    for (std::size_t t = 0; t < 64; ++t) verify_from(rng.below(order));
  }
  return out;
}

HaloClaimResult product_halo_claim_check(const FiniteGroup& G, std::size_t n, std::size_t M,
                                         std::uint64_t seed, std::size_t samples) {
  FiniteGroup base = G;
  validate_group(base, seed);
  if (base.order < 2) throw precondition_error("the factor group must be nontrivial");
  if (M == 0) throw precondition_error("the radius must be at least 1");
  if (n <= 3 * M + 2) {
    throw precondition_error("need n > 3M + 2, got n = " + std::to_string(n) + ", M = " +
                             std::to_string(M));
  }
  const std::vector<std::size_t> len = word_lengths(base);

  // Enumerate the closed (M+1)-ball around the identity, digit vectors only.
  using Element = std::vector<std::uint16_t>;
  std::map<Element, std::size_t> index;
  std::vector<Element> elements;
  std::vector<std::size_t> cost;
  const Element origin(n, static_cast<std::uint16_t>(base.identity));
  index.emplace(origin, 0);
  elements.push_back(origin);
  cost.push_back(0);
  for (std::size_t head = 0; head < elements.size(); ++head) {
    const Element cur = elements[head];
    const std::size_t cur_cost = cost[head];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t g : base.generators) {
        const std::size_t digit = base.mul(cur[i], g);
        const std::size_t next_cost = cur_cost - len[cur[i]] + len[digit];
        if (next_cost > M + 1) continue;
        Element next = cur;
        next[i] = static_cast<std::uint16_t>(digit);
        if (index.emplace(next, elements.size()).second) {
          if (elements.size() >= (1u << 16)) {
            throw precondition_error("search infeasible: the (M+1)-ball is too large");
          }
          elements.push_back(std::move(next));
          cost.push_back(next_cost);
        }
      }
    }
  }

  std::vector<std::vector<std::size_t>> neighbors(elements.size());
  for (std::size_t v = 0; v < elements.size(); ++v) {
    if (cost[v] > M) continue;  // only members of candidate sets need neighbors
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t g : base.generators) {
        Element next = elements[v];
        next[i] = static_cast<std::uint16_t>(base.mul(next[i], g));
        const auto it = index.find(next);
        if (it == index.end()) {
          throw internal_inconsistency_error("a neighbor of the M-ball escaped the (M+1)-ball");
        }
        if (it->second != v) seen.insert(it->second);
      }
    }
    neighbors[v] = {seen.begin(), seen.end()};
  }

  std::vector<std::size_t> universe;  // closed M-ball, the candidate pool
  for (std::size_t v = 0; v < elements.size(); ++v) {
    if (cost[v] <= M) universe.push_back(v);
  }

  HaloClaimResult out;
  std::vector<char> marked(elements.size(), 0);
  auto halo_at_least = [&](const std::vector<std::size_t>& A) {
    for (std::size_t a : A) marked[a] = 1;
    std::vector<std::size_t> touched;
    std::size_t count = 0;
    for (std::size_t a : A) {
      for (std::size_t w : neighbors[a]) {
        if (!marked[w]) {
          marked[w] = 1;
          touched.push_back(w);
          ++count;
        }
      }
    }
    for (std::size_t a : A) marked[a] = 0;
    for (std::size_t w : touched) marked[w] = 0;
    return count >= A.size();
  };

  if (universe.size() <= 20) {
    out.exhaustive = true;
    const std::uint64_t spread = 1ULL << universe.size();
    for (std::uint64_t bits = 1; bits < spread; ++bits) {
      std::vector<std::size_t> A;
      for (std::size_t i = 0; i < universe.size(); ++i) {
        if (bits & (1ULL << i)) A.push_back(universe[i]);
      }
      ++out.checked;
      if (!halo_at_least(A)) {
        out.holds = false;
        break;
      }
    }
  } else {
    out.exhaustive = false;
    Rng rng(seed);
    for (std::size_t t = 0; t < samples; ++t) {
      const std::size_t k = 1 + static_cast<std::size_t>(rng.below(universe.size()));
      std::vector<std::size_t> A;
      for (std::size_t i : sample_without_replacement(rng, universe.size(), k)) {
        A.push_back(universe[i]);
      }
      ++out.checked;
      if (!halo_at_least(A)) {
        out.holds = false;
        break;
      }
    }
  }
  if (universe.size() * n <= 4096) {
    for (std::size_t v : universe) {
      for (std::size_t i = 0; i < n; ++i) out.ball.push_back(elements[v][i]);
    }
  }
  return out;
}

FolnerResult folner_analysis(const FiniteGroup& G, const std::vector<std::size_t>& F) {
  FiniteGroup group = G;
  validate_group(group);
  if (F.empty()) throw validation_error("the candidate set is empty");
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (F[i] >= group.order) {
      throw validation_error("candidate set references element " + std::to_string(F[i]) +
                             " outside the group");
    }
    if (i > 0 && F[i] <= F[i - 1]) {
      throw validation_error("candidate set must be sorted and duplicate-free");
    }
  }

  std::vector<std::vector<std::size_t>> translates(group.order);
  for (std::size_t x = 0; x < group.order; ++x) translates[x] = left_translate(group, x, F);
  const auto& base = translates[group.identity];

  std::size_t worst = 0;
  for (std::size_t g : group.generators) {
    worst = std::max(worst, symmetric_difference_size(translates[g], base));
  }
  FolnerResult out;
  out.max_gen_ratio = make_rational(static_cast<long long>(worst),
                                    static_cast<long long>(F.size()));

  const FiniteMetricSpace word = graph_metric(cayley_graph(group));
  PartitionOfUnity phi;
  phi.labels.reserve(group.order);
  for (std::size_t a = 0; a < group.order; ++a) phi.labels.push_back(std::to_string(a));
  phi.values.reserve(group.order);
  const double w = 1.0 / static_cast<double>(F.size());
  for (std::size_t x = 0; x < group.order; ++x) {
    std::vector<std::pair<std::size_t, double>> entries;
    entries.reserve(F.size());
    for (std::size_t y : translates[x]) entries.emplace_back(y, w);
    phi.values.push_back(make_sparse(std::move(entries)));
  }
  const PoUMetrics metrics = pou_metrics(word, phi);
  out.phi_lipschitz = metrics.lipschitz_number;

  std::vector<std::size_t> inv(group.order);
  for (std::size_t a = 0; a < group.order; ++a) inv[a] = inverse(group, a);
  const bool all_pairs = group.order <= 512;
  for (std::size_t x = 0; x < group.order; ++x) {
    for (std::size_t y = x + 1; y < group.order; ++y) {
      const bool adjacent = nearly_equal(word(x, y), 1.0);
      if (!all_pairs && !adjacent) continue;
      const std::size_t direct = symmetric_difference_size(translates[x], translates[y]);
      const std::size_t shifted =
          symmetric_difference_size(translates[group.mul(inv[x], y)], base);
      if (direct != shifted) {
        throw internal_inconsistency_error("translate differences disagree between " +
                                           std::to_string(x) + " and " + std::to_string(y));
      }
      if (adjacent) {
        const double ratio = static_cast<double>(direct) / static_cast<double>(F.size());
        const double dist = l1_distance(phi.values[x], phi.values[y]);
        if (!le(ratio, dist) || !le(dist, 2.0 * ratio)) {
          throw internal_inconsistency_error("difference ratio sandwich fails between " +
                                             std::to_string(x) + " and " + std::to_string(y));
        }
      }
    }
  }
  const double peak = to_double(out.max_gen_ratio);
  if (!ge(out.phi_lipschitz, peak / 2.0) || !le(out.phi_lipschitz, peak)) {
    throw internal_inconsistency_error("lipschitz number leaves the generator-ratio window");
  }
  return out;
}

}  // namespace coarse
