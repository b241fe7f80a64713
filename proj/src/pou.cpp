#include "coarse/pou.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "coarse/common.hpp"

namespace coarse {
namespace {

void check_labels_distinct(const std::vector<std::string>& labels) {
  std::vector<std::string> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  if (dup != sorted.end()) {
    throw validation_error("duplicate label '" + *dup + "'");
  }
}

// Sorted-pair set operations for witness sets A(x).
using PairSet = std::vector<std::pair<std::size_t, std::size_t>>;

std::size_t intersection_size(const PairSet& a, const PairSet& b) {
  std::size_t i = 0, j = 0, k = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++k, ++i, ++j;
    }
  }
  return k;
}

std::string pair_label(std::size_t point, std::size_t level) {
  return std::to_string(point) + ":" + std::to_string(level);
}

}  // namespace

void validate_pou(const FiniteMetricSpace& X, const PartitionOfUnity& f) {
  if (f.labels.empty()) throw validation_error("partition of unity has no labels");
  check_labels_distinct(f.labels);
  if (f.values.size() != X.n) {
    throw validation_error("partition of unity has " + std::to_string(f.values.size()) +
                           " point vectors for a space of " + std::to_string(X.n) + " points");
  }
  for (std::size_t x = 0; x < X.n; ++x) {
    const auto& e = f.values[x].entries;
    double sum = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k].first >= f.labels.size()) {
        throw validation_error("point " + std::to_string(x) + " references label id " +
                               std::to_string(e[k].first) + " outside the universe");
      }
      if (k > 0 && e[k].first <= e[k - 1].first) {
        throw validation_error("point " + std::to_string(x) + " has unsorted or duplicate label ids");
      }
      if (e[k].second <= 0.0) {
        throw validation_error("point " + std::to_string(x) + " carries nonpositive weight on '" +
                               f.labels[e[k].first] + "'");
      }
      sum += e[k].second;
    }
    if (!nearly_equal(sum, 1.0)) {
      throw validation_error("point " + std::to_string(x) + " has total weight " +
                             std::to_string(sum) + ", expected 1");
    }
  }
}

BarycentricFlag barycentric_flag(const PartitionOfUnity& f) {
  BarycentricFlag out;
  out.is_barycentric = true;
  out.carrier_sizes.reserve(f.values.size());
  for (const auto& v : f.values) {
    const std::size_t k = v.entries.size();
    out.carrier_sizes.push_back(k);
    if (k == 0) {
      out.is_barycentric = false;
      continue;
    }
    const double uniform = 1.0 / static_cast<double>(k);
    for (const auto& [id, w] : v.entries) {
      (void)id;
      if (!nearly_equal(w, uniform)) out.is_barycentric = false;
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> carrier_preimages(const FiniteMetricSpace& X,
                                                        const PartitionOfUnity& f) {
  std::vector<std::vector<std::size_t>> pre(f.labels.size());
  for (std::size_t x = 0; x < X.n; ++x) {
    for (const auto& [id, w] : f.values[x].entries) {
      (void)w;
      pre[id].push_back(x);
    }
  }
  return pre;
}

PoUMetrics pou_metrics(const FiniteMetricSpace& X, const PartitionOfUnity& f,
                       std::optional<double> variation_r) {
  validate_pou(X, f);
  PoUMetrics m;
  for (std::size_t x = 0; x < X.n; ++x) {
    for (std::size_t y = x + 1; y < X.n; ++y) {
      const double dist = l1_distance(f.values[x], f.values[y]);
      m.lipschitz_number = std::max(m.lipschitz_number, dist / (X(x, y) + 1.0));
      if (variation_r && lt(X(x, y), *variation_r)) {
        if (!m.variation_at_r) m.variation_at_r = 0.0;
        m.variation_at_r = std::max(*m.variation_at_r, dist);
      }
    }
  }
  if (variation_r && !m.variation_at_r) m.variation_at_r = 0.0;

  std::vector<std::vector<std::size_t>> carriers;
  for (auto& pre : carrier_preimages(X, f)) {
    if (!pre.empty()) carriers.push_back(std::move(pre));
  }
  for (const auto& c : carriers) {
    m.coboundedness = std::max(m.coboundedness, subset_diameter(X, c));
  }
  m.lebesgue = lebesgue_number(X, carriers);
  return m;
}

PartitionOfUnity normalize(std::vector<std::string> labels, std::vector<SparseVec> raw) {
  check_labels_distinct(labels);
  for (std::size_t x = 0; x < raw.size(); ++x) {
    double sum = 0.0;
    for (const auto& [id, w] : raw[x].entries) {
      if (id >= labels.size()) {
        throw validation_error("point " + std::to_string(x) + " references label id " +
                               std::to_string(id) + " outside the universe");
      }
      if (w < 0.0) {
        throw validation_error("point " + std::to_string(x) + " carries negative weight on '" +
                               labels[id] + "'");
      }
      sum += w;
    }
    if (le(sum, 0.0)) {
      throw validation_error("point " + std::to_string(x) + " has zero total weight");
    }
    raw[x] = scaled(raw[x], 1.0 / sum);
  }
  return PartitionOfUnity{std::move(labels), std::move(raw)};
}

PartitionOfUnity contract(const PartitionOfUnity& f, const std::vector<std::size_t>& alpha,
                          std::vector<std::string> new_labels) {
  if (alpha.size() != f.labels.size()) {
    throw validation_error("label map covers " + std::to_string(alpha.size()) +
                           " labels, the partition has " + std::to_string(f.labels.size()));
  }
  check_labels_distinct(new_labels);
  std::vector<bool> hit(new_labels.size(), false);
  for (std::size_t v = 0; v < alpha.size(); ++v) {
    if (alpha[v] >= new_labels.size()) {
      throw validation_error("label map sends '" + f.labels[v] + "' outside the new universe");
    }
    hit[alpha[v]] = true;
  }
  for (std::size_t w = 0; w < hit.size(); ++w) {
    if (!hit[w]) {
      throw validation_error("label map misses new label '" + new_labels[w] + "'");
    }
  }
  PartitionOfUnity out;
  out.labels = std::move(new_labels);
  out.values.reserve(f.values.size());
  for (const auto& v : f.values) {
    std::vector<std::pair<std::size_t, double>> mapped;
    mapped.reserve(v.entries.size());
    for (const auto& [id, w] : v.entries) mapped.emplace_back(alpha[id], w);
    out.values.push_back(make_sparse(std::move(mapped)));
  }
  return out;
}

PartitionOfUnity barycentric_from_cover(const FiniteMetricSpace& X, const Cover& U) {
  validate_cover(X, U);
  PartitionOfUnity f;
  f.labels.reserve(U.elements.size());
  for (const auto& e : U.elements) f.labels.push_back(e.label);
  f.values.assign(X.n, SparseVec{});
  std::vector<std::vector<std::size_t>> carrier(X.n);
  for (std::size_t e = 0; e < U.elements.size(); ++e) {
    for (std::size_t p : U.elements[e].points) carrier[p].push_back(e);
  }
  for (std::size_t x = 0; x < X.n; ++x) {
    const double w = 1.0 / static_cast<double>(carrier[x].size());
    std::vector<std::pair<std::size_t, double>> entries;
    entries.reserve(carrier[x].size());
    for (std::size_t e : carrier[x]) entries.emplace_back(e, w);
    f.values[x] = make_sparse(std::move(entries));
  }
  return f;
}

SimplexBounds simplex_bounds(const std::vector<std::size_t>& A, const std::vector<std::size_t>& B) {
  if (A.empty() || B.empty()) throw validation_error("simplex bounds need nonempty sets");
  const double a = static_cast<double>(A.size());
  const double b = static_cast<double>(B.size());
  std::size_t common = 0;
  {
    std::size_t i = 0, j = 0;
    while (i < A.size() && j < B.size()) {
      if (A[i] < B[j]) {
        ++i;
      } else if (B[j] < A[i]) {
        ++j;
      } else {
        ++common, ++i, ++j;
      }
    }
  }
  const double inter = static_cast<double>(common);
  const double sym = a + b - 2.0 * inter;
  SimplexBounds out;
  out.lower1 = sym / std::max(a, b);
  out.lower2 = (a - inter) / a + (b - inter) / b;
  out.exact = out.lower2 + inter * std::abs(1.0 / a - 1.0 / b);
  out.upper = 2.0 * sym / std::min(a, b);
  if (!le(out.lower1, out.lower2) || !le(out.lower2, out.exact) || !le(out.exact, out.upper)) {
    throw internal_inconsistency_error("symmetric-difference bound chain violated");
  }
  return out;
}

Expansion barycentric_expansion(const FiniteMetricSpace& X, const IntegerWeights& F) {
  if (F.labels.empty()) throw validation_error("integer weights have no labels");
  check_labels_distinct(F.labels);
  if (F.values.size() != X.n) {
    throw validation_error("integer weights cover " + std::to_string(F.values.size()) +
                           " points for a space of " + std::to_string(X.n));
  }
  long long m = -1;
  std::vector<long long> peak(F.labels.size(), 0);
  for (std::size_t x = 0; x < X.n; ++x) {
    long long total = 0;
    const auto& row = F.values[x];
    for (std::size_t k = 0; k < row.size(); ++k) {
      const auto& [id, c] = row[k];
      if (id >= F.labels.size()) {
        throw validation_error("point " + std::to_string(x) + " references label id " +
                               std::to_string(id) + " outside the universe");
      }
      if (k > 0 && id <= row[k - 1].first) {
        throw validation_error("point " + std::to_string(x) + " has unsorted or duplicate label ids");
      }
      if (c <= 0) {
        throw validation_error("point " + std::to_string(x) + " carries nonpositive weight on '" +
                               F.labels[id] + "'");
      }
      total += c;
      peak[id] = std::max(peak[id], c);
    }
    if (total <= 0) throw validation_error("point " + std::to_string(x) + " has zero total weight");
    if (m < 0) m = total;
    if (total != m) {
      throw validation_error("per-point totals differ: point 0 has " + std::to_string(m) +
                             ", point " + std::to_string(x) + " has " + std::to_string(total));
    }
  }

  // New universe: (v, i) for 1 <= i <= max weight seen on v, ordered by (v, i).
  std::vector<std::size_t> first_new(F.labels.size() + 1, 0);
  for (std::size_t v = 0; v < F.labels.size(); ++v) {
    first_new[v + 1] = first_new[v] + static_cast<std::size_t>(peak[v]);
  }
  Expansion out;
  out.pou.labels.reserve(first_new.back());
  out.parent.reserve(first_new.back());
  for (std::size_t v = 0; v < F.labels.size(); ++v) {
    for (long long i = 1; i <= peak[v]; ++i) {
      out.pou.labels.push_back(F.labels[v] + "#" + std::to_string(i));
      out.parent.push_back(v);
    }
  }

  const double unit = 1.0 / static_cast<double>(m);
  out.pou.values.reserve(X.n);
  for (std::size_t x = 0; x < X.n; ++x) {
    std::vector<std::pair<std::size_t, double>> entries;
    for (const auto& [v, c] : F.values[x]) {
      for (long long i = 0; i < c; ++i) entries.emplace_back(first_new[v] + i, unit);
    }
    out.pou.values.push_back(make_sparse(std::move(entries)));
  }

  // The spreading is an isometry on per-point vectors: pairwise l1 distances,
  // hence every metric, agree with the normalized source field.
  std::vector<SparseVec> scaled_src;
  scaled_src.reserve(X.n);
  for (std::size_t x = 0; x < X.n; ++x) {
    std::vector<std::pair<std::size_t, double>> entries;
    for (const auto& [v, c] : F.values[x]) entries.emplace_back(v, static_cast<double>(c));
    scaled_src.push_back(make_sparse(std::move(entries)));
  }
  PartitionOfUnity base = normalize(F.labels, std::move(scaled_src));
  for (std::size_t x = 0; x < X.n; ++x) {
    for (std::size_t y = x + 1; y < X.n; ++y) {
      const double got = l1_distance(out.pou.values[x], out.pou.values[y]);
      const double want = l1_distance(base.values[x], base.values[y]);
      if (!nearly_equal(got, want)) {
        throw internal_inconsistency_error("expansion changed the distance between points " +
                                           std::to_string(x) + " and " + std::to_string(y));
      }
    }
  }
  const PoUMetrics before = pou_metrics(X, base);
  const PoUMetrics after = pou_metrics(X, out.pou);
  if (!nearly_equal(before.lipschitz_number, after.lipschitz_number) ||
      !nearly_equal(before.coboundedness, after.coboundedness) ||
      !nearly_equal(before.lebesgue, after.lebesgue)) {
    throw internal_inconsistency_error("expansion changed a partition metric");
  }
  // Fold by parent directly: contract() insists every target label is hit,
  // which a source label of weight zero everywhere legitimately is not.
  for (std::size_t x = 0; x < X.n; ++x) {
    std::vector<std::pair<std::size_t, double>> mapped;
    mapped.reserve(out.pou.values[x].entries.size());
    for (const auto& [id, w] : out.pou.values[x].entries) {
      mapped.emplace_back(out.parent[id], w);
    }
    if (!sparse_equal(make_sparse(std::move(mapped)), base.values[x])) {
      throw internal_inconsistency_error("contracting the expansion did not recover the source at point " +
                                         std::to_string(x));
    }
  }
  return out;
}

GreedyBallResult greedy_ball_pou(const FiniteMetricSpace& X,
                                 const std::vector<std::size_t>& base_order, double r) {
  if (!gt(r, 0.0)) throw precondition_error("radius must be positive");
  if (base_order.empty()) throw precondition_error("base sequence is empty");
  for (std::size_t s : base_order) {
    if (s >= X.n) {
      throw precondition_error("base point " + std::to_string(s) + " outside the space");
    }
  }
  for (std::size_t x = 0; x < X.n; ++x) {
    bool near = false;
    for (std::size_t s : base_order) {
      if (lt(X(x, s), r)) {
        near = true;
        break;
      }
    }
    if (!near) {
      throw precondition_error("base sequence is not dense: point " + std::to_string(x) +
                               " has no base point within " + std::to_string(r));
    }
  }

  std::vector<bool> claimed(X.n, false);
  Cover W;
  for (std::size_t s : base_order) {
    std::vector<std::size_t> fresh;
    for (std::size_t y : ball(X, s, 2.0 * r)) {
      if (!claimed[y]) {
        fresh.push_back(y);
        claimed[y] = true;
      }
    }
    if (fresh.empty()) continue;
    CoverElement e;
    e.label = "W" + std::to_string(W.elements.size() + 1);
    e.points = neighborhood(X, fresh, r);
    W.elements.push_back(std::move(e));
  }
  for (std::size_t x = 0; x < X.n; ++x) {
    if (!claimed[x]) {
      throw internal_inconsistency_error("greedy pass left point " + std::to_string(x) + " unclaimed");
    }
  }

  GreedyBallResult out;
  out.pou = barycentric_from_cover(X, W);
  out.cover = std::move(W);
  const PoUMetrics m = pou_metrics(X, out.pou);
  if (!le(m.coboundedness, 6.0 * r)) {
    throw internal_inconsistency_error("greedy ball partition is not 6r-cobounded");
  }
  if (!ge(m.lebesgue, r)) {
    throw internal_inconsistency_error("greedy ball partition has Lebesgue number below r");
  }
  return out;
}

void validate_witness(const FiniteMetricSpace& X, const PropertyAWitness& W) {
  if (!std::isfinite(W.S_bound) || W.S_bound < 0.0) {
    throw validation_error("witness bound must be finite and nonnegative");
  }
  if (W.A.size() != X.n) {
    throw validation_error("witness has " + std::to_string(W.A.size()) +
                           " sets for a space of " + std::to_string(X.n) + " points");
  }
  for (std::size_t x = 0; x < X.n; ++x) {
    const auto& set = W.A[x];
    if (set.empty()) throw validation_error("empty witness set at point " + std::to_string(x));
    for (std::size_t k = 0; k < set.size(); ++k) {
      const auto& [p, level] = set[k];
      if (p >= X.n) {
        throw validation_error("witness set at point " + std::to_string(x) +
                               " references point " + std::to_string(p) + " outside the space");
      }
      if (level == 0) {
        throw validation_error("witness set at point " + std::to_string(x) + " uses level 0");
      }
      if (k > 0 && set[k] <= set[k - 1]) {
        throw validation_error("witness set at point " + std::to_string(x) +
                               " is unsorted or has duplicates");
      }
      if (!le(X(x, p), W.S_bound)) {
        throw validation_error("witness set at point " + std::to_string(x) + " reaches point " +
                               std::to_string(p) + " at distance " + std::to_string(X(x, p)) +
                               ", beyond the bound " + std::to_string(W.S_bound));
      }
    }
  }
}

RelabelResult relabel_product(const FiniteMetricSpace& X, const PartitionOfUnity& f, double M) {
  validate_pou(X, f);
  const auto pre = carrier_preimages(X, f);
  std::vector<std::size_t> anchor(f.labels.size());
  for (std::size_t v = 0; v < pre.size(); ++v) {
    if (pre[v].empty()) {
      throw precondition_error("label '" + f.labels[v] + "' has an empty carrier preimage");
    }
    const double diam = subset_diameter(X, pre[v]);
    if (!le(diam, M)) {
      throw precondition_error("carrier preimage of '" + f.labels[v] + "' has diameter " +
                               std::to_string(diam) + ", exceeding " + std::to_string(M));
    }
    anchor[v] = pre[v].front();
  }

  // Levels count labels sharing an anchor, in label order.
  std::vector<std::size_t> seen(X.n, 0);
  RelabelResult out;
  out.alpha.resize(f.labels.size());
  for (std::size_t v = 0; v < f.labels.size(); ++v) {
    out.alpha[v] = {anchor[v], ++seen[anchor[v]]};
  }
  std::vector<std::size_t> order(f.labels.size());
  for (std::size_t v = 0; v < order.size(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.alpha[a] < out.alpha[b];
  });
  std::vector<std::size_t> new_id(f.labels.size());
  out.new_label_pairs.reserve(order.size());
  out.g.labels.reserve(order.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    new_id[order[rank]] = rank;
    out.new_label_pairs.push_back(out.alpha[order[rank]]);
    out.g.labels.push_back(pair_label(out.alpha[order[rank]].first, out.alpha[order[rank]].second));
  }
  out.g.values.reserve(X.n);
  for (const auto& v : f.values) {
    std::vector<std::pair<std::size_t, double>> entries;
    entries.reserve(v.entries.size());
    for (const auto& [id, w] : v.entries) entries.emplace_back(new_id[id], w);
    out.g.values.push_back(make_sparse(std::move(entries)));
  }

  for (std::size_t v = 0; v < pre.size(); ++v) {
    for (std::size_t x : pre[v]) {
      if (!le(X(anchor[v], x), M)) {
        throw internal_inconsistency_error("relabeled carrier escapes the ball around its anchor");
      }
    }
  }
  return out;
}

PropertyAWitness pou_to_witness(const FiniteMetricSpace& X, const PartitionOfUnity& f, double R,
                                double eps) {
  validate_pou(X, f);
  if (!gt(R, 0.0)) throw precondition_error("scale R must be positive");
  if (!gt(eps, 0.0)) throw precondition_error("eps must be positive");
  const BarycentricFlag flag = barycentric_flag(f);
  if (!flag.is_barycentric) {
    throw precondition_error("partition is not barycentric");
  }

  // Drop labels nothing carries so every remaining label has an anchor.
  PartitionOfUnity pruned;
  {
    const auto pre = carrier_preimages(X, f);
    std::vector<std::size_t> keep(f.labels.size(), 0);
    for (std::size_t v = 0; v < pre.size(); ++v) {
      if (!pre[v].empty()) {
        keep[v] = pruned.labels.size();
        pruned.labels.push_back(f.labels[v]);
      }
    }
    pruned.values.reserve(X.n);
    for (const auto& v : f.values) {
      std::vector<std::pair<std::size_t, double>> entries;
      entries.reserve(v.entries.size());
      for (const auto& [id, w] : v.entries) entries.emplace_back(keep[id], w);
      pruned.values.push_back(make_sparse(std::move(entries)));
    }
  }

  const PoUMetrics metrics = pou_metrics(X, pruned);
  const double eps_bar = std::min(eps, 0.5) / (R + 1.0);
  if (!le(metrics.lipschitz_number, eps_bar)) {
    std::ostringstream msg;
    msg << "lipschitz number " << metrics.lipschitz_number << " exceeds the required "
        << eps_bar << " = min(eps, 1/2)/(R+1)";
    throw precondition_error(msg.str());
  }
  const double M = metrics.coboundedness;
  const RelabelResult rel = relabel_product(X, pruned, M);

  PropertyAWitness out;
  out.S_bound = M;
  out.A.resize(X.n);
  for (std::size_t x = 0; x < X.n; ++x) {
    out.A[x].reserve(rel.g.values[x].entries.size());
    for (const auto& [id, w] : rel.g.values[x].entries) {
      (void)w;
      out.A[x].push_back(rel.new_label_pairs[id]);
    }
  }
  validate_witness(X, out);

  for (std::size_t x = 0; x < X.n; ++x) {
    for (std::size_t y = x + 1; y < X.n; ++y) {
      if (!lt(X(x, y), R)) continue;
      const std::size_t inter = intersection_size(out.A[x], out.A[y]);
      if (inter == 0) {
        throw internal_inconsistency_error("witness sets at points " + std::to_string(x) + " and " +
                                           std::to_string(y) + " are disjoint inside the scale");
      }
      const double sym = static_cast<double>(out.A[x].size() + out.A[y].size() - 2 * inter);
      if (!le(sym / static_cast<double>(inter), eps)) {
        throw internal_inconsistency_error("witness sets at points " + std::to_string(x) + " and " +
                                           std::to_string(y) + " differ by more than eps");
      }
    }
  }
  return out;
}

PartitionOfUnity witness_to_pou(const FiniteMetricSpace& X, const PropertyAWitness& W, double eps) {
  validate_witness(X, W);
  if (!gt(eps, 0.0)) throw precondition_error("eps must be positive");

  const double threshold = (2.0 - eps) / eps;
  for (std::size_t x = 0; x < X.n; ++x) {
    for (std::size_t y = x + 1; y < X.n; ++y) {
      if (!lt(X(x, y), threshold)) continue;
      const std::size_t inter = intersection_size(W.A[x], W.A[y]);
      if (inter == 0) {
        throw precondition_error("witness sets at points " + std::to_string(x) + " and " +
                                 std::to_string(y) + " are disjoint at distance " +
                                 std::to_string(X(x, y)) + " < " + std::to_string(threshold));
      }
      const double sym = static_cast<double>(W.A[x].size() + W.A[y].size() - 2 * inter);
      if (!lt(sym / static_cast<double>(inter), eps / 2.0)) {
        throw precondition_error("witness sets at points " + std::to_string(x) + " and " +
                                 std::to_string(y) + " differ by " + std::to_string(sym / inter) +
                                 " relative to their overlap, needing < eps/2");
      }
    }
  }

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> ids;
  for (const auto& set : W.A) {
    for (const auto& p : set) ids.emplace(p, 0);
  }
  PartitionOfUnity f;
  f.labels.reserve(ids.size());
  for (auto& [pair, id] : ids) {
    id = f.labels.size();
    f.labels.push_back(pair_label(pair.first, pair.second));
  }
  f.values.reserve(X.n);
  for (const auto& set : W.A) {
    const double w = 1.0 / static_cast<double>(set.size());
    std::vector<std::pair<std::size_t, double>> entries;
    entries.reserve(set.size());
    for (const auto& p : set) entries.emplace_back(ids[p], w);
    f.values.push_back(make_sparse(std::move(entries)));
  }
  validate_pou(X, f);

  const PoUMetrics metrics = pou_metrics(X, f);
  if (!le(metrics.coboundedness, W.S_bound)) {
    throw precondition_error("carrier preimages reach diameter " +
                             std::to_string(metrics.coboundedness) + ", exceeding the witness bound " +
                             std::to_string(W.S_bound));
  }
  for (std::size_t x = 0; x < X.n; ++x) {
    for (std::size_t y = x + 1; y < X.n; ++y) {
      const double dist = l1_distance(f.values[x], f.values[y]);
      if (!le(dist, eps * X(x, y) + eps)) {
        throw internal_inconsistency_error("two-case variation estimate failed between points " +
                                           std::to_string(x) + " and " + std::to_string(y));
      }
    }
  }
  return f;
}

}  // namespace coarse
