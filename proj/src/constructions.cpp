#include "coarse/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coarse/common.hpp"

namespace coarse {

AmenabilityReport horizon_ratio(const FiniteMetricSpace& X, const Cover& U, double r, double s) {
  validate_cover(X, U);
  if (!gt(r, 0.0) || !gt(s, r)) {
    throw precondition_error("scales must satisfy s > r > 0");
  }
  HorizonIndex index(X, U);
  AmenabilityReport rep;
  rep.r = r;
  rep.s = s;
  rep.horizon_sizes.reserve(X.n);
  rep.min_ratio = 2.0;
  for (std::size_t x = 0; x < X.n; ++x) {
    const std::size_t small = index.count_ball(x, r);
    const std::size_t large = index.count_ball(x, s);
    if (small == 0 || large == 0 || small > large) {
      throw internal_inconsistency_error("horizon counts at point " + std::to_string(x) +
                                         " are not nested");
    }
    rep.horizon_sizes.emplace_back(small, large);
    const double ratio = static_cast<double>(small) / static_cast<double>(large);
    if (ratio < rep.min_ratio) {
      rep.min_ratio = ratio;
      rep.worst_point = x;
    }
  }
  return rep;
}

PartitionOfUnity average_pou(const FiniteMetricSpace& X, const PartitionOfUnity& f, const Cover& U,
                             double eps, std::optional<std::vector<std::size_t>> basepoints,
                             std::optional<double> M) {
  validate_pou(X, f);
  validate_cover(X, U);
  if (!gt(eps, 0.0)) throw precondition_error("eps must be positive");

  const double reach = 1.0 / eps;
  const double bound_M = M ? *M : family_diameter(X, U) + reach;
  if (!gt(bound_M, 0.5)) {
    throw precondition_error("coboundedness parameter must exceed 1/2, got " +
                             std::to_string(bound_M));
  }

  std::vector<std::size_t> base;
  if (basepoints) {
    base = std::move(*basepoints);
    if (base.size() != U.elements.size()) {
      throw validation_error("expected one basepoint per cover element");
    }
    for (std::size_t t = 0; t < base.size(); ++t) {
      const auto& pts = U.elements[t].points;
      if (!std::binary_search(pts.begin(), pts.end(), base[t])) {
        throw validation_error("basepoint " + std::to_string(base[t]) +
                               " lies outside element '" + U.elements[t].label + "'");
      }
    }
  } else {
    base.reserve(U.elements.size());
    for (const auto& e : U.elements) base.push_back(e.points.front());
  }

  const PoUMetrics fm = pou_metrics(X, f);
  const double delta = fm.lipschitz_number;
  const double delta_cap = eps / (2.0 * bound_M + 1.0);
  if (!lt(delta, delta_cap)) {
    std::ostringstream msg;
    msg << "lipschitz number " << delta << " is not below eps/(2M+1) = " << delta_cap;
    throw precondition_error(msg.str());
  }

  HorizonIndex index(X, U);
  PartitionOfUnity g;
  g.labels = f.labels;
  g.values.reserve(X.n);
  for (std::size_t x = 0; x < X.n; ++x) {
    const Horizon S = index.ball_horizon(x, reach);
    if (S.elements.empty()) {
      throw internal_inconsistency_error("empty horizon at point " + std::to_string(x));
    }
    const double w = 1.0 / static_cast<double>(S.size());
    std::vector<std::pair<std::size_t, double>> entries;
    for (std::size_t t : S.elements) {
      for (const auto& [id, weight] : f.values[base[t]].entries) {
        entries.emplace_back(id, w * weight);
      }
    }
    g.values.push_back(make_sparse(std::move(entries)));
  }
  validate_pou(X, g);

  const PoUMetrics gm = pou_metrics(X, g);
  if (!ge(gm.lebesgue, reach)) {
    throw internal_inconsistency_error("averaged partition has Lebesgue number " +
                                       std::to_string(gm.lebesgue) + " below 1/eps");
  }
  for (std::size_t x = 0; x < X.n; ++x) {
    for (std::size_t y = x + 1; y < X.n; ++y) {
      const double dist = l1_distance(g.values[x], g.values[y]);
      if (!le(dist, delta * (2.0 * bound_M + X(x, y)) + delta)) {
        throw internal_inconsistency_error("variation bound failed between points " +
                                           std::to_string(x) + " and " + std::to_string(y));
      }
    }
  }
  return g;
}

RoundingResult round_to_barycentric(const FiniteMetricSpace& X, const PartitionOfUnity& g,
                                    const RoundingParams& params) {
  validate_pou(X, g);
  if (!gt(params.eps, 0.0)) throw precondition_error("eps must be positive");
  const double np1 = static_cast<double>(params.n + 1);
  const double needed = 2.0 * np1 / params.eps + np1 * (np1 + 1.0);
  if (params.m < 1 || !ge(static_cast<double>(params.m), needed)) {
    throw precondition_error("m too small: need m >= 2(n+1)/eps + (n+1)(n+2) = " +
                             std::to_string(needed));
  }
  for (std::size_t x = 0; x < X.n; ++x) {
    if (g.values[x].entries.size() > params.n + 1) {
      throw precondition_error("carrier bound violated: point " + std::to_string(x) + " carries " +
                               std::to_string(g.values[x].entries.size()) +
                               " labels, dimension " + std::to_string(params.n) + " allows " +
                               std::to_string(params.n + 1));
    }
  }

  const long long m = params.m;
  const long long slack = static_cast<long long>(params.n);
  RoundingResult out;
  out.integer_field.labels = g.labels;
  out.integer_field.values.resize(X.n);
  out.h.labels = g.labels;
  out.h.values.resize(X.n);

  for (std::size_t x = 0; x < X.n; ++x) {
    const auto& row = g.values[x].entries;
    std::vector<std::pair<std::size_t, long long>> g2;
    g2.reserve(row.size());
    long long total = 0;
    for (const auto& [v, w] : row) {
      const double raw = static_cast<double>(m) * w;
      long long value;
      if (ge(raw, 1.0)) {
        const double snapped = std::round(raw);
        value = nearly_equal(raw, snapped) ? std::llround(snapped)
                                           : static_cast<long long>(std::floor(raw));
      } else {
        value = 1;
      }
      g2.emplace_back(v, value);
      total += value;
    }
    const long long k = m - total;
    if (k > slack || k < -slack) {
      throw internal_inconsistency_error("rounding deficit " + std::to_string(k) + " at point " +
                                         std::to_string(x) + " exceeds the dimension");
    }
    std::size_t heaviest = 0;
    for (std::size_t i = 1; i < g2.size(); ++i) {
      if (g2[i].second > g2[heaviest].second) heaviest = i;
    }
    g2[heaviest].second += k;
    if (g2[heaviest].second < 1) {
      throw internal_inconsistency_error("correction emptied the heaviest label at point " +
                                         std::to_string(x));
    }

    long long check = 0;
    double drift = 0.0;
    std::vector<std::pair<std::size_t, double>> h_entries;
    h_entries.reserve(g2.size());
    for (std::size_t i = 0; i < g2.size(); ++i) {
      if (g2[i].first != row[i].first || g2[i].second < 1) {
        throw internal_inconsistency_error("rounding changed the carrier at point " +
                                           std::to_string(x));
      }
      check += g2[i].second;
      drift += std::abs(static_cast<double>(m) * row[i].second -
                        static_cast<double>(g2[i].second));
      h_entries.emplace_back(g2[i].first,
                             static_cast<double>(g2[i].second) / static_cast<double>(m));
    }
    if (check != m) {
      throw internal_inconsistency_error("integer weights at point " + std::to_string(x) +
                                         " total " + std::to_string(check) + ", not m");
    }
    if (!le(drift, 2.0 * np1)) {
      throw internal_inconsistency_error("fractional remainder exceeds 2n+2 at point " +
                                         std::to_string(x));
    }
    out.h.values[x] = make_sparse(std::move(h_entries));
    if (!le(l1_distance(out.h.values[x], g.values[x]), 2.0 * np1 / static_cast<double>(m))) {
      throw internal_inconsistency_error("rounded partition drifts beyond (2n+2)/m at point " +
                                         std::to_string(x));
    }
    out.integer_field.values[x] = std::move(g2);
  }
  validate_pou(X, out.h);
  out.expansion = barycentric_expansion(X, out.integer_field);
  return out;
}

PartitionOfUnity amenable_cover_to_pou(const FiniteMetricSpace& X, const Cover& U, double r,
                                       double mu, std::optional<double> strong_eps) {
  validate_cover(X, U);
  if (!gt(r, 0.0)) throw precondition_error("radius must be positive");
  if (!gt(mu, 0.0)) throw precondition_error("mu must be positive");

  const double leb = lebesgue_number(X, U);
  if (!ge(leb, 4.0 * r)) {
    throw precondition_error("cover has Lebesgue number " + std::to_string(leb) +
                             ", below the required " + std::to_string(4.0 * r));
  }
  const AmenabilityReport ratios = horizon_ratio(X, U, r, 2.0 * r);
  if (!gt(ratios.min_ratio, 1.0 / (1.0 + mu))) {
    throw precondition_error("horizon ratio " + std::to_string(ratios.min_ratio) + " at point " +
                             std::to_string(ratios.worst_point) + " is not above 1/(1+mu) = " +
                             std::to_string(1.0 / (1.0 + mu)));
  }
  if (strong_eps) {
    const double e = *strong_eps;
    if (!gt(e, 0.0)) throw precondition_error("eps must be positive");
    const double needed_r = std::max(1.0 / e, (2.0 - e) / e);
    if (!gt(r, needed_r)) {
      throw precondition_error("strong certificate needs r > " + std::to_string(needed_r));
    }
    if (!le(mu, e / 4.0)) {
      throw precondition_error("strong certificate needs mu <= eps/4 = " + std::to_string(e / 4.0));
    }
  }

  HorizonIndex index(X, U);
  std::vector<std::vector<std::size_t>> A(X.n);
  PartitionOfUnity g;
  g.labels.reserve(U.elements.size());
  for (const auto& e : U.elements) g.labels.push_back(e.label);
  g.values.reserve(X.n);
  for (std::size_t x = 0; x < X.n; ++x) {
    A[x] = index.ball_horizon(x, 2.0 * r).elements;
    const double w = 1.0 / static_cast<double>(A[x].size());
    std::vector<std::pair<std::size_t, double>> entries;
    entries.reserve(A[x].size());
    for (std::size_t t : A[x]) entries.emplace_back(t, w);
    g.values.push_back(make_sparse(std::move(entries)));
  }
  validate_pou(X, g);

  const PoUMetrics gm = pou_metrics(X, g);
  if (!ge(gm.lebesgue, 2.0 * r)) {
    throw internal_inconsistency_error("horizon partition has Lebesgue number " +
                                       std::to_string(gm.lebesgue) + " below 2r");
  }
  for (std::size_t x = 0; x < X.n; ++x) {
    for (std::size_t y = x + 1; y < X.n; ++y) {
      if (!lt(X(x, y), r)) continue;
      std::size_t inter = 0;
      {
        std::size_t i = 0, j = 0;
        while (i < A[x].size() && j < A[y].size()) {
          if (A[x][i] < A[y][j]) {
            ++i;
          } else if (A[y][j] < A[x][i]) {
            ++j;
          } else {
            ++inter, ++i, ++j;
          }
        }
      }
      // Real-margin counting estimates; the tolerance stays out of these.
      const double lost_xy = static_cast<double>(A[x].size() - inter);
      const double lost_yx = static_cast<double>(A[y].size() - inter);
      const double overlap = static_cast<double>(inter) * mu;
      if (!(lost_xy < overlap) || !(lost_yx < overlap)) {
        throw internal_inconsistency_error("horizon drift between points " + std::to_string(x) +
                                           " and " + std::to_string(y) +
                                           " reaches mu times the overlap");
      }
      if (!(l1_distance(g.values[x], g.values[y]) < 4.0 * mu)) {
        throw internal_inconsistency_error("variation between points " + std::to_string(x) +
                                           " and " + std::to_string(y) + " reaches 4mu");
      }
    }
  }
  if (strong_eps) {
    const double e = *strong_eps;
    if (!gt(gm.lebesgue, 1.0 / e)) {
      throw internal_inconsistency_error("certified partition has Lebesgue number below 1/eps");
    }
    for (std::size_t x = 0; x < X.n; ++x) {
      for (std::size_t y = x + 1; y < X.n; ++y) {
        if (!le(l1_distance(g.values[x], g.values[y]), e * X(x, y) + e)) {
          throw internal_inconsistency_error("certified partition fails the (eps,eps) estimate");
        }
      }
    }
  }
  return g;
}

RatioBound ratio_bound_from_pou(const FiniteMetricSpace& X, const Cover& U, double s, double mu,
                                std::size_t M) {
  validate_cover(X, U);
  if (!gt(s, 0.0)) throw precondition_error("scale must be positive");
  if (!gt(mu, 0.0)) throw precondition_error("mu must be positive");
  const double load = (s + 1.0) * mu;
  if (!lt(load, 1.0)) {
    throw precondition_error("(s+1)*mu = " + std::to_string(load) + " must be below 1");
  }
  for (std::size_t x = 0; x < X.n; ++x) {
    const std::size_t count = ball(X, x, s).size();
    if (count > M) {
      throw precondition_error("ball around point " + std::to_string(x) + " holds " +
                               std::to_string(count) + " points, above the cap " +
                               std::to_string(M));
    }
  }
  const PartitionOfUnity p = barycentric_from_cover(X, U);
  const PoUMetrics pm = pou_metrics(X, p);
  if (!le(pm.lipschitz_number, mu)) {
    throw precondition_error("induced partition has lipschitz number " +
                             std::to_string(pm.lipschitz_number) + ", above mu = " +
                             std::to_string(mu));
  }

  RatioBound out;
  out.bound = 1.0 / (1.0 + static_cast<double>(M) * load / (1.0 - load));
  out.report.r = 0.0;
  out.report.s = s;
  out.report.min_ratio = 2.0;
  out.report.horizon_sizes.reserve(X.n);
  HorizonIndex index(X, U);
  for (std::size_t x = 0; x < X.n; ++x) {
    const std::size_t small = index.count_point(x);
    const std::size_t large = index.count_ball(x, s);
    out.report.horizon_sizes.emplace_back(small, large);
    const double ratio = static_cast<double>(small) / static_cast<double>(large);
    if (ratio < out.report.min_ratio) {
      out.report.min_ratio = ratio;
      out.report.worst_point = x;
    }
  }
  if (!ge(out.report.min_ratio, out.bound)) {
    throw internal_inconsistency_error("point " + std::to_string(out.report.worst_point) +
                                       " has horizon ratio " +
                                       std::to_string(out.report.min_ratio) +
                                       " below the counting bound " + std::to_string(out.bound));
  }
  return out;
}

}  // namespace coarse
