#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "coarse/cover.hpp"
#include "coarse/metric_space.hpp"
#include "coarse/pou.hpp"

namespace coarse {

// Per-point horizon counts at two scales and their worst ratio. r = 0 means
// the small horizon is hor({x}) rather than a ball horizon.
struct AmenabilityReport {
  double r = 0.0;
  double s = 0.0;
  double min_ratio = 1.0;
  std::size_t worst_point = 0;
  std::vector<std::pair<std::size_t, std::size_t>> horizon_sizes;  // (small, large)
};

// Exact |hor(B(x,r),U)| / |hor(B(x,s),U)| per point, s > r > 0. The cover is
// amenable at (r,s,eps) iff min_ratio > 1-eps.
AmenabilityReport horizon_ratio(const FiniteMetricSpace& X, const Cover& U, double r, double s);

// Averages f over the basepoints of the elements near each point:
// g(x) = sum over S(x) of f(x_t) / |S(x)|, S(x) = hor(B(x,1/eps), U).
// Requires lipschitz(f) < eps/(2M+1) and M > 1/2. Default basepoints are the
// lowest-index points of the elements; default M is family_diameter + 1/eps,
// the reach actually used by the variation estimate. Verified:
// lebesgue(g) >= 1/eps and ||g(x)-g(y)|| <= delta(2M+d)+delta.
PartitionOfUnity average_pou(const FiniteMetricSpace& X, const PartitionOfUnity& f, const Cover& U,
                             double eps,
                             std::optional<std::vector<std::size_t>> basepoints = std::nullopt,
                             std::optional<double> M = std::nullopt);

struct RoundingParams {
  std::size_t n = 0;   // dimension: carriers have at most n+1 labels
  long long m = 0;     // denominator, >= 2(n+1)/eps + (n+1)(n+2)
  double eps = 0.0;
};

struct RoundingResult {
  PartitionOfUnity h;          // normalize of the integer field; same carriers as g
  Expansion expansion;         // barycentric spread of the integer field
  IntegerWeights integer_field;  // G2: per-point total exactly m
};

// Integer rounding of g at denominator m: G = m*g splits into G1 + G2 with
// G2(v) = 1 when 0 < G(v) < 1 and floor(G(v)) otherwise, then the deficit
// k(x) = m - ||G2(x)|| moves onto the heaviest label (ties toward the
// smaller id). Verified: ||G2(x)|| = m, carriers preserved,
// ||h(x)-g(x)|| <= (2n+2)/m.
RoundingResult round_to_barycentric(const FiniteMetricSpace& X, const PartitionOfUnity& g,
                                    const RoundingParams& params);

// Barycentric partition over the horizon sets A(x) = hor(B(x,2r), U).
// Requires lebesgue(U) >= 4r and every (r,2r) horizon ratio > 1/(1+mu).
// Verified: lebesgue(g) >= 2r; d(x,y) < r forces |A(x)\A(y)| < mu*|A(x)/\A(y)|
// and ||g(x)-g(y)|| < 4mu. With strong_eps set, additionally requires
// r > max(1/eps, (2-eps)/eps) and mu <= eps/4, then certifies g
// (eps,eps)-Lipschitz with lebesgue > 1/eps.
PartitionOfUnity amenable_cover_to_pou(const FiniteMetricSpace& X, const Cover& U, double r,
                                       double mu, std::optional<double> strong_eps = std::nullopt);

struct RatioBound {
  double bound = 0.0;
  AmenabilityReport report;  // r = 0 convention: point horizons vs s-ball horizons
};

// Quantitative counting bound: when every open s-ball has at most M points
// and the barycentric partition of U is (mu,mu)-Lipschitz with (s+1)mu < 1,
// every point satisfies |hor({x})| / |hor(B(x,s))| >= 1/(1 + M(s+1)mu/(1-(s+1)mu)).
// Returns the bound and the verified per-point report.
RatioBound ratio_bound_from_pou(const FiniteMetricSpace& X, const Cover& U, double s, double mu,
                                std::size_t M);

}  // namespace coarse
