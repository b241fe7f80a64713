#include "coarse/measures.hpp"

#include <algorithm>
#include <numeric>

#include "coarse/common.hpp"

namespace coarse {
namespace {

void check_point_set(const FiniteMetricSpace& X, const std::vector<std::size_t>& A,
                     const std::string& what) {
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i] >= X.n) {
      throw validation_error(what + " references point " + std::to_string(A[i]) +
                             " outside the space");
    }
    if (i > 0 && A[i] <= A[i - 1]) {
      throw validation_error(what + " must be sorted and duplicate-free");
    }
  }
}

double min_distance_between(const FiniteMetricSpace& X, const std::vector<std::size_t>& A,
                            const std::vector<std::size_t>& B) {
  double best = kInfinity;
  for (std::size_t a : A) {
    for (std::size_t b : B) best = std::min(best, X(a, b));
  }
  return best;
}

std::vector<std::size_t> sorted_difference(const std::vector<std::size_t>& a,
                                           const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::size_t> sorted_intersection(const std::vector<std::size_t>& a,
                                             const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

void validate_measure(const FiniteMetricSpace& X, const ProbabilityMeasure& mu) {
  if (mu.weights.size() != X.n) {
    throw validation_error("measure has " + std::to_string(mu.weights.size()) +
                           " weights for " + std::to_string(X.n) + " points");
  }
  double sum = 0.0;
  for (std::size_t x = 0; x < mu.weights.size(); ++x) {
    if (mu.weights[x] < 0.0) {
      throw validation_error("weight of point " + std::to_string(x) + " is negative");
    }
    sum += mu.weights[x];
  }
  if (!nearly_equal(sum, 1.0)) {
    throw validation_error("weights sum to " + std::to_string(sum) + ", expected 1");
  }
}

std::vector<std::size_t> support(const ProbabilityMeasure& mu) {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < mu.weights.size(); ++x) {
    if (mu.weights[x] > 0.0) out.push_back(x);
  }
  return out;
}

double measure_of(const ProbabilityMeasure& mu, const std::vector<std::size_t>& points) {
  double sum = 0.0;
  for (std::size_t x : points) sum += mu.weights[x];
  return sum;
}

std::vector<std::size_t> r_boundary(const FiniteMetricSpace& X,
                                    const std::vector<std::size_t>& E, double R, bool closed) {
  if (!gt(R, 0.0)) throw precondition_error("boundary width must be positive");
  check_point_set(X, E, "the subset");
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < X.n; ++x) {
    if (std::binary_search(E.begin(), E.end(), x)) continue;
    const double d = set_distance(X, x, E);
    if (closed ? le(d, R) : lt(d, R)) out.push_back(x);
  }
  return out;
}

bool ula_witness_check(const FiniteMetricSpace& X, const ProbabilityMeasure& mu,
                       const std::vector<std::size_t>& E, double R, double eps) {
  validate_measure(X, mu);
  if (E.empty()) throw precondition_error("the witness subset is empty");
  const std::vector<std::size_t> boundary = r_boundary(X, E, R);
  return measure_of(mu, boundary) < eps * measure_of(mu, E);
}

BoundaryScanResult scan_boundary_set(const FiniteMetricSpace& X, const ProbabilityMeasure& mu,
                                     const Cover& U, double R, double eps) {
  validate_measure(X, mu);
  validate_cover(X, U);
  if (!gt(R, 0.0)) throw precondition_error("the scale R must be positive");
  if (!gt(eps, 0.0)) throw precondition_error("eps must be positive");

  const HorizonIndex index(X, U);
  const double floor_ratio = 1.0 / (1.0 + eps);
  for (std::size_t x : support(mu)) {
    const std::size_t point_count = index.count_point(x);
    const std::size_t ball_count = index.count_ball(x, R);
    const double ratio =
        static_cast<double>(point_count) / static_cast<double>(ball_count);
    if (!gt(ratio, floor_ratio)) {
      throw precondition_error("horizon ratio at support point " + std::to_string(x) + " is " +
                               std::to_string(ratio) + ", needs to exceed 1/(1+eps) = " +
                               std::to_string(floor_ratio));
    }
  }

  // Exact double count of the pairs (x, s) with x in the R-boundary of U_s.
  std::vector<std::vector<std::size_t>> boundaries;
  boundaries.reserve(U.elements.size());
  double by_elements = 0.0;
  for (const CoverElement& e : U.elements) {
    boundaries.push_back(r_boundary(X, e.points, R));
    by_elements += measure_of(mu, boundaries.back());
  }
  double by_points = 0.0;
  for (std::size_t x = 0; x < X.n; ++x) {
    if (mu.weights[x] == 0.0) continue;
    by_points += mu.weights[x] *
                 static_cast<double>(index.count_ball(x, R) - index.count_point(x));
  }
  if (!nearly_equal(by_elements, by_points)) {
    throw internal_inconsistency_error("boundary double count disagrees: " +
                                       std::to_string(by_elements) + " by elements, " +
                                       std::to_string(by_points) + " by points");
  }

  std::vector<std::size_t> order(U.elements.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return U.elements[a].label < U.elements[b].label;
  });
  for (std::size_t s : order) {
    const double boundary_mass = measure_of(mu, boundaries[s]);
    const double element_mass = measure_of(mu, U.elements[s].points);
    if (boundary_mass < eps * element_mass) {
      return BoundaryScanResult{s, U.elements[s].label, U.elements[s].points, boundary_mass,
                                element_mass};
    }
  }
  throw internal_inconsistency_error(
      "no element has a light boundary although the horizon ratios guarantee one");
}

void validate_family(const FiniteMetricSpace& X, const DisjointFamily& family) {
  if (family.members.empty()) throw validation_error("the family has no members");
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    if (family.members[i].empty()) {
      throw validation_error("family member " + std::to_string(i) + " is empty");
    }
    check_point_set(X, family.members[i], "family member " + std::to_string(i));
  }
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    for (std::size_t j = i + 1; j < family.members.size(); ++j) {
      const double d = min_distance_between(X, family.members[i], family.members[j]);
      if (!ge(d, family.R)) {
        throw validation_error("members " + std::to_string(i) + " and " + std::to_string(j) +
                               " are at distance " + std::to_string(d) + " < " +
                               std::to_string(family.R));
      }
    }
  }
}

SetFinder brute_force_finder(double R, double S, double eps) {
  return [R, S, eps](const FiniteMetricSpace& X,
                     const ProbabilityMeasure& mu) -> std::vector<std::size_t> {
    const std::vector<std::size_t> pool = support(mu);
    if (pool.size() > 20) {
      throw precondition_error("brute-force finder handles at most 20 support points, got " +
                               std::to_string(pool.size()));
    }
    std::vector<std::size_t> best;
    double best_mass = 0.0;
    const std::uint64_t spread = 1ULL << pool.size();
    for (std::uint64_t bits = 1; bits < spread; ++bits) {
      std::vector<std::size_t> Z;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (bits & (1ULL << i)) Z.push_back(pool[i]);
      }
      if (!le(subset_diameter(X, Z), S)) continue;
      const double z_mass = measure_of(mu, Z);
      const double b_mass = measure_of(mu, r_boundary(X, Z, R));
      if (b_mass < eps * z_mass && z_mass > best_mass) {
        best = std::move(Z);
        best_mass = z_mass;
      }
    }
    if (best.empty()) {
      throw precondition_error("no subset of diameter at most " + std::to_string(S) +
                               " has a light boundary");
    }
    return best;
  };
}

SetFinder cover_scan_finder(Cover U, double R, double eps) {
  return [U = std::move(U), R, eps](const FiniteMetricSpace& X,
                                    const ProbabilityMeasure& mu) -> std::vector<std::size_t> {
    return scan_boundary_set(X, mu, U, R, eps).element;
  };
}

DisjointFamily msp_greedy(const FiniteMetricSpace& X, const ProbabilityMeasure& mu, double R,
                          double S, const SetFinder& finder, double finder_eps, double c) {
  validate_measure(X, mu);
  if (!gt(R, 0.0)) throw precondition_error("the separation R must be positive");
  if (!gt(S, 0.0)) throw precondition_error("the diameter bound S must be positive");
  if (!gt(c, 0.0) || !lt(c, 1.0)) throw precondition_error("c must lie strictly between 0 and 1");
  if (!gt(finder_eps, 0.0)) throw precondition_error("the finder tolerance must be positive");
  if (!gt((1.0 + c) / (2.0 * (1.0 + finder_eps)), c)) {
    throw precondition_error("finder tolerance too large: (1+c)/(2(1+eps)) = " +
                             std::to_string((1.0 + c) / (2.0 * (1.0 + finder_eps))) +
                             " must exceed c = " + std::to_string(c));
  }

  // Heaviest support points first until the mass reaches (1+c)/2.
  std::vector<std::size_t> by_weight = support(mu);
  std::stable_sort(by_weight.begin(), by_weight.end(), [&](std::size_t a, std::size_t b) {
    return mu.weights[a] > mu.weights[b];
  });
  const double target = (1.0 + c) / 2.0;
  std::vector<std::size_t> Y;
  double mass = 0.0;
  for (std::size_t x : by_weight) {
    if (mass >= target) break;
    Y.push_back(x);
    mass += mu.weights[x];
  }
  std::sort(Y.begin(), Y.end());

  DisjointFamily family;
  family.R = R;
  std::vector<std::size_t> remaining = Y;
  for (std::size_t iteration = 1; !remaining.empty(); ++iteration) {
    ProbabilityMeasure restricted;
    restricted.weights.assign(X.n, 0.0);
    const double remaining_mass = measure_of(mu, remaining);
    for (std::size_t x : remaining) restricted.weights[x] = mu.weights[x] / remaining_mass;

    std::vector<std::size_t> Z;
    try {
      Z = finder(X, restricted);
    } catch (const std::exception& e) {
      throw precondition_error("finder failure at iteration " + std::to_string(iteration) +
                               ": " + e.what());
    }
    std::sort(Z.begin(), Z.end());
    Z.erase(std::unique(Z.begin(), Z.end()), Z.end());
    check_point_set(X, Z, "the finder's set");
    if (!le(subset_diameter(X, Z), S)) {
      throw precondition_error("finder failure at iteration " + std::to_string(iteration) +
                               ": returned set has diameter " +
                               std::to_string(subset_diameter(X, Z)) + " > " +
                               std::to_string(S));
    }
    const double z_mass = measure_of(restricted, Z);
    const double b_mass = measure_of(restricted, r_boundary(X, Z, R));
    if (!(b_mass < finder_eps * z_mass)) {
      throw precondition_error("finder failure at iteration " + std::to_string(iteration) +
                               ": boundary mass " + std::to_string(b_mass) +
                               " is not below eps times the set mass " +
                               std::to_string(finder_eps * z_mass));
    }
    std::vector<std::size_t> cut = sorted_intersection(Z, remaining);
    if (cut.empty()) {
      throw precondition_error("finder failure at iteration " + std::to_string(iteration) +
                               ": returned set misses the remaining support");
    }
    remaining = sorted_difference(remaining, neighborhood(X, cut, R));
    family.members.push_back(std::move(cut));
  }

  for (std::size_t i = 0; i < family.members.size(); ++i) {
    if (!le(subset_diameter(X, family.members[i]), S)) {
      throw internal_inconsistency_error("member " + std::to_string(i) + " exceeds diameter " +
                                         std::to_string(S));
    }
    for (std::size_t j = i + 1; j < family.members.size(); ++j) {
      if (!ge(min_distance_between(X, family.members[i], family.members[j]), R)) {
        throw internal_inconsistency_error("members " + std::to_string(i) + " and " +
                                           std::to_string(j) + " are closer than " +
                                           std::to_string(R));
      }
    }
  }
  double total = 0.0;
  for (const auto& member : family.members) total += measure_of(mu, member);
  if (!(total > c)) {
    throw internal_inconsistency_error("family mass " + std::to_string(total) +
                                       " fails to exceed c = " + std::to_string(c));
  }
  return family;
}

UlaSelection msp_to_ula(const FiniteMetricSpace& X, const ProbabilityMeasure& mu,
                        const DisjointFamily& family, double R, double eps) {
  validate_measure(X, mu);
  if (!gt(R, 0.0)) throw precondition_error("the scale R must be positive");
  if (!gt(eps, 0.0)) throw precondition_error("eps must be positive");
  if (family.members.empty()) throw validation_error("the family has no members");
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    if (family.members[i].empty()) {
      throw validation_error("family member " + std::to_string(i) + " is empty");
    }
    check_point_set(X, family.members[i], "family member " + std::to_string(i));
  }
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    for (std::size_t j = i + 1; j < family.members.size(); ++j) {
      const double d = min_distance_between(X, family.members[i], family.members[j]);
      if (!ge(d, 2.0 * R)) {
        throw precondition_error("members " + std::to_string(i) + " and " + std::to_string(j) +
                                 " are at distance " + std::to_string(d) +
                                 ", the selection needs 2R = " + std::to_string(2.0 * R));
      }
    }
  }
  double total = 0.0;
  for (const auto& member : family.members) total += measure_of(mu, member);
  const double needed = std::max(1.0 - eps / 2.0, 0.5);
  if (!(total > needed)) {
    throw precondition_error("family mass " + std::to_string(total) +
                             " does not exceed max(1 - eps/2, 1/2) = " + std::to_string(needed));
  }
  for (std::size_t j = 0; j < family.members.size(); ++j) {
    const double member_mass = measure_of(mu, family.members[j]);
    const double boundary_mass = measure_of(mu, r_boundary(X, family.members[j], R));
    if (boundary_mass < eps * member_mass) {
      return UlaSelection{j, family.members[j], boundary_mass, member_mass};
    }
  }
  throw internal_inconsistency_error(
      "no member passes although the boundary masses sum below eps times the family mass");
}

}  // namespace coarse
