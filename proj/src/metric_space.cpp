#include "coarse/metric_space.hpp"

#include <algorithm>
#include <cmath>

#include "coarse/common.hpp"

namespace coarse {

SpaceValidation validate_space(const FiniteMetricSpace& X) {
  if (X.n == 0) throw validation_error("space: must have at least one point");
  if (X.dist.size() != X.n * X.n) {
    throw validation_error("space: dist must be an n*n matrix (n=" + std::to_string(X.n) + ")");
  }
  if (!X.labels.empty() && X.labels.size() != X.n) {
    throw validation_error("space: labels must be absent or one per point");
  }
  for (double v : X.dist) {
    if (!std::isfinite(v)) throw validation_error("space: distances must be finite numbers");
  }
  SpaceValidation out;
  const std::size_t n = X.n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!nearly_equal(X(i, i), 0.0)) {
      throw validation_error("space: dist(" + std::to_string(i) + "," + std::to_string(i) +
                             ") must be 0, got " + std::to_string(X(i, i)));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (lt(X(i, j), 0.0)) {
        throw validation_error("space: negative distance at (" + std::to_string(i) + "," +
                               std::to_string(j) + ")");
      }
      if (!nearly_equal(X(i, j), X(j, i))) {
        throw validation_error("space: dist not symmetric at (" + std::to_string(i) + "," +
                               std::to_string(j) + "): " + std::to_string(X(i, j)) + " vs " +
                               std::to_string(X(j, i)));
      }
      if (le(X(i, j), 0.0) && !out.pseudometric) {
        out.pseudometric = true;
        out.notes.push_back("pseudometric: distinct points " + std::to_string(i) + "," +
                            std::to_string(j) + " at distance 0");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (!le(X(i, k), X(i, j) + X(j, k))) {
          throw validation_error("space: triangle inequality fails at (" + std::to_string(i) +
                                 "," + std::to_string(j) + "," + std::to_string(k) + ")");
        }
      }
    }
  }
  return out;
}

std::vector<std::size_t> ball(const FiniteMetricSpace& X, std::size_t x, double r) {
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y < X.n; ++y) {
    if (lt(X(x, y), r)) out.push_back(y);
  }
  return out;
}

double set_distance(const FiniteMetricSpace& X, std::size_t x, const std::vector<std::size_t>& A) {
  double best = kInfinity;
  for (std::size_t a : A) best = std::min(best, X(x, a));
  return best;
}

double subset_diameter(const FiniteMetricSpace& X, const std::vector<std::size_t>& A) {
  double best = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (std::size_t j = i + 1; j < A.size(); ++j) {
      best = std::max(best, X(A[i], A[j]));
    }
  }
  return best;
}

double space_diameter(const FiniteMetricSpace& X) {
  double best = 0.0;
  for (std::size_t i = 0; i < X.n; ++i) {
    for (std::size_t j = i + 1; j < X.n; ++j) best = std::max(best, X(i, j));
  }
  return best;
}

std::vector<std::size_t> neighborhood(const FiniteMetricSpace& X,
                                      const std::vector<std::size_t>& S, double s) {
  std::vector<char> in(X.n, 0);
  for (std::size_t p : S) in[p] = 1;
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y < X.n; ++y) {
    if (in[y] || lt(set_distance(X, y, S), s)) out.push_back(y);
  }
  return out;
}

FiniteMetricSpace coarse_disjoint_union(const std::vector<FiniteMetricSpace>& factors) {
  if (factors.empty()) throw validation_error("coarse_disjoint_union: no factors");
  std::size_t total = 0;
  std::vector<double> diam;
  diam.reserve(factors.size());
  for (const auto& f : factors) {
    if (f.n == 0) throw validation_error("coarse_disjoint_union: empty factor");
    total += f.n;
    diam.push_back(space_diameter(f));
  }
  FiniteMetricSpace out;
  out.n = total;
  out.dist.assign(total * total, 0.0);
  out.labels.reserve(total);
  std::vector<std::size_t> offset(factors.size());
  std::size_t at = 0;
  for (std::size_t b = 0; b < factors.size(); ++b) {
    offset[b] = at;
    const auto& f = factors[b];
    for (std::size_t i = 0; i < f.n; ++i) {
      std::string base = f.labels.empty() ? std::to_string(i) : f.labels[i];
      out.labels.push_back("b" + std::to_string(b) + ":" + base);
    }
    at += f.n;
  }
  for (std::size_t b = 0; b < factors.size(); ++b) {
    const auto& f = factors[b];
    for (std::size_t i = 0; i < f.n; ++i) {
      for (std::size_t j = 0; j < f.n; ++j) {
        out.at(offset[b] + i, offset[b] + j) = f(i, j);
      }
    }
    for (std::size_t c = b + 1; c < factors.size(); ++c) {
      double d = diam[b] + diam[c];
      for (std::size_t i = 0; i < f.n; ++i) {
        for (std::size_t j = 0; j < factors[c].n; ++j) {
          out.at(offset[b] + i, offset[c] + j) = d;
          out.at(offset[c] + j, offset[b] + i) = d;
        }
      }
    }
  }
  return out;
}

std::vector<std::size_t> separated_net(const FiniteMetricSpace& X, double r) {
  if (!gt(r, 0.0)) throw precondition_error("separated_net: r must be positive");
  std::vector<std::size_t> net;
  for (std::size_t x = 0; x < X.n; ++x) {
    bool blocked = false;
    for (std::size_t y : net) {
      if (lt(X(x, y), r)) {
        blocked = true;
        break;
      }
    }
    if (!blocked) net.push_back(x);
  }
  return net;
}

}  // namespace coarse
