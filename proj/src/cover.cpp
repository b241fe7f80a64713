#include "coarse/cover.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "coarse/common.hpp"

namespace coarse {

void validate_cover(const FiniteMetricSpace& X, const Cover& U) {
  if (U.elements.empty()) throw validation_error("cover: no elements");
  std::set<std::string> seen;
  std::vector<char> covered(X.n, 0);
  for (std::size_t e = 0; e < U.elements.size(); ++e) {
    const auto& el = U.elements[e];
    if (el.points.empty()) {
      throw validation_error("cover: element " + std::to_string(e) + " ('" + el.label +
                             "') is empty");
    }
    if (!seen.insert(el.label).second) {
      throw validation_error("cover: duplicate label '" + el.label + "'");
    }
    for (std::size_t i = 0; i < el.points.size(); ++i) {
      std::size_t p = el.points[i];
      if (p >= X.n) {
        throw validation_error("cover: element " + std::to_string(e) + " references point " +
                               std::to_string(p) + " outside the space");
      }
      if (i > 0 && el.points[i - 1] >= p) {
        throw validation_error("cover: element " + std::to_string(e) +
                               " points must be sorted and unique");
      }
      covered[p] = 1;
    }
  }
  std::string missing;
  for (std::size_t p = 0; p < X.n; ++p) {
    if (!covered[p]) missing += (missing.empty() ? "" : ", ") + std::to_string(p);
  }
  if (!missing.empty()) {
    throw validation_error("cover: union misses points [" + missing + "]");
  }
}

std::vector<std::string> Horizon::labels(const Cover& U) const {
  std::vector<std::string> out;
  out.reserve(elements.size());
  for (std::size_t e : elements) out.push_back(U.elements[e].label);
  return out;
}

Horizon horizon(const FiniteMetricSpace& X, const Cover& U, const std::vector<std::size_t>& A) {
  std::vector<char> in(X.n, 0);
  for (std::size_t p : A) in[p] = 1;
  Horizon h;
  for (std::size_t e = 0; e < U.elements.size(); ++e) {
    for (std::size_t p : U.elements[e].points) {
      if (in[p]) {
        h.elements.push_back(e);
        break;
      }
    }
  }
  return h;
}

double family_diameter(const FiniteMetricSpace& X,
                       const std::vector<std::vector<std::size_t>>& family) {
  if (family.empty()) throw validation_error("family_diameter: empty family");
  double best = 0.0;
  for (const auto& el : family) best = std::max(best, subset_diameter(X, el));
  return best;
}

double family_diameter(const FiniteMetricSpace& X, const Cover& U) {
  std::vector<std::vector<std::size_t>> family;
  family.reserve(U.elements.size());
  for (const auto& el : U.elements) family.push_back(el.points);
  return family_diameter(X, family);
}

double lebesgue_number(const FiniteMetricSpace& X,
                       const std::vector<std::vector<std::size_t>>& family) {
  if (family.empty()) throw validation_error("lebesgue_number: empty family");
  std::vector<std::vector<char>> in(family.size(), std::vector<char>(X.n, 0));
  for (std::size_t e = 0; e < family.size(); ++e) {
    for (std::size_t p : family[e]) in[e][p] = 1;
  }
  double leb = kInfinity;
  for (std::size_t x = 0; x < X.n; ++x) {
    double cap = 0.0;  // largest r with B(x,r) inside some element
    for (std::size_t e = 0; e < family.size(); ++e) {
      if (family[e].empty()) continue;
      double inner = kInfinity;
      for (std::size_t y = 0; y < X.n; ++y) {
        if (!in[e][y]) inner = std::min(inner, X(x, y));
      }
      cap = std::max(cap, inner);
      if (cap == kInfinity) break;
    }
    leb = std::min(leb, cap);
  }
  return leb;
}

double lebesgue_number(const FiniteMetricSpace& X, const Cover& U) {
  std::vector<std::vector<std::size_t>> family;
  family.reserve(U.elements.size());
  for (const auto& el : U.elements) family.push_back(el.points);
  return lebesgue_number(X, family);
}

std::size_t multiplicity(const FiniteMetricSpace& X, const Cover& U) {
  std::vector<std::size_t> count(X.n, 0);
  for (const auto& el : U.elements) {
    for (std::size_t p : el.points) ++count[p];
  }
  std::size_t best = 0;
  for (std::size_t c : count) best = std::max(best, c);
  return best;
}

Cover thicken(const FiniteMetricSpace& X, const Cover& U, double s) {
  if (lt(s, 0.0)) throw precondition_error("thicken: s must be nonnegative");
  Cover out;
  out.elements.reserve(U.elements.size());
  for (const auto& el : U.elements) {
    out.elements.push_back({el.label, neighborhood(X, el.points, s)});
  }
  return out;
}

std::vector<CoverElement> shrink(const FiniteMetricSpace& X, const Cover& U, double r) {
  if (lt(r, 0.0)) throw precondition_error("shrink: r must be nonnegative");
  std::vector<CoverElement> out;
  out.reserve(U.elements.size());
  for (const auto& el : U.elements) {
    std::vector<char> in(X.n, 0);
    for (std::size_t p : el.points) in[p] = 1;
    std::vector<std::size_t> complement;
    for (std::size_t p = 0; p < X.n; ++p) {
      if (!in[p]) complement.push_back(p);
    }
    std::vector<char> cut(X.n, 0);
    for (std::size_t p : neighborhood(X, complement, r)) cut[p] = 1;
    std::vector<std::size_t> kept;
    for (std::size_t p = 0; p < X.n; ++p) {
      if (!cut[p]) kept.push_back(p);
    }
    out.push_back({el.label, kept});
  }
  return out;
}

HorizonIndex::HorizonIndex(const FiniteMetricSpace& X, const Cover& U)
    : space_(X), words_((U.elements.size() + 63) / 64), masks_(X.n * words_, 0) {
  for (std::size_t e = 0; e < U.elements.size(); ++e) {
    for (std::size_t p : U.elements[e].points) {
      masks_[p * words_ + e / 64] |= (std::uint64_t{1} << (e % 64));
    }
  }
}

std::vector<std::uint64_t> HorizonIndex::or_ball(std::size_t x, double r) const {
  std::vector<std::uint64_t> acc(words_, 0);
  for (std::size_t y = 0; y < space_.n; ++y) {
    if (lt(space_(x, y), r)) {
      const std::uint64_t* row = &masks_[y * words_];
      for (std::size_t w = 0; w < words_; ++w) acc[w] |= row[w];
    }
  }
  return acc;
}

std::size_t HorizonIndex::count_point(std::size_t x) const {
  std::size_t c = 0;
  for (std::size_t w = 0; w < words_; ++w) c += std::popcount(masks_[x * words_ + w]);
  return c;
}

std::size_t HorizonIndex::count_ball(std::size_t x, double r) const {
  auto acc = or_ball(x, r);
  std::size_t c = 0;
  for (std::uint64_t w : acc) c += std::popcount(w);
  return c;
}

namespace {
Horizon mask_to_horizon(const std::vector<std::uint64_t>& acc) {
  Horizon h;
  for (std::size_t w = 0; w < acc.size(); ++w) {
    std::uint64_t bits = acc[w];
    while (bits) {
      unsigned b = std::countr_zero(bits);
      h.elements.push_back(w * 64 + b);
      bits &= bits - 1;
    }
  }
  return h;
}
}  // namespace

Horizon HorizonIndex::ball_horizon(std::size_t x, double r) const {
  return mask_to_horizon(or_ball(x, r));
}

Horizon HorizonIndex::point_horizon(std::size_t x) const {
  std::vector<std::uint64_t> acc(masks_.begin() + x * words_, masks_.begin() + (x + 1) * words_);
  return mask_to_horizon(acc);
}

}  // namespace coarse
