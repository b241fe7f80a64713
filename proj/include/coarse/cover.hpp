#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coarse/metric_space.hpp"

namespace coarse {

struct CoverElement {
  std::string label;
  std::vector<std::size_t> points;  // sorted, unique
};

// An ordered family of labeled nonempty subsets whose union is the space.
struct Cover {
  std::vector<CoverElement> elements;
};

// Throws validation_error naming the failing invariant and index:
// empty element, duplicate label, point out of range, union != X.
void validate_cover(const FiniteMetricSpace& X, const Cover& U);

// Indices (into U.elements) of the elements meeting A, sorted.
struct Horizon {
  std::vector<std::size_t> elements;

  std::size_t size() const { return elements.size(); }
  std::vector<std::string> labels(const Cover& U) const;
};

Horizon horizon(const FiniteMetricSpace& X, const Cover& U, const std::vector<std::size_t>& A);

// max over elements of subset_diameter. Errors on an empty family.
double family_diameter(const FiniteMetricSpace& X, const std::vector<std::vector<std::size_t>>& family);
double family_diameter(const FiniteMetricSpace& X, const Cover& U);

// sup{r : every open r-ball lies inside some element}. +inf when some
// element is the whole space. Computed as
//   min over x of max over E of min{d(x,y) : y not in E}.
double lebesgue_number(const FiniteMetricSpace& X, const std::vector<std::vector<std::size_t>>& family);
double lebesgue_number(const FiniteMetricSpace& X, const Cover& U);

// max number of elements containing a single point.
std::size_t multiplicity(const FiniteMetricSpace& X, const Cover& U);

// Element-wise open s-neighborhood (keeping the element itself). Labels
// preserved. Lebesgue number never decreases and is >= s afterwards.
Cover thicken(const FiniteMetricSpace& X, const Cover& U, double s);

// Element-wise inner r-shrinking A -> X \ neighborhood(X\A, r). Results can
// be empty or fail to cover, so this returns a plain labeled family, not a
// Cover. Every x in a shrunk element has B(x,r) inside the original element.
std::vector<CoverElement> shrink(const FiniteMetricSpace& X, const Cover& U, double r);

// Per-point element-membership bitsets for horizon counting in inner loops.
class HorizonIndex {
 public:
  HorizonIndex(const FiniteMetricSpace& X, const Cover& U);

  std::size_t count_point(std::size_t x) const;            // |hor({x})|
  std::size_t count_ball(std::size_t x, double r) const;   // |hor(B(x,r))|
  Horizon ball_horizon(std::size_t x, double r) const;
  Horizon point_horizon(std::size_t x) const;

 private:
  const FiniteMetricSpace& space_;
  std::size_t words_;
  std::vector<std::uint64_t> masks_;  // n * words_

  std::vector<std::uint64_t> or_ball(std::size_t x, double r) const;
};

}  // namespace coarse
