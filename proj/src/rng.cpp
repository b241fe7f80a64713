#include "coarse/rng.hpp"

#include <algorithm>

#include "coarse/common.hpp"

namespace coarse {

std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k) {
  if (k > n) throw validation_error("sample_without_replacement: k > n");
  // Floyd's algorithm keeps this cheap for k << n.
  std::vector<std::size_t> picked;
  picked.reserve(k);
  for (std::size_t j = n - k; j < n; ++j) {
    std::size_t t = rng.below(j + 1);
    if (std::find(picked.begin(), picked.end(), t) == picked.end()) {
      picked.push_back(t);
    } else {
      picked.push_back(j);
    }
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace coarse
