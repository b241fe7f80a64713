#include "coarse/l1.hpp"

#include <algorithm>
#include <cmath>

#include "coarse/common.hpp"

namespace coarse {

namespace {
// Distinct from the comparison tolerance: this only strips accumulated
// floating dust so that "zero entries are never stored" stays true.
constexpr double kDust = 1e-15;
}

SparseVec make_sparse(std::vector<std::pair<std::size_t, double>> raw) {
  std::sort(raw.begin(), raw.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec out;
  out.entries.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size();) {
    std::size_t id = raw[i].first;
    double w = 0.0;
    while (i < raw.size() && raw[i].first == id) w += raw[i++].second;
    if (std::fabs(w) > kDust) out.entries.push_back({id, w});
  }
  return out;
}

double l1_norm(const SparseVec& v) {
  double s = 0.0;
  for (const auto& [id, w] : v.entries) s += std::fabs(w);
  return s;
}

double l1_distance(const SparseVec& a, const SparseVec& b) {
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.entries.size() || j < b.entries.size()) {
    if (j == b.entries.size() ||
        (i < a.entries.size() && a.entries[i].first < b.entries[j].first)) {
      s += std::fabs(a.entries[i++].second);
    } else if (i == a.entries.size() || b.entries[j].first < a.entries[i].first) {
      s += std::fabs(b.entries[j++].second);
    } else {
      s += std::fabs(a.entries[i++].second - b.entries[j++].second);
    }
  }
  return s;
}

SparseVec scaled(const SparseVec& v, double c) {
  SparseVec out = v;
  for (auto& [id, w] : out.entries) w *= c;
  return out;
}

bool sparse_equal(const SparseVec& a, const SparseVec& b) {
  std::size_t i = 0, j = 0;
  while (i < a.entries.size() || j < b.entries.size()) {
    if (j == b.entries.size() ||
        (i < a.entries.size() && a.entries[i].first < b.entries[j].first)) {
      if (!nearly_equal(a.entries[i++].second, 0.0)) return false;
    } else if (i == a.entries.size() || b.entries[j].first < a.entries[i].first) {
      if (!nearly_equal(b.entries[j++].second, 0.0)) return false;
    } else {
      if (!nearly_equal(a.entries[i++].second, b.entries[j++].second)) return false;
    }
  }
  return true;
}

}  // namespace coarse
