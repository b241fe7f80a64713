#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace coarse {

// Finitely supported weight vector, sorted by label id, zero entries never
// stored. Label ids index an external label universe.
struct SparseVec {
  std::vector<std::pair<std::size_t, double>> entries;
};

// Sorts, merges duplicate ids, drops numeric dust.
SparseVec make_sparse(std::vector<std::pair<std::size_t, double>> raw);

double l1_norm(const SparseVec& v);
double l1_distance(const SparseVec& a, const SparseVec& b);
SparseVec scaled(const SparseVec& v, double c);

// Entrywise within the global tolerance (missing entries read as 0).
bool sparse_equal(const SparseVec& a, const SparseVec& b);

}  // namespace coarse
