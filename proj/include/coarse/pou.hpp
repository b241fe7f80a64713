#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coarse/cover.hpp"
#include "coarse/l1.hpp"
#include "coarse/metric_space.hpp"

namespace coarse {

// x -> nonnegative unit-l1-norm weight vector over a finite label universe.
// Stored densely per point, sparsely per vector.
struct PartitionOfUnity {
  std::vector<std::string> labels;   // the universe V; entry ids index this
  std::vector<SparseVec> values;     // one per point of the space

  std::size_t point_count() const { return values.size(); }
};

// Norm-1, nonnegative, ids in range, labels distinct. Throws naming the point.
void validate_pou(const FiniteMetricSpace& X, const PartitionOfUnity& f);

struct BarycentricFlag {
  bool is_barycentric = false;            // every weight equals 1/|carrier|
  std::vector<std::size_t> carrier_sizes; // per point
};

BarycentricFlag barycentric_flag(const PartitionOfUnity& f);

struct PoUMetrics {
  // least eps with ||f(x)-f(y)|| <= eps*d(x,y) + eps over all pairs
  double lipschitz_number = 0.0;
  // max ||f(x)-f(y)|| over pairs with d(x,y) < r; only when r was given
  std::optional<double> variation_at_r;
  // max over labels of diam(carrier preimage); empty preimages ignored
  double coboundedness = 0.0;
  // Lebesgue number of the family of carrier preimages; may be +inf
  double lebesgue = 0.0;
};

PoUMetrics pou_metrics(const FiniteMetricSpace& X, const PartitionOfUnity& f,
                       std::optional<double> variation_r = std::nullopt);

// Carrier preimages f^{-1}(st(v)) as point lists, one per label (possibly empty).
std::vector<std::vector<std::size_t>> carrier_preimages(const FiniteMetricSpace& X,
                                                        const PartitionOfUnity& f);

// Scales each per-point vector to norm 1. Errors on an all-zero point.
PartitionOfUnity normalize(std::vector<std::string> labels, std::vector<SparseVec> raw);

// Pushforward along a label surjection alpha : old universe -> new universe.
// alpha must cover every old label and hit every new label. Lebesgue number
// never decreases, Lipschitz number never increases.
PartitionOfUnity contract(const PartitionOfUnity& f, const std::vector<std::size_t>& alpha,
                          std::vector<std::string> new_labels);

// Uniform weights over the elements containing x. Labels = cover labels.
PartitionOfUnity barycentric_from_cover(const FiniteMetricSpace& X, const Cover& U);

// The four quantities tying the symmetric-difference estimates to the l1
// distance of normalized indicator vectors of two nonempty label sets:
//   lower1 <= lower2 <= exact <= upper.
struct SimplexBounds {
  double lower1;  // |A Δ B| / max(|A|,|B|)
  double lower2;  // |A\B|/|A| + |B\A|/|B|
  double exact;   // || chi_A/|A| - chi_B/|B| ||_1
  double upper;   // 2 |A Δ B| / min(|A|,|B|)
};

SimplexBounds simplex_bounds(const std::vector<std::size_t>& A, const std::vector<std::size_t>& B);

// Integer-valued weight field with constant per-point total, the input to
// barycentric expansion and the output of rounding.
struct IntegerWeights {
  std::vector<std::string> labels;
  std::vector<std::vector<std::pair<std::size_t, long long>>> values;  // sorted, weights > 0
};

struct Expansion {
  PartitionOfUnity pou;               // barycentric over labels (v,i)
  std::vector<std::size_t> parent;    // new label id -> source label id
};

// Spreads F(x)(v) = c into c unit weights on labels (v,1..c), scaled by the
// constant norm m: g(x)(v,i) = 1/m iff 1 <= i <= F(x)(v). Preserves all
// pairwise l1 distances, Lipschitz number, coboundedness and Lebesgue
// number; contracting along parent recovers normalize(F).
Expansion barycentric_expansion(const FiniteMetricSpace& X, const IntegerWeights& F);

struct GreedyBallResult {
  Cover cover;             // the sets W_k = neighborhood(V_k, r), empties dropped
  PartitionOfUnity pou;    // barycentric over that cover
};

// Greedy disjointification over base points: U_k = B(s_k, 2r),
// V_k = U_k \ (U_1 ... U_{k-1}), W_k = r-neighborhood of V_k. Requires the
// base sequence to be r-dense. The result is 6r-cobounded with Lebesgue
// number >= r (verified).
GreedyBallResult greedy_ball_pou(const FiniteMetricSpace& X,
                                 const std::vector<std::size_t>& base_order, double r);

// Finite Property-A witness: per point a nonempty finite set of
// (point, level) pairs with A(x) within distance S_bound of x.
struct PropertyAWitness {
  double S_bound = 0.0;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> A;  // sorted pairs
};

void validate_witness(const FiniteMetricSpace& X, const PropertyAWitness& W);

struct RelabelResult {
  // old label id -> (point, level); injective
  std::vector<std::pair<std::size_t, std::size_t>> alpha;
  // new label id -> (point, level), sorted; parallels g.labels
  std::vector<std::pair<std::size_t, std::size_t>> new_label_pairs;
  PartitionOfUnity g;  // same values, labels renamed "<point>:<level>"
};

// Renames an M-cobounded partition's labels into (point, level) pairs so
// that each carrier preimage sits inside the ball around its anchor point.
// Every label must have a nonempty preimage. Levels follow label order
// within each anchor's carrier.
RelabelResult relabel_product(const FiniteMetricSpace& X, const PartitionOfUnity& f, double M);

// Barycentric (eps_bar, eps_bar)-Lipschitz partition -> witness at scale R,
// eps_bar = min(eps, 1/2)/(R+1). Verifies: pairs at distance < R have
// intersecting witness sets with |A(x) Δ A(y)| / |A(x) ∩ A(y)| <= eps.
PropertyAWitness pou_to_witness(const FiniteMetricSpace& X, const PartitionOfUnity& f, double R,
                                double eps);

// Witness -> barycentric partition f(x) = chi_{A(x)} / |A(x)| over labels
// "<point>:<level>". Requires pairs with d(x,y) < (2-eps)/eps to have
// intersecting sets with |Δ|/|∩| < eps/2. The output is verified
// S_bound-cobounded and (eps,eps)-Lipschitz.
PartitionOfUnity witness_to_pou(const FiniteMetricSpace& X, const PropertyAWitness& W, double eps);

}  // namespace coarse
