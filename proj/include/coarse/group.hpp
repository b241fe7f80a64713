#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coarse/graph.hpp"
#include "coarse/rational.hpp"

namespace coarse {

// Finite group as a dense multiplication table with a symmetric generating
// set. table[a*order + b] = a*b.
struct FiniteGroup {
  std::size_t order = 0;
  std::vector<std::size_t> table;
  std::size_t identity = 0;
  std::vector<std::size_t> generators;

  std::size_t mul(std::size_t a, std::size_t b) const { return table[a * order + b]; }
};

struct GroupValidation {
  std::vector<std::string> notes;  // symmetrization, dropped identity, sampled checks
};

// Checks the table is a group (Latin rows/columns, identity, two-sided
// inverses, associativity: exhaustive up to order 256, seeded samples
// beyond), normalizes the generating set in place (sorted, identity dropped,
// inverses added) and requires it to generate.
GroupValidation validate_group(FiniteGroup& G, std::uint64_t assoc_seed = 0);

std::size_t inverse(const FiniteGroup& G, std::size_t a);

// Z/N with generators {1, N-1}.
FiniteGroup cyclic_group(std::size_t N);

// Edges {a, a*g} over the generators. Connected iff the generators generate.
Graph cayley_graph(const FiniteGroup& G);

struct ProductSpace {
  FiniteGroup group;  // G^n with per-factor generators
  Graph graph;        // its Cayley graph
};

// Direct power G^n with the union of per-factor generator copies. The
// Cayley metric of the result equals the l1 sum of factor word metrics;
// verified exhaustively up to 1024 elements, on seeded samples beyond.
// The dense table caps the order at table_cap.
ProductSpace product_group_space(const FiniteGroup& G, std::size_t n,
                                 std::size_t table_cap = 4096, std::uint64_t seed = 0);

struct HaloClaimResult {
  bool holds = true;
  bool exhaustive = true;
  std::size_t checked = 0;           // subsets inspected
  std::vector<std::size_t> ball;     // flat element digits, row-major, context only
};

// Checks |halo(A)| >= |A| in the Cayley graph of G^n for nonempty subsets A
// of the closed M-ball around the identity. Requires n > 3M + 2. Works
// digit-wise inside the (M+1)-ball, so the full product is never built.
// Exhaustive when the ball has at most 20 points, else seeded samples.
HaloClaimResult product_halo_claim_check(const FiniteGroup& G, std::size_t n, std::size_t M,
                                         std::uint64_t seed = 0, std::size_t samples = 10000);

struct FolnerResult {
  Rational max_gen_ratio;  // max over generators of |gF delta F| / |F|
  double phi_lipschitz;    // lipschitz number of x -> chi_{xF}/|F| in the word metric
};

// Translate-difference ratios of a Folner candidate set F plus the Lipschitz
// number of its normalized indicator field. Verified along the way:
// |xF delta yF| = |(x^-1 y)F delta F|, the ratio-vs-distance sandwich on
// adjacent pairs, and max_gen_ratio/2 <= phi_lipschitz <= max_gen_ratio.
FolnerResult folner_analysis(const FiniteGroup& G, const std::vector<std::size_t>& F);

}  // namespace coarse
