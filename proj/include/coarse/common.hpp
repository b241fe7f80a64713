#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace coarse {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Global comparison tolerance. Values within tol of each other are treated
// as equal; "strictly less" means less by more than tol. Graph-derived
// metrics are exact integers, so the tolerance only matters for float-valued
// instances. Overridable from the CLI (--tol).
double tolerance();
void set_tolerance(double t);

bool nearly_equal(double a, double b);
bool lt(double a, double b);  // a <  b - tol
bool le(double a, double b);  // a <= b + tol
inline bool gt(double a, double b) { return lt(b, a); }
inline bool ge(double a, double b) { return le(b, a); }

// Malformed input: bad schema, broken metric axioms, cover not covering, ...
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input is well-formed but violates a stated hypothesis of the operation.
struct precondition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A search the underlying theorem guarantees to succeed came up empty, or a
// verified postcondition failed. Signals a bug, not a bad input.
struct internal_inconsistency_error : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace coarse
