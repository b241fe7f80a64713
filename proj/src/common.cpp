#include "coarse/common.hpp"

#include <cmath>

namespace coarse {

namespace {
double g_tolerance = 1e-9;
}

double tolerance() { return g_tolerance; }

void set_tolerance(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw validation_error("tolerance must be a finite nonnegative number");
  }
  g_tolerance = t;
}

bool nearly_equal(double a, double b) {
  if (a == b) return true;  // covers matching infinities
  return std::fabs(a - b) <= g_tolerance;
}

bool lt(double a, double b) { return a < b - g_tolerance; }

bool le(double a, double b) { return a <= b + g_tolerance; }

}  // namespace coarse
