#pragma once

#include <string>

namespace coarse {

// Exact nonnegative fraction for combinatorial ratios (boundary/size,
// horizon counts, Folner ratios). Always stored reduced with den > 0.
struct Rational {
  long long num = 0;
  long long den = 1;
};

Rational make_rational(long long num, long long den);

// -1, 0, +1; exact (128-bit cross multiplication).
int compare(const Rational& a, const Rational& b);

inline bool operator==(const Rational& a, const Rational& b) { return compare(a, b) == 0; }
inline bool operator!=(const Rational& a, const Rational& b) { return compare(a, b) != 0; }
inline bool operator<(const Rational& a, const Rational& b) { return compare(a, b) < 0; }
inline bool operator<=(const Rational& a, const Rational& b) { return compare(a, b) <= 0; }

double to_double(const Rational& r);
std::string to_string(const Rational& r);

}  // namespace coarse
