#include "coarse/rational.hpp"

#include <numeric>

#include "coarse/common.hpp"

namespace coarse {

Rational make_rational(long long num, long long den) {
  if (den == 0) throw validation_error("rational with zero denominator");
  if (num < 0 || den < 0) throw validation_error("rational must be nonnegative");
  if (num == 0) return {0, 1};
  long long g = std::gcd(num, den);
  return {num / g, den / g};
}

int compare(const Rational& a, const Rational& b) {
  __int128 lhs = static_cast<__int128>(a.num) * b.den;
  __int128 rhs = static_cast<__int128>(b.num) * a.den;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

double to_double(const Rational& r) {
  return static_cast<double>(r.num) / static_cast<double>(r.den);
}

std::string to_string(const Rational& r) {
  if (r.den == 1) return std::to_string(r.num);
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

}  // namespace coarse
