#ifndef FKT_EXACT_HPP
#define FKT_EXACT_HPP

// Exact arbitrary-precision rational arithmetic used by the coefficient
// tables and the rank-revealing factorization. Everything downstream of
// these helpers stays rational until the final conversion to double.

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>

namespace fkt {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double toDouble(const Rational& q) { return q.convert_to<double>(); }

inline BigInt factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Odd double factorial with the usual (-1)!! = 1 convention.
inline BigInt doubleFactorial(int n) {
  if (n < -1) throw std::invalid_argument("doubleFactorial: argument below -1");
  BigInt f = 1;
  for (int i = n; i >= 2; i -= 2) f *= i;
  return f;
}

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0;
  k = std::min(k, n - k);
  BigInt b = 1;
  for (int i = 1; i <= k; ++i) {
    b *= n - k + i;
    b /= i;
  }
  return b;
}

// Rising factorial (a)_n = a (a+1) ... (a+n-1).
inline Rational risingFactorial(const Rational& a, int n) {
  Rational p = 1;
  Rational term = a;
  for (int i = 0; i < n; ++i) {
    p *= term;
    term += 1;
  }
  return p;
}

inline BigInt intPow(BigInt base, int e) {
  BigInt p = 1;
  for (int i = 0; i < e; ++i) p *= base;
  return p;
}

}  // namespace fkt

#endif
