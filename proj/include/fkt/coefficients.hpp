#ifndef FKT_COEFFICIENTS_HPP
#define FKT_COEFFICIENTS_HPP

// Kernel- and data-independent rational coefficients of the generalized
// multipole expansion:
//
//   B_nm   — Bell coefficients of d^n/de^n K(r sqrt(1+e)) at e = 0,
//   A_ki   — re-expansion of cos^i(gamma) in the Gegenbauer basis,
//   Tbar_kjm — the combined table, stored without the addition-theorem
//              normalizer Z_k (which is applied at operator assembly, where
//              it must match the harmonic basis normalization).
//
// All entries are exact rationals; doubles are derived once per table.

#include <optional>
#include <string>
#include <vector>

#include "fkt/exact.hpp"

namespace fkt {

class OrderTooLargeError : public std::invalid_argument {
 public:
  explicit OrderTooLargeError(int p, int cap)
      : std::invalid_argument("expansion order " + std::to_string(p) + " exceeds the supported cap " +
                              std::to_string(cap)) {}
};

// Largest truncation order accepted for expansion work.
constexpr int kMaxExpansionOrder = 20;
// The truncation-error bound evaluates tails past the expansion cap.
constexpr int kMaxInternalOrder = 32;

// B_nm = (-1)^{n+m} (2n-2m-1)!!/2^n binom(2n-m-1, m-1), 1 <= m <= n.
Rational bellCoefficient(int n, int m);

// Coefficients A_{0..i, i} of cos^i(gamma) = sum_k A_{ki} C_k^{(alpha)},
// alpha = d/2-1; d = 2 uses the Chebyshev limit convention.
std::vector<Rational> cosinePowerCoefficients(int d, int i);

class CoefficientTable {
 public:
  CoefficientTable(int dimension, int maxOrder);

  int dimension() const { return d_; }
  int maxOrder() const { return p_; }

  // Tbar is zero unless k <= j <= maxOrder, j == k (mod 2), 1 <= m <= j.
  const Rational& tbar(int k, int j, int m) const;
  double tbarDouble(int k, int j, int m) const;

  const std::vector<std::vector<Rational>>& cosinePowerCache() const { return a_; }
  const std::vector<std::vector<Rational>>& bellCache() const { return b_; }

  // Textual serialization (numerator/denominator triples); loading anything
  // that fails to parse or carries the wrong header returns nullopt.
  std::string serialize() const;
  static std::optional<CoefficientTable> deserialize(const std::string& text);

  bool operator==(const CoefficientTable& o) const;

 private:
  CoefficientTable() = default;
  void buildDoubles();
  std::size_t slot(int k, int j, int m) const;

  int d_ = 0, p_ = 0;
  std::vector<std::vector<Rational>> a_;  // a_[i][k], k <= i
  std::vector<std::vector<Rational>> b_;  // b_[n][m-1], 1 <= m <= n
  std::vector<Rational> t_;
  std::vector<double> td_;
  std::vector<std::size_t> rowOffset_;  // per (k, j) pair, see slot()
};

// Memoized, thread-safe access; built once per (d, p) and shared. Honors the
// FKT_CACHE_DIR on-disk cache when the environment variable is set.
const CoefficientTable& coefficientTable(int d, int p);

// Same, but admits the larger internal cap used by the error-bound tail.
const CoefficientTable& coefficientTableInternal(int d, int p);

CoefficientTable buildCoefficientTable(int d, int p);

}  // namespace fkt

#endif
