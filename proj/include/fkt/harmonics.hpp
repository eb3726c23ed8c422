#ifndef FKT_HARMONICS_HPP
#define FKT_HARMONICS_HPP

// Gegenbauer polynomials in general dimension and a real orthonormal basis of
// hyperspherical harmonics Y_k^h on the unit (d-1)-sphere, indexed by chains
// h = (mu_1 >= ... >= mu_{d-3} >= |mu_{d-2}|). The single property downstream
// code relies on is the addition theorem
//
//   sum_{h in H_k} Y_k^h(u) Y_k^h(u') = C_k^{(alpha)}(cos gamma) / Z_k,
//
// with alpha = d/2 - 1 and Z_k the normalizer returned by additionNormalizer.
// For d = 2 the degenerate alpha = 0 case uses the Chebyshev limit convention
// lim_{a->0} C_k^{(a)}(x)/a = (2/k) T_k(x), folded into Z_k.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fkt {

class ZeroVectorError : public std::invalid_argument {
 public:
  ZeroVectorError() : std::invalid_argument("direction of the zero vector is undefined") {}
};

// C_k^{(alpha)}(x) by the three-term recurrence; alpha == 0 evaluates the
// d = 2 Chebyshev limit convention.
double gegenbauer(double alpha, int k, double x);

// binom(k+d-3, k), the classical bound |C_k^{(alpha)}(cos gamma)| <= bound
// for d >= 3.
double gegenbauerUpperBound(int d, int k);

// C_k^{(alpha)}(1) under the same conventions (equals the bound for d >= 3).
double gegenbauerAtOne(int d, int k);

struct HarmonicIndex {
  int degree = 0;
  // d >= 3: the chain (mu_1, ..., mu_{d-2}) with a signed last entry.
  // d = 2: one entry +k / -k selecting the cosine / sine phase (0 for k = 0).
  std::vector<int> chain;
};

std::size_t harmonicIndexCount(int d, int k);
std::vector<HarmonicIndex> enumerateHarmonicIndices(int d, int k);

// Z_k^{(alpha)} for the basis below; for d = 3 this is 4*pi/(2k+1).
double additionNormalizer(int d, int k);

struct HarmonicBasisEvaluation {
  std::vector<double> direction;
  std::vector<double> values;  // all degrees <= maxDegree, degree-major
};

// Precomputed chain table and normalizations for all degrees <= maxDegree.
// Immutable after construction and safe to share across threads.
class HarmonicBasis {
 public:
  HarmonicBasis(int d, int maxDegree);

  int dimension() const { return d_; }
  int maxDegree() const { return maxDegree_; }
  std::size_t totalCount() const { return totalCount_; }
  std::size_t degreeOffset(int k) const { return degreeOffset_[static_cast<std::size_t>(k)]; }
  std::size_t degreeCount(int k) const {
    return degreeOffset_[static_cast<std::size_t>(k) + 1] - degreeOffset_[static_cast<std::size_t>(k)];
  }
  double additionNormalizer(int k) const { return z_[static_cast<std::size_t>(k)]; }

  // Values of every Y_k^h at the direction of `point` (any positive scale),
  // written to `values` (resized to totalCount()). Throws ZeroVectorError on
  // the zero vector.
  void evaluate(std::span<const double> point, std::vector<double>& values) const;

  HarmonicBasisEvaluation evaluate(std::span<const double> point) const;

 private:
  struct Chain {
    std::vector<int> m;  // m_0 = degree, m_1, ..., m_{d-2} >= 0
    int phase = 0;       // sign of the last chain entry (0 when m_{d-2} = 0)
    double norm = 1.0;
  };

  int d_;
  int maxDegree_;
  std::size_t totalCount_;
  std::vector<std::size_t> degreeOffset_;
  std::vector<double> z_;
  std::vector<std::vector<Chain>> chains_;  // per degree
};

}  // namespace fkt

#endif
