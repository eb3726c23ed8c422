#ifndef FKT_EXPANSION_HPP
#define FKT_EXPANSION_HPP

// The generalized multipole expansion: truncated radial functions, the
// truncated kernel approximation, the truncation-error bound, source-to-
// multipole / multipole-to-target operator assembly, and the exact-rational
// radial compression for kernels with a registered derivative recurrence.
//
// Convention: radial functions here are the Gegenbauer-form coefficients,
//   K(|r' - r|) = sum_k C_k^{(alpha)}(cos gamma) Kbar^(k)(r', r),
// so for K = 1/r in d = 3 the degree-k function is exactly r'^k / r^{k+1}.
// The Z_k normalizer that converts to the harmonic-basis form is applied at
// operator assembly, matching the harmonics module.

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "fkt/coefficients.hpp"
#include "fkt/harmonics.hpp"
#include "fkt/kernels.hpp"
#include "fkt/laurent.hpp"

namespace fkt {

class NotRecurrenceKernelError : public std::invalid_argument {
 public:
  explicit NotRecurrenceKernelError(const std::string& name)
      : std::invalid_argument("kernel '" + name + "' has no registered derivative recurrence") {}
};

// Number of expansion coefficients, binom(d+p, p).
std::size_t expansionSize(int d, int p);

// Gegenbauer-form radial coefficients for a fixed target radius r:
// w(k, j) = sum_{m=1..j} K^(m)(r) r^{m-j} Tbar_kjm, plus K(r) at k = j = 0.
class RadialCoefficients {
 public:
  RadialCoefficients(const IsotropicKernel& kernel, const CoefficientTable& table, int p, double r);

  int order() const { return p_; }
  double w(int k, int j) const;  // zero off the valid parity range

  // Kbar^(k)_p(rSrc, r) = sum_j rSrc^j w(k, j).
  double radial(int k, double rSrc) const;

 private:
  int p_;
  std::vector<double> w_;
  std::vector<std::size_t> offset_;
};

// Kbar^(k)_p(rSrc, rTgt); rSrc = 0 is the collocated-source limit.
double radialFunction(const IsotropicKernel& kernel, const CoefficientTable& table, int k, int p,
                      double rSrc, double rTgt);

// The p-truncated approximation of K(|src - tgt|) about the origin,
// requires |src| < |tgt|.
double truncatedKernel(const IsotropicKernel& kernel, const CoefficientTable& table, int p,
                       std::span<const double> src, std::span<const double> tgt);

// Numeric evaluation of the truncation-error bound tail: sums the retained
// terms j = max(p+1, k) .. jMax at fixed ratio r'/r, with per-term absolute
// values so the result is nonincreasing in p.
double truncationErrorBound(const IsotropicKernel& kernel, int d, int p, double ratio, double r,
                            int jMax = 30);

// --- exact-rational rank-revealing factorization ---------------------------

class RationalMatrix {
 public:
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& at(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Rational& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

 private:
  int rows_, cols_;
  std::vector<Rational> a_;
};

struct RationalQrResult {
  int rank = 0;
  RationalMatrix q;  // rows x rank, unnormalized orthogonal columns
  RationalMatrix r;  // rank x cols; q * r reproduces the input exactly
};

// Gram-Schmidt with exact column pivoting (largest remaining squared column
// norm), skipping normalization so every entry stays rational.
RationalQrResult rationalRankRevealingQr(const RationalMatrix& m);

// --- radial compression -----------------------------------------------------

struct RadialFactorization {
  int degree = 0;
  int rank = 0;
  // Kbar^(k)_p(r', r) = sum_i K(r) * targetFactor[i](r) * sourceFactor[i](r').
  std::vector<RationalLaurent> targetFactor;  // Laurent polynomials multiplying K(r)
  std::vector<RationalLaurent> sourceFactor;  // polynomials in r'
};

// Factorizations for every degree k <= p; requires a registered derivative
// recurrence with rational coefficients.
std::vector<RadialFactorization> radialCompression(const IsotropicKernel& kernel,
                                                   const CoefficientTable& table, int p);

// --- operator assembly ------------------------------------------------------

// Row/column layout of the expansion coefficients for one node: degree-major,
// then harmonic index, then the radial slot (power j uncompressed, factor i
// compressed).
class ExpansionLayout {
 public:
  ExpansionLayout(const HarmonicBasis& basis, int p, const std::vector<RadialFactorization>* compression);

  int order() const { return p_; }
  std::size_t total() const { return total_; }
  int radialCount(int k) const { return radialCount_[static_cast<std::size_t>(k)]; }
  std::size_t degreeOffset(int k) const { return offset_[static_cast<std::size_t>(k)]; }
  bool compressed() const { return compression_ != nullptr; }
  const std::vector<RadialFactorization>* compression() const { return compression_; }

 private:
  int p_;
  std::size_t total_;
  std::vector<int> radialCount_;
  std::vector<std::size_t> offset_;
  const std::vector<RadialFactorization>* compression_;
};

// s2m: expansion coefficients x sources. Sources are coordinates relative to
// the expansion center; a source exactly at the center contributes only to
// the degree-0 leading coefficient.
Eigen::MatrixXd buildSourceToMultipole(std::span<const double> points, int n, int d,
                                       const HarmonicBasis& basis, const ExpansionLayout& layout);

// m2t: targets x expansion coefficients. Targets are relative to the center
// and must be nonzero.
Eigen::MatrixXd buildMultipoleToTarget(std::span<const double> points, int n, int d,
                                       const IsotropicKernel& kernel, const CoefficientTable& table,
                                       const HarmonicBasis& basis, const ExpansionLayout& layout);

}  // namespace fkt

#endif
