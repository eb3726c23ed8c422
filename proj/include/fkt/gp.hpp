#ifndef FKT_GP_HPP
#define FKT_GP_HPP

// Conjugate gradients over the kernel operator plus a diagonal noise term,
// and the Gaussian-process posterior mean computed exclusively through
// matrix-vector products.

#include <functional>
#include <optional>

#include "fkt/transform.hpp"

namespace fkt {

// Action y -> K y + diag(noise) y. The kernel product runs either through a
// fast plan or the dense reference path.
class NoisyOperator {
 public:
  NoisyOperator(const FktPlan& plan, std::vector<double> noise);
  NoisyOperator(const PointCloud& cloud, KernelPtr kernel, std::vector<double> noise,
                std::optional<double> diagonal = std::nullopt);  // dense fallback

  int size() const { return n_; }
  std::vector<double> apply(std::span<const double> y) const;
  const std::vector<double>& noise() const { return noise_; }
  double kernelDiagonal() const { return kernelDiagonal_; }

 private:
  int n_;
  std::vector<double> noise_;
  double kernelDiagonal_ = 0.0;
  std::function<std::vector<double>(std::span<const double>)> kernelProduct_;
};

struct CgDiagnostics {
  int iterations = 0;
  double finalResidual = 0.0;  // relative to |b|
  bool converged = false;
  int restarts = 0;
};

struct CgResult {
  std::vector<double> x;
  CgDiagnostics diagnostics;
};

// Plain CG with an optional Jacobi preconditioner; the residual norm is
// tracked and CG restarts from the current iterate if it ever increases.
// Non-convergence is reported through the diagnostics, not an exception.
CgResult cgSolve(const NoisyOperator& op, std::span<const double> rhs, double tolerance,
                 int maxIterations, bool jacobiPreconditioner = false);

struct GpOptions {
  FktOptions fkt;
  double cgTolerance = 1e-10;
  int cgMaxIterations = 1000;
  bool jacobiPreconditioner = false;
  bool dense = false;  // run the whole pipeline through dense products
  std::optional<double> priorMean;  // default: mean of the targets
};

struct GpPrediction {
  std::vector<double> mean;
  CgDiagnostics diagnostics;
};

// Posterior mean mu + k(X*, X) Sigma^{-1} (y - mu); the cross product runs as
// a single multiply on the concatenated train/test cloud with the source
// vector zero-padded on the test block.
GpPrediction gpPosteriorMean(const PointCloud& train, std::span<const double> y,
                             std::span<const double> noise, KernelPtr kernel,
                             const PointCloud& test, const GpOptions& options = {});

}  // namespace fkt

#endif
