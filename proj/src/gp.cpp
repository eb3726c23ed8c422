#include "fkt/gp.hpp"

#include <cmath>
#include <numeric>

namespace fkt {

namespace {

double safeDiagonal(const IsotropicKernel& kernel, std::optional<double> diagonal) {
  try {
    return kernel(0.0, diagonal);
  } catch (const SingularAtZeroError&) {
    return 0.0;
  }
}

}  // namespace

NoisyOperator::NoisyOperator(const FktPlan& plan, std::vector<double> noise)
    : n_(plan.cloud().n), noise_(std::move(noise)) {
  if (static_cast<int>(noise_.size()) != n_)
    throw DimensionMismatchError("NoisyOperator: noise length does not match the point count");
  kernelDiagonal_ = safeDiagonal(plan.kernel(), plan.options().diagonal);
  kernelProduct_ = [&plan](std::span<const double> y) { return plan.multiply(y); };
}

NoisyOperator::NoisyOperator(const PointCloud& cloud, KernelPtr kernel, std::vector<double> noise,
                             std::optional<double> diagonal)
    : n_(cloud.n), noise_(std::move(noise)) {
  if (static_cast<int>(noise_.size()) != n_)
    throw DimensionMismatchError("NoisyOperator: noise length does not match the point count");
  kernelDiagonal_ = safeDiagonal(*kernel, diagonal);
  kernelProduct_ = [&cloud, kernel = std::move(kernel), diagonal](std::span<const double> y) {
    return denseMultiply(cloud, *kernel, y, diagonal);
  };
}

std::vector<double> NoisyOperator::apply(std::span<const double> y) const {
  if (static_cast<int>(y.size()) != n_) throw DimensionMismatchError("NoisyOperator: vector length mismatch");
  std::vector<double> z = kernelProduct_(y);
  for (int i = 0; i < n_; ++i) z[static_cast<std::size_t>(i)] += noise_[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
  return z;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

CgResult cgSolve(const NoisyOperator& op, std::span<const double> rhs, double tolerance,
                 int maxIterations, bool jacobiPreconditioner) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("cgSolve requires a positive tolerance");
  const std::size_t n = rhs.size();
  if (static_cast<int>(n) != op.size()) throw DimensionMismatchError("cgSolve: rhs length mismatch");

  CgResult out;
  out.x.assign(n, 0.0);
  const double bNorm = norm(rhs);
  if (bNorm == 0.0) {
    out.diagnostics.converged = true;
    return out;
  }

  std::vector<double> precond(n, 1.0);
  if (jacobiPreconditioner) {
    const double k0 = op.kernelDiagonal();
    const auto& noise = op.noise();
    for (std::size_t i = 0; i < n; ++i) {
      const double d = k0 + noise[i];
      precond[i] = d > 0.0 ? 1.0 / d : 1.0;
    }
  }

  std::vector<double> r(rhs.begin(), rhs.end());
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = precond[i] * r[i];
  std::vector<double> p = z;
  double rz = dot(r, z);
  double resNorm = norm(r);
  double bestRes = resNorm;

  int iter = 0;
  while (iter < maxIterations && resNorm / bNorm > tolerance) {
    ++iter;
    const std::vector<double> ap = op.apply(p);
    const double pap = dot(p, ap);
    if (pap <= 0.0) break;  // loss of positive definiteness under roundoff
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    const double newRes = norm(r);
    if (newRes > resNorm) {
      // Monotonicity restart: recompute the residual from scratch and steer
      // back to steepest descent.
      const std::vector<double> ax = op.apply(out.x);
      for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ax[i];
      for (std::size_t i = 0; i < n; ++i) z[i] = precond[i] * r[i];
      p = z;
      rz = dot(r, z);
      resNorm = norm(r);
      ++out.diagnostics.restarts;
      continue;
    }
    resNorm = newRes;
    bestRes = std::min(bestRes, resNorm);
    for (std::size_t i = 0; i < n; ++i) z[i] = precond[i] * r[i];
    const double rzNew = dot(r, z);
    const double beta = rzNew / rz;
    rz = rzNew;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }

  out.diagnostics.iterations = iter;
  out.diagnostics.finalResidual = resNorm / bNorm;
  out.diagnostics.converged = resNorm / bNorm <= tolerance;
  return out;
}

GpPrediction gpPosteriorMean(const PointCloud& train, std::span<const double> y,
                             std::span<const double> noise, KernelPtr kernel,
                             const PointCloud& test, const GpOptions& options) {
  if (static_cast<int>(y.size()) != train.n || static_cast<int>(noise.size()) != train.n)
    throw DimensionMismatchError("gpPosteriorMean: training vector lengths must match the cloud");
  if (test.d != train.d) throw DimensionMismatchError("gpPosteriorMean: train/test dimension mismatch");

  const double mu = options.priorMean
                        ? *options.priorMean
                        : std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(train.n);
  std::vector<double> resid(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) resid[i] = y[i] - mu;

  std::vector<double> noiseVec(noise.begin(), noise.end());
  std::optional<FktPlan> trainPlan;
  std::optional<NoisyOperator> op;
  if (options.dense) {
    op.emplace(train, kernel, std::move(noiseVec), options.fkt.diagonal);
  } else {
    trainPlan.emplace(train, kernel, options.fkt);
    op.emplace(*trainPlan, std::move(noiseVec));
  }
  CgResult solve = cgSolve(*op, resid, options.cgTolerance, options.cgMaxIterations,
                           options.jacobiPreconditioner);

  // Cross product k(X*, X) v through the concatenated cloud with zero-padded
  // sources on the test block.
  PointCloud joint(train.n + test.n, train.d);
  std::copy(train.x.begin(), train.x.end(), joint.x.begin());
  std::copy(test.x.begin(), test.x.end(), joint.x.begin() + train.x.size());
  std::vector<double> padded(static_cast<std::size_t>(joint.n), 0.0);
  std::copy(solve.x.begin(), solve.x.end(), padded.begin());

  std::vector<double> cross;
  if (options.dense) {
    cross = denseMultiply(joint, *kernel, padded, options.fkt.diagonal);
  } else {
    FktOptions jointOptions = options.fkt;
    jointOptions.eagerOperators = false;  // single multiply; skip materialization
    FktPlan jointPlan(joint, kernel, jointOptions);
    cross = jointPlan.multiply(padded);
  }

  GpPrediction pred;
  pred.mean.resize(static_cast<std::size_t>(test.n));
  for (int i = 0; i < test.n; ++i) pred.mean[static_cast<std::size_t>(i)] = mu + cross[static_cast<std::size_t>(train.n + i)];
  pred.diagnostics = solve.diagnostics;
  return pred;
}

}  // namespace fkt
