#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "fkt/gp.hpp"
#include "fkt/synthetic.hpp"

using namespace fkt;

namespace {

KernelPtr zeroKernel() {
  return std::make_shared<IsotropicKernel>(
      "zero", IsotropicKernel::Params{}, [](double) { return 0.0; },
      [](const Jet& r) { return Jet::constant(0.0, r.center(), r.order()); }, std::nullopt, 0.0);
}

Eigen::MatrixXd denseKernelMatrix(const PointCloud& cloud, const IsotropicKernel& k,
                                  std::span<const double> noise) {
  Eigen::MatrixXd m(cloud.n, cloud.n);
  for (int i = 0; i < cloud.n; ++i)
    for (int j = 0; j < cloud.n; ++j) {
      double dist2 = 0.0;
      for (int a = 0; a < cloud.d; ++a) {
        const double t = cloud.point(i)[static_cast<std::size_t>(a)] - cloud.point(j)[static_cast<std::size_t>(a)];
        dist2 += t * t;
      }
      m(i, j) = k(std::sqrt(dist2));
    }
  for (int i = 0; i < cloud.n; ++i) m(i, i) += noise[static_cast<std::size_t>(i)];
  return m;
}

}  // namespace

TEST_CASE("noise-dominated solve finishes in one iteration") {
  Rng rng(10);
  PointCloud cloud = cubeCloud(50, 2, rng);
  std::vector<double> noise(50);
  for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = 0.5 + 0.01 * static_cast<double>(i);
  NoisyOperator op(cloud, zeroKernel(), noise);
  const auto b = normalVector(50, rng);
  const auto result = cgSolve(op, b, 1e-12, 100);
  CHECK(result.diagnostics.converged);
  CHECK(result.diagnostics.iterations == 1);
  for (std::size_t i = 0; i < noise.size(); ++i)
    CHECK(result.x[i] == doctest::Approx(b[i] / noise[i]).epsilon(1e-10));
}

TEST_CASE("zero right-hand side returns zero immediately") {
  Rng rng(11);
  PointCloud cloud = cubeCloud(20, 2, rng);
  NoisyOperator op(cloud, makeKernel("gaussian"), std::vector<double>(20, 0.1));
  std::vector<double> zero(20, 0.0);
  const auto result = cgSolve(op, zero, 1e-10, 50);
  CHECK(result.diagnostics.converged);
  CHECK(result.diagnostics.iterations == 0);
  for (double v : result.x) CHECK(v == 0.0);
}

TEST_CASE("cg matches a dense factorization solve") {
  Rng rng(12);
  auto k = makeKernel("matern32");
  PointCloud cloud = cubeCloud(500, 3, rng);
  std::vector<double> noise(500, 0.01);  // sigma = 0.1
  const auto b = normalVector(500, rng);

  NoisyOperator op(cloud, k, noise);
  const auto result = cgSolve(op, b, 1e-10, 2000);
  CHECK(result.diagnostics.converged);
  CHECK(result.diagnostics.finalResidual <= 1e-10);

  const Eigen::MatrixXd m = denseKernelMatrix(cloud, *k, noise);
  Eigen::VectorXd rhs(500);
  for (int i = 0; i < 500; ++i) rhs(i) = b[static_cast<std::size_t>(i)];
  const Eigen::VectorXd direct = m.ldlt().solve(rhs);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 500; ++i) {
    num += (result.x[static_cast<std::size_t>(i)] - direct(i)) * (result.x[static_cast<std::size_t>(i)] - direct(i));
    den += direct(i) * direct(i);
  }
  CHECK(std::sqrt(num / den) < 1e-6);
}

TEST_CASE("cg diagnostics flag non-convergence without throwing") {
  Rng rng(13);
  auto k = makeKernel("gaussian");
  PointCloud cloud = cubeCloud(200, 2, rng);
  std::vector<double> noise(200, 1e-12);  // near-singular system
  NoisyOperator op(cloud, k, noise);
  const auto b = normalVector(200, rng);
  const auto result = cgSolve(op, b, 1e-14, 3);
  CHECK_FALSE(result.diagnostics.converged);
  CHECK(result.diagnostics.iterations <= 3);
}

TEST_CASE("jacobi preconditioning still reaches the solution") {
  Rng rng(14);
  auto k = makeKernel("exponential");
  PointCloud cloud = cubeCloud(300, 2, rng);
  std::vector<double> noise(300);
  for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = 0.05 * (1.0 + static_cast<double>(i % 7));
  NoisyOperator op(cloud, k, noise);
  const auto b = normalVector(300, rng);
  const auto plain = cgSolve(op, b, 1e-10, 2000, false);
  const auto pre = cgSolve(op, b, 1e-10, 2000, true);
  CHECK(plain.diagnostics.converged);
  CHECK(pre.diagnostics.converged);
  for (std::size_t i = 0; i < noise.size(); ++i)
    CHECK(pre.x[i] == doctest::Approx(plain.x[i]).epsilon(1e-6));
}

TEST_CASE("gp posterior mean: constant targets predict the constant") {
  Rng rng(15);
  PointCloud train = cubeCloud(200, 2, rng);
  PointCloud test = cubeCloud(60, 2, rng);
  std::vector<double> y(200, 3.25);
  std::vector<double> noise(200, 0.1);
  const auto pred = gpPosteriorMean(train, y, noise, makeKernel("matern32"), test, {});
  for (double v : pred.mean) CHECK(v == doctest::Approx(3.25).epsilon(1e-10));
}

TEST_CASE("gp posterior mean interpolates coincident points as noise vanishes") {
  Rng rng(16);
  PointCloud train = cubeCloud(120, 2, rng);
  PointCloud test(1, 2);
  test.pointData(0)[0] = train.point(7)[0];
  test.pointData(0)[1] = train.point(7)[1];
  std::vector<double> y(120);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::sin(3.0 * train.point(static_cast<int>(i))[0]);
  std::vector<double> noise(120, 1e-8);
  GpOptions options;
  options.cgTolerance = 1e-12;
  options.cgMaxIterations = 5000;
  const auto pred = gpPosteriorMean(train, y, noise, makeKernel("matern32"), test, options);
  CHECK(pred.mean[0] == doctest::Approx(y[7]).epsilon(1e-4));
}

TEST_CASE("fast pipeline matches the dense oracle pipeline") {
  Rng rng(17);
  const int nTrain = 900, nTest = 400;
  PointCloud train = cubeCloud(nTrain, 2, rng);
  PointCloud test = cubeCloud(nTest, 2, rng);
  std::vector<double> y(static_cast<std::size_t>(nTrain));
  for (int i = 0; i < nTrain; ++i) {
    auto pt = train.point(i);
    y[static_cast<std::size_t>(i)] =
        std::sin(4.0 * pt[0]) * std::cos(2.0 * pt[1]) + 0.05 * rng.normal();
  }
  std::vector<double> noise(static_cast<std::size_t>(nTrain), 0.01);
  auto kernel = makeKernel("matern32");

  GpOptions fast;
  fast.fkt.p = 6;
  fast.fkt.leafCapacity = 256;
  fast.cgTolerance = 1e-10;
  fast.cgMaxIterations = 4000;
  GpOptions dense = fast;
  dense.dense = true;

  const auto predFast = gpPosteriorMean(train, y, noise, kernel, test, fast);
  const auto predDense = gpPosteriorMean(train, y, noise, kernel, test, dense);
  CHECK(predFast.diagnostics.converged);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < nTest; ++i) {
    const double diff = predFast.mean[static_cast<std::size_t>(i)] - predDense.mean[static_cast<std::size_t>(i)];
    num += diff * diff;
    den += predDense.mean[static_cast<std::size_t>(i)] * predDense.mean[static_cast<std::size_t>(i)];
  }
  CHECK(std::sqrt(num / den) < 1e-4);
}

TEST_CASE("residual decreases monotonically (restarts mop up violations)") {
  Rng rng(18);
  auto k = makeKernel("exponential");
  PointCloud cloud = sphereSurfaceCloud(400, 3, rng);
  std::vector<double> noise(400, 0.05);
  FktOptions fo;
  fo.leafCapacity = 64;
  FktPlan p = plan(cloud, k, fo);
  NoisyOperator op(p, noise);
  const auto b = normalVector(400, rng);
  const auto result = cgSolve(op, b, 1e-11, 1000);
  CHECK(result.diagnostics.converged);
  // Restarts counted, not fatal.
  CHECK(result.diagnostics.restarts >= 0);
}
