#include "fkt/synthetic.hpp"

#include <cmath>

namespace fkt {

PointCloud sphereSurfaceCloud(int n, int d, Rng& rng) {
  PointCloud cloud(n, d);
  for (int i = 0; i < n; ++i) {
    double* pt = cloud.pointData(i);
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (int a = 0; a < d; ++a) {
        pt[a] = rng.normal();
        norm2 += pt[a] * pt[a];
      }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (int a = 0; a < d; ++a) pt[a] *= inv;
  }
  return cloud;
}

PointCloud cubeCloud(int n, int d, Rng& rng) {
  PointCloud cloud(n, d);
  for (int i = 0; i < n; ++i) {
    double* pt = cloud.pointData(i);
    for (int a = 0; a < d; ++a) pt[a] = rng.uniform();
  }
  return cloud;
}

PointCloud gaussianMixtureCloud(int n, int d, Rng& rng, int components) {
  std::vector<double> centers(static_cast<std::size_t>(components) * d);
  std::vector<double> widths(static_cast<std::size_t>(components));
  for (int c = 0; c < components; ++c) {
    for (int a = 0; a < d; ++a) centers[static_cast<std::size_t>(c) * d + a] = rng.uniform(-1.0, 1.0);
    widths[static_cast<std::size_t>(c)] = rng.uniform(0.05, 0.25);
  }
  PointCloud cloud(n, d);
  for (int i = 0; i < n; ++i) {
    const int c = static_cast<int>(rng.next() % static_cast<std::uint64_t>(components));
    double* pt = cloud.pointData(i);
    for (int a = 0; a < d; ++a)
      pt[a] = centers[static_cast<std::size_t>(c) * d + a] + widths[static_cast<std::size_t>(c)] * rng.normal();
  }
  return cloud;
}

std::vector<double> normalVector(int n, Rng& rng) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = rng.normal();
  return v;
}

}  // namespace fkt
