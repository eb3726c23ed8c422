#ifndef FKT_SYNTHETIC_HPP
#define FKT_SYNTHETIC_HPP

// Seeded synthetic data generators with a self-contained RNG so every run is
// reproducible independent of the standard library's distribution internals.

#include <cmath>
#include <cstdint>
#include <vector>

#include "fkt/tree.hpp"

namespace fkt {

// xorshift-style 64-bit generator (splitmix64), uniform and Box-Muller
// normal variates derived from it deterministically.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (haveSpare_) {
      haveSpare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    haveSpare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t state_;
  bool haveSpare_ = false;
  double spare_ = 0.0;
};

// Uniform on the unit hypersphere surface (normalized Gaussian directions).
PointCloud sphereSurfaceCloud(int n, int d, Rng& rng);

// Uniform in the unit hypercube.
PointCloud cubeCloud(int n, int d, Rng& rng);

// A small Gaussian mixture (fixed component layout derived from the seed).
PointCloud gaussianMixtureCloud(int n, int d, Rng& rng, int components = 5);

std::vector<double> normalVector(int n, Rng& rng);

}  // namespace fkt

#endif
