#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fkt/exact.hpp"
#include "fkt/harmonics.hpp"
#include "fkt/synthetic.hpp"

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<double> unitVector(int d, fkt::Rng& rng) {
  std::vector<double> v(static_cast<std::size_t>(d));
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& x : v) {
      x = rng.normal();
      norm2 += x * x;
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : v) x *= inv;
  return v;
}
}  // namespace

TEST_CASE("gegenbauer recurrence examples") {
  CHECK(fkt::gegenbauer(0.7, 0, 0.2) == doctest::Approx(1.0));
  CHECK(fkt::gegenbauer(1.0, 1, 0.3) == doctest::Approx(0.6));
  // [2*0.5*2*C_1 - 2*C_0]/2 at alpha=1, x=0.5: C_2^{(1)}(0.5) = 0.
  CHECK(fkt::gegenbauer(1.0, 2, 0.5) == doctest::Approx(0.0));
  // d=3 reduces to Legendre: C_5^{(1/2)}(0.3) = P_5(0.3) = 0.34538625.
  CHECK(fkt::gegenbauer(0.5, 5, 0.3) == doctest::Approx(0.34538625).epsilon(1e-12));
}

TEST_CASE("gegenbauer bound values and property") {
  CHECK(fkt::gegenbauerUpperBound(3, 0) == doctest::Approx(1.0));
  CHECK(fkt::gegenbauerUpperBound(3, 5) == doctest::Approx(1.0));
  CHECK(fkt::gegenbauerUpperBound(5, 3) == doctest::Approx(10.0));
  fkt::Rng rng(7);
  for (int d = 3; d <= 8; ++d) {
    const double alpha = 0.5 * d - 1.0;
    for (int i = 0; i < 1000; ++i) {
      const double x = rng.uniform(-1.0, 1.0);
      const int k = static_cast<int>(rng.next() % 11);
      CHECK(std::abs(fkt::gegenbauer(alpha, k, x)) <= fkt::gegenbauerUpperBound(d, k) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("index counts match the closed form for d <= 10, k <= 12") {
  for (int d = 2; d <= 10; ++d) {
    for (int k = 0; k <= 12; ++k) {
      const auto indices = fkt::enumerateHarmonicIndices(d, k);
      CHECK(indices.size() == fkt::harmonicIndexCount(d, k));
      for (const auto& idx : indices) {
        CHECK(idx.degree == k);
        if (d >= 3) {
          REQUIRE(idx.chain.size() == static_cast<std::size_t>(d - 2));
          int prev = k;
          for (std::size_t level = 0; level < idx.chain.size(); ++level) {
            const int value = level + 1 == idx.chain.size() ? std::abs(idx.chain[level]) : idx.chain[level];
            CHECK(value >= 0);
            CHECK(value <= prev);
            prev = value;
          }
        }
      }
    }
  }
  CHECK(fkt::harmonicIndexCount(3, 2) == 5);
  CHECK(fkt::harmonicIndexCount(2, 3) == 2);
  CHECK(fkt::harmonicIndexCount(4, 1) == 4);
}

TEST_CASE("addition theorem across dimensions") {
  fkt::Rng rng(42);
  for (int d = 2; d <= 6; ++d) {
    const int maxK = 8;
    fkt::HarmonicBasis basis(d, maxK);
    const double alpha = 0.5 * d - 1.0;
    std::vector<double> ya, yb;
    for (int pair = 0; pair < 200; ++pair) {
      const auto u = unitVector(d, rng);
      const auto v = unitVector(d, rng);
      basis.evaluate(u, ya);
      basis.evaluate(v, yb);
      double cosGamma = 0.0;
      for (int a = 0; a < d; ++a) cosGamma += u[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(a)];
      cosGamma = std::clamp(cosGamma, -1.0, 1.0);
      for (int k = 0; k <= maxK; ++k) {
        double sum = 0.0;
        for (std::size_t h = 0; h < basis.degreeCount(k); ++h)
          sum += ya[basis.degreeOffset(k) + h] * yb[basis.degreeOffset(k) + h];
        const double ck = fkt::gegenbauer(alpha, k, cosGamma);
        const double expect = ck / basis.additionNormalizer(k);
        CHECK(std::abs(sum - expect) <= 1e-10 * (1.0 + std::abs(ck)));
      }
    }
  }
}

TEST_CASE("degree-0 harmonic squares to 1/(4 pi) in three dimensions") {
  fkt::HarmonicBasis basis(3, 0);
  std::vector<double> y;
  basis.evaluate(std::vector<double>{0.3, -0.4, 0.8}, y);
  CHECK(y[0] * y[0] == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-12));
}

TEST_CASE("harmonics are scale invariant") {
  fkt::Rng rng(5);
  for (int d = 2; d <= 5; ++d) {
    fkt::HarmonicBasis basis(d, 6);
    std::vector<double> y1, y2;
    for (int trial = 0; trial < 20; ++trial) {
      auto u = unitVector(d, rng);
      std::vector<double> scaled = u;
      const double s = rng.uniform(0.1, 50.0);
      for (double& x : scaled) x *= s;
      basis.evaluate(u, y1);
      basis.evaluate(scaled, y2);
      for (std::size_t i = 0; i < y1.size(); ++i)
        CHECK(std::abs(y1[i] - y2[i]) <= 1e-12 * (1.0 + std::abs(y1[i])));
    }
  }
}

TEST_CASE("zero vector is rejected") {
  fkt::HarmonicBasis basis(3, 2);
  std::vector<double> y;
  CHECK_THROWS_AS(basis.evaluate(std::vector<double>{0.0, 0.0, 0.0}, y), fkt::ZeroVectorError);
}

TEST_CASE("addition normalizer matches the d = 3 convention and the derived d = 4 value") {
  CHECK(fkt::additionNormalizer(3, 0) == doctest::Approx(4.0 * kPi).epsilon(1e-13));
  CHECK(fkt::additionNormalizer(3, 2) == doctest::Approx(4.0 * kPi / 5.0).epsilon(1e-13));
  // Derived oracle: solve the addition theorem on collinear pairs for Z.
  fkt::Rng rng(11);
  fkt::HarmonicBasis basis(4, 1);
  std::vector<double> y;
  const auto u = unitVector(4, rng);
  basis.evaluate(u, y);
  double sum = 0.0;
  for (std::size_t h = 0; h < basis.degreeCount(1); ++h)
    sum += y[basis.degreeOffset(1) + h] * y[basis.degreeOffset(1) + h];
  const double z = fkt::gegenbauer(1.0, 1, 1.0) / sum;
  CHECK(fkt::additionNormalizer(4, 1) == doctest::Approx(z).epsilon(1e-10));
  CHECK(fkt::additionNormalizer(4, 1) == doctest::Approx(kPi * kPi).epsilon(1e-12));
}

TEST_CASE("poles and axis-aligned directions evaluate without NaNs") {
  for (int d = 3; d <= 6; ++d) {
    fkt::HarmonicBasis basis(d, 5);
    std::vector<double> y;
    for (int axis = 0; axis < d; ++axis) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> v(static_cast<std::size_t>(d), 0.0);
        v[static_cast<std::size_t>(axis)] = sign;
        basis.evaluate(v, y);
        for (double value : y) CHECK(std::isfinite(value));
      }
    }
  }
}
