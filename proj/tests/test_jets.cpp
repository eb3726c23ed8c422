#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fkt/jet.hpp"
#include "fkt/synthetic.hpp"

using fkt::Jet;

TEST_CASE("exp of the identity jet reproduces the Maclaurin series") {
  const Jet x = Jet::variable(0.0, 3);
  const Jet e = exp(x);
  CHECK(e.coeff(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e.coeff(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e.coeff(2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e.coeff(3) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("reciprocal of r at center 2 is the geometric series") {
  const Jet x = Jet::variable(2.0, 2);
  const Jet inv = recip(x);
  CHECK(inv.coeff(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(inv.coeff(1) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(inv.coeff(2) == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("sqrt of 1+t is the binomial series") {
  Jet f = Jet::variable(0.0, 2) + 1.0;
  const Jet s = sqrt(f);
  CHECK(s.coeff(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.coeff(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.coeff(2) == doctest::Approx(-0.125).epsilon(1e-15));
}

TEST_CASE("jet arithmetic is exact on polynomials up to the carried order") {
  fkt::Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const int order = 1 + static_cast<int>(rng.next() % 6);
    std::vector<double> coeffs(static_cast<std::size_t>(order) + 1);
    for (double& c : coeffs) c = static_cast<double>(static_cast<int>(rng.next() % 9) - 4);
    const double a = rng.uniform(-2.0, 2.0);
    // Evaluate p(x) by Horner in jet arithmetic at x = a + t.
    const Jet x = Jet::variable(a, order);
    Jet p = Jet::constant(coeffs.back(), a, order);
    for (int i = order - 1; i >= 0; --i) p = p * x + coeffs[static_cast<std::size_t>(i)];
    // Derivatives of a polynomial are exact; compare against direct evaluation.
    for (int m = 0; m <= order; ++m) {
      double exact = 0.0;
      for (int i = m; i <= order; ++i) {
        double term = coeffs[static_cast<std::size_t>(i)];
        for (int t = 0; t < m; ++t) term *= i - t;
        exact += term * std::pow(a, i - m);
      }
      CHECK(p.derivative(m) == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("division requires a nonzero constant term") {
  const Jet x = Jet::variable(0.0, 3);
  CHECK_THROWS_AS((void)(Jet::constant(1.0, 0.0, 3) / x), fkt::JetDivisionByZero);
}

TEST_CASE("sqrt and log require a positive constant term") {
  const Jet x = Jet::variable(-1.0, 2);
  CHECK_THROWS_AS((void)sqrt(x), fkt::JetDomainError);
  CHECK_THROWS_AS((void)log(x), fkt::JetDomainError);
}

TEST_CASE("operands must share center and order") {
  const Jet a = Jet::variable(0.0, 2);
  const Jet b = Jet::variable(1.0, 2);
  CHECK_THROWS_AS((void)(a + b), std::invalid_argument);
  const Jet c = Jet::variable(0.0, 3);
  CHECK_THROWS_AS((void)(a * c), std::invalid_argument);
}

TEST_CASE("sin, cos, log, pow match closed-form derivatives") {
  const double a = 1.3;
  const int order = 6;
  const Jet x = Jet::variable(a, order);

  auto [s, c] = sincos(x);
  for (int m = 0; m <= order; ++m) {
    const double phase = a + 0.5 * 3.14159265358979323846 * m;
    CHECK(s.derivative(m) == doctest::Approx(std::sin(phase)).epsilon(1e-13));
    CHECK(c.derivative(m) == doctest::Approx(std::cos(phase)).epsilon(1e-13));
  }

  const Jet l = log(x);
  for (int m = 1; m <= order; ++m) {
    double expect = std::pow(-1.0, m - 1) / std::pow(a, m);
    for (int i = 1; i < m; ++i) expect *= i;
    CHECK(l.derivative(m) == doctest::Approx(expect).epsilon(1e-13));
  }

  const Jet h = pow(x, 2.5);
  for (int m = 0; m <= order; ++m) {
    double coeff = 1.0;
    for (int i = 0; i < m; ++i) coeff *= 2.5 - i;
    CHECK(h.derivative(m) == doctest::Approx(coeff * std::pow(a, 2.5 - m)).epsilon(1e-12));
  }
}
