#ifndef FKT_LAURENT_HPP
#define FKT_LAURENT_HPP

// Sparse Laurent polynomials (finitely many terms, integer powers of either
// sign). Used with exact rational coefficients for kernel derivative
// recurrences K'(r) = q(r) K(r) and everything the radial compression
// derives from them.

#include <map>
#include <type_traits>

#include "fkt/exact.hpp"

namespace fkt {

template <class Coeff>
class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;

  static LaurentPolynomial monomial(const Coeff& c, int power) {
    LaurentPolynomial p;
    p.add(power, c);
    return p;
  }

  void add(int power, const Coeff& c) {
    if (c == Coeff(0)) return;
    auto it = terms_.find(power);
    if (it == terms_.end()) {
      terms_.emplace(power, c);
    } else {
      it->second += c;
      if (it->second == Coeff(0)) terms_.erase(it);
    }
  }

  Coeff coeff(int power) const {
    auto it = terms_.find(power);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  bool empty() const { return terms_.empty(); }
  int minPower() const { return terms_.empty() ? 0 : terms_.begin()->first; }
  int maxPower() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }
  const std::map<int, Coeff>& terms() const { return terms_; }

  LaurentPolynomial derivative() const {
    LaurentPolynomial d;
    for (const auto& [p, c] : terms_)
      if (p != 0) d.add(p - 1, c * Coeff(p));
    return d;
  }

  LaurentPolynomial operator+(const LaurentPolynomial& o) const {
    LaurentPolynomial r = *this;
    for (const auto& [p, c] : o.terms_) r.add(p, c);
    return r;
  }

  LaurentPolynomial operator*(const LaurentPolynomial& o) const {
    LaurentPolynomial r;
    for (const auto& [p1, c1] : terms_)
      for (const auto& [p2, c2] : o.terms_) r.add(p1 + p2, c1 * c2);
    return r;
  }

  LaurentPolynomial scaled(const Coeff& s) const {
    LaurentPolynomial r;
    if (s == Coeff(0)) return r;
    for (const auto& [p, c] : terms_) r.terms_.emplace(p, c * s);
    return r;
  }

  double evaluate(double r) const {
    double acc = 0.0;
    for (const auto& [p, c] : terms_) {
      double coeffValue;
      if constexpr (std::is_same_v<Coeff, Rational>)
        coeffValue = toDouble(c);
      else
        coeffValue = static_cast<double>(c);
      acc += coeffValue * std::pow(r, p);
    }
    return acc;
  }

  bool operator==(const LaurentPolynomial& o) const { return terms_ == o.terms_; }

 private:
  std::map<int, Coeff> terms_;
};

using RationalLaurent = LaurentPolynomial<Rational>;

}  // namespace fkt

#endif
