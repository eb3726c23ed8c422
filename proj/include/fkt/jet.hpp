#ifndef FKT_JET_HPP
#define FKT_JET_HPP

// Truncated Taylor series ("jet") arithmetic. A jet at center a of order P
// carries coefficients c_0..c_P of f(a+t) = sum c_n t^n + O(t^{P+1}), so the
// m-th derivative of f at a is m! * c_m. Elementary functions propagate
// through jets with the standard power-series recurrences, which is how
// high-order radial derivatives of kernels are obtained without symbolic
// differentiation.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace fkt {

class JetDomainError : public std::domain_error {
 public:
  explicit JetDomainError(const std::string& what) : std::domain_error(what) {}
};

class JetDivisionByZero : public JetDomainError {
 public:
  JetDivisionByZero() : JetDomainError("jet division by series with zero constant term") {}
};

class Jet {
 public:
  Jet() : center_(0.0), c_(1, 0.0) {}
  Jet(double center, int order) : center_(center), c_(static_cast<std::size_t>(order) + 1, 0.0) {
    if (order < 0) throw std::invalid_argument("jet order must be nonnegative");
  }

  static Jet constant(double value, double center, int order) {
    Jet j(center, order);
    j.c_[0] = value;
    return j;
  }

  // The identity function r |-> r expanded at `center`.
  static Jet variable(double center, int order) {
    Jet j(center, order);
    j.c_[0] = center;
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  double center() const { return center_; }
  int order() const { return static_cast<int>(c_.size()) - 1; }
  double coeff(int n) const { return c_[static_cast<std::size_t>(n)]; }
  double& coeff(int n) { return c_[static_cast<std::size_t>(n)]; }
  double value() const { return c_[0]; }

  // m-th derivative of the represented function at the center.
  double derivative(int m) const {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f * c_[static_cast<std::size_t>(m)];
  }

  Jet operator-() const {
    Jet r = *this;
    for (double& x : r.c_) x = -x;
    return r;
  }

  Jet& operator+=(const Jet& o) {
    requireCompatible(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    requireCompatible(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(double s) {
    c_[0] -= s;
    return *this;
  }
  Jet& operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
  }
  Jet& operator/=(double s) { return *this *= 1.0 / s; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }
  friend Jet operator/(double s, const Jet& a) { return recip(a) * s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    a.requireCompatible(b);
    Jet r(a.center_, a.order());
    const int n = a.order();
    for (int i = 0; i <= n; ++i) {
      const double ai = a.c_[static_cast<std::size_t>(i)];
      if (ai == 0.0) continue;
      for (int j = 0; j + i <= n; ++j)
        r.c_[static_cast<std::size_t>(i + j)] += ai * b.c_[static_cast<std::size_t>(j)];
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    a.requireCompatible(b);
    if (b.c_[0] == 0.0) throw JetDivisionByZero();
    Jet r(a.center_, a.order());
    const int n = a.order();
    for (int i = 0; i <= n; ++i) {
      double acc = a.c_[static_cast<std::size_t>(i)];
      for (int j = 1; j <= i; ++j) acc -= b.c_[static_cast<std::size_t>(j)] * r.c_[static_cast<std::size_t>(i - j)];
      r.c_[static_cast<std::size_t>(i)] = acc / b.c_[0];
    }
    return r;
  }

  friend Jet recip(const Jet& a) { return constant(1.0, a.center_, a.order()) / a; }

  friend Jet exp(const Jet& f) {
    Jet g(f.center_, f.order());
    g.c_[0] = std::exp(f.c_[0]);
    for (int m = 1; m <= f.order(); ++m) {
      double acc = 0.0;
      for (int k = 1; k <= m; ++k) acc += k * f.c_[static_cast<std::size_t>(k)] * g.c_[static_cast<std::size_t>(m - k)];
      g.c_[static_cast<std::size_t>(m)] = acc / m;
    }
    return g;
  }

  friend Jet log(const Jet& f) {
    if (f.c_[0] <= 0.0) throw JetDomainError("jet log of nonpositive constant term");
    Jet g(f.center_, f.order());
    g.c_[0] = std::log(f.c_[0]);
    for (int m = 1; m <= f.order(); ++m) {
      double acc = m * f.c_[static_cast<std::size_t>(m)];
      for (int k = 1; k < m; ++k) acc -= k * g.c_[static_cast<std::size_t>(k)] * f.c_[static_cast<std::size_t>(m - k)];
      g.c_[static_cast<std::size_t>(m)] = acc / (m * f.c_[0]);
    }
    return g;
  }

  friend Jet sqrt(const Jet& f) {
    if (f.c_[0] <= 0.0) throw JetDomainError("jet sqrt of nonpositive constant term");
    Jet g(f.center_, f.order());
    g.c_[0] = std::sqrt(f.c_[0]);
    for (int m = 1; m <= f.order(); ++m) {
      double acc = f.c_[static_cast<std::size_t>(m)];
      for (int k = 1; k < m; ++k) acc -= g.c_[static_cast<std::size_t>(k)] * g.c_[static_cast<std::size_t>(m - k)];
      g.c_[static_cast<std::size_t>(m)] = acc / (2.0 * g.c_[0]);
    }
    return g;
  }

  // Real power; integer exponents are evaluated by repeated multiplication so
  // they stay valid for negative constant terms.
  friend Jet pow(const Jet& f, double a) {
    if (a == std::floor(a) && std::abs(a) <= 64.0) return ipow(f, static_cast<int>(a));
    if (f.c_[0] <= 0.0) throw JetDomainError("jet pow with nonpositive constant term");
    Jet g(f.center_, f.order());
    g.c_[0] = std::pow(f.c_[0], a);
    for (int m = 1; m <= f.order(); ++m) {
      double acc = 0.0;
      for (int k = 1; k <= m; ++k)
        acc += (a * k - (m - k)) * f.c_[static_cast<std::size_t>(k)] * g.c_[static_cast<std::size_t>(m - k)];
      g.c_[static_cast<std::size_t>(m)] = acc / (m * f.c_[0]);
    }
    return g;
  }

  friend Jet ipow(const Jet& f, int e) {
    if (e < 0) return recip(ipow(f, -e));
    Jet r = constant(1.0, f.center_, f.order());
    Jet base = f;
    int n = e;
    while (n > 0) {
      if (n & 1) r = r * base;
      base = base * base;
      n >>= 1;
    }
    return r;
  }

  friend Jet sin(const Jet& f) { return sincos(f).first; }
  friend Jet cos(const Jet& f) { return sincos(f).second; }

  friend std::pair<Jet, Jet> sincos(const Jet& f) {
    Jet s(f.center_, f.order());
    Jet c(f.center_, f.order());
    s.c_[0] = std::sin(f.c_[0]);
    c.c_[0] = std::cos(f.c_[0]);
    for (int m = 1; m <= f.order(); ++m) {
      double sa = 0.0, ca = 0.0;
      for (int k = 1; k <= m; ++k) {
        const double kf = k * f.c_[static_cast<std::size_t>(k)];
        sa += kf * c.c_[static_cast<std::size_t>(m - k)];
        ca -= kf * s.c_[static_cast<std::size_t>(m - k)];
      }
      s.c_[static_cast<std::size_t>(m)] = sa / m;
      c.c_[static_cast<std::size_t>(m)] = ca / m;
    }
    return {s, c};
  }

 private:
  void requireCompatible(const Jet& o) const {
    if (center_ != o.center_ || c_.size() != o.c_.size())
      throw std::invalid_argument("jet operands must share center and order");
  }

  double center_;
  std::vector<double> c_;
};

}  // namespace fkt

#endif
