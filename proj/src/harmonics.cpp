#include "fkt/harmonics.hpp"

#include <cmath>

#include "fkt/exact.hpp"

namespace fkt {
namespace {

constexpr double kPi = 3.14159265358979323846;

double chebyshev(int k, double x) {
  if (k == 0) return 1.0;
  double tm = 1.0, t = x;
  for (int n = 2; n <= k; ++n) {
    const double next = 2.0 * x * t - tm;
    tm = t;
    t = next;
  }
  return t;
}

// Surface area of the unit sphere S^{d-1}.
double sphereSurface(int d) { return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

// Squared L2 norm of C_n^{(lambda)} under the weight (1-x^2)^{lambda-1/2}.
double gegenbauerNormSq(int n, double lambda) {
  const double logNum = std::log(kPi) + (1.0 - 2.0 * lambda) * std::log(2.0) + std::lgamma(n + 2.0 * lambda);
  const double logDen = std::lgamma(n + 1.0) + std::log(n + lambda) + 2.0 * std::lgamma(lambda);
  return std::exp(logNum - logDen);
}

}  // namespace

double gegenbauer(double alpha, int k, double x) {
  if (k < 0) throw std::invalid_argument("gegenbauer: negative degree");
  if (alpha == 0.0) return k == 0 ? 1.0 : 2.0 / k * chebyshev(k, x);
  if (k == 0) return 1.0;
  double cm = 1.0;
  double c = 2.0 * alpha * x;
  for (int n = 2; n <= k; ++n) {
    const double next = (2.0 * x * (n + alpha - 1.0) * c - (n + 2.0 * alpha - 2.0) * cm) / n;
    cm = c;
    c = next;
  }
  return c;
}

double gegenbauerUpperBound(int d, int k) {
  if (d < 3) throw std::invalid_argument("gegenbauerUpperBound requires d >= 3");
  return toDouble(Rational(binomial(k + d - 3, k)));
}

double gegenbauerAtOne(int d, int k) {
  if (d == 2) return k == 0 ? 1.0 : 2.0 / k;
  return gegenbauerUpperBound(d, k);
}

std::size_t harmonicIndexCount(int d, int k) {
  if (d < 2 || k < 0) throw std::invalid_argument("harmonicIndexCount requires d >= 2, k >= 0");
  BigInt c = binomial(k + d - 1, k) - binomial(k + d - 3, k - 2);
  return c.convert_to<std::size_t>();
}

namespace {

void enumerateChains(int levelsLeft, int top, std::vector<int>& prefix,
                     std::vector<std::vector<int>>& out) {
  if (levelsLeft == 1) {
    for (int m = 0; m <= top; ++m) {
      prefix.push_back(m);
      out.push_back(prefix);
      prefix.pop_back();
      if (m > 0) {
        prefix.push_back(-m);
        out.push_back(prefix);
        prefix.pop_back();
      }
    }
    return;
  }
  for (int m = 0; m <= top; ++m) {
    prefix.push_back(m);
    enumerateChains(levelsLeft - 1, m, prefix, out);
    prefix.pop_back();
  }
}

std::vector<std::vector<int>> allChains(int d, int k) {
  std::vector<std::vector<int>> out;
  if (d == 2) {
    if (k == 0) {
      out.push_back({0});
    } else {
      out.push_back({k});
      out.push_back({-k});
    }
    return out;
  }
  std::vector<int> prefix;
  enumerateChains(d - 2, k, prefix, out);
  return out;
}

}  // namespace

std::vector<HarmonicIndex> enumerateHarmonicIndices(int d, int k) {
  if (d < 2 || k < 0) throw std::invalid_argument("enumerateHarmonicIndices requires d >= 2, k >= 0");
  std::vector<HarmonicIndex> out;
  for (auto& chain : allChains(d, k)) out.push_back(HarmonicIndex{k, std::move(chain)});
  return out;
}

double additionNormalizer(int d, int k) {
  return sphereSurface(d) * gegenbauerAtOne(d, k) / static_cast<double>(harmonicIndexCount(d, k));
}

HarmonicBasis::HarmonicBasis(int d, int maxDegree) : d_(d), maxDegree_(maxDegree) {
  if (d < 2) throw std::invalid_argument("HarmonicBasis requires d >= 2");
  if (maxDegree < 0) throw std::invalid_argument("HarmonicBasis requires maxDegree >= 0");
  degreeOffset_.assign(static_cast<std::size_t>(maxDegree) + 2, 0);
  chains_.resize(static_cast<std::size_t>(maxDegree) + 1);
  z_.resize(static_cast<std::size_t>(maxDegree) + 1);
  std::size_t offset = 0;
  for (int k = 0; k <= maxDegree; ++k) {
    degreeOffset_[static_cast<std::size_t>(k)] = offset;
    z_[static_cast<std::size_t>(k)] = fkt::additionNormalizer(d, k);
    auto raw = allChains(d, k);
    auto& list = chains_[static_cast<std::size_t>(k)];
    list.reserve(raw.size());
    for (const auto& rawChain : raw) {
      Chain c;
      c.m.resize(rawChain.size() + 1);
      c.m[0] = k;
      for (std::size_t i = 0; i < rawChain.size(); ++i) c.m[i + 1] = std::abs(rawChain[i]);
      c.phase = rawChain.empty() ? 0 : (rawChain.back() > 0 ? 1 : (rawChain.back() < 0 ? -1 : 0));
      if (d == 2) {
        c.norm = 1.0 / std::sqrt(c.phase == 0 ? 2.0 * kPi : kPi);
        // For d = 2 the chain entry only selects the phase; drop it from the
        // Gegenbauer product levels.
        c.m.resize(1);
      } else {
        double norm = 1.0;
        for (int level = 1; level <= d - 2; ++level) {
          const double lambda = 0.5 * (d - 1 - level) + c.m[static_cast<std::size_t>(level)];
          const int n = c.m[static_cast<std::size_t>(level - 1)] - c.m[static_cast<std::size_t>(level)];
          norm /= gegenbauerNormSq(n, lambda);
        }
        norm /= (c.phase == 0 ? 2.0 * kPi : kPi);
        c.norm = std::sqrt(norm);
      }
      list.push_back(std::move(c));
    }
    offset += list.size();
  }
  degreeOffset_[static_cast<std::size_t>(maxDegree) + 1] = offset;
  totalCount_ = offset;
}

void HarmonicBasis::evaluate(std::span<const double> point, std::vector<double>& values) const {
  if (static_cast<int>(point.size()) != d_) throw std::invalid_argument("harmonic evaluation: wrong dimension");
  double norm2 = 0.0;
  for (double x : point) norm2 += x * x;
  if (norm2 == 0.0) throw ZeroVectorError();
  const double invNorm = 1.0 / std::sqrt(norm2);
  std::vector<double> v(point.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = point[i] * invNorm;

  values.assign(totalCount_, 0.0);
  const int p = maxDegree_;

  // Unnormalized circular factors: a[m] = t^m cos(m phi), b[m] = t^m sin(m phi)
  // built from the last two components without ever dividing by t.
  std::vector<double> circA(static_cast<std::size_t>(p) + 1), circB(static_cast<std::size_t>(p) + 1);
  {
    const double cx = v[static_cast<std::size_t>(d_ - 2)];
    const double cy = v[static_cast<std::size_t>(d_ - 1)];
    circA[0] = 1.0;
    circB[0] = 0.0;
    for (int m = 1; m <= p; ++m) {
      circA[static_cast<std::size_t>(m)] = circA[static_cast<std::size_t>(m - 1)] * cx - circB[static_cast<std::size_t>(m - 1)] * cy;
      circB[static_cast<std::size_t>(m)] = circB[static_cast<std::size_t>(m - 1)] * cx + circA[static_cast<std::size_t>(m - 1)] * cy;
    }
  }

  if (d_ == 2) {
    for (int k = 0; k <= p; ++k) {
      std::size_t off = degreeOffset_[static_cast<std::size_t>(k)];
      for (const Chain& c : chains_[static_cast<std::size_t>(k)]) {
        const double circ = c.phase >= 0 ? circA[static_cast<std::size_t>(k)] : circB[static_cast<std::size_t>(k)];
        values[off++] = c.norm * circ;
      }
    }
    return;
  }

  // Homogenized Gegenbauer values per level: g[level][m][n] =
  // tail_{level-1}^n C_n^{(alpha_level + m)}(v[level-1] / tail_{level-1}),
  // evaluated via the scaled three-term recurrence (no division by the tail).
  std::vector<double> tailSq(static_cast<std::size_t>(d_ - 1));
  {
    // tailSq[j] = |(v_j, ..., v_{d-1})|^2 with j counted from 0.
    double acc = 0.0;
    std::vector<double> suffix(static_cast<std::size_t>(d_) + 1, 0.0);
    for (int i = d_ - 1; i >= 0; --i) {
      acc += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
      suffix[static_cast<std::size_t>(i)] = acc;
    }
    for (int j = 0; j <= d_ - 2; ++j) tailSq[static_cast<std::size_t>(j)] = suffix[static_cast<std::size_t>(j)];
  }

  std::vector<std::vector<std::vector<double>>> g(static_cast<std::size_t>(d_ - 1));
  for (int level = 1; level <= d_ - 2; ++level) {
    const double x = v[static_cast<std::size_t>(level - 1)];
    const double t2 = tailSq[static_cast<std::size_t>(level - 1)];
    auto& byM = g[static_cast<std::size_t>(level)];
    byM.resize(static_cast<std::size_t>(p) + 1);
    for (int m = 0; m <= p; ++m) {
      const double lambda = 0.5 * (d_ - 1 - level) + m;
      auto& row = byM[static_cast<std::size_t>(m)];
      row.resize(static_cast<std::size_t>(p - m) + 1);
      row[0] = 1.0;
      if (p - m >= 1) row[1] = 2.0 * lambda * x;
      for (int n = 2; n <= p - m; ++n)
        row[static_cast<std::size_t>(n)] =
            (2.0 * x * (n + lambda - 1.0) * row[static_cast<std::size_t>(n - 1)] -
             t2 * (n + 2.0 * lambda - 2.0) * row[static_cast<std::size_t>(n - 2)]) /
            n;
    }
  }

  for (int k = 0; k <= p; ++k) {
    std::size_t off = degreeOffset_[static_cast<std::size_t>(k)];
    for (const Chain& c : chains_[static_cast<std::size_t>(k)]) {
      double prod = c.norm;
      for (int level = 1; level <= d_ - 2; ++level) {
        const int mInner = c.m[static_cast<std::size_t>(level)];
        const int n = c.m[static_cast<std::size_t>(level - 1)] - mInner;
        prod *= g[static_cast<std::size_t>(level)][static_cast<std::size_t>(mInner)][static_cast<std::size_t>(n)];
      }
      const int mLast = c.m[static_cast<std::size_t>(d_ - 2)];
      prod *= c.phase >= 0 ? circA[static_cast<std::size_t>(mLast)] : circB[static_cast<std::size_t>(mLast)];
      values[off++] = prod;
    }
  }
}

HarmonicBasisEvaluation HarmonicBasis::evaluate(std::span<const double> point) const {
  HarmonicBasisEvaluation out;
  out.direction.assign(point.begin(), point.end());
  double norm2 = 0.0;
  for (double x : out.direction) norm2 += x * x;
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : out.direction) x *= inv;
  }
  evaluate(point, out.values);
  return out;
}

}  // namespace fkt
