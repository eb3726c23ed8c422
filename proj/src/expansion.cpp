#include "fkt/expansion.hpp"

#include <cmath>

namespace fkt {

std::size_t expansionSize(int d, int p) {
  if (d < 2 || p < 0) throw std::invalid_argument("expansionSize requires d >= 2, p >= 0");
  return binomial(d + p, p).convert_to<std::size_t>();
}

RadialCoefficients::RadialCoefficients(const IsotropicKernel& kernel, const CoefficientTable& table,
                                       int p, double r)
    : p_(p) {
  if (p > table.maxOrder()) throw std::invalid_argument("RadialCoefficients: order exceeds table");
  offset_.assign(static_cast<std::size_t>(p) + 2, 0);
  std::size_t slots = 0;
  for (int k = 0; k <= p; ++k) {
    offset_[static_cast<std::size_t>(k)] = slots;
    slots += static_cast<std::size_t>((p - k) / 2) + 1;
  }
  offset_[static_cast<std::size_t>(p) + 1] = slots;
  w_.assign(slots, 0.0);

  const Jet jet = kernel.jetAt(r, p);
  // K^(m)(r) r^{m-j} = m! c_m r^{m-j}; accumulate in j-descending powers.
  std::vector<double> dk(static_cast<std::size_t>(p) + 1);  // K^(m)(r) r^m
  double rm = 1.0, fact = 1.0;
  for (int m = 0; m <= p; ++m) {
    if (m > 0) fact *= m;
    dk[static_cast<std::size_t>(m)] = jet.coeff(m) * fact * rm;
    rm *= r;
  }
  for (int k = 0; k <= p; ++k) {
    for (int j = k; j <= p; j += 2) {
      double acc = 0.0;
      for (int m = 1; m <= j; ++m)
        acc += dk[static_cast<std::size_t>(m)] * table.tbarDouble(k, j, m);
      acc *= std::pow(r, -j);
      if (k == 0 && j == 0) acc += kernel.evalPositive(r);
      w_[offset_[static_cast<std::size_t>(k)] + static_cast<std::size_t>((j - k) / 2)] = acc;
    }
  }
}

double RadialCoefficients::w(int k, int j) const {
  if (k < 0 || k > p_ || j < k || j > p_ || (j - k) % 2 != 0) return 0.0;
  return w_[offset_[static_cast<std::size_t>(k)] + static_cast<std::size_t>((j - k) / 2)];
}

double RadialCoefficients::radial(int k, double rSrc) const {
  double acc = 0.0;
  for (int j = p_ - (p_ - k) % 2; j >= k; j -= 2) acc = acc * rSrc * rSrc + w(k, j);
  return acc * std::pow(rSrc, k);
}

double radialFunction(const IsotropicKernel& kernel, const CoefficientTable& table, int k, int p,
                      double rSrc, double rTgt) {
  if (k > p) throw std::invalid_argument("radialFunction requires k <= p");
  if (!(rSrc >= 0.0) || !(rTgt > rSrc)) throw std::invalid_argument("radialFunction requires 0 <= rSrc < rTgt");
  if (rSrc == 0.0) return k == 0 ? kernel.evalPositive(rTgt) : 0.0;
  RadialCoefficients rc(kernel, table, p, rTgt);
  return rc.radial(k, rSrc);
}

double truncatedKernel(const IsotropicKernel& kernel, const CoefficientTable& table, int p,
                       std::span<const double> src, std::span<const double> tgt) {
  if (src.size() != tgt.size()) throw std::invalid_argument("truncatedKernel: dimension mismatch");
  const int d = table.dimension();
  double rs2 = 0.0, rt2 = 0.0, dot = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    rs2 += src[i] * src[i];
    rt2 += tgt[i] * tgt[i];
    dot += src[i] * tgt[i];
  }
  const double rSrc = std::sqrt(rs2), rTgt = std::sqrt(rt2);
  if (!(rSrc < rTgt)) throw std::invalid_argument("truncatedKernel requires |src| < |tgt|");
  if (rSrc == 0.0) return kernel.evalPositive(rTgt);
  const double cosGamma = dot / (rSrc * rTgt);
  const double alpha = 0.5 * d - 1.0;
  RadialCoefficients rc(kernel, table, p, rTgt);
  double acc = 0.0;
  for (int k = 0; k <= p; ++k) acc += gegenbauer(alpha, k, cosGamma) * rc.radial(k, rSrc);
  return acc;
}

double truncationErrorBound(const IsotropicKernel& kernel, int d, int p, double ratio, double r,
                            int jMax) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("truncationErrorBound requires 0 < ratio < 1");
  if (jMax < p + 1) throw std::invalid_argument("truncationErrorBound requires jMax >= p + 1");
  const CoefficientTable& table = coefficientTableInternal(d, jMax);
  const Jet jet = kernel.jetAt(r, jMax);
  std::vector<double> dk(static_cast<std::size_t>(jMax) + 1);  // K^(m)(r) r^m
  double rm = 1.0, fact = 1.0;
  for (int m = 0; m <= jMax; ++m) {
    if (m > 0) fact *= m;
    dk[static_cast<std::size_t>(m)] = jet.coeff(m) * fact * rm;
    rm *= r;
  }
  double bound = 0.0;
  for (int k = 0; k <= jMax; ++k) {
    const double ck = d >= 3 ? gegenbauerUpperBound(d, k) : gegenbauerAtOne(2, k);
    double tail = 0.0;
    int j0 = std::max(p + 1, k);
    if ((j0 - k) % 2 != 0) ++j0;
    for (int j = j0; j <= jMax; j += 2) {
      double inner = 0.0;
      for (int m = 1; m <= j; ++m) inner += dk[static_cast<std::size_t>(m)] * table.tbarDouble(k, j, m);
      tail += std::abs(inner) * std::pow(ratio, j);
    }
    bound += ck * tail;
  }
  return bound;
}

RationalQrResult rationalRankRevealingQr(const RationalMatrix& m) {
  const int rows = m.rows(), cols = m.cols();
  std::vector<std::vector<Rational>> work(static_cast<std::size_t>(cols));
  for (int j = 0; j < cols; ++j) {
    work[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i) work[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = m.at(i, j);
  }
  std::vector<std::vector<Rational>> qCols;
  std::vector<Rational> qNormSq;
  std::vector<std::vector<Rational>> rRows;  // coefficients in original column order

  auto columnNormSq = [&](int j) {
    Rational s(0);
    for (const Rational& x : work[static_cast<std::size_t>(j)]) s += x * x;
    return s;
  };

  std::vector<bool> used(static_cast<std::size_t>(cols), false);
  for (int step = 0; step < std::min(rows, cols); ++step) {
    int pivot = -1;
    Rational best(0);
    for (int j = 0; j < cols; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      Rational norm = columnNormSq(j);
      if (pivot < 0 || norm > best) {
        best = norm;
        pivot = j;
      }
    }
    if (pivot < 0 || best == 0) break;
    used[static_cast<std::size_t>(pivot)] = true;
    std::vector<Rational> q = work[static_cast<std::size_t>(pivot)];
    std::vector<Rational> rRow(static_cast<std::size_t>(cols), Rational(0));
    rRow[static_cast<std::size_t>(pivot)] = 1;
    for (int j = 0; j < cols; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      Rational proj(0);
      for (int i = 0; i < rows; ++i)
        proj += q[static_cast<std::size_t>(i)] * work[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      proj /= best;
      if (proj == 0) continue;
      rRow[static_cast<std::size_t>(j)] = proj;
      for (int i = 0; i < rows; ++i)
        work[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] -= proj * q[static_cast<std::size_t>(i)];
    }
    qCols.push_back(std::move(q));
    qNormSq.push_back(best);
    rRows.push_back(std::move(rRow));
  }

  const int rank = static_cast<int>(qCols.size());
  RationalQrResult out{rank, RationalMatrix(rows, std::max(rank, 0)), RationalMatrix(std::max(rank, 0), cols)};
  for (int t = 0; t < rank; ++t) {
    for (int i = 0; i < rows; ++i) out.q.at(i, t) = qCols[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
    for (int j = 0; j < cols; ++j) out.r.at(t, j) = rRows[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)];
  }
  return out;
}

namespace {

// K^(m)(r) = laurent_m(r) K(r) for recurrence kernels, built from
// laurent_{m+1} = laurent_m' + q laurent_m.
std::vector<RationalLaurent> derivativeLaurents(const RationalLaurent& q, int maxM) {
  std::vector<RationalLaurent> out(static_cast<std::size_t>(maxM) + 1);
  out[0] = RationalLaurent::monomial(Rational(1), 0);
  for (int m = 1; m <= maxM; ++m)
    out[static_cast<std::size_t>(m)] =
        out[static_cast<std::size_t>(m - 1)].derivative() + out[static_cast<std::size_t>(m - 1)] * q;
  return out;
}

}  // namespace

std::vector<RadialFactorization> radialCompression(const IsotropicKernel& kernel,
                                                   const CoefficientTable& table, int p) {
  const auto& q = kernel.derivativeRecurrence();
  if (!q) throw NotRecurrenceKernelError(kernel.name());
  const auto lau = derivativeLaurents(*q, p);

  std::vector<RadialFactorization> out;
  out.reserve(static_cast<std::size_t>(p) + 1);
  for (int k = 0; k <= p; ++k) {
    // Collect A_{s,j}: coefficient of K(r) r^s r'^j in Kbar^(k)_p.
    std::map<int, std::map<int, Rational>> coeffs;  // power of r -> power of r' -> value
    for (int j = k; j <= p; j += 2) {
      for (int m = 1; m <= j; ++m) {
        const Rational& t = table.tbar(k, j, m);
        if (t == 0) continue;
        for (const auto& [power, c] : lau[static_cast<std::size_t>(m)].terms()) {
          Rational v = c * t;
          coeffs[power + m - j][j] += v;
        }
      }
      if (k == 0 && j == 0) coeffs[0][0] += 1;  // the K(r) term itself
    }
    // Dense matrix over the powers that actually appear.
    std::vector<int> rPowers;
    for (const auto& [s, row] : coeffs) {
      (void)row;
      rPowers.push_back(s);
    }
    std::vector<int> srcPowers;
    for (int j = k; j <= p; j += 2) srcPowers.push_back(j);
    RationalMatrix mat(static_cast<int>(rPowers.size()), static_cast<int>(srcPowers.size()));
    for (std::size_t i = 0; i < rPowers.size(); ++i)
      for (std::size_t j = 0; j < srcPowers.size(); ++j) {
        auto itRow = coeffs.find(rPowers[i]);
        auto itCell = itRow->second.find(srcPowers[j]);
        mat.at(static_cast<int>(i), static_cast<int>(j)) =
            itCell == itRow->second.end() ? Rational(0) : itCell->second;
      }

    RationalQrResult qr = rationalRankRevealingQr(mat);
    RadialFactorization f;
    f.degree = k;
    f.rank = qr.rank;
    for (int t = 0; t < qr.rank; ++t) {
      RationalLaurent fr, gs;
      for (std::size_t i = 0; i < rPowers.size(); ++i) fr.add(rPowers[i], qr.q.at(static_cast<int>(i), t));
      for (std::size_t j = 0; j < srcPowers.size(); ++j) gs.add(srcPowers[j], qr.r.at(t, static_cast<int>(j)));
      f.targetFactor.push_back(std::move(fr));
      f.sourceFactor.push_back(std::move(gs));
    }
    out.push_back(std::move(f));
  }
  return out;
}

ExpansionLayout::ExpansionLayout(const HarmonicBasis& basis, int p,
                                 const std::vector<RadialFactorization>* compression)
    : p_(p), compression_(compression) {
  if (p > basis.maxDegree()) throw std::invalid_argument("ExpansionLayout: basis degree too small");
  radialCount_.resize(static_cast<std::size_t>(p) + 1);
  offset_.resize(static_cast<std::size_t>(p) + 2);
  std::size_t total = 0;
  for (int k = 0; k <= p; ++k) {
    offset_[static_cast<std::size_t>(k)] = total;
    const int count = compression ? (*compression)[static_cast<std::size_t>(k)].rank
                                  : (p - k) / 2 + 1;
    radialCount_[static_cast<std::size_t>(k)] = count;
    total += basis.degreeCount(k) * static_cast<std::size_t>(count);
  }
  offset_[static_cast<std::size_t>(p) + 1] = total;
  total_ = total;
}

Eigen::MatrixXd buildSourceToMultipole(std::span<const double> points, int n, int d,
                                       const HarmonicBasis& basis, const ExpansionLayout& layout) {
  Eigen::MatrixXd s2m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(layout.total()), n);
  const int p = layout.order();
  std::vector<double> yvals;
  for (int c = 0; c < n; ++c) {
    std::span<const double> pt = points.subspan(static_cast<std::size_t>(c) * d, static_cast<std::size_t>(d));
    double r2 = 0.0;
    for (double x : pt) r2 += x * x;
    const double r = std::sqrt(r2);
    if (r == 0.0) {
      // Collocated source: only the degree-0 leading coefficient survives.
      const double y0 = 1.0 / std::sqrt(basis.additionNormalizer(0));
      double lead = 1.0;
      if (layout.compressed()) {
        const auto& g = (*layout.compression())[0];
        if (g.rank == 0) continue;
        // r'^0 coefficient of the first source factor (pivoting keeps the
        // remaining factors free of the constant only when it is absorbed
        // here; evaluate all factors at zero to stay exact).
        for (int i = 0; i < g.rank; ++i)
          s2m(static_cast<Eigen::Index>(layout.degreeOffset(0)) + i, c) = y0 * toDouble(g.sourceFactor[static_cast<std::size_t>(i)].coeff(0));
        continue;
      }
      s2m(static_cast<Eigen::Index>(layout.degreeOffset(0)), c) = y0 * lead;
      continue;
    }
    basis.evaluate(pt, yvals);
    std::size_t row = 0;
    for (int k = 0; k <= p; ++k) {
      const std::size_t hCount = basis.degreeCount(k);
      const int slots = layout.radialCount(k);
      for (std::size_t h = 0; h < hCount; ++h) {
        const double y = yvals[basis.degreeOffset(k) + h];
        if (layout.compressed()) {
          const auto& g = (*layout.compression())[static_cast<std::size_t>(k)];
          for (int i = 0; i < slots; ++i)
            s2m(static_cast<Eigen::Index>(row++), c) = y * g.sourceFactor[static_cast<std::size_t>(i)].evaluate(r);
        } else {
          double rj = std::pow(r, k);
          for (int i = 0; i < slots; ++i) {
            s2m(static_cast<Eigen::Index>(row++), c) = y * rj;
            rj *= r * r;
          }
        }
      }
    }
  }
  return s2m;
}

Eigen::MatrixXd buildMultipoleToTarget(std::span<const double> points, int n, int d,
                                       const IsotropicKernel& kernel, const CoefficientTable& table,
                                       const HarmonicBasis& basis, const ExpansionLayout& layout) {
  Eigen::MatrixXd m2t = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(layout.total()));
  const int p = layout.order();
  std::vector<double> yvals;
  for (int t = 0; t < n; ++t) {
    std::span<const double> pt = points.subspan(static_cast<std::size_t>(t) * d, static_cast<std::size_t>(d));
    double r2 = 0.0;
    for (double x : pt) r2 += x * x;
    const double r = std::sqrt(r2);
    if (r == 0.0) throw std::invalid_argument("buildMultipoleToTarget: target at the expansion center");
    basis.evaluate(pt, yvals);
    std::size_t col = 0;
    if (layout.compressed()) {
      const double kv = kernel.evalPositive(r);
      for (int k = 0; k <= p; ++k) {
        const double z = basis.additionNormalizer(k);
        const auto& g = (*layout.compression())[static_cast<std::size_t>(k)];
        const std::size_t hCount = basis.degreeCount(k);
        for (std::size_t h = 0; h < hCount; ++h) {
          const double y = yvals[basis.degreeOffset(k) + h];
          for (int i = 0; i < g.rank; ++i)
            m2t(t, static_cast<Eigen::Index>(col++)) =
                y * z * kv * g.targetFactor[static_cast<std::size_t>(i)].evaluate(r);
        }
      }
    } else {
      RadialCoefficients rc(kernel, table, p, r);
      for (int k = 0; k <= p; ++k) {
        const double z = basis.additionNormalizer(k);
        const std::size_t hCount = basis.degreeCount(k);
        for (std::size_t h = 0; h < hCount; ++h) {
          const double y = yvals[basis.degreeOffset(k) + h];
          for (int j = k; j <= p; j += 2)
            m2t(t, static_cast<Eigen::Index>(col++)) = y * z * rc.w(k, j);
        }
      }
    }
  }
  return m2t;
}

}  // namespace fkt
