#include "fkt/coefficients.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

namespace fkt {

Rational bellCoefficient(int n, int m) {
  if (m < 1 || m > n) throw std::invalid_argument("bellCoefficient requires 1 <= m <= n");
  Rational r(doubleFactorial(2 * n - 2 * m - 1) * binomial(2 * n - m - 1, m - 1), intPow(2, n));
  if ((n + m) % 2 != 0) r = -r;
  return r;
}

std::vector<Rational> cosinePowerCoefficients(int d, int i) {
  if (d < 2 || i < 0) throw std::invalid_argument("cosinePowerCoefficients requires d >= 2, i >= 0");
  std::vector<Rational> out(static_cast<std::size_t>(i) + 1, Rational(0));
  if (d == 2) {
    // Chebyshev limit of the alpha -> 0 family, consistent with the
    // C_k^{(0)} := (2/k) T_k convention used by the harmonics module.
    for (int k = i % 2; k <= i; k += 2) {
      const int lo = (i - k) / 2, hi = (i + k) / 2;
      if (k == 0)
        out[0] = Rational(factorial(i), intPow(2, i) * factorial(lo) * factorial(hi));
      else
        out[static_cast<std::size_t>(k)] =
            Rational(factorial(i) * k, intPow(2, i) * factorial(lo) * factorial(hi));
    }
    return out;
  }
  const Rational alpha = Rational(d - 2, 2);
  for (int k = i % 2; k <= i; k += 2) {
    const int lo = (i - k) / 2, hi = (i + k) / 2;
    const Rational num = Rational(factorial(i)) * (alpha + k);
    const Rational den = Rational(intPow(2, i) * factorial(lo)) * risingFactorial(alpha, hi + 1);
    out[static_cast<std::size_t>(k)] = num / den;
  }
  return out;
}

std::size_t CoefficientTable::slot(int k, int j, int m) const {
  // Row index over valid (k, j) pairs with j = k, k+2, ..., entries m = 1..j.
  const std::size_t row = rowOffset_[static_cast<std::size_t>(k)] + static_cast<std::size_t>((j - k) / 2);
  (void)m;
  return row;
}

CoefficientTable::CoefficientTable(int dimension, int maxOrder) : d_(dimension), p_(maxOrder) {
  if (dimension < 2) throw std::invalid_argument("CoefficientTable requires d >= 2");
  if (maxOrder < 0) throw std::invalid_argument("CoefficientTable requires p >= 0");

  b_.resize(static_cast<std::size_t>(p_) + 1);
  for (int n = 1; n <= p_; ++n) {
    b_[static_cast<std::size_t>(n)].resize(static_cast<std::size_t>(n));
    for (int m = 1; m <= n; ++m) b_[static_cast<std::size_t>(n)][static_cast<std::size_t>(m - 1)] = bellCoefficient(n, m);
  }
  a_.resize(static_cast<std::size_t>(p_) + 1);
  for (int i = 0; i <= p_; ++i) a_[static_cast<std::size_t>(i)] = cosinePowerCoefficients(d_, i);

  // Row offsets for the (k, j) pairs with matching parity.
  rowOffset_.assign(static_cast<std::size_t>(p_) + 2, 0);
  std::size_t rows = 0;
  for (int k = 0; k <= p_; ++k) {
    rowOffset_[static_cast<std::size_t>(k)] = rows;
    rows += static_cast<std::size_t>((p_ - k) / 2) + 1;
  }
  rowOffset_[static_cast<std::size_t>(p_) + 1] = rows;

  t_.assign(rows * static_cast<std::size_t>(std::max(p_, 1)), Rational(0));

  for (int k = 0; k <= p_; ++k) {
    for (int j = k; j <= p_; j += 2) {
      const std::size_t base = slot(k, j, 1) * static_cast<std::size_t>(std::max(p_, 1));
      for (int m = 1; m <= j; ++m) {
        Rational acc(0);
        const int nLo = std::max((j + k + 1) / 2, m);
        for (int n = nLo; n <= j; ++n) {
          const int i = 2 * n - j;  // power of cosine; i == j (mod 2) and k <= i <= j
          if (i < k) continue;
          Rational term = Rational(binomial(n, i)) * a_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
          term *= Rational(intPow(2, i), factorial(n));
          if (i % 2 != 0) term = -term;
          term *= b_[static_cast<std::size_t>(n)][static_cast<std::size_t>(m - 1)];
          acc += term;
        }
        t_[base + static_cast<std::size_t>(m - 1)] = acc;
      }
    }
  }
  buildDoubles();
}

void CoefficientTable::buildDoubles() {
  td_.resize(t_.size());
  for (std::size_t i = 0; i < t_.size(); ++i) td_[i] = toDouble(t_[i]);
}

const Rational& CoefficientTable::tbar(int k, int j, int m) const {
  static const Rational kZero(0);
  if (k < 0 || j < k || j > p_ || m < 1 || m > j || (j - k) % 2 != 0) return kZero;
  return t_[slot(k, j, m) * static_cast<std::size_t>(std::max(p_, 1)) + static_cast<std::size_t>(m - 1)];
}

double CoefficientTable::tbarDouble(int k, int j, int m) const {
  if (k < 0 || j < k || j > p_ || m < 1 || m > j || (j - k) % 2 != 0) return 0.0;
  return td_[slot(k, j, m) * static_cast<std::size_t>(std::max(p_, 1)) + static_cast<std::size_t>(m - 1)];
}

std::string CoefficientTable::serialize() const {
  std::ostringstream os;
  os << "fkt-tbar 1 " << d_ << " " << p_ << "\n";
  for (int k = 0; k <= p_; ++k)
    for (int j = k; j <= p_; j += 2)
      for (int m = 1; m <= j; ++m) {
        const Rational& q = tbar(k, j, m);
        os << k << " " << j << " " << m << " " << numerator(q) << " " << denominator(q) << "\n";
      }
  return os.str();
}

std::optional<CoefficientTable> CoefficientTable::deserialize(const std::string& text) {
  std::istringstream is(text);
  std::string magic;
  int version = 0, d = 0, p = 0;
  if (!(is >> magic >> version >> d >> p) || magic != "fkt-tbar" || version != 1) return std::nullopt;
  if (d < 2 || p < 0 || p > kMaxInternalOrder) return std::nullopt;

  CoefficientTable table;
  table.d_ = d;
  table.p_ = p;
  table.b_.resize(static_cast<std::size_t>(p) + 1);
  for (int n = 1; n <= p; ++n) {
    table.b_[static_cast<std::size_t>(n)].resize(static_cast<std::size_t>(n));
    for (int m = 1; m <= n; ++m)
      table.b_[static_cast<std::size_t>(n)][static_cast<std::size_t>(m - 1)] = bellCoefficient(n, m);
  }
  table.a_.resize(static_cast<std::size_t>(p) + 1);
  for (int i = 0; i <= p; ++i) table.a_[static_cast<std::size_t>(i)] = cosinePowerCoefficients(d, i);
  table.rowOffset_.assign(static_cast<std::size_t>(p) + 2, 0);
  std::size_t rows = 0;
  for (int k = 0; k <= p; ++k) {
    table.rowOffset_[static_cast<std::size_t>(k)] = rows;
    rows += static_cast<std::size_t>((p - k) / 2) + 1;
  }
  table.rowOffset_[static_cast<std::size_t>(p) + 1] = rows;
  table.t_.assign(rows * static_cast<std::size_t>(std::max(p, 1)), Rational(0));

  int k, j, m;
  BigInt num, den;
  std::size_t count = 0;
  while (is >> k >> j >> m >> num >> den) {
    if (den == 0) return std::nullopt;
    if (k < 0 || j < k || j > p || m < 1 || m > j || (j - k) % 2 != 0) return std::nullopt;
    table.t_[table.slot(k, j, m) * static_cast<std::size_t>(std::max(p, 1)) + static_cast<std::size_t>(m - 1)] =
        Rational(num, den);
    ++count;
  }
  std::size_t expected = 0;
  for (int kk = 0; kk <= p; ++kk)
    for (int jj = kk; jj <= p; jj += 2) expected += static_cast<std::size_t>(jj);
  if (count != expected) return std::nullopt;
  table.buildDoubles();
  return table;
}

bool CoefficientTable::operator==(const CoefficientTable& o) const {
  return d_ == o.d_ && p_ == o.p_ && t_ == o.t_;
}

CoefficientTable buildCoefficientTable(int d, int p) {
  if (p > kMaxExpansionOrder) throw OrderTooLargeError(p, kMaxExpansionOrder);
  return CoefficientTable(d, p);
}

namespace {

std::optional<std::filesystem::path> cacheFile(int d, int p) {
  const char* dir = std::getenv("FKT_CACHE_DIR");
  if (!dir || !*dir) return std::nullopt;
  return std::filesystem::path(dir) / ("fkt-tbar-v1-d" + std::to_string(d) + "-p" + std::to_string(p) + ".txt");
}

const CoefficientTable& memoizedTable(int d, int p) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<CoefficientTable>> tables;
  std::lock_guard<std::mutex> lock(mutex);
  auto& entry = tables[{d, p}];
  if (!entry) {
    if (auto file = cacheFile(d, p)) {
      std::ifstream in(*file);
      if (in) {
        std::stringstream buffer;
        buffer << in.rdbuf();
        if (auto loaded = CoefficientTable::deserialize(buffer.str()))
          entry = std::make_unique<CoefficientTable>(std::move(*loaded));
      }
    }
    if (!entry) {
      entry = std::make_unique<CoefficientTable>(d, p);
      if (auto file = cacheFile(d, p)) {
        std::error_code ec;
        std::filesystem::create_directories(file->parent_path(), ec);
        std::ofstream out(*file);
        if (out) out << entry->serialize();
      }
    }
  }
  return *entry;
}

}  // namespace

const CoefficientTable& coefficientTable(int d, int p) {
  if (p > kMaxExpansionOrder) throw OrderTooLargeError(p, kMaxExpansionOrder);
  return memoizedTable(d, p);
}

const CoefficientTable& coefficientTableInternal(int d, int p) {
  if (p > kMaxInternalOrder) throw OrderTooLargeError(p, kMaxInternalOrder);
  return memoizedTable(d, p);
}

}  // namespace fkt
