#include "fkt/transform.hpp"

#include <cmath>
#include <thread>

namespace fkt {

namespace {

int resolveThreads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Static split of [0, n) among workers; results merged in worker order so the
// accumulation is deterministic for a fixed thread count.
template <class Fn>
void parallelChunks(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    fn(0, n, 0);
    return;
  }
  const int workers = static_cast<int>(std::min(n, static_cast<std::size_t>(threads)));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const std::size_t chunk = (n + static_cast<std::size_t>(workers) - 1) / static_cast<std::size_t>(workers);
  for (int w = 0; w < workers; ++w) {
    const std::size_t lo = static_cast<std::size_t>(w) * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi, w] { fn(lo, hi, w); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

FktPlan::FktPlan(PointCloud cloud, KernelPtr kernel, const FktOptions& options)
    : cloud_(std::move(cloud)),
      kernel_(std::move(kernel)),
      options_(options),
      tree_(cloud_, options.leafCapacity) {
  if (options_.barnesHut) options_.p = 0;
  if (options_.p < 0) throw std::invalid_argument("plan requires p >= 0");
  tree_.computeInteractionSets(options_.theta);

  if (options_.barnesHut) {
    centerOfMass_.resize(tree_.nodeCount());
    for (std::size_t b = 0; b < tree_.nodeCount(); ++b) {
      const TreeNode& node = tree_.node(b);
      std::vector<double> com(static_cast<std::size_t>(cloud_.d), 0.0);
      for (std::uint32_t pos = node.begin; pos < node.end; ++pos) {
        auto pt = tree_.pointAt(pos);
        for (int a = 0; a < cloud_.d; ++a) com[static_cast<std::size_t>(a)] += pt[static_cast<std::size_t>(a)];
      }
      for (double& c : com) c /= node.count();
      centerOfMass_[b] = std::move(com);
    }
    return;
  }

  table_ = &coefficientTable(cloud_.d, options_.p);
  basis_ = std::make_unique<HarmonicBasis>(cloud_.d, options_.p);

  bool compress = false;
  switch (options_.compression) {
    case CompressionMode::Auto:
      compress = kernel_->derivativeRecurrence().has_value();
      break;
    case CompressionMode::On:
      if (!kernel_->derivativeRecurrence())
        throw NotRecurrenceKernelError(kernel_->name());
      compress = true;
      break;
    case CompressionMode::Off:
      compress = false;
      break;
  }
  if (compress) compression_ = radialCompression(*kernel_, *table_, options_.p);
  layout_ = std::make_unique<ExpansionLayout>(*basis_, options_.p,
                                              compression_ ? &*compression_ : nullptr);

  if (options_.eagerOperators) {
    operators_.resize(tree_.nodeCount());
    const int threads = resolveThreads(options_.threads);
    parallelChunks(tree_.nodeCount(), threads, [this](std::size_t lo, std::size_t hi, int) {
      for (std::size_t b = lo; b < hi; ++b)
        buildNodeOperators(b, operators_[b].s2m, operators_[b].m2t);
    });
  }
}

std::size_t FktPlan::coefficientCount() const {
  if (options_.barnesHut) return 1;
  return layout_->total();
}

void FktPlan::buildNodeOperators(std::size_t nodeIndex, Eigen::MatrixXd& s2m,
                                 Eigen::MatrixXd& m2t) const {
  const TreeNode& node = tree_.node(nodeIndex);
  const int d = cloud_.d;
  if (node.farSet.empty()) {
    s2m.resize(0, 0);
    m2t.resize(0, 0);
    return;
  }
  std::vector<double> sources(static_cast<std::size_t>(node.count()) * d);
  for (std::uint32_t pos = node.begin; pos < node.end; ++pos) {
    auto pt = tree_.pointAt(pos);
    for (int a = 0; a < d; ++a)
      sources[static_cast<std::size_t>(pos - node.begin) * d + static_cast<std::size_t>(a)] =
          pt[static_cast<std::size_t>(a)] - node.center[static_cast<std::size_t>(a)];
  }
  std::vector<double> targets(node.farSet.size() * static_cast<std::size_t>(d));
  for (std::size_t t = 0; t < node.farSet.size(); ++t) {
    auto pt = cloud_.point(static_cast<int>(node.farSet[t]));
    for (int a = 0; a < d; ++a)
      targets[t * static_cast<std::size_t>(d) + static_cast<std::size_t>(a)] =
          pt[static_cast<std::size_t>(a)] - node.center[static_cast<std::size_t>(a)];
  }
  s2m = buildSourceToMultipole(sources, static_cast<int>(node.count()), d, *basis_, *layout_);
  m2t = buildMultipoleToTarget(targets, static_cast<int>(node.farSet.size()), d, *kernel_, *table_,
                               *basis_, *layout_);
}

void FktPlan::applyNode(std::size_t nodeIndex, std::span<const double> y, std::vector<double>& z) const {
  const TreeNode& node = tree_.node(nodeIndex);
  const int d = cloud_.d;

  // Far field.
  if (!node.farSet.empty()) {
    if (options_.barnesHut) {
      double total = 0.0;
      for (std::uint32_t pos = node.begin; pos < node.end; ++pos)
        total += y[tree_.originalIndex(pos)];
      const auto& com = centerOfMass_[nodeIndex];
      for (std::uint32_t target : node.farSet) {
        auto pt = cloud_.point(static_cast<int>(target));
        double dist2 = 0.0;
        for (int a = 0; a < d; ++a) {
          const double t = pt[static_cast<std::size_t>(a)] - com[static_cast<std::size_t>(a)];
          dist2 += t * t;
        }
        z[target] += kernel_->evalPositive(std::sqrt(dist2)) * total;
      }
    } else {
      Eigen::VectorXd ySub(static_cast<Eigen::Index>(node.count()));
      for (std::uint32_t pos = node.begin; pos < node.end; ++pos)
        ySub(pos - node.begin) = y[tree_.originalIndex(pos)];
      const bool eager = !operators_.empty();
      Eigen::MatrixXd s2mLocal, m2tLocal;
      if (!eager) buildNodeOperators(nodeIndex, s2mLocal, m2tLocal);
      const Eigen::MatrixXd& s2m = eager ? operators_[nodeIndex].s2m : s2mLocal;
      const Eigen::MatrixXd& m2t = eager ? operators_[nodeIndex].m2t : m2tLocal;
      const Eigen::VectorXd moments = s2m * ySub;
      const Eigen::VectorXd far = m2t * moments;
      for (std::size_t t = 0; t < node.farSet.size(); ++t)
        z[node.farSet[t]] += far(static_cast<Eigen::Index>(t));
    }
  }

  // Near field (leaves only): exact dense block.
  if (node.isLeaf()) {
    const std::optional<double> diag = options_.diagonal;
    for (std::uint32_t target : node.nearSet) {
      auto tp = cloud_.point(static_cast<int>(target));
      double acc = 0.0;
      for (std::uint32_t pos = node.begin; pos < node.end; ++pos) {
        auto sp = tree_.pointAt(pos);
        double dist2 = 0.0;
        for (int a = 0; a < d; ++a) {
          const double t = tp[static_cast<std::size_t>(a)] - sp[static_cast<std::size_t>(a)];
          dist2 += t * t;
        }
        const double r = std::sqrt(dist2);
        acc += (*kernel_)(r, r == 0.0 ? diag : std::nullopt) * y[tree_.originalIndex(pos)];
      }
      z[target] += acc;
    }
  }
}

std::vector<double> FktPlan::multiply(std::span<const double> y) const {
  if (static_cast<int>(y.size()) != cloud_.n)
    throw DimensionMismatchError("multiply: vector length does not match the point count");
  const int threads = resolveThreads(options_.threads);
  const std::size_t nodes = tree_.nodeCount();
  if (threads <= 1 || nodes < 2) {
    std::vector<double> z(static_cast<std::size_t>(cloud_.n), 0.0);
    for (std::size_t b = 0; b < nodes; ++b) applyNode(b, y, z);
    return z;
  }
  std::vector<std::vector<double>> buffers(static_cast<std::size_t>(threads),
                                           std::vector<double>(static_cast<std::size_t>(cloud_.n), 0.0));
  parallelChunks(nodes, threads, [this, &y, &buffers](std::size_t lo, std::size_t hi, int worker) {
    auto& z = buffers[static_cast<std::size_t>(worker)];
    for (std::size_t b = lo; b < hi; ++b) applyNode(b, y, z);
  });
  std::vector<double> z = std::move(buffers[0]);
  for (std::size_t w = 1; w < buffers.size(); ++w)
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += buffers[w][i];
  return z;
}

FktPlan plan(const PointCloud& cloud, KernelPtr kernel, const FktOptions& options) {
  return FktPlan(cloud, std::move(kernel), options);
}

std::vector<double> denseMultiply(const PointCloud& cloud, const IsotropicKernel& kernel,
                                  std::span<const double> y, std::optional<double> diagonal,
                                  int threads) {
  if (static_cast<int>(y.size()) != cloud.n)
    throw DimensionMismatchError("denseMultiply: vector length does not match the point count");
  std::vector<double> z(static_cast<std::size_t>(cloud.n), 0.0);
  const int workers = resolveThreads(threads);
  parallelChunks(static_cast<std::size_t>(cloud.n), workers,
                 [&cloud, &kernel, &y, &z, &diagonal](std::size_t lo, std::size_t hi, int) {
                   const int d = cloud.d;
                   for (std::size_t i = lo; i < hi; ++i) {
                     auto pi = cloud.point(static_cast<int>(i));
                     double acc = 0.0;
                     for (int j = 0; j < cloud.n; ++j) {
                       auto pj = cloud.point(j);
                       double dist2 = 0.0;
                       for (int a = 0; a < d; ++a) {
                         const double t = pi[static_cast<std::size_t>(a)] - pj[static_cast<std::size_t>(a)];
                         dist2 += t * t;
                       }
                       const double r = std::sqrt(dist2);
                       acc += kernel(r, r == 0.0 ? diagonal : std::nullopt) * y[static_cast<std::size_t>(j)];
                     }
                     z[i] = acc;
                   }
                 });
  return z;
}

std::vector<double> barnesHutMultiply(const FktPlan& plan, std::span<const double> y) {
  if (!plan.options().barnesHut)
    throw std::invalid_argument("barnesHutMultiply requires a plan built with the Barnes-Hut option");
  return plan.multiply(y);
}

double relativeError(std::span<const double> approx, std::span<const double> exact) {
  if (approx.size() != exact.size()) throw DimensionMismatchError("relativeError: length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < approx.size(); ++i) {
    const double diff = approx[i] - exact[i];
    num += diff * diff;
    den += exact[i] * exact[i];
  }
  if (den == 0.0) throw ZeroReferenceError();
  return std::sqrt(num / den);
}

}  // namespace fkt
