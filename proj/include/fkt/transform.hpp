#ifndef FKT_TRANSFORM_HPP
#define FKT_TRANSFORM_HPP

// The fast matrix-vector multiply: dense near-field blocks per leaf plus
// compressed multipole products per node, with dense and Barnes-Hut
// (monopole at the center of mass) reference paths.

#include <memory>
#include <optional>
#include <vector>

#include "fkt/expansion.hpp"
#include "fkt/tree.hpp"

namespace fkt {

class DimensionMismatchError : public std::invalid_argument {
 public:
  explicit DimensionMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

class ZeroReferenceError : public std::invalid_argument {
 public:
  ZeroReferenceError() : std::invalid_argument("relative error against a zero reference vector") {}
};

enum class CompressionMode { Auto, On, Off };

struct FktOptions {
  int p = 4;
  double theta = 0.75;
  int leafCapacity = 512;
  CompressionMode compression = CompressionMode::Auto;
  // Eager plans materialize per-node operators once; the streaming mode
  // rebuilds them during every multiply and keeps memory at O(N).
  bool eagerOperators = true;
  // Monopole expansion about each node's center of mass (forces p = 0).
  bool barnesHut = false;
  int threads = 0;  // 0 picks the hardware concurrency
  std::optional<double> diagonal;  // overrides the kernel's value-at-zero convention
};

class FktPlan {
 public:
  FktPlan(PointCloud cloud, KernelPtr kernel, const FktOptions& options);

  std::vector<double> multiply(std::span<const double> y) const;

  const PointCloud& cloud() const { return cloud_; }
  const PartitionTree& tree() const { return tree_; }
  const IsotropicKernel& kernel() const { return *kernel_; }
  const FktOptions& options() const { return options_; }
  bool compressed() const { return compression_.has_value(); }
  // Expansion coefficients per node.
  std::size_t coefficientCount() const;

 private:
  void buildNodeOperators(std::size_t nodeIndex, Eigen::MatrixXd& s2m, Eigen::MatrixXd& m2t) const;
  void applyNode(std::size_t nodeIndex, std::span<const double> y, std::vector<double>& z) const;

  PointCloud cloud_;
  KernelPtr kernel_;
  FktOptions options_;
  PartitionTree tree_;
  const CoefficientTable* table_ = nullptr;
  std::unique_ptr<HarmonicBasis> basis_;
  std::optional<std::vector<RadialFactorization>> compression_;
  std::unique_ptr<ExpansionLayout> layout_;
  std::vector<std::vector<double>> centerOfMass_;  // per node, Barnes-Hut only
  struct NodeOperators {
    Eigen::MatrixXd s2m, m2t;
  };
  std::vector<NodeOperators> operators_;  // eager mode
};

FktPlan plan(const PointCloud& cloud, KernelPtr kernel, const FktOptions& options = {});

std::vector<double> denseMultiply(const PointCloud& cloud, const IsotropicKernel& kernel,
                                  std::span<const double> y,
                                  std::optional<double> diagonal = std::nullopt, int threads = 0);

// Classic Barnes-Hut accumulation on a plan built with options.barnesHut.
std::vector<double> barnesHutMultiply(const FktPlan& plan, std::span<const double> y);

double relativeError(std::span<const double> approx, std::span<const double> exact);

}  // namespace fkt

#endif
