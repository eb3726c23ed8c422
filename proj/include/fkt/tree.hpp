#ifndef FKT_TREE_HPP
#define FKT_TREE_HPP

// Binary space partitioning of a point cloud with aspect-ratio control, and
// the far/near interaction sets. Far sets along any root-to-leaf path are
// disjoint and, together with the leaf's near set, cover every point exactly
// once.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace fkt {

struct PointCloud {
  int n = 0;
  int d = 0;
  std::vector<double> x;  // row-major n x d

  PointCloud() = default;
  PointCloud(int n_, int d_) : n(n_), d(d_), x(static_cast<std::size_t>(n_) * d_, 0.0) {}

  std::span<const double> point(int i) const {
    return {x.data() + static_cast<std::size_t>(i) * d, static_cast<std::size_t>(d)};
  }
  double* pointData(int i) { return x.data() + static_cast<std::size_t>(i) * d; }
};

struct TreeNode {
  std::vector<double> boxLo, boxHi;  // aspect-regularized bounding box
  std::vector<double> center;        // box center
  double radius = 0.0;               // max distance from center to an owned point
  std::uint32_t begin = 0, end = 0;  // owned range in the permuted order
  int left = -1, right = -1;         // children; both -1 for a leaf
  std::vector<std::uint32_t> farSet;   // original point indices
  std::vector<std::uint32_t> nearSet;  // original point indices (leaves only)

  bool isLeaf() const { return left < 0; }
  std::uint32_t count() const { return end - begin; }
};

class PartitionTree {
 public:
  // Every leaf holds at most leafCapacity points unless it has zero spatial
  // extent (all duplicates), which also terminates recursion.
  PartitionTree(const PointCloud& cloud, int leafCapacity);

  // Top-down sweep populating far sets per node and near sets per leaf with
  // the admissibility criterion radius / distance < theta.
  void computeInteractionSets(double theta);

  int dimension() const { return d_; }
  int pointCount() const { return n_; }
  std::size_t nodeCount() const { return nodes_.size(); }
  const TreeNode& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<std::uint32_t>& order() const { return order_; }
  double theta() const { return theta_; }
  bool hasInteractionSets() const { return theta_ > 0.0; }

  // Coordinates of the point at permuted position pos.
  std::span<const double> pointAt(std::uint32_t pos) const {
    return {perm_.data() + static_cast<std::size_t>(pos) * d_, static_cast<std::size_t>(d_)};
  }
  std::uint32_t originalIndex(std::uint32_t pos) const { return order_[pos]; }

 private:
  int buildNode(std::uint32_t begin, std::uint32_t end);
  void fillSets(int nodeIndex, std::vector<std::uint32_t>&& candidates);

  int n_ = 0, d_ = 0;
  int leafCapacity_ = 0;
  double theta_ = 0.0;
  std::vector<std::uint32_t> order_;   // permuted position -> original index
  std::vector<std::uint32_t> posOf_;   // original index -> permuted position
  std::vector<double> perm_;           // permuted coordinates, n x d
  std::vector<TreeNode> nodes_;        // nodes_[0] is the root
  const PointCloud* cloud_ = nullptr;  // only valid during construction
};

}  // namespace fkt

#endif
