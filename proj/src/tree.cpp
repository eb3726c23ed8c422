#include "fkt/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fkt {

namespace {

// Pad zero-or-short sides symmetrically so max side / min side <= 2.
void regularizeBox(std::vector<double>& lo, std::vector<double>& hi) {
  double maxSide = 0.0;
  for (std::size_t a = 0; a < lo.size(); ++a) maxSide = std::max(maxSide, hi[a] - lo[a]);
  if (maxSide <= 0.0) return;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    const double side = hi[a] - lo[a];
    if (side < 0.5 * maxSide) {
      const double pad = 0.5 * (0.5 * maxSide - side);
      lo[a] -= pad;
      hi[a] += pad;
    }
  }
}

}  // namespace

PartitionTree::PartitionTree(const PointCloud& cloud, int leafCapacity)
    : n_(cloud.n), d_(cloud.d), leafCapacity_(leafCapacity), cloud_(&cloud) {
  if (leafCapacity < 1) throw std::invalid_argument("leaf capacity must be >= 1");
  if (cloud.n < 1) throw std::invalid_argument("point cloud must be nonempty");
  order_.resize(static_cast<std::size_t>(n_));
  std::iota(order_.begin(), order_.end(), 0u);
  perm_ = cloud.x;
  nodes_.reserve(static_cast<std::size_t>(2 * (n_ / leafCapacity + 1)));
  buildNode(0, static_cast<std::uint32_t>(n_));
  cloud_ = nullptr;
}

int PartitionTree::buildNode(std::uint32_t begin, std::uint32_t end) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  {
    TreeNode& node = nodes_.back();
    node.begin = begin;
    node.end = end;
    node.boxLo.assign(static_cast<std::size_t>(d_), std::numeric_limits<double>::infinity());
    node.boxHi.assign(static_cast<std::size_t>(d_), -std::numeric_limits<double>::infinity());
    for (std::uint32_t pos = begin; pos < end; ++pos) {
      const double* pt = perm_.data() + static_cast<std::size_t>(pos) * d_;
      for (int a = 0; a < d_; ++a) {
        node.boxLo[static_cast<std::size_t>(a)] = std::min(node.boxLo[static_cast<std::size_t>(a)], pt[a]);
        node.boxHi[static_cast<std::size_t>(a)] = std::max(node.boxHi[static_cast<std::size_t>(a)], pt[a]);
      }
    }
    double extent = 0.0;
    for (int a = 0; a < d_; ++a) extent += node.boxHi[static_cast<std::size_t>(a)] - node.boxLo[static_cast<std::size_t>(a)];
    regularizeBox(node.boxLo, node.boxHi);
    node.center.resize(static_cast<std::size_t>(d_));
    for (int a = 0; a < d_; ++a)
      node.center[static_cast<std::size_t>(a)] =
          0.5 * (node.boxLo[static_cast<std::size_t>(a)] + node.boxHi[static_cast<std::size_t>(a)]);
    double radius2 = 0.0;
    for (std::uint32_t pos = begin; pos < end; ++pos) {
      const double* pt = perm_.data() + static_cast<std::size_t>(pos) * d_;
      double dist2 = 0.0;
      for (int a = 0; a < d_; ++a) {
        const double t = pt[a] - node.center[static_cast<std::size_t>(a)];
        dist2 += t * t;
      }
      radius2 = std::max(radius2, dist2);
    }
    node.radius = std::sqrt(radius2);

    if (end - begin <= static_cast<std::uint32_t>(leafCapacity_) || extent == 0.0) return index;
  }

  // Split along the longest regularized side (lowest axis on ties), at the
  // point median clamped so both child boxes keep aspect ratio <= 2.
  int axis = 0;
  double bestSide = -1.0;
  {
    const TreeNode& node = nodes_[static_cast<std::size_t>(index)];
    for (int a = 0; a < d_; ++a) {
      const double side = node.boxHi[static_cast<std::size_t>(a)] - node.boxLo[static_cast<std::size_t>(a)];
      if (side > bestSide) {
        bestSide = side;
        axis = a;
      }
    }
  }

  double splitValue;
  {
    const TreeNode& node = nodes_[static_cast<std::size_t>(index)];
    const double lo = node.boxLo[static_cast<std::size_t>(axis)];
    const double hi = node.boxHi[static_cast<std::size_t>(axis)];
    double maxOther = 0.0;
    double minOther = std::numeric_limits<double>::infinity();
    for (int a = 0; a < d_; ++a) {
      if (a == axis) continue;
      const double side = node.boxHi[static_cast<std::size_t>(a)] - node.boxLo[static_cast<std::size_t>(a)];
      maxOther = std::max(maxOther, side);
      minOther = std::min(minOther, side);
    }
    double clampLo = lo, clampHi = hi;
    if (d_ > 1) {
      clampLo = std::max(lo + 0.5 * maxOther, hi - 2.0 * minOther);
      clampHi = std::min(lo + 2.0 * minOther, hi - 0.5 * maxOther);
      if (clampLo > clampHi) clampLo = clampHi = 0.5 * (lo + hi);
    }
    std::vector<double> values;
    values.reserve(nodes_[static_cast<std::size_t>(index)].count());
    for (std::uint32_t pos = nodes_[static_cast<std::size_t>(index)].begin;
         pos < nodes_[static_cast<std::size_t>(index)].end; ++pos)
      values.push_back(perm_[static_cast<std::size_t>(pos) * d_ + axis]);
    std::nth_element(values.begin(), values.begin() + values.size() / 2, values.end());
    splitValue = std::clamp(values[values.size() / 2], clampLo, clampHi);
  }

  // Partition positions: coordinate <= split goes to the lower child, keeping
  // relative order for determinism.
  const std::uint32_t b = nodes_[static_cast<std::size_t>(index)].begin;
  const std::uint32_t e = nodes_[static_cast<std::size_t>(index)].end;
  std::vector<std::uint32_t> lowerIdx, upperIdx;
  std::vector<double> lowerPts, upperPts;
  for (std::uint32_t pos = b; pos < e; ++pos) {
    const double* pt = perm_.data() + static_cast<std::size_t>(pos) * d_;
    const bool lower = pt[axis] <= splitValue;
    auto& idx = lower ? lowerIdx : upperIdx;
    auto& pts = lower ? lowerPts : upperPts;
    idx.push_back(order_[pos]);
    pts.insert(pts.end(), pt, pt + d_);
  }
  if (lowerIdx.empty() || upperIdx.empty()) {
    // The clamped interval sits outside the data spread along this axis;
    // separate at the largest value strictly below the maximum instead.
    double maxVal = -std::numeric_limits<double>::infinity();
    for (std::uint32_t pos = b; pos < e; ++pos)
      maxVal = std::max(maxVal, perm_[static_cast<std::size_t>(pos) * d_ + axis]);
    double below = -std::numeric_limits<double>::infinity();
    for (std::uint32_t pos = b; pos < e; ++pos) {
      const double v = perm_[static_cast<std::size_t>(pos) * d_ + axis];
      if (v < maxVal) below = std::max(below, v);
    }
    lowerIdx.clear();
    upperIdx.clear();
    lowerPts.clear();
    upperPts.clear();
    for (std::uint32_t pos = b; pos < e; ++pos) {
      const double* pt = perm_.data() + static_cast<std::size_t>(pos) * d_;
      const bool lower = pt[axis] <= below;
      auto& idx = lower ? lowerIdx : upperIdx;
      auto& pts = lower ? lowerPts : upperPts;
      idx.push_back(order_[pos]);
      pts.insert(pts.end(), pt, pt + d_);
    }
  }
  const std::uint32_t mid = b + static_cast<std::uint32_t>(lowerIdx.size());
  std::copy(lowerIdx.begin(), lowerIdx.end(), order_.begin() + b);
  std::copy(upperIdx.begin(), upperIdx.end(), order_.begin() + mid);
  std::copy(lowerPts.begin(), lowerPts.end(), perm_.begin() + static_cast<std::size_t>(b) * d_);
  std::copy(upperPts.begin(), upperPts.end(), perm_.begin() + static_cast<std::size_t>(mid) * d_);

  const int left = buildNode(b, mid);
  const int right = buildNode(mid, e);
  nodes_[static_cast<std::size_t>(index)].left = left;
  nodes_[static_cast<std::size_t>(index)].right = right;
  return index;
}

void PartitionTree::computeInteractionSets(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must be in (0, 1)");
  theta_ = theta;
  std::vector<std::uint32_t> all(static_cast<std::size_t>(n_));
  std::iota(all.begin(), all.end(), 0u);
  // Candidates are original indices; distances use the permuted storage via a
  // position lookup built once.
  posOf_.assign(static_cast<std::size_t>(n_), 0u);
  for (std::uint32_t pos = 0; pos < static_cast<std::uint32_t>(n_); ++pos) posOf_[order_[pos]] = pos;
  fillSets(0, std::move(all));
}

void PartitionTree::fillSets(int nodeIndex, std::vector<std::uint32_t>&& candidates) {
  TreeNode& node = nodes_[static_cast<std::size_t>(nodeIndex)];
  node.farSet.clear();
  node.nearSet.clear();
  std::vector<std::uint32_t> kept;
  kept.reserve(candidates.size());
  const double limit = node.radius / theta_;
  const double limit2 = limit * limit;
  for (std::uint32_t original : candidates) {
    const double* pt = perm_.data() + static_cast<std::size_t>(posOf_[original]) * d_;
    double dist2 = 0.0;
    for (int a = 0; a < d_; ++a) {
      const double t = pt[a] - node.center[static_cast<std::size_t>(a)];
      dist2 += t * t;
    }
    if (dist2 > limit2)
      node.farSet.push_back(original);
    else
      kept.push_back(original);
  }
  if (node.isLeaf()) {
    node.nearSet = std::move(kept);
    return;
  }
  const int left = node.left, right = node.right;
  std::vector<std::uint32_t> keptCopy = kept;
  fillSets(left, std::move(kept));
  fillSets(right, std::move(keptCopy));
}

}  // namespace fkt
