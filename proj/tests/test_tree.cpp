#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "fkt/synthetic.hpp"
#include "fkt/tree.hpp"

using namespace fkt;

namespace {

void checkStructure(const PartitionTree& tree, int leafCapacity) {
  for (std::size_t b = 0; b < tree.nodeCount(); ++b) {
    const TreeNode& node = tree.node(b);
    double maxSide = 0.0, minSide = 1e300;
    for (int a = 0; a < tree.dimension(); ++a) {
      const double side = node.boxHi[static_cast<std::size_t>(a)] - node.boxLo[static_cast<std::size_t>(a)];
      maxSide = std::max(maxSide, side);
      minSide = std::min(minSide, side);
    }
    if (maxSide > 0.0) CHECK(maxSide / minSide <= 2.0 + 1e-12);
    if (!node.isLeaf()) {
      const TreeNode& l = tree.node(static_cast<std::size_t>(node.left));
      const TreeNode& r = tree.node(static_cast<std::size_t>(node.right));
      CHECK(l.begin == node.begin);
      CHECK(l.end == r.begin);
      CHECK(r.end == node.end);
      CHECK(l.count() > 0);
      CHECK(r.count() > 0);
    } else {
      const bool capacityOk = node.count() <= static_cast<std::uint32_t>(leafCapacity);
      // Zero-extent leaves (all duplicates) may exceed the capacity.
      CHECK((capacityOk || maxSide == 0.0));
    }
    // Radius covers every owned point.
    for (std::uint32_t pos = node.begin; pos < node.end; ++pos) {
      auto pt = tree.pointAt(pos);
      double dist2 = 0.0;
      for (int a = 0; a < tree.dimension(); ++a) {
        const double t = pt[static_cast<std::size_t>(a)] - node.center[static_cast<std::size_t>(a)];
        dist2 += t * t;
      }
      CHECK(std::sqrt(dist2) <= node.radius * (1.0 + 1e-12) + 1e-300);
    }
  }
}

// Walk root-to-leaf paths and check the exact-coverage invariant.
void checkCoverage(const PartitionTree& tree) {
  const int n = tree.pointCount();
  std::vector<int> leafOf;  // leaves in traversal order
  for (std::size_t b = 0; b < tree.nodeCount(); ++b)
    if (tree.node(b).isLeaf()) leafOf.push_back(static_cast<int>(b));

  // count[target][leaf]: how many times the (target, source-leaf) pair is
  // covered by a far set on the path or the leaf's near set.
  for (int leafIdx : leafOf) {
    std::vector<int> covered(static_cast<std::size_t>(n), 0);
    // Path from root to this leaf.
    std::vector<std::size_t> path;
    std::size_t cur = 0;
    while (true) {
      path.push_back(cur);
      const TreeNode& node = tree.node(cur);
      if (node.isLeaf()) break;
      const TreeNode& leaf = tree.node(static_cast<std::size_t>(leafIdx));
      cur = leaf.begin >= tree.node(static_cast<std::size_t>(node.left)).end
                ? static_cast<std::size_t>(node.right)
                : static_cast<std::size_t>(node.left);
    }
    CHECK(path.back() == static_cast<std::size_t>(leafIdx));
    for (std::size_t b : path)
      for (std::uint32_t t : tree.node(b).farSet) ++covered[t];
    for (std::uint32_t t : tree.node(static_cast<std::size_t>(leafIdx)).nearSet) ++covered[t];
    for (int t = 0; t < n; ++t) CHECK(covered[static_cast<std::size_t>(t)] == 1);
  }
}

void checkFarCriterion(const PartitionTree& tree, const PointCloud& cloud, double theta) {
  for (std::size_t b = 0; b < tree.nodeCount(); ++b) {
    const TreeNode& node = tree.node(b);
    for (std::uint32_t t : node.farSet) {
      double dist2 = 0.0;
      auto pt = cloud.point(static_cast<int>(t));
      for (int a = 0; a < cloud.d; ++a) {
        const double x = pt[static_cast<std::size_t>(a)] - node.center[static_cast<std::size_t>(a)];
        dist2 += x * x;
      }
      CHECK(node.radius / std::sqrt(dist2) < theta);
    }
  }
}

}  // namespace

TEST_CASE("small clouds build a single-node tree with everything near") {
  Rng rng(3);
  PointCloud cloud = cubeCloud(100, 3, rng);
  PartitionTree tree(cloud, 128);
  CHECK(tree.nodeCount() == 1);
  tree.computeInteractionSets(0.75);
  CHECK(tree.node(0).farSet.empty());
  CHECK(tree.node(0).nearSet.size() == 100);
}

TEST_CASE("uniform cloud: capacity, aspect ratio, coverage, far criterion") {
  Rng rng(99);
  PointCloud cloud = cubeCloud(1000, 3, rng);
  PartitionTree tree(cloud, 128);
  checkStructure(tree, 128);
  tree.computeInteractionSets(0.75);
  checkCoverage(tree);
  checkFarCriterion(tree, cloud, 0.75);
}

TEST_CASE("coverage holds across dimensions and theta values") {
  Rng rng(1234);
  for (int d : {2, 4}) {
    PointCloud cloud = sphereSurfaceCloud(600, d, rng);
    PartitionTree tree(cloud, 64);
    checkStructure(tree, 64);
    for (double theta : {0.3, 0.6, 0.9}) {
      tree.computeInteractionSets(theta);
      checkCoverage(tree);
      checkFarCriterion(tree, cloud, theta);
    }
  }
}

TEST_CASE("tiny theta empties every far set") {
  Rng rng(5);
  PointCloud cloud = cubeCloud(500, 2, rng);
  PartitionTree tree(cloud, 64);
  tree.computeInteractionSets(1e-9);
  std::size_t farTotal = 0, nearTotal = 0;
  for (std::size_t b = 0; b < tree.nodeCount(); ++b) {
    farTotal += tree.node(b).farSet.size();
    if (tree.node(b).isLeaf()) nearTotal += tree.node(b).nearSet.size();
  }
  CHECK(farTotal == 0);
  // Every (point, leaf) pair is then near.
  std::size_t leaves = 0;
  for (std::size_t b = 0; b < tree.nodeCount(); ++b) leaves += tree.node(b).isLeaf();
  CHECK(nearTotal == leaves * 500);
}

TEST_CASE("two well-separated clusters claim each other as far") {
  Rng rng(8);
  PointCloud cloud(200, 2);
  for (int i = 0; i < 100; ++i) {
    cloud.pointData(i)[0] = rng.uniform(0.0, 1.0);
    cloud.pointData(i)[1] = rng.uniform(0.0, 1.0);
  }
  for (int i = 100; i < 200; ++i) {
    cloud.pointData(i)[0] = 100.0 + rng.uniform(0.0, 1.0);
    cloud.pointData(i)[1] = rng.uniform(0.0, 1.0);
  }
  PartitionTree tree(cloud, 64);
  tree.computeInteractionSets(0.75);
  checkCoverage(tree);
  checkFarCriterion(tree, cloud, 0.75);
  // The children of the root separate the clusters, and each child's far set
  // holds the whole opposite cluster (claimed at the highest admissible level).
  const TreeNode& root = tree.node(0);
  REQUIRE_FALSE(root.isLeaf());
  const TreeNode& left = tree.node(static_cast<std::size_t>(root.left));
  std::set<std::uint32_t> leftFar(left.farSet.begin(), left.farSet.end());
  CHECK(leftFar.size() == 100);
}

TEST_CASE("duplicate points beyond capacity terminate through the zero-extent rule") {
  PointCloud cloud(50, 3);
  for (int i = 0; i < 50; ++i)
    for (int a = 0; a < 3; ++a) cloud.pointData(i)[a] = 1.5;
  PartitionTree tree(cloud, 8);
  CHECK(tree.nodeCount() == 1);
  CHECK(tree.node(0).isLeaf());
  tree.computeInteractionSets(0.5);
  CHECK(tree.node(0).nearSet.size() == 50);
}

TEST_CASE("mixed duplicates and spread points still build and cover") {
  Rng rng(77);
  PointCloud cloud(300, 2);
  for (int i = 0; i < 200; ++i) {
    cloud.pointData(i)[0] = rng.uniform(0.0, 1.0);
    cloud.pointData(i)[1] = rng.uniform(0.0, 1.0);
  }
  for (int i = 200; i < 300; ++i) {
    cloud.pointData(i)[0] = 0.5;
    cloud.pointData(i)[1] = 0.5;
  }
  PartitionTree tree(cloud, 16);
  checkStructure(tree, 16);
  tree.computeInteractionSets(0.75);
  checkCoverage(tree);
}

TEST_CASE("identical input produces identical trees and sets") {
  Rng rng1(314), rng2(314);
  PointCloud a = cubeCloud(800, 3, rng1);
  PointCloud b = cubeCloud(800, 3, rng2);
  PartitionTree ta(a, 100), tb(b, 100);
  ta.computeInteractionSets(0.6);
  tb.computeInteractionSets(0.6);
  REQUIRE(ta.nodeCount() == tb.nodeCount());
  CHECK(ta.order() == tb.order());
  for (std::size_t i = 0; i < ta.nodeCount(); ++i) {
    CHECK(ta.node(i).begin == tb.node(i).begin);
    CHECK(ta.node(i).end == tb.node(i).end);
    CHECK(ta.node(i).farSet == tb.node(i).farSet);
    CHECK(ta.node(i).nearSet == tb.node(i).nearSet);
  }
}
