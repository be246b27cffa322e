#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "geoclust/dissim.hpp"

namespace geoclust {

/// One agglomeration step. Leaves are 0..n-1; the node created by merge s
/// has id n + s. `left < right` always.
struct Merge {
  std::size_t left;
  std::size_t right;
  double cost;    // inertia increment of the merge (not a cumulative height)
  double weight;  // total unit weight of the merged node
};

class MergeTree {
 public:
  MergeTree(std::size_t leaves, std::vector<Merge> merges);

  std::size_t leaves() const { return leaves_; }
  std::span<const Merge> merges() const { return merges_; }
  double total_cost() const;

 private:
  std::size_t leaves_;
  std::vector<Merge> merges_;
};

/// Assignment of n units to K clusters. Labels are 0..K-1 and canonical:
/// cluster c is the (c+1)-th distinct cluster met when scanning units in order.
class Partition {
 public:
  // Canonicalizes arbitrary integer labels.
  explicit Partition(std::span<const std::size_t> raw_labels);
  static Partition single(std::size_t n);
  static Partition singletons(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  std::size_t clusters() const { return k_; }
  std::size_t operator[](std::size_t i) const { return labels_[i]; }
  std::span<const std::size_t> labels() const { return labels_; }

  // Unit indices of each cluster, ascending.
  std::vector<std::vector<std::size_t>> members() const;

  // True when every cluster of *this lies inside a cluster of coarser.
  bool refines(const Partition& coarser) const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  Partition() = default;
  std::vector<std::size_t> labels_;
  std::size_t k_ = 0;
};

/// Ward agglomeration on squared dissimilarities with unit weights w.
/// Singleton merge cost is w_i w_j / (w_i + w_j) * d_ij^2, later costs follow
/// the Lance-Williams update. Among equal costs the pair with the smallest
/// (min node id, max node id) is merged first.
MergeTree ward_tree(const DissimMatrix& d, const UnitWeights& w);

/// Partition obtained by undoing the last K-1 merges.
Partition cut(const MergeTree& tree, std::size_t k);

/// cut(tree, k) for every k in 1..k_max, in order.
std::vector<Partition> cut_all(const MergeTree& tree, std::size_t k_max);

}  // namespace geoclust
