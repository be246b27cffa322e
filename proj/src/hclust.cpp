#include "geoclust/hclust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "geoclust/error.hpp"

namespace geoclust {

MergeTree::MergeTree(std::size_t leaves, std::vector<Merge> merges)
    : leaves_(leaves), merges_(std::move(merges)) {
  if (leaves_ == 0 || merges_.size() != leaves_ - 1)
    throw InputError("merge tree over " + std::to_string(leaves_) + " leaves needs " +
                     std::to_string(leaves_ == 0 ? 0 : leaves_ - 1) + " merges");
  std::vector<bool> used(2 * leaves_ - 1, false);
  for (std::size_t s = 0; s < merges_.size(); ++s) {
    const auto& m = merges_[s];
    const std::size_t created = leaves_ + s;
    if (m.left >= m.right || m.right >= created || used[m.left] || used[m.right])
      throw InputError("malformed merge at step " + std::to_string(s));
    used[m.left] = used[m.right] = true;
  }
}

double MergeTree::total_cost() const {
  double s = 0.0;
  for (const auto& m : merges_) s += m.cost;
  return s;
}

Partition::Partition(std::span<const std::size_t> raw_labels) {
  labels_.resize(raw_labels.size());
  std::vector<std::pair<std::size_t, std::size_t>> seen;  // raw -> canonical
  for (std::size_t i = 0; i < raw_labels.size(); ++i) {
    const auto it = std::find_if(seen.begin(), seen.end(),
                                 [&](const auto& p) { return p.first == raw_labels[i]; });
    if (it != seen.end()) {
      labels_[i] = it->second;
    } else {
      labels_[i] = seen.size();
      seen.emplace_back(raw_labels[i], seen.size());
    }
  }
  k_ = seen.size();
}

Partition Partition::single(std::size_t n) {
  Partition p;
  p.labels_.assign(n, 0);
  p.k_ = n == 0 ? 0 : 1;
  return p;
}

Partition Partition::singletons(std::size_t n) {
  Partition p;
  p.labels_.resize(n);
  std::iota(p.labels_.begin(), p.labels_.end(), std::size_t{0});
  p.k_ = n;
  return p;
}

std::vector<std::vector<std::size_t>> Partition::members() const {
  std::vector<std::vector<std::size_t>> out(k_);
  for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
  return out;
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.size() != size()) return false;
  std::vector<std::size_t> image(k_, std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < size(); ++i) {
    auto& slot = image[labels_[i]];
    if (slot == std::numeric_limits<std::size_t>::max()) slot = coarser[i];
    else if (slot != coarser[i]) return false;
  }
  return true;
}

namespace {

// Lexicographic merge priority: cost first, then node ids.
struct Key {
  double cost;
  std::size_t lo;
  std::size_t hi;
  bool operator<(const Key& o) const { return std::tie(cost, lo, hi) < std::tie(o.cost, o.lo, o.hi); }
};

}  // namespace

MergeTree ward_tree(const DissimMatrix& d, const UnitWeights& w) {
  const std::size_t n = d.size();
  if (n < 2) throw InputError("ward_tree needs at least 2 units");
  if (w.size() != n) throw InputError("ward_tree: weight count does not match matrix size");

  // delta[a * n + b] is the current merge cost between the clusters in slots a, b.
  std::vector<double> delta(n * n, 0.0);
  std::vector<double> weight(w.values().begin(), w.values().end());
  std::vector<std::size_t> node(n);
  std::iota(node.begin(), node.end(), std::size_t{0});
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), std::size_t{0});

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dij = d(i, j);
      delta[i * n + j] = delta[j * n + i] = weight[i] * weight[j] / (weight[i] + weight[j]) * dij * dij;
    }

  auto key = [&](std::size_t a, std::size_t b) {
    return Key{delta[a * n + b], std::min(node[a], node[b]), std::max(node[a], node[b])};
  };

  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> nearest(n, none);
  auto rescan = [&](std::size_t a) {
    std::size_t best = none;
    for (std::size_t b : active) {
      if (b == a) continue;
      if (best == none || key(a, b) < key(a, best)) best = b;
    }
    nearest[a] = best;
  };
  for (std::size_t a = 0; a < n; ++a) rescan(a);

  std::vector<Merge> merges;
  merges.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t a = active.front();
    for (std::size_t s : active)
      if (key(s, nearest[s]) < key(a, nearest[a])) a = s;
    std::size_t b = nearest[a];
    const double cost = delta[a * n + b];
    const std::size_t lo = std::min(node[a], node[b]);
    const std::size_t hi = std::max(node[a], node[b]);
    if (node[b] < node[a]) std::swap(a, b);  // keep the merged cluster in slot a

    const double wa = weight[a];
    const double wb = weight[b];
    std::erase(active, b);
    for (std::size_t c : active) {
      if (c == a) continue;
      const double wc = weight[c];
      const double updated =
          ((wa + wc) * delta[a * n + c] + (wb + wc) * delta[b * n + c] - wc * cost) / (wa + wb + wc);
      delta[a * n + c] = delta[c * n + a] = updated;
    }
    weight[a] = wa + wb;
    node[a] = n + step;
    merges.push_back({lo, hi, cost, weight[a]});

    if (active.size() == 1) break;
    for (std::size_t c : active) {
      if (c == a) continue;
      if (nearest[c] == a || nearest[c] == b) rescan(c);
      else if (key(c, a) < key(c, nearest[c])) nearest[c] = a;
    }
    rescan(a);
  }
  return MergeTree(n, std::move(merges));
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

Partition cut(const MergeTree& tree, std::size_t k) {
  const std::size_t n = tree.leaves();
  if (k < 1 || k > n) throw InputError("cut: K=" + std::to_string(k) + " outside 1.." + std::to_string(n));
  std::vector<std::size_t> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto merges = tree.merges();
  for (std::size_t s = 0; s < n - k; ++s) {
    parent[merges[s].left] = n + s;
    parent[merges[s].right] = n + s;
  }
  std::vector<std::size_t> roots(n);
  for (std::size_t i = 0; i < n; ++i) roots[i] = find_root(parent, i);
  return Partition(roots);
}

std::vector<Partition> cut_all(const MergeTree& tree, std::size_t k_max) {
  if (k_max < 1 || k_max > tree.leaves()) throw InputError("cut_all: K_max out of range");
  std::vector<Partition> out;
  out.reserve(k_max);
  for (std::size_t k = 1; k <= k_max; ++k) out.push_back(cut(tree, k));
  return out;
}

}  // namespace geoclust
