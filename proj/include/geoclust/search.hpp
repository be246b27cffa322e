#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "geoclust/dissim.hpp"
#include "geoclust/hclust.hpp"
#include "geoclust/inertia.hpp"

namespace geoclust {

/// Mixing weights on a regular simplex grid with step 1/steps. Stored as an
/// integer composition of `steps`, so the sum-to-one constraint is exact in
/// composition space.
class MixVector {
 public:
  MixVector(std::vector<std::uint32_t> parts, std::uint32_t steps);

  std::size_t size() const { return parts_.size(); }
  std::uint32_t steps() const { return steps_; }
  std::span<const std::uint32_t> parts() const { return parts_; }
  std::span<const double> weights() const { return weights_; }
  double operator[](std::size_t p) const { return weights_[p]; }

  friend bool operator==(const MixVector& a, const MixVector& b) {
    return a.steps_ == b.steps_ && a.parts_ == b.parts_;
  }

 private:
  std::vector<std::uint32_t> parts_;
  std::uint32_t steps_;
  std::vector<double> weights_;
};

/// Number of grid steps for a unit-fraction step size; throws otherwise.
std::uint32_t grid_steps(double delta_alpha);

/// Every composition of 1/delta_alpha into `parts` nonnegative parts, boundary
/// points included. Order: first component descending, then the rest
/// recursively, so for two matrices the second weight ascends
/// ((1,0), (0.5,0.5), (0,1)). Ties in every search below resolve to the
/// earliest vector in this order.
std::vector<MixVector> simplex_grid(std::size_t parts, double delta_alpha);

/// Per-matrix within inertias of the Ward partition at every grid point and
/// every K in 1..k_max. One tree per grid point.
class GridTrace {
 public:
  GridTrace(std::vector<MixVector> grid, std::size_t matrices, std::size_t k_max,
            std::vector<double> totals, std::vector<double> within);

  std::span<const MixVector> grid() const { return grid_; }
  std::size_t matrices() const { return matrices_; }
  std::size_t k_max() const { return k_max_; }

  double total(std::size_t p) const { return totals_[p]; }
  double within(std::size_t g, std::size_t k, std::size_t p) const {
    return within_[(g * k_max_ + (k - 1)) * matrices_ + p];
  }
  /// Q of matrix p.
  double q(std::size_t g, std::size_t k, std::size_t p) const;
  /// Pooled Q over all matrices.
  double q_bar(std::size_t g, std::size_t k) const;
  /// Pooled Q over all matrices except `excluded`.
  double q_bar_without(std::size_t g, std::size_t k, std::size_t excluded) const;

  /// Index of the grid vector with all weight on matrix p.
  std::size_t vertex(std::size_t p) const;

 private:
  std::vector<MixVector> grid_;
  std::size_t matrices_;
  std::size_t k_max_;
  std::vector<double> totals_;
  std::vector<double> within_;
};

GridTrace evaluate_grid(std::span<const DissimMatrix> matrices, std::vector<MixVector> grid,
                        std::size_t k_max, const UnitWeights& w);

/// Ward partition of the mixed matrix at K clusters.
Partition mixed_partition(std::span<const DissimMatrix> matrices, const MixVector& alpha, std::size_t k,
                          const UnitWeights& w);

struct AlphaChoice {
  std::size_t grid_index = 0;
  MixVector alpha{{1}, 1};
  double q_bar = 0.0;
};

/// Grid argmax of pooled Q at K (first grid vector wins ties).
AlphaChoice best_alpha(const GridTrace& trace, std::size_t k);
/// Grid argmax of the pooled Q of the other matrices, over grid vectors with
/// matrix `excluded` weighted 0. q_bar holds that complement value.
AlphaChoice best_alpha_restricted(const GridTrace& trace, std::size_t excluded, std::size_t k);

struct AlphaSelection {
  AlphaChoice choice;
  Partition partition;
};

AlphaSelection best_alpha(std::span<const DissimMatrix> matrices, std::size_t k, double delta_alpha,
                          const UnitWeights& w);
AlphaSelection best_alpha_restricted(std::span<const DissimMatrix> matrices, std::size_t excluded,
                                     std::size_t k, double delta_alpha, const UnitWeights& w);

struct ChaventPoint {
  double alpha;  // weight of the second (spatial) matrix
  double q_tilde0;
  double q_tilde1;
  double objective;
};

struct ChaventResult {
  std::size_t grid_index = 0;
  double alpha = 0.0;
  double objective = 0.0;
  std::vector<ChaventPoint> trace;
};

/// Two-matrix balance criterion: argmin over the grid of |Q~0 - Q~1|, with
/// baselines taken at alpha = 0 and alpha = 1 at the same K. Smallest alpha
/// wins ties.
ChaventResult chavent_alpha(const GridTrace& trace, std::size_t k);
ChaventResult chavent_alpha(const DissimMatrix& d0, const DissimMatrix& d1, std::size_t k, double delta_alpha,
                            const UnitWeights& w);

struct ElbowRow {
  std::size_t k;
  AlphaChoice best;
  double delta_q_bar;  // Q*_k - Q*_{k-1}, with Q*_1 = 0
};

struct SearchResult {
  GridTrace trace;
  std::vector<ElbowRow> rows;  // K = 2..k_max
  std::size_t k_selected = 0;
  bool knee_tied = false;

  const ElbowRow& row(std::size_t k) const { return rows.at(k - 2); }
};

/// Largest drop-off in the increments: argmax over K of dQ(K) - dQ(K+1) for
/// K = 2..k_max-1 (K = 2 when k_max = 2). Smallest K wins ties, flagged.
std::pair<std::size_t, bool> knee(std::span<const double> delta_q_bar_from_k2);

SearchResult elbow_table(std::span<const DissimMatrix> matrices, double delta_alpha, std::size_t k_max,
                         const UnitWeights& w);

/// Full diagnostics at grid point g and K, recomputing the partitions that the
/// per-matrix baselines need.
InertiaReport report_at(std::span<const DissimMatrix> matrices, const GridTrace& trace, std::size_t g,
                        std::size_t k, const UnitWeights& w,
                        std::vector<AlphaChoice>* restricted_choices = nullptr);

}  // namespace geoclust
