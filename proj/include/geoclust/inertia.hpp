#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "geoclust/dissim.hpp"
#include "geoclust/hclust.hpp"

namespace geoclust {

/// Baseline explained proportions below this are treated as zero.
inline constexpr double kBaselineFloor = 1e-12;

/// Pseudo-inertia of one cluster: sum over ordered member pairs of
/// w_i w_j d_ij^2 / (2 * sum of member weights).
double cluster_inertia(const DissimMatrix& d, std::span<const std::size_t> members, const UnitWeights& w);

/// Sum of cluster pseudo-inertias, W_D(P).
double within_inertia(const DissimMatrix& d, const Partition& part, const UnitWeights& w);

/// W_D of the one-cluster partition.
double total_inertia(const DissimMatrix& d, const UnitWeights& w);

/// sum_p alpha_p W_{D_p}(P): weights apply to squared entries of each matrix,
/// which is not the inertia of the mixed matrix.
double mixed_inertia(std::span<const DissimMatrix> matrices, std::span<const double> alpha,
                     const Partition& part, const UnitWeights& w);

/// Q = 1 - W(P) / W(P_1).
double prop_explained(const DissimMatrix& d, const Partition& part, const UnitWeights& w);

/// Q(part) / Q(baseline). Not clamped.
double norm_prop_explained(const DissimMatrix& d, const Partition& part, const Partition& baseline,
                           const UnitWeights& w);

/// Pooled explained inertia 1 - sum_p W_p(P) / sum_p W_p(P_1).
double avg_explained(std::span<const DissimMatrix> matrices, const Partition& part, const UnitWeights& w);

/// Pooled explained inertia over every matrix except `excluded`.
double complement_explained(std::span<const DissimMatrix> matrices, std::size_t excluded,
                            const Partition& part, const UnitWeights& w);

/// Two-matrix Joint Inertia: Q1(P)/Q1(P^1) + Q0(P)/Q0(P^0) - 1, where
/// pure0 / pure1 are the partitions built from D0 alone and D1 alone.
double joint_inertia_two(const DissimMatrix& d0, const DissimMatrix& d1, const Partition& part,
                         const Partition& pure0, const Partition& pure1, const UnitWeights& w);

/// Joint Inertia of matrix m against the pooled remaining matrices:
/// Q_m(P)/Q_m(pure_m) + Q_{-m}(P)/Q_{-m}(restricted) - 1.
/// `restricted` is the best partition found with matrix m's weight pinned to 0.
double joint_inertia_multi(std::span<const DissimMatrix> matrices, std::size_t m, const Partition& part,
                           const Partition& pure_m, const Partition& restricted, const UnitWeights& w);

struct MatrixInertia {
  std::string label;
  double alpha = 0.0;
  double q = 0.0;
  double q_tilde = 0.0;
  double q_tilde_complement = 0.0;
  double joint_inertia = 0.0;
};

/// Diagnostics of one (K, alpha) partition, one row per matrix.
struct InertiaReport {
  std::size_t k = 0;
  std::vector<double> alpha;
  double q_bar = 0.0;
  std::vector<MatrixInertia> matrices;
};

/// Builds the full report. pure[p] is the partition at alpha_p = 1 and
/// restricted[p] the optimum with alpha_p pinned to 0, both at the same K.
InertiaReport inertia_report(std::span<const DissimMatrix> matrices, std::span<const double> alpha,
                             const Partition& part, std::span<const Partition> pure,
                             std::span<const Partition> restricted, const UnitWeights& w);

}  // namespace geoclust
