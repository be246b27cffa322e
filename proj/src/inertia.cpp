#include "geoclust/inertia.hpp"

#include "geoclust/error.hpp"

namespace geoclust {

namespace {

void check_sizes(const DissimMatrix& d, const Partition& part, const UnitWeights& w) {
  if (part.size() != d.size() || w.size() != d.size())
    throw InputError("partition, weights and matrix '" + d.label() + "' disagree on unit count");
}

double checked_ratio(double q, double baseline, const char* what) {
  if (baseline < kBaselineFloor) throw DegenerateError(std::string("zero baseline in ") + what);
  return q / baseline;
}

}  // namespace

double cluster_inertia(const DissimMatrix& d, std::span<const std::size_t> members, const UnitWeights& w) {
  if (members.empty()) throw InputError("cluster_inertia: empty cluster");
  double weight = 0.0;
  double pairs = 0.0;
  for (std::size_t a = 0; a < members.size(); ++a) {
    const std::size_t i = members[a];
    if (i >= d.size() || i >= w.size()) throw InputError("cluster_inertia: member index out of range");
    weight += w[i];
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const std::size_t j = members[b];
      const double dij = d(i, j);
      pairs += w[i] * w[j] * dij * dij;
    }
  }
  // Each unordered pair appears twice in the ordered double sum.
  return pairs / weight;
}

double within_inertia(const DissimMatrix& d, const Partition& part, const UnitWeights& w) {
  check_sizes(d, part, w);
  double total = 0.0;
  for (const auto& members : part.members()) total += cluster_inertia(d, members, w);
  return total;
}

double total_inertia(const DissimMatrix& d, const UnitWeights& w) {
  return within_inertia(d, Partition::single(d.size()), w);
}

double mixed_inertia(std::span<const DissimMatrix> matrices, std::span<const double> alpha,
                     const Partition& part, const UnitWeights& w) {
  if (alpha.size() != matrices.size()) throw InputError("mixed_inertia: weight count mismatch");
  double s = 0.0;
  for (std::size_t p = 0; p < matrices.size(); ++p) s += alpha[p] * within_inertia(matrices[p], part, w);
  return s;
}

double prop_explained(const DissimMatrix& d, const Partition& part, const UnitWeights& w) {
  const double total = total_inertia(d, w);
  if (!(total > 0.0)) throw DegenerateError("matrix '" + d.label() + "' has zero total inertia");
  return 1.0 - within_inertia(d, part, w) / total;
}

double norm_prop_explained(const DissimMatrix& d, const Partition& part, const Partition& baseline,
                           const UnitWeights& w) {
  return checked_ratio(prop_explained(d, part, w), prop_explained(d, baseline, w), "norm_prop_explained");
}

namespace {

double pooled_explained(std::span<const DissimMatrix> matrices, std::size_t skip, const Partition& part,
                        const UnitWeights& w) {
  double within = 0.0;
  double total = 0.0;
  for (std::size_t p = 0; p < matrices.size(); ++p) {
    if (p == skip) continue;
    within += within_inertia(matrices[p], part, w);
    total += total_inertia(matrices[p], w);
  }
  if (!(total > 0.0)) throw DegenerateError("pooled matrices have zero total inertia");
  return 1.0 - within / total;
}

}  // namespace

double avg_explained(std::span<const DissimMatrix> matrices, const Partition& part, const UnitWeights& w) {
  if (matrices.empty()) throw InputError("avg_explained: no matrices");
  return pooled_explained(matrices, matrices.size(), part, w);
}

double complement_explained(std::span<const DissimMatrix> matrices, std::size_t excluded,
                            const Partition& part, const UnitWeights& w) {
  if (excluded >= matrices.size()) throw InputError("complement_explained: matrix index out of range");
  if (matrices.size() < 2) throw InputError("complement_explained: needs at least two matrices");
  return pooled_explained(matrices, excluded, part, w);
}

double joint_inertia_two(const DissimMatrix& d0, const DissimMatrix& d1, const Partition& part,
                         const Partition& pure0, const Partition& pure1, const UnitWeights& w) {
  const double spatial = checked_ratio(prop_explained(d1, part, w), prop_explained(d1, pure1, w), "joint inertia");
  const double features = checked_ratio(prop_explained(d0, part, w), prop_explained(d0, pure0, w), "joint inertia");
  return spatial + features - 1.0;
}

double joint_inertia_multi(std::span<const DissimMatrix> matrices, std::size_t m, const Partition& part,
                           const Partition& pure_m, const Partition& restricted, const UnitWeights& w) {
  if (m >= matrices.size()) throw InputError("joint_inertia_multi: matrix index out of range");
  const double own = checked_ratio(prop_explained(matrices[m], part, w),
                                   prop_explained(matrices[m], pure_m, w), "joint inertia");
  const double rest = checked_ratio(complement_explained(matrices, m, part, w),
                                    complement_explained(matrices, m, restricted, w), "joint inertia");
  return own + rest - 1.0;
}

InertiaReport inertia_report(std::span<const DissimMatrix> matrices, std::span<const double> alpha,
                             const Partition& part, std::span<const Partition> pure,
                             std::span<const Partition> restricted, const UnitWeights& w) {
  const std::size_t count = matrices.size();
  if (alpha.size() != count || pure.size() != count || restricted.size() != count)
    throw InputError("inertia_report: per-matrix inputs disagree on matrix count");
  InertiaReport r;
  r.k = part.clusters();
  r.alpha.assign(alpha.begin(), alpha.end());
  r.q_bar = avg_explained(matrices, part, w);
  for (std::size_t p = 0; p < count; ++p) {
    MatrixInertia row;
    row.label = matrices[p].label();
    row.alpha = alpha[p];
    row.q = prop_explained(matrices[p], part, w);
    row.q_tilde = checked_ratio(row.q, prop_explained(matrices[p], pure[p], w), "normalized proportion");
    if (count > 1) {
      row.q_tilde_complement = checked_ratio(complement_explained(matrices, p, part, w),
                                             complement_explained(matrices, p, restricted[p], w),
                                             "complement normalized proportion");
      row.joint_inertia = row.q_tilde + row.q_tilde_complement - 1.0;
    } else {
      row.q_tilde_complement = 1.0;
      row.joint_inertia = row.q_tilde;
    }
    r.matrices.push_back(std::move(row));
  }
  return r;
}

}  // namespace geoclust
