#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace geoclust {

/// Dense panel of univariate yearly series: one series per (unit, variable).
/// Values are stored unit-major, then variable, then time.
struct TimeSeriesPanel {
  std::vector<std::string> unit_ids;
  std::vector<std::string> variable_names;
  std::vector<int> years;
  std::vector<double> values;

  std::size_t units() const { return unit_ids.size(); }
  std::size_t variables() const { return variable_names.size(); }
  std::size_t length() const { return years.size(); }

  double& at(std::size_t unit, std::size_t var, std::size_t t) {
    return values[(unit * variables() + var) * length() + t];
  }
  double at(std::size_t unit, std::size_t var, std::size_t t) const {
    return values[(unit * variables() + var) * length() + t];
  }
  std::span<const double> series(std::size_t unit, std::size_t var) const {
    return {values.data() + (unit * variables() + var) * length(), length()};
  }

  std::size_t variable_index(const std::string& name) const;

  // Throws InputError on duplicate ids, empty time axis, shape mismatch or
  // non-finite values.
  void validate() const;
};

/// Region centroids in degrees, in the same unit order as the panel.
struct CoordinateSet {
  std::vector<std::string> unit_ids;
  std::vector<double> lat;
  std::vector<double> lon;

  std::size_t size() const { return unit_ids.size(); }
  void validate() const;
};

/// Labeled n x n dissimilarity matrix.
///
/// Every instance is symmetric with an exactly zero diagonal and finite,
/// nonnegative entries; the constructor rejects anything else. A normalized
/// matrix has maximum entry exactly 1.
class DissimMatrix {
 public:
  DissimMatrix() = default;
  DissimMatrix(std::string label, std::size_t n, std::vector<double> entries,
               bool normalized = false);

  // Fills the upper triangle from f(i, j), i < j, and mirrors it.
  template <typename F>
  static DissimMatrix from_pairwise(std::string label, std::size_t n, F&& f) {
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) e[i * n + j] = e[j * n + i] = f(i, j);
    return DissimMatrix(std::move(label), n, std::move(e));
  }

  const std::string& label() const { return label_; }
  std::size_t size() const { return n_; }
  bool normalized() const { return normalized_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  std::span<const double> entries() const { return entries_; }
  std::span<const double> row(std::size_t i) const { return {entries_.data() + i * n_, n_}; }
  double max_entry() const;

  DissimMatrix relabeled(std::string label) const;

 private:
  std::string label_;
  std::size_t n_ = 0;
  std::vector<double> entries_;
  bool normalized_ = false;
};

/// Positive per-unit weights; uniform 1/n unless stated otherwise.
class UnitWeights {
 public:
  explicit UnitWeights(std::vector<double> w);
  static UnitWeights uniform(std::size_t n);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> values() const { return w_; }

 private:
  std::vector<double> w_;
};

/// Dynamic time warping with steps (1,0), (0,1), (1,1), no window and local
/// cost |a_i - b_j|. Returns the cheapest monotone alignment cost.
double dtw_distance(std::span<const double> a, std::span<const double> b);

/// Pairwise DTW between every unit's series of one variable.
DissimMatrix feature_dissim(const TimeSeriesPanel& panel, const std::string& variable);

/// Great-circle distance in km (haversine, mean Earth radius).
inline constexpr double kEarthRadiusKm = 6371.0088;
double haversine_km(double lat1, double lon1, double lat2, double lon2);

/// Pairwise haversine distances between centroids, labeled "spatial".
DissimMatrix spatial_dissim(const CoordinateSet& coords);

/// Pairwise Euclidean distances between n points of `dims` coordinates each
/// (row-major).
DissimMatrix euclidean_dissim(std::string label, std::span<const double> points, std::size_t dims);

/// Divides by the largest entry. Throws DegenerateError on an all-zero matrix.
DissimMatrix normalize_max(const DissimMatrix& d);

/// Z-scores every series in place (population sd). Constant series become zero.
TimeSeriesPanel standardize_series(TimeSeriesPanel panel);

struct MixOptions {
  bool require_normalized = true;
};

/// Entrywise sum of weights[p] * matrices[p]. Weights must be finite and
/// nonnegative; they are not required to sum to one.
DissimMatrix mix(std::span<const DissimMatrix> matrices, std::span<const double> weights,
                 MixOptions options = {});

}  // namespace geoclust
