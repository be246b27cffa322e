#include "geoclust/dissim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "geoclust/error.hpp"
#include "geoclust/parallel.hpp"

namespace geoclust {

namespace {

void check_unique(const std::vector<std::string>& ids, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& id : ids)
    if (!seen.insert(id).second) throw InputError(std::string("duplicate ") + what + " '" + id + "'");
}

}  // namespace

std::size_t TimeSeriesPanel::variable_index(const std::string& name) const {
  const auto it = std::find(variable_names.begin(), variable_names.end(), name);
  if (it == variable_names.end()) throw InputError("unknown variable '" + name + "'");
  return static_cast<std::size_t>(it - variable_names.begin());
}

void TimeSeriesPanel::validate() const {
  if (years.empty()) throw InputError("panel has no time stamps");
  if (unit_ids.empty()) throw InputError("panel has no units");
  if (variable_names.empty()) throw InputError("panel has no variables");
  check_unique(unit_ids, "unit id");
  check_unique(variable_names, "variable");
  if (!std::is_sorted(years.begin(), years.end()) ||
      std::adjacent_find(years.begin(), years.end()) != years.end())
    throw InputError("panel years must be strictly increasing");
  if (values.size() != units() * variables() * length())
    throw InputError("panel value count does not match units x variables x years");
  for (double v : values)
    if (!std::isfinite(v)) throw InputError("panel contains a non-finite value");
}

void CoordinateSet::validate() const {
  if (lat.size() != unit_ids.size() || lon.size() != unit_ids.size())
    throw InputError("coordinate columns have different lengths");
  check_unique(unit_ids, "unit id");
  for (std::size_t i = 0; i < size(); ++i) {
    if (!(lat[i] >= -90.0 && lat[i] <= 90.0))
      throw InputError("latitude out of range for unit '" + unit_ids[i] + "'");
    if (!(lon[i] >= -180.0 && lon[i] <= 180.0))
      throw InputError("longitude out of range for unit '" + unit_ids[i] + "'");
  }
}

DissimMatrix::DissimMatrix(std::string label, std::size_t n, std::vector<double> entries,
                           bool normalized)
    : label_(std::move(label)), n_(n), entries_(std::move(entries)), normalized_(normalized) {
  if (entries_.size() != n_ * n_)
    throw InputError("matrix '" + label_ + "' is not " + std::to_string(n_) + "x" + std::to_string(n_));
  for (std::size_t i = 0; i < n_; ++i) {
    if (entries_[i * n_ + i] != 0.0) throw InputError("matrix '" + label_ + "' has a nonzero diagonal");
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double x = entries_[i * n_ + j];
      if (!std::isfinite(x) || x < 0.0)
        throw InputError("matrix '" + label_ + "' has a negative or non-finite entry");
      if (x != entries_[j * n_ + i]) throw InputError("matrix '" + label_ + "' is not symmetric");
    }
  }
  if (normalized_) {
    const double m = max_entry();
    if (m == 0.0) throw DegenerateError("matrix '" + label_ + "' is identically zero");
    if (m != 1.0) throw InputError("matrix '" + label_ + "' is flagged normalized but max != 1");
  }
}

double DissimMatrix::max_entry() const {
  return entries_.empty() ? 0.0 : *std::max_element(entries_.begin(), entries_.end());
}

DissimMatrix DissimMatrix::relabeled(std::string label) const {
  DissimMatrix out = *this;
  out.label_ = std::move(label);
  return out;
}

UnitWeights::UnitWeights(std::vector<double> w) : w_(std::move(w)) {
  for (double x : w_)
    if (!(x > 0.0) || !std::isfinite(x)) throw InputError("unit weights must be positive and finite");
}

UnitWeights UnitWeights::uniform(std::size_t n) {
  if (n == 0) throw InputError("no units");
  return UnitWeights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double dtw_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InputError("dtw_distance: empty series");
  // Rolling single row over b; prev holds row i-1.
  const std::size_t m = b.size();
  std::vector<double> prev(m), cur(m);
  prev[0] = std::abs(a[0] - b[0]);
  for (std::size_t j = 1; j < m; ++j) prev[j] = prev[j - 1] + std::abs(a[0] - b[j]);
  for (std::size_t i = 1; i < a.size(); ++i) {
    cur[0] = prev[0] + std::abs(a[i] - b[0]);
    for (std::size_t j = 1; j < m; ++j)
      cur[j] = std::abs(a[i] - b[j]) + std::min({prev[j - 1], prev[j], cur[j - 1]});
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

DissimMatrix feature_dissim(const TimeSeriesPanel& panel, const std::string& variable) {
  const std::size_t var = panel.variable_index(variable);
  const std::size_t n = panel.units();
  std::vector<double> e(n * n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) e[i * n + j] = dtw_distance(panel.series(i, var), panel.series(j, var));
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e[j * n + i] = e[i * n + j];
  return DissimMatrix(variable, n, std::move(e));
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double rad = std::numbers::pi / 180.0;
  const double dlat = (lat2 - lat1) * rad;
  const double dlon = (lon2 - lon1) * rad;
  const double s = std::sin(dlat / 2.0);
  const double t = std::sin(dlon / 2.0);
  const double h = s * s + std::cos(lat1 * rad) * std::cos(lat2 * rad) * t * t;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

DissimMatrix spatial_dissim(const CoordinateSet& coords) {
  coords.validate();
  return DissimMatrix::from_pairwise("spatial", coords.size(), [&](std::size_t i, std::size_t j) {
    return haversine_km(coords.lat[i], coords.lon[i], coords.lat[j], coords.lon[j]);
  });
}

DissimMatrix euclidean_dissim(std::string label, std::span<const double> points, std::size_t dims) {
  if (dims == 0 || points.size() % dims != 0) throw InputError("euclidean_dissim: bad point layout");
  for (double x : points)
    if (!std::isfinite(x)) throw InputError("euclidean_dissim: non-finite coordinate");
  return DissimMatrix::from_pairwise(std::move(label), points.size() / dims, [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 0; k < dims; ++k) {
      const double diff = points[i * dims + k] - points[j * dims + k];
      s += diff * diff;
    }
    return std::sqrt(s);
  });
}

DissimMatrix normalize_max(const DissimMatrix& d) {
  const double m = d.max_entry();
  if (!(m > 0.0)) throw DegenerateError("cannot normalize identically-zero matrix '" + d.label() + "'");
  std::vector<double> e(d.entries().begin(), d.entries().end());
  for (double& x : e) x /= m;
  return DissimMatrix(d.label(), d.size(), std::move(e), true);
}

TimeSeriesPanel standardize_series(TimeSeriesPanel panel) {
  const std::size_t t = panel.length();
  for (std::size_t u = 0; u < panel.units(); ++u) {
    for (std::size_t v = 0; v < panel.variables(); ++v) {
      double mean = 0.0;
      for (std::size_t k = 0; k < t; ++k) mean += panel.at(u, v, k);
      mean /= static_cast<double>(t);
      double var = 0.0;
      for (std::size_t k = 0; k < t; ++k) var += (panel.at(u, v, k) - mean) * (panel.at(u, v, k) - mean);
      const double sd = std::sqrt(var / static_cast<double>(t));
      for (std::size_t k = 0; k < t; ++k) {
        double& x = panel.at(u, v, k);
        x = sd > 0.0 ? (x - mean) / sd : 0.0;
      }
    }
  }
  return panel;
}

DissimMatrix mix(std::span<const DissimMatrix> matrices, std::span<const double> weights,
                 MixOptions options) {
  if (matrices.empty()) throw InputError("mix: no matrices");
  if (weights.size() != matrices.size())
    throw InputError("mix: " + std::to_string(weights.size()) + " weights for " +
                     std::to_string(matrices.size()) + " matrices");
  const std::size_t n = matrices.front().size();
  for (const auto& d : matrices) {
    if (d.size() != n) throw InputError("mix: matrix '" + d.label() + "' has a different size");
    if (options.require_normalized && !d.normalized())
      throw InputError("mix: matrix '" + d.label() + "' is not normalized");
  }
  for (double a : weights)
    if (!(a >= 0.0) || !std::isfinite(a)) throw InputError("mix: weights must be finite and nonnegative");

  std::vector<double> e(n * n, 0.0);
  for (std::size_t p = 0; p < matrices.size(); ++p) {
    if (weights[p] == 0.0) continue;
    const auto src = matrices[p].entries();
    for (std::size_t k = 0; k < e.size(); ++k) e[k] += weights[p] * src[k];
  }
  return DissimMatrix("mixed", n, std::move(e));
}

}  // namespace geoclust
