#pragma once

// Brute-force reference implementations. Deliberately naive and independent
// of the library code paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace oracle {

// Minimum over every monotone warping path of the summed |a_i - b_j|.
inline double dtw_paths(const std::vector<double>& a, const std::vector<double>& b) {
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j, double acc) {
    acc += std::abs(a[i] - b[j]);
    if (i + 1 == a.size() && j + 1 == b.size()) {
      best = std::min(best, acc);
      return;
    }
    if (i + 1 < a.size()) walk(i + 1, j, acc);
    if (j + 1 < b.size()) walk(i, j + 1, acc);
    if (i + 1 < a.size() && j + 1 < b.size()) walk(i + 1, j + 1, acc);
  };
  walk(0, 0, 0.0);
  return best;
}

// Number of monotone warping paths; used to sanity check the enumeration.
inline std::uint64_t path_count(std::size_t n, std::size_t m) {
  std::vector<std::vector<std::uint64_t>> c(n, std::vector<std::uint64_t>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == 0 && j == 0) {
        c[i][j] = 1;
        continue;
      }
      if (i) c[i][j] += c[i - 1][j];
      if (j) c[i][j] += c[i][j - 1];
      if (i && j) c[i][j] += c[i - 1][j - 1];
    }
  return c[n - 1][m - 1];
}

// Pseudo-inertia of a cluster by summation over ordered pairs.
inline double inertia(const std::vector<double>& d, std::size_t n, const std::vector<std::size_t>& members,
                      const std::vector<double>& w) {
  double wc = 0.0;
  for (auto i : members) wc += w[i];
  double s = 0.0;
  for (auto i : members)
    for (auto j : members) s += w[i] * w[j] * d[i * n + j] * d[i * n + j];
  return s / (2.0 * wc);
}

struct OracleMerge {
  std::size_t left, right;
  double cost;
};

// Greedy agglomeration recomputing every candidate merge cost from cluster
// inertias. Node ids: leaves 0..n-1, merge s creates n+s.
// min_gap receives the smallest relative gap between the best and runner-up
// candidate over all steps, to screen out near-tied inputs.
inline std::vector<OracleMerge> ward_greedy(const std::vector<double>& d, std::size_t n, const std::vector<double>& w,
                                            double* min_gap = nullptr) {
  if (min_gap) *min_gap = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> clusters;
  for (std::size_t i = 0; i < n; ++i) clusters.push_back({i, {i}});
  std::vector<OracleMerge> out;
  for (std::size_t step = 0; step + 1 < n; ++step) {
    double best = std::numeric_limits<double>::infinity();
    double second = best;
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < clusters.size(); ++a)
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        auto u = clusters[a].second;
        u.insert(u.end(), clusters[b].second.begin(), clusters[b].second.end());
        const double delta = inertia(d, n, u, w) - inertia(d, n, clusters[a].second, w) -
                             inertia(d, n, clusters[b].second, w);
        if (delta < best) {
          second = best;
          best = delta;
          ba = a;
          bb = b;
        } else if (delta < second) {
          second = delta;
        }
      }
    if (min_gap && std::isfinite(second)) *min_gap = std::min(*min_gap, (second - best) / std::max(best, 1e-300));
    const std::size_t ida = clusters[ba].first, idb = clusters[bb].first;
    out.push_back({std::min(ida, idb), std::max(ida, idb), best});
    auto merged = clusters[ba].second;
    merged.insert(merged.end(), clusters[bb].second.begin(), clusters[bb].second.end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
    clusters[ba] = {n + step, merged};
  }
  return out;
}

struct PairCounts {
  std::int64_t same_same = 0, same_diff = 0, diff_same = 0, diff_diff = 0;
};

inline PairCounts pair_counts(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
  PairCounts c;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const bool sx = x[i] == x[j], sy = y[i] == y[j];
      if (sx && sy) ++c.same_same;
      else if (sx) ++c.same_diff;
      else if (sy) ++c.diff_same;
      else ++c.diff_diff;
    }
  return c;
}

// 2(ad - bc) / ((a+b)(b+d) + (a+c)(c+d)), reduced before the one division.
inline double ari_pairs(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
  const auto c = pair_counts(x, y);
  const std::int64_t a = c.same_same, b = c.same_diff, cc = c.diff_same, d = c.diff_diff;
  std::int64_t num = 2 * (a * d - b * cc);
  std::int64_t den = (a + b) * (b + d) + (a + cc) * (cc + d);
  if (den == 0) return 1.0;
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

// Largest number of units placed on matched labels over every injective
// relabelling, by permutation search.
inline std::size_t best_matched_count(const std::vector<std::size_t>& est, const std::vector<std::size_t>& truth) {
  const std::size_t ke = *std::max_element(est.begin(), est.end()) + 1;
  const std::size_t kt = *std::max_element(truth.begin(), truth.end()) + 1;
  const std::size_t m = std::max(ke, kt);
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < est.size(); ++i)
      if (perm[est[i]] == truth[i]) ++hits;
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Every set partition of n items as restricted-growth label strings.
inline std::vector<std::vector<std::size_t>> all_partitions(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (std::size_t l = 0; l <= used && l < n; ++l) {
      cur[i] = l;
      rec(i + 1, std::max(used, l + 1));
    }
  };
  if (n == 0) return {{}};
  cur[0] = 0;
  rec(1, 1);
  return out;
}

// Random symmetric matrix with distinct off-diagonal entries in (0.05, 1).
inline std::vector<double> random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = u(rng);
  return d;
}

}  // namespace oracle
