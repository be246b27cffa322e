#include "geoclust/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "geoclust/dissim.hpp"
#include "geoclust/error.hpp"
#include "geoclust/inertia.hpp"
#include "geoclust/parallel.hpp"
#include "geoclust/search.hpp"

namespace geoclust::sim {

namespace {

double reduced_ratio(__int128 num, __int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 x = num < 0 ? -num : num, y = den;
  while (y != 0) {
    const __int128 t = x % y;
    x = y;
    y = t;
  }
  if (x > 1) {
    num /= x;
    den /= x;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::string to_string(SpreadReading r) {
  switch (r) {
    case SpreadReading::both_variance: return "variance";
    case SpreadReading::literal: return "literal";
    case SpreadReading::both_sd: return "sd";
  }
  return "?";
}

SpreadReading parse_spread_reading(const std::string& s) {
  if (s == "variance") return SpreadReading::both_variance;
  if (s == "literal") return SpreadReading::literal;
  if (s == "sd") return SpreadReading::both_sd;
  throw InputError("spread reading must be 'variance', 'literal' or 'sd', got '" + s + "'");
}

double feature_sd(SpreadReading r, double v) { return r == SpreadReading::both_variance ? std::sqrt(v) : v; }

double spatial_sd(SpreadReading r, double v_sp) { return r == SpreadReading::both_sd ? v_sp : std::sqrt(v_sp); }

std::string to_string(Criterion c) { return c == Criterion::chavent ? "chavent" : "morelli"; }

void SimConfig::validate() const {
  if (pi.size() != 4 || mu.size() != 4) throw InputError("simulation uses exactly four clusters");
  double total = 0.0;
  for (double p : pi) {
    if (!(p > 0.0)) throw InputError("cluster probabilities must be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InputError("cluster probabilities must sum to 1");
  if (!(v >= 0.0) || !(v_sp >= 0.0)) throw InputError("spreads must be nonnegative");
  if (!(d >= 0.0 && d <= 1.0)) throw InputError("overlap parameter d must lie in [0, 1]");
  if (n < clusters()) throw InputError("sample size smaller than the number of clusters");
}

std::array<double, 2> spatial_mean(std::size_t k, double d) {
  switch (k) {
    case 0: return {d, d};
    case 1: return {-d, d};
    case 2: return {d, -d};
    case 3: return {-d, -d};
    default: throw InputError("spatial_mean: cluster index out of range");
  }
}

SimDataset simulate_dataset(const SimConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::discrete_distribution<std::size_t> pick(cfg.pi.begin(), cfg.pi.end());
  std::normal_distribution<double> unit(0.0, 1.0);
  const double z_sd = feature_sd(cfg.reading, cfg.v);
  const double sp_sd = spatial_sd(cfg.reading, cfg.v_sp);

  SimDataset out;
  out.features.reserve(cfg.n);
  out.coords.reserve(cfg.n);
  out.labels.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const std::size_t k = pick(rng);
    const auto centre = spatial_mean(k, cfg.d);
    const double z = cfg.mu[k] + z_sd * unit(rng);
    const double x = centre[0] + sp_sd * unit(rng);
    const double y = centre[1] + sp_sd * unit(rng);
    out.labels.push_back(k);
    out.features.push_back(z);
    out.coords.push_back({x, y});
  }
  return out;
}

double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) throw InputError("adjusted_rand_index: label vectors differ in length");
  const Partition pa(a), pb(b);
  const std::size_t n = a.size();
  std::vector<std::int64_t> table(pa.clusters() * pb.clusters(), 0);
  std::vector<std::int64_t> rows(pa.clusters(), 0), cols(pb.clusters(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++table[pa[i] * pb.clusters() + pb[i]];
    ++rows[pa[i]];
    ++cols[pb[i]];
  }
  // Integer pair counts, then one reduced ratio so the value is exact up to
  // a single rounding.
  using wide = __int128;
  auto pairs = [](std::int64_t c) { return static_cast<wide>(c) * (c - 1) / 2; };
  wide index = 0, row_sum = 0, col_sum = 0;
  for (auto c : table) index += pairs(c);
  for (auto c : rows) row_sum += pairs(c);
  for (auto c : cols) col_sum += pairs(c);
  const wide all = pairs(static_cast<std::int64_t>(n));
  wide num = 2 * (all * index - row_sum * col_sum);
  wide den = all * (row_sum + col_sum) - 2 * row_sum * col_sum;
  if (den == 0) return 1.0;
  return reduced_ratio(num, den);
}

std::vector<std::size_t> max_weight_matching(std::span<const double> table, std::size_t rows, std::size_t cols) {
  if (table.size() != rows * cols) throw InputError("max_weight_matching: table shape mismatch");
  // Hungarian algorithm (potentials form) minimizing -weight on a padded square.
  const std::size_t m = std::max(rows, cols);
  auto cost = [&](std::size_t r, std::size_t c) { return r < rows && c < cols ? -table[r * cols + c] : 0.0; };
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> owner(m + 1, 0), way(m + 1, 0);
  for (std::size_t r = 1; r <= m; ++r) {
    owner[0] = r;
    std::size_t col = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[col] = true;
      const std::size_t row = owner[col];
      double delta = inf;
      std::size_t next = 0;
      for (std::size_t c = 1; c <= m; ++c) {
        if (used[c]) continue;
        const double cur = cost(row - 1, c - 1) - u[row] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = col;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          next = c;
        }
      }
      for (std::size_t c = 0; c <= m; ++c) {
        if (used[c]) {
          u[owner[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col = next;
    } while (owner[col] != 0);
    do {
      const std::size_t prev = way[col];
      owner[col] = owner[prev];
      col = prev;
    } while (col != 0);
  }
  std::vector<std::size_t> match(rows, cols);
  for (std::size_t c = 1; c <= m; ++c) {
    const std::size_t r = owner[c] - 1;
    if (r < rows && c - 1 < cols) match[r] = c - 1;
  }
  return match;
}

RecoveryScore score_recovery(std::span<const std::size_t> estimated, std::span<const std::size_t> truth) {
  if (estimated.size() != truth.size()) throw InputError("score_recovery: label vectors differ in length");
  if (truth.empty()) throw InputError("score_recovery: no units");
  const Partition est(estimated), tru(truth);
  const std::size_t ke = est.clusters(), kt = tru.clusters();
  std::vector<double> table(ke * kt, 0.0), est_size(ke, 0.0), true_size(kt, 0.0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    table[est[i] * kt + tru[i]] += 1.0;
    est_size[est[i]] += 1.0;
    true_size[tru[i]] += 1.0;
  }
  const auto match = max_weight_matching(table, ke, kt);
  RecoveryScore s;
  double matched = 0.0;
  std::size_t pairs = 0;
  for (std::size_t e = 0; e < ke; ++e) {
    if (match[e] == kt) continue;
    const double hit = table[e * kt + match[e]];
    matched += hit;
    s.precision += hit / est_size[e];
    s.sensitivity += hit / true_size[match[e]];
    ++pairs;
  }
  s.accuracy = matched / static_cast<double>(truth.size());
  s.precision /= static_cast<double>(pairs);
  s.sensitivity /= static_cast<double>(pairs);
  s.adjusted_rand = adjusted_rand_index(estimated, truth);
  return s;
}

RecoveryScore score_recovery(const Partition& estimated, std::span<const std::size_t> truth) {
  return score_recovery(estimated.labels(), truth);
}

ReplicateResult run_replicate(const SimConfig& cfg) {
  const auto data = simulate_dataset(cfg);
  std::vector<double> coords;
  coords.reserve(2 * cfg.n);
  for (const auto& c : data.coords) coords.insert(coords.end(), c.begin(), c.end());
  const std::vector<DissimMatrix> matrices{
      normalize_max(euclidean_dissim("feature", data.features, 1)),
      normalize_max(euclidean_dissim("spatial", coords, 2)),
  };
  const auto w = UnitWeights::uniform(cfg.n);
  const std::size_t k = cfg.clusters();

  const auto trace = evaluate_grid(matrices, simplex_grid(2, cfg.delta_alpha), k, w);
  const auto pure0 = mixed_partition(matrices, trace.grid()[trace.vertex(0)], k, w);
  const auto pure1 = mixed_partition(matrices, trace.grid()[trace.vertex(1)], k, w);

  auto outcome = [&](Criterion c, std::size_t g) {
    const auto& alpha = trace.grid()[g];
    const auto part = mixed_partition(matrices, alpha, k, w);
    ScenarioOutcome o;
    o.criterion = c;
    o.alpha = alpha[1];
    o.score = score_recovery(part, data.labels);
    o.joint_inertia = joint_inertia_two(matrices[0], matrices[1], part, pure0, pure1, w);
    return o;
  };
  return {outcome(Criterion::chavent, chavent_alpha(trace, k).grid_index),
          outcome(Criterion::morelli, best_alpha(trace, k).grid_index)};
}

ScenarioOutcome run_scenario(const SimConfig& cfg, Criterion criterion) {
  const auto r = run_replicate(cfg);
  return criterion == Criterion::chavent ? r.chavent : r.morelli;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Summary summarize(std::span<const double> xs) {
  if (xs.empty()) throw InputError("summarize: no values");
  Summary s;
  const double n = static_cast<double>(xs.size());
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> rank(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = r;
    i = j + 1;
  }
  return rank;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

const ScenarioOutcome& pick(const ReplicateResult& r, Criterion c) {
  return c == Criterion::chavent ? r.chavent : r.morelli;
}

double mode(std::span<const double> xs) {
  std::map<double, std::size_t> counts;
  for (double x : xs) ++counts[x];
  double best = 0.0;
  std::size_t best_count = 0;
  for (const auto& [x, c] : counts)
    if (c > best_count) {
      best = x;
      best_count = c;
    }
  return best;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("spearman: need two equal-length samples");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

CriterionSummary summarize(std::span<const TraceRow> rows, Criterion c) {
  std::vector<double> acc, prec, sens, ari, alpha, ji;
  for (const auto& row : rows) {
    const auto& o = pick(row.result, c);
    acc.push_back(o.score.accuracy);
    prec.push_back(o.score.precision);
    sens.push_back(o.score.sensitivity);
    ari.push_back(o.score.adjusted_rand);
    alpha.push_back(o.alpha);
    ji.push_back(o.joint_inertia);
  }
  return {summarize(acc), summarize(prec), summarize(sens), summarize(ari), summarize(alpha), summarize(ji)};
}

SweepResult run_sweep(const SimConfig& base, std::span<const double> ds, std::size_t reps) {
  if (reps == 0) throw InputError("run_sweep: reps must be positive");
  base.validate();
  SweepResult out;
  out.base = base;
  out.trace.resize(ds.size() * reps);
  parallel_for(out.trace.size(), [&](std::size_t idx) {
    const std::size_t level = idx / reps;
    SimConfig cfg = base;
    cfg.d = ds[level];
    cfg.seed = derive_seed(derive_seed(base.seed, level), idx % reps);
    auto& row = out.trace[idx];
    row.rep = idx % reps;
    row.d = cfg.d;
    row.v = cfg.v;
    row.pi = cfg.pi;
    row.result = run_replicate(cfg);
  });
  for (std::size_t level = 0; level < ds.size(); ++level) {
    const std::span<const TraceRow> rows(out.trace.data() + level * reps, reps);
    SweepRow s;
    s.d = ds[level];
    s.reps = reps;
    s.chavent = summarize(rows, Criterion::chavent);
    s.morelli = summarize(rows, Criterion::morelli);
    std::vector<double> ach, amo;
    for (const auto& r : rows) {
      ach.push_back(r.result.chavent.alpha);
      amo.push_back(r.result.morelli.alpha);
    }
    s.chavent_alpha_mode = mode(ach);
    s.morelli_alpha_mode = mode(amo);
    out.rows.push_back(s);
  }
  return out;
}

MonteCarloResult run_monte_carlo(const MonteCarloConfig& cfg) {
  if (cfg.reps == 0) throw InputError("run_monte_carlo: reps must be positive");
  if (!(cfg.pi_low > 0.0 && cfg.pi_low <= cfg.pi_high) || !(cfg.v_low >= 0.0 && cfg.v_low <= cfg.v_high) ||
      !(cfg.d_low >= 0.0 && cfg.d_low <= cfg.d_high && cfg.d_high <= 1.0))
    throw InputError("run_monte_carlo: invalid parameter ranges");
  MonteCarloResult out;
  out.trace.resize(cfg.reps);
  parallel_for(cfg.reps, [&](std::size_t rep) {
    std::mt19937_64 rng(derive_seed(cfg.seed, rep));
    std::uniform_real_distribution<double> pi_dist(cfg.pi_low, cfg.pi_high);
    std::uniform_real_distribution<double> v_dist(cfg.v_low, cfg.v_high);
    std::uniform_real_distribution<double> d_dist(cfg.d_low, cfg.d_high);
    SimConfig sc;
    sc.n = cfg.n;
    sc.mu = cfg.mu;
    sc.pi.resize(4);
    double total = 0.0;
    for (double& p : sc.pi) total += (p = pi_dist(rng));
    for (double& p : sc.pi) p /= total;
    sc.v = v_dist(rng);
    sc.v_sp = cfg.v_sp;
    sc.d = d_dist(rng);
    sc.delta_alpha = cfg.delta_alpha;
    sc.reading = cfg.reading;
    sc.seed = rng();
    auto& row = out.trace[rep];
    row.rep = rep;
    row.d = sc.d;
    row.v = sc.v;
    row.pi = sc.pi;
    row.result = run_replicate(sc);
  });
  out.chavent = summarize(out.trace, Criterion::chavent);
  out.morelli = summarize(out.trace, Criterion::morelli);
  return out;
}

}  // namespace geoclust::sim
