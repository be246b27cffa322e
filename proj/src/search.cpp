#include "geoclust/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geoclust/error.hpp"
#include "geoclust/parallel.hpp"

namespace geoclust {

MixVector::MixVector(std::vector<std::uint32_t> parts, std::uint32_t steps)
    : parts_(std::move(parts)), steps_(steps) {
  if (steps_ == 0) throw InputError("mixing grid needs at least one step");
  const auto sum = std::accumulate(parts_.begin(), parts_.end(), std::uint64_t{0});
  if (sum != steps_) throw InputError("mixing composition does not sum to the step count");
  weights_.reserve(parts_.size());
  for (auto c : parts_) weights_.push_back(static_cast<double>(c) / static_cast<double>(steps_));
}

std::uint32_t grid_steps(double delta_alpha) {
  if (!(delta_alpha > 0.0) || delta_alpha > 1.0)
    throw InputError("delta_alpha must lie in (0, 1]");
  const double inv = 1.0 / delta_alpha;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) > 1e-9 * rounded)
    throw InputError("delta_alpha must be a unit fraction 1/m");
  return static_cast<std::uint32_t>(rounded);
}

namespace {

void compositions(std::size_t pos, std::uint32_t remaining, std::vector<std::uint32_t>& cur,
                  std::uint32_t steps, std::vector<MixVector>& out) {
  if (pos + 1 == cur.size()) {
    cur[pos] = remaining;
    out.emplace_back(cur, steps);
    return;
  }
  for (std::uint32_t c = remaining + 1; c-- > 0;) {
    cur[pos] = c;
    compositions(pos + 1, remaining - c, cur, steps, out);
  }
}

}  // namespace

std::vector<MixVector> simplex_grid(std::size_t parts, double delta_alpha) {
  if (parts < 2) throw InputError("simplex_grid needs at least two matrices");
  const std::uint32_t steps = grid_steps(delta_alpha);
  std::vector<MixVector> out;
  std::vector<std::uint32_t> cur(parts, 0);
  compositions(0, steps, cur, steps, out);
  return out;
}

GridTrace::GridTrace(std::vector<MixVector> grid, std::size_t matrices, std::size_t k_max,
                     std::vector<double> totals, std::vector<double> within)
    : grid_(std::move(grid)),
      matrices_(matrices),
      k_max_(k_max),
      totals_(std::move(totals)),
      within_(std::move(within)) {
  if (totals_.size() != matrices_ || within_.size() != grid_.size() * k_max_ * matrices_)
    throw InputError("grid trace dimensions do not match");
}

double GridTrace::q(std::size_t g, std::size_t k, std::size_t p) const {
  if (!(totals_[p] > 0.0)) throw DegenerateError("matrix " + std::to_string(p) + " has zero total inertia");
  return 1.0 - within(g, k, p) / totals_[p];
}

double GridTrace::q_bar(std::size_t g, std::size_t k) const {
  return q_bar_without(g, k, matrices_);
}

double GridTrace::q_bar_without(std::size_t g, std::size_t k, std::size_t excluded) const {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t p = 0; p < matrices_; ++p) {
    if (p == excluded) continue;
    num += within(g, k, p);
    den += totals_[p];
  }
  if (!(den > 0.0)) throw DegenerateError("pooled matrices have zero total inertia");
  return 1.0 - num / den;
}

std::size_t GridTrace::vertex(std::size_t p) const {
  for (std::size_t g = 0; g < grid_.size(); ++g)
    if (grid_[g].parts()[p] == grid_[g].steps()) return g;
  throw InputError("grid has no vertex for matrix " + std::to_string(p));
}

Partition mixed_partition(std::span<const DissimMatrix> matrices, const MixVector& alpha, std::size_t k,
                          const UnitWeights& w) {
  const auto d = mix(matrices, alpha.weights(), {.require_normalized = false});
  return cut(ward_tree(d, w), k);
}

GridTrace evaluate_grid(std::span<const DissimMatrix> matrices, std::vector<MixVector> grid,
                        std::size_t k_max, const UnitWeights& w) {
  if (matrices.empty()) throw InputError("evaluate_grid: no matrices");
  const std::size_t count = matrices.size();
  const std::size_t n = matrices.front().size();
  if (k_max < 1 || k_max > n) throw InputError("evaluate_grid: K_max outside 1..n");
  for (const auto& v : grid)
    if (v.size() != count) throw InputError("evaluate_grid: grid vector length does not match matrix count");

  std::vector<double> totals(count);
  for (std::size_t p = 0; p < count; ++p) totals[p] = total_inertia(matrices[p], w);

  std::vector<double> within(grid.size() * k_max * count);
  parallel_for(grid.size(), [&](std::size_t g) {
    const auto d = mix(matrices, grid[g].weights(), {.require_normalized = false});
    const auto tree = ward_tree(d, w);
    for (std::size_t k = 1; k <= k_max; ++k) {
      const auto part = cut(tree, k);
      for (std::size_t p = 0; p < count; ++p)
        within[(g * k_max + (k - 1)) * count + p] = k == 1 ? totals[p] : within_inertia(matrices[p], part, w);
    }
  });
  return GridTrace(std::move(grid), count, k_max, std::move(totals), std::move(within));
}

namespace {

void check_k(const GridTrace& trace, std::size_t k) {
  if (k < 1 || k > trace.k_max()) throw InputError("K=" + std::to_string(k) + " outside the evaluated range");
}

}  // namespace

AlphaChoice best_alpha(const GridTrace& trace, std::size_t k) {
  check_k(trace, k);
  std::size_t best = 0;
  double best_value = trace.q_bar(0, k);
  for (std::size_t g = 1; g < trace.grid().size(); ++g) {
    const double v = trace.q_bar(g, k);
    if (v > best_value) {
      best = g;
      best_value = v;
    }
  }
  return {best, trace.grid()[best], best_value};
}

AlphaChoice best_alpha_restricted(const GridTrace& trace, std::size_t excluded, std::size_t k) {
  check_k(trace, k);
  if (excluded >= trace.matrices()) throw InputError("best_alpha_restricted: matrix index out of range");
  bool found = false;
  AlphaChoice out;
  for (std::size_t g = 0; g < trace.grid().size(); ++g) {
    if (trace.grid()[g].parts()[excluded] != 0) continue;
    const double v = trace.q_bar_without(g, k, excluded);
    if (!found || v > out.q_bar) {
      out = {g, trace.grid()[g], v};
      found = true;
    }
  }
  if (!found) throw InputError("grid has no vector with matrix " + std::to_string(excluded) + " excluded");
  return out;
}

AlphaSelection best_alpha(std::span<const DissimMatrix> matrices, std::size_t k, double delta_alpha,
                          const UnitWeights& w) {
  if (k < 2) throw InputError("best_alpha needs K >= 2");
  const auto trace = evaluate_grid(matrices, simplex_grid(matrices.size(), delta_alpha), k, w);
  auto choice = best_alpha(trace, k);
  auto part = mixed_partition(matrices, choice.alpha, k, w);
  return {std::move(choice), std::move(part)};
}

AlphaSelection best_alpha_restricted(std::span<const DissimMatrix> matrices, std::size_t excluded,
                                     std::size_t k, double delta_alpha, const UnitWeights& w) {
  if (k < 2) throw InputError("best_alpha_restricted needs K >= 2");
  if (excluded >= matrices.size()) throw InputError("best_alpha_restricted: matrix index out of range");
  // Enumerate only the restricted face of the simplex.
  auto grid = simplex_grid(matrices.size(), delta_alpha);
  std::erase_if(grid, [&](const MixVector& v) { return v.parts()[excluded] != 0; });
  const auto trace = evaluate_grid(matrices, std::move(grid), k, w);
  auto choice = best_alpha_restricted(trace, excluded, k);
  auto part = mixed_partition(matrices, choice.alpha, k, w);
  return {std::move(choice), std::move(part)};
}

ChaventResult chavent_alpha(const GridTrace& trace, std::size_t k) {
  check_k(trace, k);
  if (trace.matrices() != 2) throw InputError("chavent_alpha needs exactly two matrices");
  if (k < 2) throw InputError("chavent_alpha needs K >= 2");
  const double base0 = trace.q(trace.vertex(0), k, 0);
  const double base1 = trace.q(trace.vertex(1), k, 1);
  if (base0 < kBaselineFloor || base1 < kBaselineFloor) throw DegenerateError("chavent_alpha: zero baseline");

  ChaventResult out;
  out.trace.reserve(trace.grid().size());
  for (std::size_t g = 0; g < trace.grid().size(); ++g) {
    ChaventPoint pt;
    pt.alpha = trace.grid()[g][1];
    pt.q_tilde0 = trace.q(g, k, 0) / base0;
    pt.q_tilde1 = trace.q(g, k, 1) / base1;
    pt.objective = std::abs(pt.q_tilde0 - pt.q_tilde1);
    if (g == 0 || pt.objective < out.objective) {
      out.grid_index = g;
      out.alpha = pt.alpha;
      out.objective = pt.objective;
    }
    out.trace.push_back(pt);
  }
  return out;
}

ChaventResult chavent_alpha(const DissimMatrix& d0, const DissimMatrix& d1, std::size_t k, double delta_alpha,
                            const UnitWeights& w) {
  const std::vector<DissimMatrix> pair{d0, d1};
  return chavent_alpha(evaluate_grid(pair, simplex_grid(2, delta_alpha), k, w), k);
}

std::pair<std::size_t, bool> knee(std::span<const double> deltas) {
  if (deltas.empty()) throw InputError("knee: no increments");
  if (deltas.size() == 1) return {2, false};
  std::vector<double> drop(deltas.size() - 1);
  for (std::size_t i = 0; i + 1 < deltas.size(); ++i) drop[i] = deltas[i] - deltas[i + 1];
  const double top = *std::max_element(drop.begin(), drop.end());
  const double tol = 1e-9 * std::max(1.0, std::abs(top));
  std::size_t chosen = drop.size();
  std::size_t near_top = 0;
  for (std::size_t i = 0; i < drop.size(); ++i) {
    if (top - drop[i] <= tol) {
      if (chosen == drop.size()) chosen = i;
      ++near_top;
    }
  }
  return {chosen + 2, near_top > 1};
}

SearchResult elbow_table(std::span<const DissimMatrix> matrices, double delta_alpha, std::size_t k_max,
                         const UnitWeights& w) {
  if (matrices.empty()) throw InputError("elbow_table: no matrices");
  if (k_max < 2) throw InputError("elbow_table needs K_max >= 2");
  if (k_max >= matrices.front().size()) throw InputError("elbow_table needs K_max < n");
  SearchResult result{evaluate_grid(matrices, simplex_grid(matrices.size(), delta_alpha), k_max, w), {}, 0, false};
  double previous = 0.0;
  std::vector<double> deltas;
  for (std::size_t k = 2; k <= k_max; ++k) {
    auto best = best_alpha(result.trace, k);
    const double delta = best.q_bar - previous;
    previous = best.q_bar;
    deltas.push_back(delta);
    result.rows.push_back({k, std::move(best), delta});
  }
  std::tie(result.k_selected, result.knee_tied) = knee(deltas);
  return result;
}

InertiaReport report_at(std::span<const DissimMatrix> matrices, const GridTrace& trace, std::size_t g,
                        std::size_t k, const UnitWeights& w, std::vector<AlphaChoice>* restricted_choices) {
  check_k(trace, k);
  const std::size_t count = matrices.size();
  const auto part = mixed_partition(matrices, trace.grid()[g], k, w);
  std::vector<Partition> pure;
  std::vector<Partition> restricted;
  if (restricted_choices) restricted_choices->clear();
  for (std::size_t p = 0; p < count; ++p) {
    pure.push_back(mixed_partition(matrices, trace.grid()[trace.vertex(p)], k, w));
    const auto choice = best_alpha_restricted(trace, p, k);
    restricted.push_back(mixed_partition(matrices, choice.alpha, k, w));
    if (restricted_choices) restricted_choices->push_back(choice);
  }
  return inertia_report(matrices, trace.grid()[g].weights(), part, pure, restricted, w);
}

}  // namespace geoclust
