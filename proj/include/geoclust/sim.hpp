#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "geoclust/hclust.hpp"

namespace geoclust::sim {

/// How the spread parameters v (feature) and v_sp (per spatial axis) are read.
///   both_variance: Z ~ N(mu_k, v) and (X, Y) ~ N(mu_sp, v_sp I), variances.
///   literal:       v is the feature sd, v_sp the spatial variance.
///   both_sd:       both are standard deviations.
enum class SpreadReading { both_variance, literal, both_sd };

std::string to_string(SpreadReading r);
SpreadReading parse_spread_reading(const std::string& s);
double feature_sd(SpreadReading r, double v);
double spatial_sd(SpreadReading r, double v_sp);

struct SimConfig {
  std::size_t n = 100;
  std::vector<double> pi{0.25, 0.25, 0.25, 0.25};
  std::vector<double> mu{2.0, 4.0, 6.0, 8.0};
  double v = 0.4;     // feature spread, see SpreadReading
  double v_sp = 0.4;  // spatial spread, see SpreadReading
  double d = 0.0;     // overlap parameter in [0, 1]
  std::uint64_t seed = 1;
  double delta_alpha = 0.05;
  SpreadReading reading = SpreadReading::both_variance;

  std::size_t clusters() const { return pi.size(); }
  void validate() const;
};

struct SimDataset {
  std::vector<double> features;
  std::vector<std::array<double, 2>> coords;
  std::vector<std::size_t> labels;  // 0-based true cluster
};

/// Spatial mean of cluster k: ((d,d), (-d,d), (d,-d), (-d,-d)) for k = 0..3.
std::array<double, 2> spatial_mean(std::size_t k, double d);

SimDataset simulate_dataset(const SimConfig& cfg);

struct RecoveryScore {
  double accuracy = 0.0;
  double precision = 0.0;
  double sensitivity = 0.0;
  double adjusted_rand = 0.0;
};

/// Hubert-Arabie adjusted Rand index from the contingency table. Two
/// identical trivial partitions (all-in-one or all-singletons) score 1.
double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b);

/// Maximum-weight one-to-one matching between rows and columns of a
/// rows x cols table (row-major). Returns the matched column per row, or
/// cols when a row stays unmatched.
std::vector<std::size_t> max_weight_matching(std::span<const double> table, std::size_t rows, std::size_t cols);

/// Scores an estimated partition against true labels after optimal label
/// matching. Precision and sensitivity are macro-averages over matched pairs.
RecoveryScore score_recovery(std::span<const std::size_t> estimated, std::span<const std::size_t> truth);
RecoveryScore score_recovery(const Partition& estimated, std::span<const std::size_t> truth);

enum class Criterion { chavent, morelli };
std::string to_string(Criterion c);

struct ScenarioOutcome {
  Criterion criterion = Criterion::morelli;
  double alpha = 0.0;  // weight of the spatial matrix
  RecoveryScore score;
  double joint_inertia = 0.0;
};

struct ReplicateResult {
  ScenarioOutcome chavent;
  ScenarioOutcome morelli;
};

/// Simulates one dataset and evaluates both criteria on it at K = number of
/// true clusters: Euclidean feature and spatial matrices, max-normalized.
ReplicateResult run_replicate(const SimConfig& cfg);
ScenarioOutcome run_scenario(const SimConfig& cfg, Criterion criterion);

/// Per-replicate seed derived from a master seed (splitmix64 of master + index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

struct Summary {
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;  // sample standard deviation
};
Summary summarize(std::span<const double> xs);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

struct TraceRow {
  std::size_t rep = 0;
  double d = 0.0;
  double v = 0.0;
  std::vector<double> pi;
  ReplicateResult result;
};

struct CriterionSummary {
  Summary accuracy, precision, sensitivity, adjusted_rand, alpha, joint_inertia;
};

CriterionSummary summarize(std::span<const TraceRow> rows, Criterion c);

struct SweepRow {
  double d = 0.0;
  std::size_t reps = 0;
  double chavent_alpha_mode = 0.0;
  double morelli_alpha_mode = 0.0;
  CriterionSummary chavent;
  CriterionSummary morelli;
};

struct SweepResult {
  SimConfig base;
  std::vector<SweepRow> rows;
  std::vector<TraceRow> trace;
};

/// Fixed-parameter scenarios at each d with `reps` replicates each.
SweepResult run_sweep(const SimConfig& base, std::span<const double> ds, std::size_t reps);

struct MonteCarloConfig {
  std::size_t reps = 500;
  std::uint64_t seed = 1;
  std::size_t n = 100;
  std::vector<double> mu{2.0, 4.0, 6.0, 8.0};
  double pi_low = 0.15, pi_high = 0.35;  // then renormalized
  double v_low = 0.1, v_high = 0.6;
  double v_sp = 0.4;
  double d_low = 0.0, d_high = 1.0;
  double delta_alpha = 0.05;
  SpreadReading reading = SpreadReading::both_variance;
};

struct MonteCarloResult {
  std::vector<TraceRow> trace;
  CriterionSummary chavent;
  CriterionSummary morelli;
};

/// Draws per-replicate pi, v and d, then evaluates both criteria.
MonteCarloResult run_monte_carlo(const MonteCarloConfig& cfg);

}  // namespace geoclust::sim
