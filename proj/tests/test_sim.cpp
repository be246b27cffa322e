#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "geoclust/error.hpp"
#include "geoclust/sim.hpp"
#include "oracles.hpp"

using namespace geoclust;
using namespace geoclust::sim;

TEST_CASE("spread readings") {
  CHECK(parse_spread_reading("variance") == SpreadReading::both_variance);
  CHECK(parse_spread_reading("literal") == SpreadReading::literal);
  CHECK(parse_spread_reading("sd") == SpreadReading::both_sd);
  CHECK_THROWS_AS(parse_spread_reading("other"), InputError);
  CHECK(feature_sd(SpreadReading::both_variance, 0.25) == 0.5);
  CHECK(feature_sd(SpreadReading::literal, 0.25) == 0.25);
  CHECK(spatial_sd(SpreadReading::literal, 0.25) == 0.5);
  CHECK(spatial_sd(SpreadReading::both_sd, 0.25) == 0.25);
}

TEST_CASE("spatial means") {
  CHECK(spatial_mean(0, 1.0) == std::array<double, 2>{1.0, 1.0});
  CHECK(spatial_mean(3, 0.5) == std::array<double, 2>{-0.5, -0.5});
  for (std::size_t k = 0; k < 4; ++k) CHECK(spatial_mean(k, 0.0) == std::array<double, 2>{0.0, 0.0});
}

TEST_CASE("simulate_dataset") {
  SimConfig cfg;
  cfg.seed = 42;
  const auto a = simulate_dataset(cfg);
  const auto b = simulate_dataset(cfg);
  CHECK(a.features == b.features);
  CHECK(a.coords == b.coords);
  CHECK(a.labels == b.labels);
  CHECK(a.features.size() == cfg.n);

  cfg.v = 0.0;
  const auto exact = simulate_dataset(cfg);
  for (std::size_t i = 0; i < cfg.n; ++i) CHECK(exact.features[i] == cfg.mu[exact.labels[i]]);

  SimConfig bad;
  bad.pi = {0.5, 0.5};
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("adjusted rand index") {
  const std::vector<std::size_t> truth{1, 1, 2, 2}, est{1, 2, 1, 2};
  CHECK(adjusted_rand_index(est, truth) == oracle::ari_pairs(est, truth));
  CHECK(adjusted_rand_index(truth, truth) == 1.0);
  const std::vector<std::size_t> permuted{5, 5, 0, 0};
  CHECK(adjusted_rand_index(permuted, truth) == 1.0);
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto parts = oracle::all_partitions(n);
    for (const auto& x : parts)
      for (const auto& y : parts) CHECK(adjusted_rand_index(x, y) == oracle::ari_pairs(x, y));
  }
}

TEST_CASE("recovery scores") {
  const std::vector<std::size_t> truth{0, 0, 0, 1, 1, 2, 2, 2};
  const auto same = score_recovery(truth, truth);
  CHECK(same.accuracy == 1.0);
  CHECK(same.precision == 1.0);
  CHECK(same.sensitivity == 1.0);
  CHECK(same.adjusted_rand == 1.0);
  const std::vector<std::size_t> relabeled{2, 2, 2, 0, 0, 1, 1, 1};
  CHECK(score_recovery(relabeled, truth).accuracy == 1.0);

  const std::vector<std::size_t> est{0, 0, 1, 1, 1, 2, 2, 0};
  const auto s = score_recovery(est, truth);
  CHECK(s.accuracy * truth.size() == doctest::Approx(oracle::best_matched_count(est, truth)));
  // matched pairs (0->0: 2 hits), (1->1: 2), (2->2: 2)
  CHECK(s.precision == doctest::Approx((2.0 / 3 + 2.0 / 3 + 2.0 / 2) / 3));
  CHECK(s.sensitivity == doctest::Approx((2.0 / 3 + 2.0 / 2 + 2.0 / 3) / 3));

  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> lab(0, 3);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<std::size_t> a(20), b(20);
    for (auto& x : a) x = lab(rng);
    for (auto& x : b) x = lab(rng);
    std::vector<std::size_t> p{0, 1, 2, 3};
    std::shuffle(p.begin(), p.end(), rng);
    std::vector<std::size_t> a2(20);
    for (std::size_t i = 0; i < 20; ++i) a2[i] = p[a[i]];
    const auto s1 = score_recovery(a, b), s2 = score_recovery(a2, b);
    CHECK(s1.accuracy == s2.accuracy);
    CHECK(s1.adjusted_rand == s2.adjusted_rand);
    CHECK(s1.accuracy * 20 == doctest::Approx(oracle::best_matched_count(a, b)));
  }
}

TEST_CASE("max_weight_matching") {
  const std::vector<double> t{1, 5, 0, 4, 1, 1};  // 2 x 3
  const auto m = max_weight_matching(t, 2, 3);
  CHECK(m[0] == 1);
  CHECK(m[1] == 0);
}

TEST_CASE("replicates") {
  SimConfig cfg;
  cfg.d = 1.0;
  cfg.v = 0.0;
  cfg.v_sp = 0.0001;
  cfg.seed = 3;
  const auto r = run_replicate(cfg);
  CHECK(r.morelli.score.accuracy == 1.0);
  CHECK(r.chavent.score.accuracy == 1.0);

  cfg = SimConfig{};
  cfg.seed = 99;
  const auto a = run_replicate(cfg), b = run_replicate(cfg);
  CHECK(a.morelli.alpha == b.morelli.alpha);
  CHECK(a.morelli.joint_inertia == b.morelli.joint_inertia);
  CHECK(run_scenario(cfg, Criterion::chavent).alpha == a.chavent.alpha);
}

TEST_CASE("seeds and summaries") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
  const std::vector<double> xs{1, 2, 3, 4};
  const auto s = summarize(xs);
  CHECK(s.mean == 2.5);
  CHECK(s.median == 2.5);
  CHECK(s.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
  const std::vector<double> x{1, 2, 3, 4, 5}, y{2, 4, 4, 10, 20};
  CHECK(spearman(x, y) == doctest::Approx(std::sqrt(0.95)).epsilon(1e-12));
  const std::vector<double> rev{5, 4, 3, 2, 1};
  CHECK(spearman(x, rev) == doctest::Approx(-1.0));
}

TEST_CASE("monte carlo is reproducible") {
  MonteCarloConfig cfg;
  cfg.reps = 3;
  cfg.seed = 12;
  cfg.n = 40;
  cfg.delta_alpha = 0.1;
  const auto a = run_monte_carlo(cfg), b = run_monte_carlo(cfg);
  REQUIRE(a.trace.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.trace[i].d == b.trace[i].d);
    CHECK(a.trace[i].result.morelli.score.accuracy == b.trace[i].result.morelli.score.accuracy);
    double s = 0;
    for (double p : a.trace[i].pi) s += p;
    CHECK(s == doctest::Approx(1.0));
  }
}
