#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "geoclust/error.hpp"
#include "geoclust/search.hpp"
#include "oracles.hpp"

using namespace geoclust;

namespace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Four tight blocks of `per` units, block centres mutually equidistant.
DissimMatrix blocks(std::size_t per, double within, const std::string& label) {
  return DissimMatrix::from_pairwise(label, 4 * per, [&](std::size_t i, std::size_t j) {
    return i / per == j / per ? within : 1.0;
  });
}

DissimMatrix noise(std::size_t n, std::uint64_t seed, const std::string& label) {
  std::mt19937_64 rng(seed);
  return DissimMatrix(label, n, oracle::random_matrix(n, rng));
}

}  // namespace

TEST_CASE("grid_steps") {
  CHECK(grid_steps(0.05) == 20);
  CHECK(grid_steps(0.1) == 10);
  CHECK(grid_steps(0.5) == 2);
  CHECK(grid_steps(1.0) == 1);
  CHECK_THROWS_AS(grid_steps(0.3), InputError);
  CHECK_THROWS_AS(grid_steps(0.0), InputError);
  CHECK_THROWS_AS(grid_steps(1.5), InputError);
}

TEST_CASE("simplex_grid") {
  const auto g2 = simplex_grid(2, 0.5);
  REQUIRE(g2.size() == 3);
  CHECK(g2[0][0] == 1.0);
  CHECK(g2[1][0] == 0.5);
  CHECK(g2[1][1] == 0.5);
  CHECK(g2[2][1] == 1.0);
  CHECK(simplex_grid(3, 0.5).size() == 6);
  CHECK(simplex_grid(5, 0.05).size() == 10626);
  for (std::size_t p = 2; p <= 5; ++p)
    for (std::uint32_t m : {1u, 2u, 4u, 5u, 10u, 20u}) {
      const auto g = simplex_grid(p, 1.0 / m);
      CHECK(g.size() == binomial(m + p - 1, p - 1));
      for (const auto& v : g) {
        std::uint32_t s = 0;
        for (auto c : v.parts()) s += c;
        CHECK(s == m);
      }
      for (std::size_t i = 1; i < g.size(); ++i) CHECK_FALSE(g[i] == g[i - 1]);
    }
  CHECK_THROWS_AS(simplex_grid(1, 0.5), InputError);
}

TEST_CASE("MixVector") {
  const MixVector v({1, 3}, 4);
  CHECK(v[0] == 0.25);
  CHECK(v[1] == 0.75);
  CHECK_THROWS_AS(MixVector({1, 2}, 4), InputError);
}

TEST_CASE("chavent_alpha: identical matrices tie at the first grid point") {
  const auto d = noise(10, 1, "a");
  const auto r = chavent_alpha(d, d.relabeled("b"), 3, 0.05, UnitWeights::uniform(10));
  CHECK(r.alpha == 0.0);
  CHECK(r.objective == 0.0);
  CHECK(r.trace.size() == 21);
}

TEST_CASE("chavent_alpha matches an independent rescan") {
  const auto d0 = noise(12, 2, "a"), d1 = noise(12, 3, "b");
  const auto w = UnitWeights::uniform(12);
  const std::vector<DissimMatrix> ms{d0, d1};
  const auto r = chavent_alpha(d0, d1, 3, 0.1, w);
  const auto pure0 = cut(ward_tree(d0, w), 3), pure1 = cut(ward_tree(d1, w), 3);
  double best = INFINITY, best_alpha = -1;
  for (int s = 0; s <= 10; ++s) {
    const auto part = mixed_partition(ms, MixVector({std::uint32_t(10 - s), std::uint32_t(s)}, 10), 3, w);
    const double obj = std::abs(norm_prop_explained(d0, part, pure0, w) - norm_prop_explained(d1, part, pure1, w));
    if (obj < best) {
      best = obj;
      best_alpha = s / 10.0;
    }
  }
  CHECK(r.alpha == doctest::Approx(best_alpha));
  CHECK(r.objective == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("best_alpha") {
  const std::size_t n = 12;
  const auto w = UnitWeights::uniform(n);
  SUBCASE("identical matrices select the first grid vector") {
    const auto d = noise(n, 4, "a");
    const std::vector<DissimMatrix> ms{d, d.relabeled("b"), d.relabeled("c")};
    const auto sel = best_alpha(ms, 3, 0.25, w);
    CHECK(sel.choice.grid_index == 0);
    CHECK(sel.choice.alpha[0] == 1.0);
  }
  SUBCASE("a noise matrix gets no more weight than informative ones") {
    const auto b = blocks(3, 0.05, "b");
    const std::vector<DissimMatrix> ms{b, b.relabeled("c"), normalize_max(noise(n, 5, "noise"))};
    const auto sel = best_alpha(ms, 4, 0.1, w);
    CHECK(sel.choice.alpha[2] <= sel.choice.alpha[0]);
    CHECK(sel.choice.alpha[2] <= sel.choice.alpha[1]);
  }
  SUBCASE("matches an independent rescan") {
    const std::vector<DissimMatrix> ms{noise(n, 6, "a"), noise(n, 7, "b"), noise(n, 8, "c")};
    const auto sel = best_alpha(ms, 3, 0.25, w);
    double best = -1;
    for (const auto& v : simplex_grid(3, 0.25)) {
      const double q = avg_explained(ms, mixed_partition(ms, v, 3, w), w);
      best = std::max(best, q);
    }
    CHECK(sel.choice.q_bar == doctest::Approx(best).epsilon(1e-12));
  }
  SUBCASE("restricted search never uses the excluded matrix") {
    const std::vector<DissimMatrix> ms{noise(n, 6, "a"), noise(n, 7, "b")};
    const auto r = best_alpha_restricted(ms, 1, 3, 0.05, w);
    CHECK(r.choice.alpha[0] == 1.0);
    CHECK(r.choice.alpha[1] == 0.0);
  }
}

TEST_CASE("knee rule") {
  const std::vector<double> four{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0};
  CHECK(knee(four) == std::pair<std::size_t, bool>{4, false});
  const std::vector<double> linear{0.2, 0.2, 0.2, 0.2};
  CHECK(knee(linear) == std::pair<std::size_t, bool>{2, true});
  const std::vector<double> only{0.4};
  CHECK(knee(only).first == 2);
}

TEST_CASE("elbow_table on four separated blocks") {
  const auto b = blocks(4, 0.02, "b");
  const std::vector<DissimMatrix> ms{b, b.relabeled("c")};
  const auto r = elbow_table(ms, 0.5, 6, UnitWeights::uniform(16));
  CHECK(r.k_selected == 4);
  CHECK_FALSE(r.knee_tied);
  REQUIRE(r.rows.size() == 5);
  CHECK(r.row(2).delta_q_bar == doctest::Approx(r.row(2).best.q_bar));
  CHECK(r.row(5).delta_q_bar < 0.01);
  CHECK_THROWS_AS(elbow_table(ms, 0.5, 16, UnitWeights::uniform(16)), InputError);
}

TEST_CASE("evaluate_grid is thread-count independent") {
  const std::vector<DissimMatrix> ms{noise(15, 1, "a"), noise(15, 2, "b"), noise(15, 3, "c")};
  const auto w = UnitWeights::uniform(15);
  ::setenv("GEOCLUST_THREADS", "1", 1);
  const auto a = evaluate_grid(ms, simplex_grid(3, 0.1), 5, w);
  ::setenv("GEOCLUST_THREADS", "7", 1);
  const auto b = evaluate_grid(ms, simplex_grid(3, 0.1), 5, w);
  ::unsetenv("GEOCLUST_THREADS");
  for (std::size_t g = 0; g < a.grid().size(); ++g)
    for (std::size_t k = 1; k <= 5; ++k)
      for (std::size_t p = 0; p < 3; ++p) CHECK(a.within(g, k, p) == b.within(g, k, p));
  for (std::size_t p = 0; p < 3; ++p) CHECK(a.grid()[a.vertex(p)][p] == 1.0);
}
