#include <doctest.h>

#include <random>

#include "geoclust/error.hpp"
#include "geoclust/inertia.hpp"
#include "geoclust/search.hpp"
#include "oracles.hpp"

using namespace geoclust;

namespace {

std::vector<std::size_t> all_members(std::size_t n) {
  std::vector<std::size_t> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = i;
  return m;
}

double oracle_within(const DissimMatrix& d, const Partition& p, const std::vector<double>& w) {
  std::vector<double> e(d.entries().begin(), d.entries().end());
  double s = 0.0;
  for (const auto& members : p.members()) s += oracle::inertia(e, d.size(), members, w);
  return s;
}

}  // namespace

TEST_CASE("cluster_inertia examples") {
  const auto w = UnitWeights::uniform(3);
  const auto d = DissimMatrix::from_pairwise("d", 3, [](std::size_t, std::size_t) { return 1.0; });
  const std::vector<std::size_t> one{1};
  CHECK(cluster_inertia(d, one, w) == 0.0);
  CHECK(cluster_inertia(d, all_members(3), w) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const std::vector<std::size_t> pair{0, 2};
  CHECK(cluster_inertia(d, pair, w) == doctest::Approx((1.0 / 3.0) / 2.0).epsilon(1e-15));
  CHECK_THROWS_AS(cluster_inertia(d, std::vector<std::size_t>{}, w), InputError);
}

TEST_CASE("within and total inertia") {
  std::mt19937_64 rng(77);
  const std::size_t n = 6;
  // Euclidean points, where within inertia is bounded by the total.
  std::normal_distribution<double> g;
  std::vector<double> pts(3 * n);
  for (auto& x : pts) x = g(rng);
  const auto d = euclidean_dissim("d", pts, 3);
  const auto w = UnitWeights::uniform(n);
  const std::vector<double> wv(n, 1.0 / n);
  CHECK(within_inertia(d, Partition::singletons(n), w) == 0.0);
  CHECK(within_inertia(d, Partition::single(n), w) == total_inertia(d, w));
  for (const auto& labels : oracle::all_partitions(n)) {
    const Partition p(labels);
    const double v = within_inertia(d, p, w);
    CHECK(v == doctest::Approx(oracle_within(d, p, wv)).epsilon(1e-12));
    CHECK(v <= total_inertia(d, w) * (1 + 1e-12));
  }
}

TEST_CASE("mixed_inertia") {
  std::mt19937_64 rng(4);
  const std::size_t n = 5;
  const std::vector<DissimMatrix> ms{DissimMatrix("a", n, oracle::random_matrix(n, rng)),
                                     DissimMatrix("b", n, oracle::random_matrix(n, rng))};
  const auto w = UnitWeights::uniform(n);
  const Partition p(std::vector<std::size_t>{0, 0, 1, 1, 2});
  const std::vector<double> pure{1.0, 0.0};
  CHECK(mixed_inertia(ms, pure, p, w) == within_inertia(ms[0], p, w));
  const std::vector<DissimMatrix> same{ms[0], ms[0].relabeled("c")};
  const std::vector<double> half{0.5, 0.5};
  CHECK(mixed_inertia(same, half, p, w) == doctest::Approx(within_inertia(ms[0], p, w)).epsilon(1e-15));
  const std::vector<double> mixw{0.3, 0.7};
  CHECK(mixed_inertia(ms, mixw, p, w) ==
        doctest::Approx(0.3 * within_inertia(ms[0], p, w) + 0.7 * within_inertia(ms[1], p, w)).epsilon(1e-14));
}

TEST_CASE("proportions explained") {
  std::mt19937_64 rng(8);
  const std::size_t n = 7;
  const DissimMatrix d("d", n, oracle::random_matrix(n, rng));
  const auto w = UnitWeights::uniform(n);
  CHECK(prop_explained(d, Partition::single(n), w) == 0.0);
  CHECK(prop_explained(d, Partition::singletons(n), w) == 1.0);
  const Partition p(std::vector<std::size_t>{0, 0, 1, 1, 1, 2, 2});
  const std::vector<double> wv(n, 1.0 / n);
  CHECK(prop_explained(d, p, w) ==
        doctest::Approx(1.0 - oracle_within(d, p, wv) / oracle_within(d, Partition::single(n), wv)).epsilon(1e-12));
  CHECK(norm_prop_explained(d, p, p, w) == 1.0);
  CHECK_THROWS_AS(norm_prop_explained(d, p, Partition::single(n), w), DegenerateError);

  const std::vector<DissimMatrix> same{d, d.relabeled("e"), d.relabeled("f")};
  CHECK(avg_explained(same, p, w) == doctest::Approx(prop_explained(d, p, w)).epsilon(1e-14));
  CHECK(avg_explained(same, Partition::single(n), w) == 0.0);
  CHECK(avg_explained(same, Partition::singletons(n), w) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("joint inertia") {
  std::mt19937_64 rng(21);
  const std::size_t n = 8;
  const DissimMatrix d0("d0", n, oracle::random_matrix(n, rng));
  const DissimMatrix d1("d1", n, oracle::random_matrix(n, rng));
  const auto w = UnitWeights::uniform(n);
  const std::vector<DissimMatrix> ms{d0, d1};
  const std::size_t k = 3;
  const auto pure0 = cut(ward_tree(d0, w), k);
  const auto pure1 = cut(ward_tree(d1, w), k);

  SUBCASE("identical partitions give one") {
    CHECK(joint_inertia_two(d0, d0.relabeled("x"), pure0, pure0, pure0, w) == 1.0);
  }
  SUBCASE("endpoints reduce to the other normalized proportion") {
    CHECK(joint_inertia_two(d0, d1, pure0, pure0, pure1, w) ==
          doctest::Approx(norm_prop_explained(d1, pure0, pure1, w)).epsilon(1e-12));
    CHECK(joint_inertia_two(d0, d1, pure1, pure0, pure1, w) ==
          doctest::Approx(norm_prop_explained(d0, pure1, pure0, w)).epsilon(1e-12));
  }
  SUBCASE("multi at two matrices equals two-matrix form") {
    const auto part = mixed_partition(ms, MixVector({1, 1}, 2), k, w);
    const double two = joint_inertia_two(d0, d1, part, pure0, pure1, w);
    CHECK(joint_inertia_multi(ms, 1, part, pure1, pure0, w) == doctest::Approx(two).epsilon(1e-12));
    CHECK(joint_inertia_multi(ms, 0, part, pure0, pure1, w) == doctest::Approx(two).epsilon(1e-12));
  }
  SUBCASE("row arithmetic") {
    const auto part = mixed_partition(ms, MixVector({1, 2}, 3), k, w);
    const std::vector<Partition> pure{pure0, pure1};
    const std::vector<Partition> restricted{pure1, pure0};
    const std::vector<double> alpha{1.0 / 3, 2.0 / 3};
    const auto r = inertia_report(ms, alpha, part, pure, restricted, w);
    CHECK(r.k == k);
    for (const auto& row : r.matrices) {
      CHECK(row.joint_inertia == doctest::Approx(row.q_tilde + row.q_tilde_complement - 1.0));
      CHECK(row.q >= 0.0);
      CHECK(row.q <= 1.0);
    }
    CHECK(r.matrices[0].q_tilde == doctest::Approx(prop_explained(d0, part, w) / prop_explained(d0, pure0, w)));
  }
}
