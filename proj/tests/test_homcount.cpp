#include <doctest.h>

#include <cmath>

#include "hyperreg/homcount.hpp"
#include "support.hpp"

using namespace hyperreg;
using namespace hyperreg::testing;
using Q = Rational;

namespace {

std::vector<std::pair<PartIndex, int>> sized(std::initializer_list<int> sizes) {
  std::vector<std::pair<PartIndex, int>> out;
  int i = 0;
  for (int s : sizes) out.emplace_back(i++, s);
  return out;
}

}  // namespace

TEST_CASE("complete graph counts equal the empty weight") {
  auto g = complete_graph<Q>(sized({2, 3, 4}), 3);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) CHECK(hom_weight(random_complex({0, 1, 2}, 2, rng, 3), g) == 1);
  g.set_empty_weight(Q(2, 5));
  CHECK(hom_weight(random_complex({0, 1, 2}, 2, rng, 3), g) == Q(2, 5));
  for (int v : {1, 2}) CHECK(oct_count(complete_graph<Q>(sized({3, 3, 3}), 3), oct_uniform(3, 3, v)) == 1);
}

TEST_CASE("constant 2-layer of weight 1/2: Oct_2(2,2) = 1/16") {
  auto g = complete_graph<Q>(sized({4, 4}), 2);
  g.set_layer({0, 1}, std::vector<Q>(16, Q(1, 2)));
  CHECK(oct_count(g, oct_uniform(2, 2, 2)) == Q(1, 16));
  CHECK(hom_weight(oct_complex_for(g, oct_uniform(2, 2, 2)), g) == Q(1, 16));
}

TEST_CASE("triangle on a random 0/1 tripartite graph matches enumeration") {
  std::mt19937_64 rng(2);
  auto g = random_graph<Q>(sized({3, 3, 3}), 2, rng, WeightKind::Binary);
  auto tri = complex_of({{0, {0}}, {1, {1}}, {2, {2}}}, {{0, 1}, {1, 2}, {0, 2}});
  Q direct(0);
  for_each_map(tri, g, [&](const std::vector<int>& phi) { direct += map_weight(tri, g, phi); });
  CHECK(hom_weight(tri, g) == direct / 27);
  CHECK(hom_weight_naive(tri, g) == direct / 27);
}

TEST_CASE("elimination agrees with naive enumeration on 200 random instances") {
  std::mt19937_64 rng(3);
  int agreed = 0;
  for (int t = 0; t < 200; ++t) {
    int nparts = 2 + static_cast<int>(rng() % 3);
    std::vector<std::pair<PartIndex, int>> parts;
    std::vector<PartIndex> ids;
    for (int p = 0; p < nparts; ++p) {
      parts.emplace_back(p * 3, 1 + static_cast<int>(rng() % 4));
      ids.push_back(p * 3);
    }
    int cap = 1 + static_cast<int>(rng() % static_cast<unsigned>(nparts));
    auto g = random_graph<Q>(parts, cap, rng, t % 3 == 0 ? WeightKind::Binary : WeightKind::SmallRational, 0.8,
                             t % 2 == 0);
    auto h = random_complex(ids, nparts >= 4 ? 1 : 2, rng, nparts);
    if (h.num_vertices() > 6) continue;
    Q fast = hom_weight(h, g);
    Q slow = hom_weight_naive(h, g);
    CHECK(fast == slow);
    if (fast == slow) ++agreed;
  }
  CHECK(agreed > 150);
}

TEST_CASE("degenerate complexes") {
  auto g = complete_graph<Q>(sized({5}), 1);
  g.set_empty_weight(Q(3, 4));
  std::vector<Q> w{Q(1), Q(0), Q(1, 2), Q(1, 3), Q(1, 6)};
  g.set_layer({0}, w);
  auto empty = PartiteComplex::from_generators({}, {});
  CHECK(hom_weight(empty, g) == Q(3, 4));
  CHECK(hom_weight_naive(empty, g) == Q(3, 4));
  auto single = complex_of({{0, {0}}}, {});
  CHECK(hom_weight(single, g) == Q(3, 4) * Q(2) / 5);
  auto zero = complete_graph<Q>({{0, 0}}, 1);
  CHECK_THROWS_AS(hom_weight(single, zero), DomainError);
  CHECK_THROWS_AS(hom_weight(complex_of({{9, {0}}}, {}), g), DomainError);
}

TEST_CASE("budget refusal") {
  auto g = complete_graph<double>(sized({40, 40, 40, 40}), 4);
  std::vector<double> w(40 * 40 * 40 * 40, 0.5);
  g.set_layer({0, 1, 2, 3}, w);
  auto oct = oct_complex_for(g, oct_uniform(4, 4, 2));
  CHECK_THROWS_AS(hom_weight(oct, g, CountOptions{1000}), BudgetError);
  CHECK_THROWS_AS(hom_weight_naive(oct, g, CountOptions{1000}), BudgetError);
}

TEST_CASE("octahedron complexes") {
  std::vector<PartIndex> ids{0, 1};
  auto c4 = oct_complex(oct_uniform(2, 2, 2), ids);
  CHECK(c4.num_vertices() == 4);
  int twos = 0;
  int ones = 0;
  for (VertexMask e : c4.edges()) {
    twos += popcount(e) == 2;
    ones += popcount(e) == 1;
  }
  CHECK(twos == 4);
  CHECK(ones == 4);
  CHECK(c4.edges().size() == 9);

  for (int k = 1; k <= 4; ++k) {
    std::vector<PartIndex> p;
    for (int i = 0; i < k; ++i) p.push_back(i);
    auto simplex = oct_complex(oct_uniform(k, k, 1), p);
    CHECK(simplex.edges().size() == (std::size_t{1} << k));
  }

  auto tailed = oct_complex(OctSpec{2, {1, 1}, true}, ids);
  CHECK(tailed.num_vertices() == 3);
  CHECK(tailed.edges().size() == 6);

  auto lower = oct_complex(OctSpec{2, {2, 2, 2}, false}, {0, 1, 2});
  CHECK(lower.max_edge_size() == 2);
  CHECK(oct_complex(OctSpec{3, {2, 0, 1}, false}, {0, 1, 2}).num_vertices() == 3);
  CHECK_THROWS_AS(oct_complex(OctSpec{2, {2, 1}, true}, ids), DomainError);
}

TEST_CASE("oct_count: fast path, 1-graph squares and naive oracle") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    auto g1 = random_graph<Q>(sized({5}), 1, rng);
    Q one = oct_count(g1, OctSpec{1, {1}, false});
    CHECK(oct_count(g1, OctSpec{1, {2}, false}) == one * one);
  }
  for (int t = 0; t < 10; ++t) {
    auto g = random_graph<Q>(sized({4, 4}), 2, rng, WeightKind::SmallRational, 1.0, true);
    auto spec = oct_uniform(2, 2, 2);
    CHECK(oct_count(g, spec) == hom_weight_naive(oct_complex_for(g, spec), g));
  }
  for (int t = 0; t < 10; ++t) {
    auto g = random_graph<Q>(sized({3, 2, 3}), 3, rng, WeightKind::SmallRational, 0.9, true);
    std::vector<int> a{static_cast<int>(rng() % 3), static_cast<int>(rng() % 3), 2};
    OctSpec spec{3, a, false};
    CHECK(oct_count(g, spec) == hom_weight(oct_complex_for(g, spec), g));
    OctSpec tail{3, {1, a[1], a[0] == 0 ? 1 : a[0]}, true};
    CHECK(oct_count(g, tail) == hom_weight_naive(oct_complex_for(g, tail), g));
  }
}

TEST_CASE("octahedron counts are Cauchy-Schwarz monotone") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    int k = 2 + static_cast<int>(rng() % 2);
    std::vector<std::pair<PartIndex, int>> parts;
    for (int i = 0; i < k; ++i) parts.emplace_back(i, 2 + static_cast<int>(rng() % 2));
    auto g = random_graph<Q>(parts, k, rng, WeightKind::SmallRational, 1.0, true);
    for (int i = 0; i < k; ++i) {
      std::vector<int> rest(static_cast<std::size_t>(k), 0);
      for (int j = 0; j < k; ++j) rest[static_cast<std::size_t>(j)] = static_cast<int>(rng() % 3);
      OctSpec sa{k, rest, false};
      OctSpec sb = sa;
      OctSpec sc = sa;
      sa.a[static_cast<std::size_t>(i)] = 0;
      sb.a[static_cast<std::size_t>(i)] = 1;
      sc.a[static_cast<std::size_t>(i)] = 2;
      Q a = oct_count(g, sa);
      Q b = oct_count(g, sb);
      Q c = oct_count(g, sc);
      CHECK(c * a >= b * b);
    }
  }
}

TEST_CASE("counts multiply over complexes on disjoint parts") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    auto g = random_graph<Q>(sized({3, 3, 2, 2}), 2, rng, WeightKind::SmallRational, 1.0, true);
    auto h = complex_of({{0, {0, 1}}, {1, {2}}, {2, {3}}, {3, {4, 5}}}, {{0, 2}, {1, 2}, {3, 4}, {3, 5}});
    auto h1 = complex_of({{0, {0, 1}}, {1, {2}}}, {{0, 2}, {1, 2}});
    auto h2 = complex_of({{2, {3}}, {3, {4, 5}}}, {{3, 4}, {3, 5}});
    CHECK(hom_weight(h, g) == hom_weight(h1, g) * hom_weight(h2, g) / g.empty_weight());
  }
}

TEST_CASE("sampling estimator") {
  auto g = complete_graph<double>(sized({6, 6}), 2);
  g.set_layer({0, 1}, std::vector<double>(36, 0.3));
  auto edge = complex_of({{0, {0}}, {1, {1}}}, {{0, 1}});
  auto e = hom_estimate(edge, g, 500, 9);
  CHECK(e.value == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(e.std_error < 1e-12);
  CHECK(e.samples == 500);

  std::mt19937_64 rng(8);
  for (int t = 0; t < 5; ++t) {
    auto r = random_graph<double>(sized({6, 6, 6}), 3, rng, WeightKind::Unit);
    auto tri = complex_of({{0, {0}}, {1, {1}}, {2, {2}}}, {{0, 1, 2}});
    double exact = hom_weight(tri, r);
    auto est = hom_estimate(tri, r, 10000, 100 + static_cast<std::uint64_t>(t));
    CHECK(std::fabs(est.value - exact) <= 4 * est.std_error);
    auto again = hom_estimate(tri, r, 10000, 100 + static_cast<std::uint64_t>(t));
    CHECK(again.value == est.value);
    CHECK(again.std_error == est.std_error);
  }

  auto r = random_graph<double>(sized({6, 6, 6}), 3, rng, WeightKind::Unit);
  auto c4 = oct_complex_for(r, OctSpec{2, {2, 2, 0}, false});
  double exact = hom_weight(c4, r);
  double total = 0;
  for (std::uint64_t s = 0; s < 100; ++s) total += hom_estimate(c4, r, 10000, s).value;
  CHECK(std::fabs(total / 100 - exact) <= 1e-2);
  CHECK_THROWS_AS(hom_estimate(c4, r, 0, 1), DomainError);
}
