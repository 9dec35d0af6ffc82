#include <doctest.h>

#include <cmath>

#include "hyperreg/thc.hpp"
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

DensityGraph<Q> constant_density(const std::vector<PartIndex>& ids, int k, const Q& value) {
  DensityGraph<Q> p(ids);
  for (SlotMask m = 1; m < (SlotMask{1} << ids.size()); ++m)
    if (popcount(m) == k) p.set_slot(m, value);
  return p;
}

PartiteComplex path3() {
  return complex_of({{0, {0}}, {1, {1}}, {2, {2}}}, {{0, 1}, {1, 2}});
}

}  // namespace

TEST_CASE("degeneracy counters on a path") {
  auto h = path3();
  // dom = {x, y}: only y meets z.
  CHECK(pi_hits(h, 0b011, 0b100) == 1);
  CHECK(pi_hits(h, 0b001, 0b100) == 0);
  CHECK(pi_hits(h, 0b001, 0b110) == 1);
  CHECK(vdeg(h) == 1);
  CHECK(max_degree(h) == 2);
  CHECK(degk(h, 2) == 1);
}

TEST_CASE("vdeg of a simplex and pi against brute force") {
  for (int k = 2; k <= 5; ++k) {
    std::map<PartIndex, std::vector<VertexId>> parts;
    std::vector<VertexId> all;
    for (int i = 0; i < k; ++i) {
      parts[i] = {i};
      all.push_back(i);
    }
    auto h = complex_of(parts, {all});
    CHECK(vdeg(h) == k - 1);
  }
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    auto h = random_complex({0, 1, 2, 3}, 2, rng, 3);
    int n = h.num_vertices();
    int vd = vdeg(h);
    for (int i = 0; i <= n; ++i) {
      VertexMask dom = initial_segment(h, i);
      for (VertexMask e : h.edges()) {
        if (e == 0 || (e & dom)) continue;
        int brute = 0;
        for (int x = 0; x < n; ++x) {
          if (!(dom >> x & 1U)) continue;
          bool hit = false;
          for (VertexMask f : h.edges())
            if ((f >> x & 1U) && f != (VertexMask{1} << x) && ((f & ~(VertexMask{1} << x)) & ~e) == 0) hit = true;
          brute += hit;
        }
        CHECK(pi_hits(h, dom, e) == brute);
        CHECK(pi_hits(h, dom, e) <= vd);
      }
    }
  }
}

TEST_CASE("blow-ups and families") {
  auto shape = complete_shape({0, 1}, 2);
  auto c4 = blowup(shape, {0b11}, {2, 2});
  CHECK(c4.num_vertices() == 4);
  CHECK(c4.edges().size() == 1 + 4 + 4);
  auto oct = blowup_family(shape, 2, 4, FamilyMode::Octahedra);
  auto all = blowup_family(shape, 2, 4, FamilyMode::Exhaustive);
  CHECK(!oct.empty());
  CHECK(all.size() >= oct.size());
  for (const auto& r : oct) CHECK(r.num_vertices() <= 4);
}

TEST_CASE("complete graph is THC with eta zero") {
  auto gamma = complete_graph<Q>(sized({2, 2, 2}), 2);
  auto p = constant_density({0, 1, 2}, 2, Q(1));
  for (int c : {2, 3, 4}) {
    auto v = is_thc_full(gamma, p, Q(0), c);
    CHECK(v.passes);
    CHECK(v.worst_deviation == 0);
    CHECK(v.counts_checked > 0);
  }
}

TEST_CASE("a zero layer fails THC1 with a failing path") {
  auto gamma = complete_graph<Q>(sized({2, 2, 2}), 2);
  gamma.set_layer({0, 1}, std::vector<Q>(4, Q(0)));
  auto p = constant_density({0, 1, 2}, 2, Q(1));
  auto v = is_thc_full(gamma, p, Q(1, 10), 2);
  CHECK_FALSE(v.passes);
  REQUIRE(!v.failing_path.empty());
  CHECK(!v.failing_path.back().clause.empty());
}

TEST_CASE("constant weights match the density product") {
  auto gamma = complete_graph<Q>(sized({3, 3, 3}), 2);
  for (SlotMask m : {SlotMask{3}, SlotMask{5}, SlotMask{6}})
    gamma.set_slot(m, std::vector<Q>(9, Q(1, 3)));
  auto p = constant_density({0, 1, 2}, 2, Q(1, 3));
  auto v = is_thc_full(gamma, p, Q(0), 3);
  CHECK(v.passes);
  CHECK(v.worst_deviation == 0);

  // With p off by a factor the deviation is the exact power mismatch.
  auto r = complete_shape({0, 1}, 2);
  auto off = constant_density({0, 1, 2}, 2, Q(1, 2));
  auto c = count_check(r, gamma, off, Scaled(Q(0)), 1);
  CHECK(c.measured == Q(1, 3));
  CHECK(c.predicted == Q(1, 2));
  CHECK(c.deviation == Q(1, 3));
  CHECK_FALSE(c.ok);
}

TEST_CASE("THC verdict is monotone in eta") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 6; ++trial) {
    auto gamma = random_graph<Q>(sized({2, 2, 2}), 2, rng, WeightKind::SmallRational, 1.0);
    gamma.erase_layer(1);
    gamma.erase_layer(2);
    gamma.erase_layer(4);
    auto p = constant_density({0, 1, 2}, 2, Q(1, 2));
    bool prev = false;
    for (Q eta : {Q(0), Q(1, 10), Q(1, 2), Q(2), Q(100)}) {
      bool now = is_thc_full(gamma, p, eta, 2).passes;
      if (prev) CHECK(now);
      prev = now;
    }
  }
}

TEST_CASE("full mode enforces its budget") {
  auto gamma = complete_graph<Q>(sized({2, 2, 2, 2, 2}), 2);
  auto p = constant_density({0, 1, 2, 3, 4}, 2, Q(1));
  CHECK_THROWS_AS(is_thc_full(gamma, p, Q(0), 2), BudgetError);
}

TEST_CASE("gatch hypothesis on a standard construction") {
  auto h = complex_of({{0, {0}}, {1, {1}}, {2, {2}}}, {{0, 1}, {1, 2}, {0, 2}});
  auto gamma = complete_graph<Q>(sized({3, 3, 3}), 2);
  auto p = constant_density({0, 1, 2}, 2, Q(1));
  auto rep = gatch_hypothesis(gamma, h, p, Scaled(Q(0)), 2, 2, FamilyMode::Octahedra);
  CHECK(rep.passes());
  CHECK(rep.worst_deviation == 0);

  // Remove one edge: the triangle count drops by exactly its share.
  auto g = gamma;
  std::vector<Q> layer(9, Q(1));
  layer[0] = 0;
  g.set_slot(0b011, layer);
  auto tri = hom_weight(h, g);
  CHECK(tri == Q(27 - 3, 27));
  auto r2 = gatch_hypothesis(g, h, p, Scaled(Q(1, 100)), 2, 2, FamilyMode::Octahedra);
  CHECK_FALSE(r2.counting_ok);
  auto r3 = gatch_hypothesis(g, h, p, Scaled(Q(1)), 2, 2, FamilyMode::Octahedra);
  CHECK(r3.passes());

  // A path misses the 02 slot, where Γ must be identically 1.
  auto path = complex_of({{0, {0}}, {1, {1}}, {2, {2}}}, {{0, 1}, {1, 2}});
  auto bad = gamma;
  bad.set_slot(0b101, layer);
  CHECK_FALSE(gatch_hypothesis(bad, path, p, Scaled(Q(1)), 2, 2, FamilyMode::Octahedra).structural_ok);
}

TEST_CASE("random hypergraph is deterministic and binomial") {
  RandomGraphSpec spec{3, 20, 0.3, 77};
  auto a = random_hypergraph(spec);
  auto b = random_hypergraph(spec);
  CHECK(a.edge_count() == b.edge_count());
  CHECK(a.has_edge({0, 1, 2}) == b.has_edge({2, 1, 0}));
  CHECK(a.possible_edges() == 1140);
  double mean = 1140 * 0.3;
  double sd = std::sqrt(1140 * 0.3 * 0.7);
  CHECK(std::abs(static_cast<double>(a.edge_count()) - mean) <= 4 * sd);

  CHECK(random_hypergraph({2, 10, 0.0, 1}).edge_count() == 0);
  CHECK(random_hypergraph({2, 10, 1.0, 1}).edge_count() == 45);
}

TEST_CASE("partite restriction of a random graph") {
  auto g = random_hypergraph({2, 12, 0.5, 3});
  auto part = balanced_partition(12, {0, 1, 2});
  auto w = to_partite<Q>(g, part);
  CHECK(w.num_parts() == 3);
  CHECK(w.size_of(0) + w.size_of(1) + w.size_of(2) == 12);
  const auto& p0 = part[0].second;
  const auto& p1 = part[1].second;
  for (std::size_t i = 0; i < p0.size(); ++i)
    for (std::size_t j = 0; j < p1.size(); ++j)
      CHECK(w.weight({{0, static_cast<int>(i)}, {1, static_cast<int>(j)}}) == (g.has_edge({p0[i], p1[j]}) ? 1 : 0));
}

TEST_CASE("random THC experiment at p = 1") {
  auto pattern = complex_of({{0, {0}}, {1, {1}}, {2, {2}}}, {{0, 1}, {1, 2}, {0, 2}});
  RandomThcOptions opts;
  opts.trials = 2;
  opts.seed = 4;
  auto rep = random_thc_experiment({2, 30, 1.0, 1}, pattern, balanced_partition(30, {0, 1, 2}), 0.1, 3, opts);
  REQUIRE(rep.trials.size() == 2);
  CHECK(rep.pass_frequency == 1.0);
  for (const auto& t : rep.trials) CHECK(t.worst_deviation == 0);
  CHECK(rep.d == 2);
}

TEST_CASE("random THC experiment with tiny n reports a degenerate sample size") {
  auto pattern = complex_of({{0, {0}}, {1, {1}}}, {{0, 1}});
  RandomThcOptions opts;
  opts.trials = 1;
  auto rep = random_thc_experiment({2, 6, 0.2, 2}, pattern, balanced_partition(6, {0, 1}), 0.1, 2, opts);
  CHECK(rep.n1 < 1);
  CHECK(rep.degenerate);
}
