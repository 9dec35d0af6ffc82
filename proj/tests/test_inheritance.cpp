#include <doctest.h>

#include "hyperreg/inheritance.hpp"
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

std::vector<Q> bernoulli(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Q> out(n);
  for (Q& w : out) w = coin(rng) ? 1 : 0;
  return out;
}

// G with random V_1..V_k and (k+1) slots over a complete Γ.
WeightedGraph<Q> inheritance_instance(int k, int n, double p, std::mt19937_64& rng) {
  std::vector<std::pair<PartIndex, int>> parts;
  for (int i = 0; i <= k; ++i) parts.emplace_back(i, n);
  auto g = complete_graph<Q>(parts, k + 1);
  SlotMask top = g.all_parts();
  g.set_slot(top, bernoulli(g.slot_size(top), p, rng));
  g.set_slot(top & ~SlotMask{1}, bernoulli(g.slot_size(top & ~SlotMask{1}), p, rng));
  return g;
}

}  // namespace

TEST_CASE("hypotheses on complete and identical graphs") {
  auto gamma = complete_graph<Q>(sized({3, 3, 3}), 3);
  DensityGraph<Q> p({0, 1, 2});
  auto r = check_inh_hypotheses(gamma, gamma, p, Q(0), Q(1), Q(1), Q(0));
  CHECK(r.inh1);
  CHECK(r.inh1_worst == 0);
  CHECK(r.inh1_checked == 9 + 27);
  CHECK(r.inh2);
  CHECK(r.inh3);
  CHECK(r.inh4);
  CHECK(r.all());
}

TEST_CASE("hypothesis statuses match recomputed counts") {
  std::mt19937_64 rng(31);
  auto gamma = random_graph<Q>(sized({2, 2, 2, 2}), 4, rng, WeightKind::SmallRational, 1.0, true);
  // Keep Γ strictly positive so that predicted counts never vanish.
  for (auto [m, data] : gamma.layers()) {
    for (Q& w : data) w = (w + 1) / 2;
    gamma.set_slot(m, data);
  }
  auto g = gamma;
  SlotMask top = gamma.all_parts();
  SlotMask rest = top & ~SlotMask{1};
  auto lt = *gamma.layer(top);
  for (Q& w : lt) w *= Q(static_cast<long long>(rng() % 3), 2) > 1 ? Q(1) : Q(1, 2);
  g.set_slot(top, lt);
  auto lr = *gamma.layer(rest);
  for (Q& w : lr) w *= Q(3, 4);
  g.set_slot(rest, lr);
  DensityGraph<Q> p({0, 1, 2, 3});
  p.set({0, 1}, Q(3, 4));
  p.set({}, Q(1, 2));
  Q eps(1, 10);
  Q eta(1, 2);
  auto r = check_inh_hypotheses(g, gamma, p, eps, Q(3, 4), Q(3, 4), eta);

  Q worst(0);
  auto visit = [&](const OctSpec& spec) {
    auto rc = oct_complex_for(gamma, spec);
    Q count = hom_weight_naive(rc, gamma, CountOptions{2'000'000'000});
    Q prod(1);
    for (VertexMask e : rc.edges()) {
      std::vector<PartIndex> idx;
      for (int x = 0; x < rc.num_vertices(); ++x) {
        if (e >> x & 1U) idx.push_back(rc.part_of(x));
      }
      prod *= p.get(idx);
    }
    Q predicted = gamma.empty_weight() / p.get(std::vector<PartIndex>{}) * prod;
    Q dev = count / predicted - 1;
    if (dev < 0) dev = -dev;
    if (dev > worst) worst = dev;
  };
  for (int a = 0; a < 27; ++a) visit(OctSpec{4, {1, a / 9, a / 3 % 3, a % 3}, true});
  for (int b = 0; b < 81; ++b) visit(OctSpec{4, {b / 27, b / 9 % 3, b / 3 % 3, b % 3}, false});
  CHECK(r.inh1_worst == worst);
  CHECK(r.inh1 == (worst <= eta));
  CHECK(r.inh2);

  auto spliced = replace_layer(gamma, 4, g);
  Q g1 = hom_weight_naive(oct_complex_for(spliced, oct_uniform(4, 4, 1)), spliced);
  Q gam1 = hom_weight_naive(oct_complex_for(gamma, oct_uniform(4, 4, 1)), gamma);
  Q g2 = hom_weight_naive(oct_complex_for(spliced, oct_uniform(4, 4, 2)), spliced, CountOptions{2'000'000'000});
  Q gam2 = hom_weight_naive(oct_complex_for(gamma, oct_uniform(4, 4, 2)), gamma, CountOptions{2'000'000'000});
  Q dens = g1 / gam1 - Q(3, 4);
  if (dens < 0) dens = -dens;
  bool inh3 = dens <= eps && g2 <= (pow_int(Q(3, 4), 16) + eps) * gam2;
  CHECK(r.inh3 == inh3);
  REQUIRE(r.inh3_verdict);
  CHECK(r.inh3_verdict->g_oct2 == g2);

  auto g_bad = g;
  g_bad.set_layer({1, 2}, std::vector<Q>(4, Q(0)));
  CHECK_FALSE(check_inh_hypotheses(g_bad, gamma, p, eps, Q(3, 4), Q(3, 4), eta).inh2);
}

TEST_CASE("constant instances: every vertex inherits at dd'") {
  auto gamma = complete_graph<Q>(sized({4, 3, 3}), 3);
  auto g = gamma;
  Q d(1, 2);
  Q dp(2, 3);
  g.set_layer({1, 2}, std::vector<Q>(9, d));
  g.set_layer({0, 1, 2}, std::vector<Q>(36, dp));
  auto s = inherit_scan(g, gamma, Q(1, 100), d, dp);
  CHECK(s.good_set.size() == 4);
  CHECK(s.good_vnorm == s.part_vnorm);
  CHECK(s.bad_fraction == 0);
  for (const auto& vs : s.per_vertex) {
    CHECK(vs.measured.density == d * dp);
    CHECK(vs.anchored.density_slack == Q(1, 100));
  }
  CHECK_FALSE(s.asserted);
}

TEST_CASE("a vertex with a zeroed (k+1)-link fails alone") {
  auto gamma = complete_graph<Q>(sized({4, 3, 3}), 3);
  auto g = gamma;
  g.set_layer({1, 2}, std::vector<Q>(9, Q(1, 2)));
  std::vector<Q> top(36, Q(1));
  for (int i = 0; i < 9; ++i) top[static_cast<std::size_t>(2 * 9 + i)] = 0;
  g.set_layer({0, 1, 2}, top);
  auto s = inherit_scan(g, gamma, Q(1, 10), Q(1, 2), Q(1));
  CHECK(s.good_set == std::vector<int>{0, 1, 3});
  CHECK_FALSE(s.per_vertex[2].good);
  CHECK(s.per_vertex[2].measured.density == 0);
  CHECK(s.good_vnorm == Q(3, 4));
}

TEST_CASE("random scan reports without asserting") {
  std::mt19937_64 rng(32);
  auto g = inheritance_instance(2, 10, 0.7, rng);
  auto gamma = complete_graph<Q>(sized({10, 10, 10}), 3);
  DensityGraph<Q> p({0, 1, 2});
  InheritHypotheses<Q> hyp{Q(1, 100), Q(0), p};
  auto s = inherit_scan(g, gamma, Q(1, 5), Q(7, 10), Q(7, 10), std::optional<InheritHypotheses<Q>>(hyp));
  CHECK(s.hypothesis_report.has_value());
  CHECK_FALSE(s.threshold_ok);
  CHECK_FALSE(s.asserted);
  CHECK(s.guarantee_holds);
  CHECK(s.bad_fraction >= 0);
  CHECK(s.bad_fraction <= 1);
}

TEST_CASE("good sets grow with eps'") {
  std::mt19937_64 rng(33);
  auto g = inheritance_instance(2, 6, 0.5, rng);
  auto gamma = complete_graph<Q>(sized({6, 6, 6}), 3);
  std::vector<int> prev;
  for (Q e : {Q(1, 1000), Q(1, 100), Q(1, 20), Q(1, 5), Q(1, 2)}) {
    auto s = inherit_scan(g, gamma, e, Q(1, 2), Q(1, 2));
    CHECK(std::includes(s.good_set.begin(), s.good_set.end(), prev.begin(), prev.end()));
    prev = s.good_set;
  }
}

TEST_CASE("link averages reproduce octahedron counts one level up") {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 5; ++t) {
    auto g = random_graph<Q>(sized({3, 2, 3}), 3, rng, WeightKind::SmallRational, 1.0, true);
    for (int a = 0; a < 9; ++a) {
      std::vector<int> av{a / 3, a % 3};
      Q avg(0);
      for (int v = 0; v < 3; ++v) avg += oct_count(link(g, 0, v), OctSpec{2, av, false});
      avg /= 3;
      CHECK(avg == oct_count(g, OctSpec{3, {1, av[0], av[1]}, false}));
    }
  }
}
