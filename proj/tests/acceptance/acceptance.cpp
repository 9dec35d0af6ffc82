// Acceptance run: one PASS/FAIL line per criterion, exit status = number of failures.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "../support.hpp"
#include "hyperreg/ensemble.hpp"
#include "hyperreg/gpe.hpp"
#include "hyperreg/homcount.hpp"
#include "hyperreg/inheritance.hpp"
#include "hyperreg/io.hpp"
#include "hyperreg/regularity.hpp"
#include "hyperreg/thc.hpp"

using namespace hyperreg;
using namespace hyperreg::testing;
using Q = Rational;

namespace {

// Pinned thresholds.
constexpr int kOracleInstances = 500;
constexpr double kOracleSeconds = 60;
constexpr int kIdentityInstances = 200;
constexpr int kInvariantInstances = 1000;
constexpr int kRandomComposition = 100;
constexpr double kCompositionSeconds = 300;
constexpr int kSeeds = 100;
constexpr int kSeedsNeeded = 90;
constexpr int kInheritN = 16;
const Q kInheritEps(1, 5);
const Q kInheritMaxBad(1, 5);
constexpr int kGpeN = 24;
const Q kGpeMaxRelError(3, 20);
const Q kGpeEtaK(3, 10);
constexpr double kGpeSeconds = 600;
constexpr int kThcMaxCstar = 8;
constexpr int kThcN = 400;
constexpr double kThcP = 0.6;
constexpr double kThcEta = 0.2;
constexpr int kThcCstar = 3;
constexpr int kThcSeeds = 20;
constexpr double kThcMinFrequency = 0.9;
constexpr double kEnsembleSeconds = 30;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<std::pair<PartIndex, int>> uniform_parts(int parts, int n) {
  std::vector<std::pair<PartIndex, int>> out;
  for (int i = 0; i < parts; ++i) out.emplace_back(i, n);
  return out;
}

std::vector<Q> bernoulli(std::size_t n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<Q> out(n);
  for (Q& w : out) w = coin(rng) ? 1 : 0;
  return out;
}

DensityGraph<Q> constant_density(const std::vector<PartIndex>& ids, int cap, const Q& value) {
  DensityGraph<Q> p(ids);
  for (SlotMask m = 1; m < (SlotMask{1} << ids.size()); ++m)
    if (popcount(m) <= cap) p.set_slot(m, value);
  return p;
}

PartiteComplex triangle() {
  return complex_of({{0, {0}}, {1, {1}}, {2, {2}}}, {{0, 1}, {1, 2}, {0, 2}});
}

// ---------------------------------------------------------------- 1

void oracle_equivalence() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  int done = 0, agreed = 0;
  while (done < kOracleInstances) {
    int nparts = 1 + static_cast<int>(rng() % 4);
    std::vector<std::pair<PartIndex, int>> parts;
    std::vector<PartIndex> ids;
    for (int p = 0; p < nparts; ++p) {
      parts.emplace_back(p * 2 + 1, 1 + static_cast<int>(rng() % 4));
      ids.push_back(p * 2 + 1);
    }
    int cap = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(nparts, 3)));
    auto g = random_graph<Q>(parts, cap, rng, done % 3 == 0 ? WeightKind::Binary : WeightKind::SmallRational, 0.8,
                             done % 2 == 0);
    auto h = random_complex(ids, 2, rng, cap);
    if (h.num_vertices() > 6) continue;
    ++done;
    if (hom_weight(h, g) == hom_weight_naive(h, g)) ++agreed;
  }
  double sec = seconds_since(t0);
  report("1 (oracle equivalence)", agreed == done && sec < kOracleSeconds,
         fmt("%d/%d instances agree exactly, %.1f s (limit %.0f s)", agreed, done, sec, kOracleSeconds));
}

// ---------------------------------------------------------------- 2

CandidateStack<Q> random_stack(std::mt19937_64& rng, int n) {
  auto gamma = complete_graph<Q>(uniform_parts(3, n), 2);
  auto g = random_graph<Q>(uniform_parts(3, n), 2, rng, WeightKind::SmallRational, 1.0);
  auto d = measured_relative_densities(g, gamma);
  return make_gpe_stack(triangle(), g, gamma, constant_density({0, 1, 2}, 2, Q(1)), d);
}

void exact_identities() {
  std::mt19937_64 rng(202);
  int chain = 0, chain_ok = 0;
  while (chain < kIdentityInstances) {
    std::vector<std::pair<PartIndex, int>> parts{{0, 1 + static_cast<int>(rng() % 3)},
                                                 {1, 1 + static_cast<int>(rng() % 3)},
                                                 {2, 1 + static_cast<int>(rng() % 3)}};
    auto g = random_graph<Q>(parts, 3, rng, WeightKind::SmallRational, 0.9, chain % 2 == 0);
    auto h = random_complex({0, 1, 2}, 2, rng, 3);
    if (h.num_vertices() > 6) continue;
    ++chain;
    auto gs = standard_construction(h, g);
    auto h1 = h.one_vertex_per_part();
    int x = static_cast<int>(rng() % static_cast<unsigned>(h.num_vertices()));
    VertexId xid = h.id(x);
    auto rest = h1.remove_vertices(VertexMask{1} << x);
    Q avg(0);
    int n = gs.size_of(xid);
    for (int v = 0; v < n; ++v) avg += hom_weight(rest, link(gs, xid, v));
    avg /= n;
    if (hom_weight(h, g) == avg) ++chain_ok;
  }

  int std_ok = 0;
  for (int t = 0; t < kIdentityInstances; ++t) {
    std::vector<std::pair<PartIndex, int>> parts{{0, 2 + static_cast<int>(rng() % 2)},
                                                 {1, 2 + static_cast<int>(rng() % 2)},
                                                 {2, 2 + static_cast<int>(rng() % 2)}};
    auto g = random_graph<Q>(parts, 3, rng, WeightKind::SmallRational, 0.9, t % 2 == 0);
    auto h = random_complex({0, 1, 2}, 2, rng, 3);
    auto gs = standard_construction(h, g);
    auto h1 = h.one_vertex_per_part();
    std::vector<int> phi;
    for (int x = 0; x < h.num_vertices(); ++x)
      phi.push_back(static_cast<int>(rng() % static_cast<unsigned>(g.size_of(h.part_of(x)))));
    if (map_weight(h, g, phi) == map_weight(h1, gs, phi)) ++std_ok;
  }

  // The identity is stated for g(∅) = 1; with a general empty weight it reads
  // g(∅)·Oct_1(2) = Oct_1(1)².
  int oct_ok = 0, oct_scaled_ok = 0;
  for (int t = 0; t < kIdentityInstances; ++t) {
    auto kind = t % 2 ? WeightKind::Unit : WeightKind::SmallRational;
    auto g1 = random_graph<Q>({{0, 1 + static_cast<int>(rng() % 8)}}, 1, rng, kind, 1.0);
    Q one = oct_count(g1, OctSpec{1, {1}, false});
    if (oct_count(g1, OctSpec{1, {2}, false}) == one * one) ++oct_ok;
    auto ge = random_graph<Q>({{0, 1 + static_cast<int>(rng() % 8)}}, 1, rng, kind, 1.0);
    ge.set_empty_weight(Q(static_cast<long long>(rng() % 5), 4));
    Q e1 = oct_count(ge, OctSpec{1, {1}, false});
    if (ge.empty_weight() * oct_count(ge, OctSpec{1, {2}, false}) == e1 * e1) ++oct_scaled_ok;
  }

  int mono_ok = 0;
  for (int t = 0; t < kIdentityInstances; ++t) {
    auto s = random_stack(rng, 2 + static_cast<int>(rng() % 2));
    bool ok = stack_monotone(s);
    std::vector<VertexId> order{0, 1, 2};
    std::shuffle(order.begin(), order.end(), rng);
    for (VertexId x : order) {
      s = update(s, x, static_cast<int>(rng() % static_cast<unsigned>(s.C[0].size_of(x))));
      ok = ok && stack_monotone(s);
    }
    if (ok) ++mono_ok;
  }
  int n = kIdentityInstances;
  report("2 (exact identities)", chain_ok == n && std_ok == n && oct_ok == n && oct_scaled_ok == n && mono_ok == n,
         fmt("chain rule %d/%d, standard construction %d/%d, Oct_1(2)=Oct_1(1)^2 %d/%d "
             "(scaled by g(empty) %d/%d), stack monotone %d/%d",
             chain_ok, n, std_ok, n, oct_ok, n, oct_scaled_ok, n, mono_ok, n));
}

// ---------------------------------------------------------------- 3

void invariant_suite() {
  std::mt19937_64 rng(303);
  int cs_bad = 0, min_bad = 0;
  for (int t = 0; t < kInvariantInstances; ++t) {
    int k = 2 + t % 2;
    std::vector<std::pair<PartIndex, int>> parts;
    for (int i = 0; i < k; ++i) parts.emplace_back(i, 1 + static_cast<int>(rng() % (k == 2 ? 4 : 2)));
    auto g = random_graph<Q>(parts, k, rng, t % 3 == 0 ? WeightKind::Binary : WeightKind::SmallRational, 0.9, true);
    auto triples = admissible_triples(k);
    if (!cs_lower_bound_check(g, triples[rng() % triples.size()]).holds) ++cs_bad;
    auto mr = minimality_report(g);
    if (!mr.infinite && mr.defect < 0) ++min_bad;
  }

  auto draw = [&](unsigned moment, int den) {
    while (true) {
      Q eps(static_cast<long long>(1 + rng() % 20), den);
      Q d(static_cast<long long>(1 + rng() % 8), 8);
      if (auto dist = sample_admissible_dist(rng, eps, d, moment)) return std::make_tuple(*dist, eps, d);
    }
  };
  int dist_bad = 0, dist_hyp = 0, conc1_bad = 0, conc2_bad = 0, conc_hyp = 0;
  for (int t = 0; t < kInvariantInstances; ++t) {
    auto [dist, eps, d] = draw(2, 100);
    auto r = ecs_dist(dist, eps, d);
    dist_hyp += r.hypotheses_ok;
    if (!r.hypotheses_ok || !r.verified()) ++dist_bad;
  }
  for (int t = 0; t < kInvariantInstances; ++t) {
    auto [dist, eps, d] = draw(2, 100);
    auto r = ecs_conc(dist, eps, d, 1);
    conc_hyp += r.hypotheses_ok;
    if (!r.hypotheses_ok || !r.verified()) ++conc1_bad;
  }
  for (int t = 0; t < kInvariantInstances; ++t) {
    unsigned tt = 2 + static_cast<unsigned>(t % 2);
    auto [dist, eps, d] = draw(1U << tt, 1000);
    auto r = ecs_conc(dist, eps, d, tt);
    conc_hyp += r.hypotheses_ok;
    if (!r.hypotheses_ok || !r.verified()) ++conc2_bad;
  }
  int total = cs_bad + min_bad + dist_bad + conc1_bad + conc2_bad;
  report("3 (invariant suite)", total == 0,
         fmt("violations over %d instances each: CS bound %d, minimality defect %d, ECS interval %d, "
             "ECS mass t=1 %d, t>=2 %d (%d/%d sampled instances met the hypotheses)",
             kInvariantInstances, cs_bad, min_bad, dist_bad, conc1_bad, conc2_bad, dist_hyp + conc_hyp,
             3 * kInvariantInstances));
}

// ---------------------------------------------------------------- 4

// ε at which G is (ε, d)-regular relative to Γ for the given d.
Q tight_eps(const WeightedGraph<Q>& g, const WeightedGraph<Q>& gamma, const Q& d) {
  auto v = is_regular(g, gamma, Q(0), std::optional<Q>(d));
  Q dev = v.density - d;
  if (dev < 0) dev = -dev;
  Q over = v.oct_ratio - pow_int(d, 1ULL << g.num_parts());
  return std::max({dev, over, Q(0)});
}

void composition_checks() {
  auto t0 = Clock::now();
  int exact = 0, exact_ok = 0;
  for (int k : {2, 3}) {
    auto gamma = complete_graph<Q>(uniform_parts(k, 3), k);
    for (Q dp : {Q(1, 3), Q(1, 2), Q(2, 3)}) {
      for (int ell = 1; ell < k; ++ell) {
        auto g = gamma;
        g.set_slot((SlotMask{1} << ell) - 1, std::vector<Q>(g.slot_size((SlotMask{1} << ell) - 1), dp));
        auto sl = slicing_check(gamma, g, ell, Q(0), dp, Q(0));
        bool ok = sl.hypotheses_ok && sl.eps_out == 0 && sl.holds;
        for (const auto& cr : sl.ratios) ok = ok && (cr.degenerate || cr.ratio == cr.target);
        ++exact;
        exact_ok += ok;
      }
      auto top = gamma;
      top.set_slot(top.all_parts(), std::vector<Q>(top.slot_size(top.all_parts()), dp));
      auto sr = subregular_check(top, gamma, Q(0), dp, Q(0));
      bool ok = sr.hypotheses_ok && sr.eps_out == 0 && sr.holds;
      for (const auto& cr : sr.ratios) ok = ok && cr.ratio == cr.target;
      ++exact;
      exact_ok += ok;
    }
  }

  std::mt19937_64 rng(404);
  int rnd_fail = 0, sl_hyp = 0, sr_hyp = 0, sl_vacuous = 0;
  for (int t = 0; t < kRandomComposition; ++t) {
    int k = 2 + t % 2;
    std::bernoulli_distribution coin(0.8);
    auto gamma = complete_graph<Q>(uniform_parts(k, 6), k);
    auto dense = [&](std::size_t n) {
      std::vector<Q> out(n);
      for (Q& w : out) w = coin(rng) ? 1 : 0;
      return out;
    };

    // Subregularity: G is Γ with a dense random top layer.
    auto g = gamma;
    SlotMask top = g.all_parts();
    g.set_slot(top, dense(g.slot_size(top)));
    Q d = is_regular(g, gamma, Q(0)).density;
    auto sr = subregular_check(g, gamma, tight_eps(g, gamma, d), d, Q(0));
    sr_hyp += sr.hypotheses_ok;
    if (!sr.holds) ++rnd_fail;

    // Slicing: G is Γ with a dense random layer on the first l parts.
    int ell = k - 1;
    SlotMask slot = (SlotMask{1} << ell) - 1;
    auto gs = gamma;
    gs.set_slot(slot, dense(gs.slot_size(slot)));
    std::vector<PartIndex> first(gs.part_ids().begin(), gs.part_ids().begin() + ell);
    auto gi = induced(gs, first), gammai = induced(gamma, first);
    Q ds = is_regular(gi, gammai, Q(0)).density;
    auto sl = slicing_check(gamma, gs, ell, tight_eps(gi, gammai, ds), ds, Q(0));
    sl_hyp += sl.hypotheses_ok;
    sl_vacuous += sl.vacuous;
    if (!sl.holds) ++rnd_fail;
  }
  double sec = seconds_since(t0);
  report("4 (composition checks)", exact_ok == exact && rnd_fail == 0 && sec < kCompositionSeconds,
         fmt("constructed %d/%d exact; random %d instances: %d failures (subregular hypotheses met %d, "
             "slicing hypotheses met %d, %d of them vacuous), %.1f s (limit %.0f s)",
             exact_ok, exact, kRandomComposition, rnd_fail, sr_hyp, sl_hyp, sl_vacuous, sec, kCompositionSeconds));
}

// ---------------------------------------------------------------- 5

void inheritance_empirical() {
  int ok = 0;
  Q worst(0);
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::mt19937_64 rng(5000 + static_cast<std::uint64_t>(seed));
    auto gamma = complete_graph<Q>(uniform_parts(3, kInheritN), 3);
    auto g = gamma;
    SlotMask top = g.all_parts(), pair = top & ~SlotMask{1};
    g.set_slot(top, bernoulli(g.slot_size(top), rng));
    g.set_slot(pair, bernoulli(g.slot_size(pair), rng));
    // d from the pair layer, d′ the top layer's density relative to it.
    const auto& lp = *g.layer(pair);
    const auto& lt = *g.layer(top);
    Q pair_mass(0), top_mass(0);
    std::size_t np = lp.size();
    for (std::size_t i = 0; i < lt.size(); ++i) top_mass += lt[i] * lp[i % np];
    for (const Q& w : lp) pair_mass += w;
    Q d = pair_mass / static_cast<long long>(np);
    Q dp = top_mass / (pair_mass * kInheritN);
    auto s = inherit_scan(g, gamma, kInheritEps, d, dp);
    worst = std::max(worst, s.bad_fraction);
    if (s.bad_fraction <= kInheritMaxBad) ++ok;
  }
  report("5 (inheritance scan)", ok >= kSeedsNeeded,
         fmt("%d/%d seeds with bad fraction <= %s at eps'=%s (need %d), worst %.3f", ok, kSeeds,
             to_string(kInheritMaxBad).c_str(), to_string(kInheritEps).c_str(), kSeedsNeeded, to_double(worst)));
}

// ---------------------------------------------------------------- 6

void gpe_empirical() {
  auto t0 = Clock::now();
  Ensemble e = make_valid_ensemble(2, 2, 18, 22, {Q(1, 2), Q(1, 4)}, kGpeEtaK);
  int count_ok = 0, embed_ok = 0;
  Q worst(0);
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::mt19937_64 rng(6000 + static_cast<std::uint64_t>(seed));
    auto gamma = complete_graph<Q>(uniform_parts(3, kGpeN), 2);
    auto g = gamma;
    for (SlotMask m = 1; m < 8; ++m)
      if (popcount(m) <= 2) g.set_slot(m, bernoulli(g.slot_size(m), rng));
    auto s = make_gpe_stack(triangle(), g, gamma, constant_density({0, 1, 2}, 2, Q(1)),
                            measured_relative_densities(g, gamma));
    auto c = gpe_count(s, e, 2);
    worst = std::max(worst, c.rel_error);
    if (!c.degenerate && c.rel_error <= kGpeMaxRelError) ++count_ok;
    EmbedOptions opts;
    opts.exhaustive = true;
    opts.sample = false;
    auto r = greedy_embed(s, e, rng, opts);
    if (r.exhaustive_holds && *r.exhaustive_holds) ++embed_ok;
  }
  double sec = seconds_since(t0);
  report("6 (GPE counting)", count_ok >= kSeedsNeeded && embed_ok == kSeeds && sec < kGpeSeconds,
         fmt("rel_error <= %s in %d/%d seeds (need %d, worst %.4f); exhaustive lower bound at eta_k=%s held in "
             "%d/%d; %.1f s (limit %.0f s)",
             to_string(kGpeMaxRelError).c_str(), count_ok, kSeeds, kSeedsNeeded, to_double(worst),
             to_string(kGpeEtaK).c_str(), embed_ok, kSeeds, sec, kGpeSeconds));
}

// ---------------------------------------------------------------- 7

void thc_checks(const std::filesystem::path& fixtures) {
  auto gamma = complete_graph<Q>(uniform_parts(3, 2), 2);
  auto p = constant_density({0, 1, 2}, 2, Q(1));
  int full_ok = 0;
  for (int c = 1; c <= kThcMaxCstar; ++c) {
    auto v = is_thc_full(gamma, p, Q(0), c);
    if (v.passes && v.worst_deviation == 0) ++full_ok;
  }
  report("7a (complete graph is THC)", full_ok == kThcMaxCstar,
         fmt("passes at eta=0 with zero deviation for %d/%d values of c* in 1..%d", full_ok, kThcMaxCstar,
             kThcMaxCstar));

  // Path on six vertices placed in three classes so parts stay above n/ln n.
  auto pattern = complex_from_json(read_json_file(fixtures / "path6_3class.json"));
  int passed = 0;
  bool parts_ok = true, degenerate = false;
  double worst = 0;
  for (int seed = 1; seed <= kThcSeeds; ++seed) {
    RandomThcOptions opts;
    opts.trials = 1;
    opts.seed = static_cast<std::uint64_t>(seed);
    auto rep = random_thc_experiment({2, kThcN, kThcP, static_cast<std::uint64_t>(seed)}, pattern,
                                     balanced_partition(kThcN, pattern.part_indices()), kThcEta, kThcCstar, opts);
    parts_ok = parts_ok && rep.parts_ok;
    degenerate = degenerate || rep.degenerate;
    for (const auto& t : rep.trials) {
      passed += t.passed;
      worst = std::max(worst, t.worst_deviation);
    }
  }
  double freq = static_cast<double>(passed) / kThcSeeds;
  report("7b (random graph THC walk)", freq >= kThcMinFrequency && parts_ok && !degenerate,
         fmt("G(%d, %.1f), 6-vertex path, eta=%.1f, c*=%d: %d/%d seeds passed, frequency %.2f (need %.2f), "
             "worst deviation %.3f, parts_ok %s",
             kThcN, kThcP, kThcEta, kThcCstar, passed, kThcSeeds, freq, kThcMinFrequency, worst,
             parts_ok ? "yes" : "no"));
}

// ---------------------------------------------------------------- 8

void ensemble_round_trip() {
  auto t0 = Clock::now();
  int built = 0, valid = 0, probes = 0, flipped = 0;
  Scaled bump(Q(1) + Q(1, 1LL << 30));
  for (int k : {2, 3})
    for (int Delta : {2, 3})
      for (int cs : {9, 13})
        for (int hs : {20, 40}) {
          std::vector<Q> delta(static_cast<std::size_t>(k), Q(1, 2));
          Ensemble base = make_valid_ensemble(k, Delta, cs, hs, delta, Q(1, 10));
          ++built;
          if (check_valid_ensemble(base).failing().empty()) ++valid;
          for (const EnsembleParam& p : ensemble_params(base)) {
            ParamBound b = tightest_upper_bound(base, p);
            if (!b.bounded) continue;
            Ensemble e = base;
            param_value(e, p) = b.bound * bump;
            auto failing = check_valid_ensemble(e).failing();
            ++probes;
            if (failing.size() == 1 && failing[0] == b.clause) ++flipped;
          }
        }
  double sec = seconds_since(t0);
  report("8 (ensemble round trip)", valid == built && flipped == probes && sec < kEnsembleSeconds,
         fmt("%d/%d built ensembles valid; %d/%d single-parameter perturbations flip exactly their clause; "
             "%.1f s (limit %.0f s)",
             valid, built, flipped, probes, sec, kEnsembleSeconds));
}

}  // namespace

int main(int argc, char** argv) {
  std::filesystem::path fixtures = argc > 1 ? argv[1] : "fixtures";
  std::vector<std::pair<std::string, std::function<void()>>> steps{
      {"1", oracle_equivalence},   {"2", exact_identities},    {"3", invariant_suite},
      {"4", composition_checks},   {"5", inheritance_empirical}, {"6", gpe_empirical},
      {"7", [&] { thc_checks(fixtures); }}, {"8", ensemble_round_trip}};
  std::string only = argc > 2 ? argv[2] : "";
  for (auto& [id, fn] : steps) {
    if (!only.empty() && only.find(id) == std::string::npos) continue;
    try {
      fn();
    } catch (const std::exception& ex) {
      report(id, false, std::string("threw: ") + ex.what());
    }
  }
  return failures;
}
