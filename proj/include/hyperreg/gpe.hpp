#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hyperreg/degeneracy.hpp"
#include "hyperreg/density_graph.hpp"
#include "hyperreg/ensemble.hpp"
#include "hyperreg/parallel.hpp"
#include "hyperreg/regularity.hpp"
#include "hyperreg/thc.hpp"

namespace hyperreg {

// H is kept in one-vertex-per-part form: C[ℓ] has one part per unembedded
// vertex, indexed by its id.
template <class T>
struct CandidateStack {
  PartiteComplex H;
  std::vector<std::pair<VertexId, int>> phi;
  VertexMask dom = 0;  // embedded vertices, as local indices of H
  std::vector<WeightedGraph<T>> C;
  std::vector<DensityGraph<T>> D;       // current, already linked along φ
  std::vector<DensityGraph<T>> D_orig;  // at the trivial embedding

  int k() const { return static_cast<int>(C.size()) - 1; }
  int remaining() const { return H.num_vertices() - popcount(dom); }
  PartiteComplex rest() const { return H.remove_vertices(dom).one_vertex_per_part(); }
  // Unembedded vertex ids in H's order.
  std::vector<VertexId> pending() const {
    std::vector<VertexId> out;
    for (int x : H.order())
      if (!(dom >> x & 1U)) out.push_back(H.id(x));
    return out;
  }
};

// The getGPE stack: C[0] from Γ, C[k] from G, C[ℓ] with G's weights on
// arities ≤ ℓ and Γ's above; D[0] from P, D[ℓ] equal to d on arity ℓ and 1
// elsewhere. Standard construction throughout.
template <class T>
CandidateStack<T> make_gpe_stack(const PartiteComplex& h, const WeightedGraph<T>& g, const WeightedGraph<T>& gamma,
                                 const DensityGraph<T>& p, const DensityGraph<T>& d) {
  if (!same_parts(g, gamma)) throw DomainError("make_gpe_stack: G and Gamma have different parts");
  int k = gamma.arity_cap();
  if (k < 1) throw DomainError("make_gpe_stack: arity cap must be positive");
  CandidateStack<T> s;
  s.H = h.one_vertex_per_part();
  auto c0 = standard_construction(h, gamma);
  auto ck = standard_construction(h, g);
  s.C.push_back(c0);
  for (int l = 1; l <= k; ++l) {
    auto cl = ck;
    for (int a = l + 1; a <= k; ++a) cl = replace_layer(cl, a, c0);
    s.C.push_back(std::move(cl));
  }
  s.D.push_back(density_standard_construction(h, p));
  auto dk = density_standard_construction(h, d);
  for (int l = 1; l <= k; ++l) {
    DensityGraph<T> dl(dk.indices());
    for (const auto& [m, v] : dk.values())
      if (popcount(m) == l) dl.set_slot(m, v);
    s.D.push_back(std::move(dl));
  }
  s.D_orig = s.D;
  return s;
}

// Relative density of G on each slot e (1 ≤ |e| ≤ cap) against G[V_e] with
// the e-slot taken from Γ; 0 where that reference count vanishes.
template <class T>
DensityGraph<T> measured_relative_densities(const WeightedGraph<T>& g, const WeightedGraph<T>& gamma,
                                            const CountOptions& opts = {}) {
  DensityGraph<T> d(g.part_ids());
  for (SlotMask m = 1; m <= g.all_parts(); ++m) {
    if (popcount(m) > g.arity_cap()) continue;
    auto ids = g.indices_of(m);
    auto gi = induced(g, ids);
    auto ref = replace_slot(gi, gi.all_parts(), induced(gamma, ids));
    T top = oct_count(gi, oct_uniform(popcount(m), popcount(m), 1), opts);
    T bottom = oct_count(ref, oct_uniform(popcount(m), popcount(m), 1), opts);
    T v = is_zero(bottom) ? T(0) : top / bottom;
    if (v > T(1)) v = T(1);
    d.set_slot(m, v);
  }
  return d;
}

template <class T>
CandidateStack<T> update(const CandidateStack<T>& s, VertexId x, int v) {
  int local = s.H.local_of(x);
  if (s.dom >> local & 1U) throw DomainError("update: vertex " + std::to_string(x) + " already embedded");
  CandidateStack<T> out;
  out.H = s.H;
  out.phi = s.phi;
  out.phi.emplace_back(x, v);
  out.dom = s.dom | (VertexMask{1} << local);
  out.D_orig = s.D_orig;
  for (const auto& c : s.C) out.C.push_back(link(c, x, v));
  for (const auto& d : s.D) out.D.push_back(density_link(d, x));
  return out;
}

// C[0] ≥ C[1] ≥ … ≥ C[k] on every slot, ∅ included.
template <class T>
bool stack_monotone(const CandidateStack<T>& s) {
  for (int l = 0; l < s.k(); ++l) {
    const auto& hi = s.C[static_cast<std::size_t>(l)];
    const auto& lo = s.C[static_cast<std::size_t>(l + 1)];
    if (!approx_le(lo.empty_weight(), hi.empty_weight())) return false;
    bool ok = compare_slots(lo, hi, [](SlotMask) { return true; },
                            [](const T& a, const T& b) { return approx_le(a, b); });
    if (!ok) return false;
  }
  return true;
}

enum class ThcMode { Full, Hypothesis, Assumed };

template <class T>
struct Gpe2Entry {
  int level = 0;
  std::vector<VertexId> e;
  int hits = 0;
  bool hits_exceeded = false;
  Scaled eps;
  T d{0};
  T density_gap{0};  // |density − d|
  T oct_excess{0};   // oct ratio − d^{2^|e|}
  bool degenerate = false;
  bool ok = true;
  std::string error;
};

template <class T>
struct GpeReport {
  int level = 0;
  ThcMode mode = ThcMode::Hypothesis;
  bool gpe1 = true;
  bool gpe1_checked = false;
  std::string gpe1_detail;
  double gpe1_worst_deviation = 0;
  bool gpe2 = true;
  bool gpe3 = true;
  std::vector<Gpe2Entry<T>> gpe2_entries;
  std::optional<Gpe2Entry<T>> gpe2_witness;
  std::optional<std::vector<VertexId>> gpe3_witness;
  int gpe3_level = 0;
  T gpe3_product{0};
  // Smallest ℓ′ ≤ level whose GPE2/GPE3 clause fails; 0 if GPE1 fails; level+1 if none.
  int first_failing_level = 1;
  bool passes() const { return gpe1 && gpe2 && gpe3; }
};

namespace detail {

template <class T>
bool gpe1_holds(const CandidateStack<T>& s, const Ensemble& e, ThcMode mode, GpeReport<T>& rep,
                const CountOptions& opts) {
  rep.gpe1_checked = mode != ThcMode::Assumed;
  if (mode == ThcMode::Assumed) {
    rep.gpe1_detail = "assumed";
    return true;
  }
  const auto& c0 = s.C[0];
  if (c0.num_parts() == 0) {
    rep.gpe1_detail = "no unembedded vertices";
    return true;
  }
  if (mode == ThcMode::Full) {
    std::vector<PartIndex> order;
    for (VertexId x : s.pending()) order.push_back(x);
    auto v = is_thc_full(c0, s.D[0], e.eta[0], e.c_star, order);
    rep.gpe1_worst_deviation = v.worst_infinite ? INFINITY : to_double(v.worst_deviation);
    if (!v.passes) {
      rep.gpe1_detail = "THC fails";
      if (!v.failing_path.empty()) rep.gpe1_detail += " (" + v.failing_path.back().clause + ")";
    }
    return v.passes;
  }
  auto g = gatch_hypothesis(c0, s.rest(), s.D[0], e.eta[0], e.Delta, e.c_star, FamilyMode::Octahedra, opts);
  rep.gpe1_worst_deviation = g.worst_infinite ? INFINITY : to_double(g.worst_deviation);
  if (!g.structural_ok) rep.gpe1_detail = g.structural_witness;
  else if (!g.counting_ok) rep.gpe1_detail = "counting fails at " + g.worst_complex;
  return g.passes();
}

template <class T>
Gpe2Entry<T> gpe2_entry(const CandidateStack<T>& s, const Ensemble& e, int l, SlotMask em, const CountOptions& opts) {
  const auto& lower = s.C[static_cast<std::size_t>(l - 1)];
  const auto& upper = s.C[static_cast<std::size_t>(l)];
  Gpe2Entry<T> ent;
  ent.level = l;
  ent.e = lower.indices_of(em);
  VertexMask hmask = s.H.mask_of(ent.e);
  ent.hits = pi_hits(s.H, s.dom, hmask);
  ent.d = s.D[static_cast<std::size_t>(l)].get_slot(s.D[static_cast<std::size_t>(l)].mask_of(ent.e));
  int r = popcount(em);
  if (ent.hits > e.h_star) {
    ent.hits_exceeded = true;
    ent.ok = false;
    return ent;
  }
  ent.eps = e.eps(l, r, ent.hits);
  auto bar = induced(lower, ent.e);
  auto tilde = replace_slot(bar, bar.all_parts(), induced(upper, ent.e));
  try {
    auto v = is_regular(tilde, bar, T(0), std::optional<T>(ent.d), opts);
    ent.degenerate = v.degenerate;
    if (v.degenerate || v.passes) return ent;
    ent.density_gap = -v.density_slack;
    T dk = pow_int(ent.d, 1ULL << r);
    T excess = v.g_oct2 - dk * v.gamma_oct2;
    ent.oct_excess = v.oct_ratio - dk;
    bool dens_ok = detail::within_scaled(ent.density_gap, ent.eps, T(1));
    bool oct_ok = detail::within_scaled(excess, ent.eps, v.gamma_oct2);
    ent.ok = dens_ok && oct_ok;
  } catch (const DomainError& err) {
    ent.ok = false;
    ent.error = err.what();
  }
  return ent;
}

}  // namespace detail

struct GpeOptions {
  ThcMode mode = ThcMode::Hypothesis;
  bool keep_entries = false;
  CountOptions count;
};

// Checks GPE1–GPE3 for levels 1..ℓ.
template <class T>
GpeReport<T> is_gpe(const CandidateStack<T>& s, const Ensemble& e, int level, const GpeOptions& opts = {}) {
  if (level < 1 || level > s.k()) throw DomainError("is_gpe: level out of range");
  if (e.k != s.k()) throw DomainError("is_gpe: ensemble and stack disagree on k");
  GpeReport<T> rep;
  rep.level = level;
  rep.mode = opts.mode;
  rep.first_failing_level = level + 1;
  rep.gpe1 = detail::gpe1_holds(s, e, opts.mode, rep, opts.count);
  if (!rep.gpe1) rep.first_failing_level = 0;
  int k = s.k();
  const auto& base = s.C[0];
  for (int l = 1; l <= level; ++l) {
    bool level_ok = true;
    for (SlotMask em = 1; em <= base.all_parts(); ++em) {
      if (popcount(em) > k) continue;
      auto ent = detail::gpe2_entry(s, e, l, em, opts.count);
      if (!ent.ok) {
        level_ok = false;
        if (rep.gpe2) rep.gpe2_witness = ent;
        rep.gpe2 = false;
      }
      if (opts.keep_entries) rep.gpe2_entries.push_back(std::move(ent));
    }
    // GPE3 over the original densities: δ_ℓ ≤ ∏_{f ⊇ e} d^{(ℓ)}(f).
    const auto& dorig = s.D_orig[static_cast<std::size_t>(l)];
    for (SlotMask em = 1; em <= base.all_parts(); ++em) {
      auto ids = base.indices_of(em);
      SlotMask dm = dorig.mask_of(ids);
      T prod(1);
      for (const auto& [m, v] : dorig.values())
        if ((m & dm) == dm) prod *= v;
      if (to_scaled(prod) < e.delta[static_cast<std::size_t>(l)]) {
        level_ok = false;
        if (rep.gpe3) {
          rep.gpe3_witness = ids;
          rep.gpe3_level = l;
          rep.gpe3_product = prod;
        }
        rep.gpe3 = false;
      }
    }
    if (!level_ok && rep.first_failing_level == level + 1 && rep.gpe1) rep.first_failing_level = l;
  }
  return rep;
}

// ---------------------------------------------------------------- one step

template <class T>
struct BadSets {
  VertexId x = 0;
  int k = 0;
  bool base_is_gpe = true;
  std::vector<std::vector<int>> B;  // B[0..k], nested
  std::vector<T> weights;           // ‖B_ℓ∖B_{ℓ−1}‖ under C^{(ℓ−1)}(x) (C^{(0)} for ℓ = 0)
  std::vector<T> part_weights;      // ‖V_x‖ under the same graph
  std::vector<int> first_failing;   // per vertex of V_x
  std::vector<bool> bound_applies;  // ℓ(4k+1) ≤ c* and ℓ(4k+1) + kΔ′ ≤ h*
  std::vector<bool> bound_holds;    // weight ≤ kΔ²ε′_ℓ‖V_x‖
  int delta_prime = 0;
};

struct BadSetOptions {
  GpeOptions gpe;
  std::optional<int> delta_prime;  // defaults to vdeg(H)
};

template <class T>
BadSets<T> bad_sets(const CandidateStack<T>& s, const Ensemble& e, VertexId x, const BadSetOptions& opts = {}) {
  int k = s.k();
  BadSets<T> out;
  out.x = x;
  out.k = k;
  out.base_is_gpe = is_gpe(s, e, k, opts.gpe).passes();
  out.delta_prime = opts.delta_prime.value_or(vdeg(s.H));
  int pos = s.C[0].position(x);
  int n = s.C[0].part_size(pos);
  out.first_failing.assign(static_cast<std::size_t>(n), k + 1);
  parallel_for(static_cast<std::size_t>(n), 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      auto next = update(s, x, static_cast<int>(v));
      if (next.remaining() == 0) continue;
      out.first_failing[v] = is_gpe(next, e, k, opts.gpe).first_failing_level;
    }
  });
  out.B.assign(static_cast<std::size_t>(k + 1), {});
  for (int v = 0; v < n; ++v)
    for (int l = out.first_failing[static_cast<std::size_t>(v)]; l <= k; ++l) out.B[static_cast<std::size_t>(l)].push_back(v);
  for (int l = 0; l <= k; ++l) {
    const auto& c = s.C[static_cast<std::size_t>(l == 0 ? 0 : l - 1)];
    std::vector<int> diff;
    for (int v : out.B[static_cast<std::size_t>(l)])
      if (out.first_failing[static_cast<std::size_t>(v)] == l) diff.push_back(v);
    auto rep = vnorm(c, x, diff);
    out.weights.push_back(rep.vnorm);
    out.part_weights.push_back(rep.part_vnorm);
    bool applies = l >= 1 && l * (4 * k + 1) <= e.c_star && l * (4 * k + 1) + k * out.delta_prime <= e.h_star;
    out.bound_applies.push_back(applies);
    bool holds = true;
    if (l >= 1) {
      Scaled coef = Scaled(static_cast<long long>(k) * e.Delta * e.Delta) * e.worst(l);
      holds = detail::within_scaled(rep.vnorm, coef, rep.part_vnorm);
    }
    out.bound_holds.push_back(holds);
  }
  return out;
}

// ---------------------------------------------------------------- counting

template <class T>
struct CountComparison {
  int level = 0;
  int r = 0;
  T measured{0};
  T predicted{0};
  T rel_error{0};
  bool degenerate = false;  // predicted = 0 while measured ≠ 0
  Scaled tolerance;         // r·η_ℓ
  bool within_tolerance = true;
  bool pre_cstar = true;  // c* ≥ max{2r−1, ℓ(4k+1)}
  bool pre_hstar = true;  // h* ≥ ℓ(4k+1) + vdeg(H)
  bool pre_eta = true;    // rη_ℓ ≤ 1/2
  bool applies() const { return pre_cstar && pre_hstar && pre_eta; }
};

// c^{(ℓ)}(∅)/∏_{ℓ′≤ℓ} d_φ^{(ℓ′)}(∅) · ∏_{ℓ′≤ℓ} 𝒟_φ^{(ℓ′)}(H − dom φ).
template <class T>
T gpe_prediction(const CandidateStack<T>& s, int level) {
  PartiteComplex rest = s.rest();
  T pred = s.C[static_cast<std::size_t>(level)].empty_weight();
  for (int l = 0; l <= level; ++l) {
    const auto& d = s.D[static_cast<std::size_t>(l)];
    for (VertexMask f : rest.edges()) {
      if (f == 0) continue;
      std::vector<PartIndex> ids;
      for (int x = 0; x < rest.num_vertices(); ++x)
        if (f >> x & 1U) ids.push_back(rest.part_of(x));
      pred *= d.get(ids);
    }
  }
  return pred;
}

template <class T>
CountComparison<T> gpe_count(const CandidateStack<T>& s, const Ensemble& e, int level, const CountOptions& opts = {}) {
  if (level < 0 || level > s.k()) throw DomainError("gpe_count: level out of range");
  CountComparison<T> c;
  int k = s.k();
  c.level = level;
  c.r = s.remaining();
  const auto& g = s.C[static_cast<std::size_t>(level)];
  c.measured = c.r == 0 ? g.empty_weight() : hom_weight(s.rest(), g, opts);
  c.predicted = gpe_prediction(s, level);
  if (is_zero(c.predicted)) {
    c.degenerate = !is_zero(c.measured);
    c.rel_error = T(0);
  } else {
    T diff = c.measured - c.predicted;
    if (diff < T(0)) diff = -diff;
    c.rel_error = approx_equal(c.measured, c.predicted) ? T(0) : diff / c.predicted;
  }
  c.tolerance = Scaled(static_cast<long long>(c.r)) * e.eta[static_cast<std::size_t>(level)];
  if (c.degenerate)
    c.within_tolerance = false;
  else if (!is_zero(c.predicted))
    c.within_tolerance = detail::within_scaled(c.rel_error, c.tolerance, T(1));
  c.pre_cstar = e.c_star >= std::max(2 * c.r - 1, level * (4 * k + 1));
  c.pre_hstar = e.h_star >= level * (4 * k + 1) + vdeg(s.H);
  c.pre_eta = c.tolerance <= Scaled(Rational(1, 2));
  return c;
}

// ---------------------------------------------------------------- embedding

template <class T>
struct EmbedResult {
  std::vector<std::pair<VertexId, int>> phi;
  bool stuck = false;
  std::optional<VertexId> stuck_at;
  T weight{0};       // c^{(k)}(∅) after the last update
  T predicted{0};    // the density product at the start
  T lower_bound{0};  // (1 − η_k)^r · predicted
  bool achieved = false;
  std::optional<T> exhaustive_total;  // 𝒞^{(k)}(H − dom φ), exhaustive mode only
  std::optional<bool> exhaustive_holds;
  bool pre_cstar = true;  // c* ≥ k(4k+1)
  bool pre_hstar = true;  // h* ≥ k(4k+1) + kΔ′
  std::vector<std::size_t> bad_counts;  // |B_k(x)| at each step
};

struct EmbedOptions {
  bool exhaustive = false;
  bool sample = true;  // walk the embedding; exhaustive-only runs may skip it
  BadSetOptions bad;
  CountOptions count;
};

template <class T>
EmbedResult<T> greedy_embed(const CandidateStack<T>& start, const Ensemble& e, std::mt19937_64& rng,
                            const EmbedOptions& opts = {}) {
  EmbedResult<T> res;
  int k = start.k();
  int r = start.remaining();
  int dprime = opts.bad.delta_prime.value_or(vdeg(start.H));
  res.pre_cstar = e.c_star >= k * (4 * k + 1);
  res.pre_hstar = e.h_star >= k * (4 * k + 1) + k * dprime;
  res.predicted = gpe_prediction(start, k);
  double eta_k = e.eta[static_cast<std::size_t>(k)].to_double();
  T factor = pow_int(T(1) - from_double<T>(eta_k), static_cast<unsigned long long>(r));
  if constexpr (ScalarTraits<T>::exact) factor = pow_int(T(1) - e.eta[static_cast<std::size_t>(k)].to_rational(), r);
  res.lower_bound = factor * res.predicted;
  if (opts.exhaustive) {
    const auto& ck = start.C[static_cast<std::size_t>(k)];
    res.exhaustive_total = r == 0 ? ck.empty_weight() : hom_weight(start.rest(), ck, opts.count);
    res.exhaustive_holds = approx_le(res.lower_bound, *res.exhaustive_total);
  }
  if (!opts.sample) return res;
  CandidateStack<T> s = start;
  for (VertexId x : start.pending()) {
    auto bad = bad_sets(s, e, x, opts.bad);
    res.bad_counts.push_back(bad.B[static_cast<std::size_t>(k)].size());
    const auto& ck = s.C[static_cast<std::size_t>(k)];
    int pos = ck.position(x);
    std::vector<double> weights(static_cast<std::size_t>(ck.part_size(pos)));
    for (int v = 0; v < ck.part_size(pos); ++v) weights[static_cast<std::size_t>(v)] = to_double(ck.vertex_weight(pos, v));
    for (int v : bad.B[static_cast<std::size_t>(k)]) weights[static_cast<std::size_t>(v)] = 0;
    double total = 0;
    for (double w : weights) total += w;
    if (!(total > 0)) {
      res.stuck = true;
      res.stuck_at = x;
      return res;
    }
    std::discrete_distribution<int> pick(weights.begin(), weights.end());
    int v = pick(rng);
    s = update(s, x, v);
  }
  res.phi = s.phi;
  res.weight = s.C[static_cast<std::size_t>(k)].empty_weight();
  res.achieved = approx_le(res.lower_bound, res.weight);
  return res;
}

}  // namespace hyperreg
