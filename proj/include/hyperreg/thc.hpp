#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hyperreg/degeneracy.hpp"
#include "hyperreg/density_graph.hpp"
#include "hyperreg/errors.hpp"
#include "hyperreg/homcount.hpp"
#include "hyperreg/parallel.hpp"
#include "hyperreg/scaled_rational.hpp"
#include "hyperreg/weighted_graph.hpp"

namespace hyperreg {

enum class FamilyMode { Octahedra, Exhaustive };

// Blow-up of the subcomplex of `shape` generated by `edges` (masks over
// shape's local indices): vertex x gets copies[x] copies in part id(x), and a
// crossing set is an edge when its projection is one of `edges`.
PartiteComplex blowup(const PartiteComplex& shape, const std::vector<VertexMask>& edges,
                      const std::vector<int>& copies);

// Octahedra: the blow-up of every nonempty edge of `shape`. Exhaustive: the
// blow-up of every subcomplex of `shape` (tiny shapes only). Copies per part
// range over 1..max_copies with at most max_total vertices in all.
std::vector<PartiteComplex> blowup_family(const PartiteComplex& shape, int max_copies, int max_total, FamilyMode mode);

// The complete complex on `parts` (one vertex per part, vertex id = part id)
// with edges of size at most k.
PartiteComplex complete_shape(const std::vector<PartIndex>& parts, int k);

namespace detail {

// a ≤ η·b, deciding ties in float mode with the relative tolerance.
template <class T>
bool within_scaled(const T& a, const Scaled& eta, const T& b) {
  if (!(a > T(0))) return true;
  if constexpr (!ScalarTraits<T>::exact) {
    if (a <= kRelTol * std::fabs(b)) return true;
  }
  return to_scaled(a) <= eta * to_scaled(b);
}

}  // namespace detail

// ---------------------------------------------------------------- THC1 / THC2

template <class T>
struct CountCheck {
  std::string complex;
  int vertices = 0;
  T measured{0};
  T predicted{0};
  T deviation{0};  // |measured/predicted − 1|
  bool infinite = false;
  bool ok = true;
};

// Γ(R) against γ(∅)·∏_{∅≠e∈R} p(e), with tolerance scale·η·predicted.
template <class T>
CountCheck<T> count_check(const PartiteComplex& r, const WeightedGraph<T>& gamma, const DensityGraph<T>& p,
                          const Scaled& eta, int scale, const CountOptions& opts = {}) {
  CountCheck<T> c;
  c.vertices = r.num_vertices();
  c.measured = hom_weight(r, gamma, opts);
  T pred = gamma.empty_weight();
  for (VertexMask e : r.edges()) {
    if (e == 0) continue;
    SlotMask m = 0;
    for (int x = 0; x < r.num_vertices(); ++x)
      if (e >> x & 1U) m |= SlotMask{1} << p.position(r.part_of(x));
    pred *= p.get_slot(m);
  }
  c.predicted = pred;
  T diff = c.measured - pred;
  if (diff < T(0)) diff = -diff;
  if (approx_equal(c.measured, pred)) {
    c.deviation = T(0);
    c.ok = true;
  } else if (is_zero(pred)) {
    c.infinite = true;
    c.ok = false;
  } else {
    c.deviation = diff / pred;
    c.ok = detail::within_scaled(diff, eta * Scaled(static_cast<long long>(scale)), pred);
  }
  return c;
}

struct ThcStep {
  PartIndex vertex = 0;
  int image = -1;  // -1 when the clause failed at this level
  std::string clause;
};

template <class T>
struct ThcVerdict {
  bool passes = true;
  int depth_reached = 0;
  std::vector<ThcStep> failing_path;
  long counts_checked = 0;
  T worst_deviation{0};
  bool worst_infinite = false;
  std::string failing_complex;
};

namespace detail {

template <class T>
void note_check(ThcVerdict<T>& v, const CountCheck<T>& c) {
  ++v.counts_checked;
  if (c.infinite)
    v.worst_infinite = true;
  else if (c.deviation > v.worst_deviation)
    v.worst_deviation = c.deviation;
}

template <class T>
ThcVerdict<T> thc_recurse(const WeightedGraph<T>& gamma, const DensityGraph<T>& p, const Scaled& eta,
                          const std::vector<PartIndex>& order, std::size_t depth,
                          const std::vector<std::vector<PartiteComplex>>& families, const CountOptions& opts) {
  ThcVerdict<T> v;
  v.depth_reached = static_cast<int>(depth);
  for (const PartiteComplex& r : families[depth]) {
    auto c = count_check(r, gamma, p, eta, r.num_vertices(), opts);
    note_check(v, c);
    if (!c.ok) {
      v.passes = false;
      v.failing_complex = r.describe();
      v.failing_path.push_back({order.empty() ? 0 : order[depth], -1, "THC1"});
      return v;
    }
  }
  if (order.size() - depth < 2) return v;
  PartIndex x = order[depth];
  int pos = gamma.position(x);
  DensityGraph<T> px = density_link(p, x);
  T bad(0), total(0);
  std::optional<ThcVerdict<T>> first_fail;
  int first_fail_v = -1;
  for (int u = 0; u < gamma.part_size(pos); ++u) {
    T w = gamma.vertex_weight(pos, u);
    total += w;
    if (is_zero(w)) continue;
    auto sub = thc_recurse(link(gamma, x, u), px, eta, order, depth + 1, families, opts);
    v.counts_checked += sub.counts_checked;
    v.depth_reached = std::max(v.depth_reached, sub.depth_reached);
    if (sub.worst_infinite) v.worst_infinite = true;
    if (sub.worst_deviation > v.worst_deviation) v.worst_deviation = sub.worst_deviation;
    if (!sub.passes) {
      bad += w;
      if (!first_fail) {
        first_fail = std::move(sub);
        first_fail_v = u;
      }
    }
  }
  // ‖V_x∖V_x'‖ ≤ η‖V_x‖ with V_x' the passing vertices.
  if (!within_scaled(bad, eta, total)) {
    v.passes = false;
    v.failing_path.push_back({x, first_fail_v, "THC2"});
    for (const ThcStep& s : first_fail->failing_path) v.failing_path.push_back(s);
    v.failing_complex = first_fail->failing_complex;
  }
  return v;
}

}  // namespace detail

struct ThcOptions {
  int max_parts = 4;
  int max_part_size = 5;
  int max_copies = 4;
  CountOptions count;
};

// Definition of THC checked literally: THC1 over every J-partite complex with
// at most 4 copies per part and c* vertices (as blow-ups of complexes on J),
// THC2 by recursion along `order` with the maximal passing V_x'.
template <class T>
ThcVerdict<T> is_thc_full(const WeightedGraph<T>& gamma, const DensityGraph<T>& p, const Scaled& eta, int c_star,
                          std::vector<PartIndex> order = {}, const ThcOptions& opts = {}) {
  if (gamma.num_parts() > opts.max_parts) throw BudgetError("is_thc_full: too many parts for full recursion");
  for (int i = 0; i < gamma.num_parts(); ++i)
    if (gamma.part_size(i) > opts.max_part_size) throw BudgetError("is_thc_full: part too large for full recursion");
  if (order.empty()) order = gamma.part_ids();
  if (static_cast<int>(order.size()) != gamma.num_parts()) throw DomainError("is_thc_full: order must list every part");
  for (PartIndex x : order) gamma.position(x);
  std::vector<std::vector<PartiteComplex>> families;
  for (std::size_t d = 0; d < order.size(); ++d) {
    std::vector<PartIndex> rest(order.begin() + static_cast<long>(d), order.end());
    int k = std::min<int>(gamma.arity_cap(), static_cast<int>(rest.size()));
    families.push_back(blowup_family(complete_shape(rest, k), opts.max_copies, c_star, FamilyMode::Exhaustive));
  }
  return detail::thc_recurse(gamma, p, eta, order, 0, families, opts.count);
}

template <class T>
ThcVerdict<T> is_thc_full(const WeightedGraph<T>& gamma, const DensityGraph<T>& p, const T& eta, int c_star,
                          std::vector<PartIndex> order = {}, const ThcOptions& opts = {}) {
  return is_thc_full(gamma, p, to_scaled(eta), c_star, std::move(order), opts);
}

// ---------------------------------------------------------------- counting hypothesis

template <class T>
struct GathcReport {
  bool structural_ok = true;  // Γ ≡ 1 on V_e for e ∉ H
  std::string structural_witness;
  bool counting_ok = true;
  int max_vertices = 0;  // family bound actually used
  std::size_t family_size = 0;
  T worst_deviation{0};
  bool worst_infinite = false;
  std::string worst_complex;
  bool passes() const { return structural_ok && counting_ok; }
};

// Counting hypothesis that implies THC: Γ is 1 off H and
// Γ(F) = (1±η)(γ(∅)/p(∅))𝒫(F) for F in the chosen family on ≤ (Δ+2)c* vertices.
// `h` is one-vertex-per-part over Γ's parts.
template <class T>
GathcReport<T> gatch_hypothesis(const WeightedGraph<T>& gamma, const PartiteComplex& h, const DensityGraph<T>& p,
                                const Scaled& eta, int Delta, int c_star, FamilyMode mode = FamilyMode::Octahedra,
                                const CountOptions& opts = {}) {
  GathcReport<T> rep;
  for (const auto& [m, data] : gamma.layers()) {
    std::vector<VertexId> ids;
    for (PartIndex q : gamma.indices_of(m)) ids.push_back(q);
    if (h.contains(h.mask_of(ids))) continue;
    for (const T& w : data)
      if (!approx_equal(w, T(1))) {
        rep.structural_ok = false;
        rep.structural_witness = "slot of size " + std::to_string(ids.size()) + " outside H has weight " + to_string(w);
        break;
      }
    if (!rep.structural_ok) break;
  }
  int bound = (Delta + 2) * c_star;
  if (mode == FamilyMode::Exhaustive) bound = std::min(bound, 6);
  rep.max_vertices = bound;
  auto family = blowup_family(h, 4, bound, mode);
  rep.family_size = family.size();
  for (const PartiteComplex& f : family) {
    auto c = count_check(f, gamma, p, eta, 1, opts);
    bool worse = c.infinite ? !rep.worst_infinite : (!rep.worst_infinite && c.deviation > rep.worst_deviation);
    if (worse || rep.worst_complex.empty()) {
      if (c.infinite) rep.worst_infinite = true;
      else rep.worst_deviation = c.deviation;
      rep.worst_complex = f.describe();
    }
    if (!c.ok) rep.counting_ok = false;
  }
  return rep;
}

// ---------------------------------------------------------------- random hypergraphs

struct RandomGraphSpec {
  int k = 2;
  int n = 1;
  double p = 0.5;
  std::uint64_t seed = 0;
};

// G^{(k)}(n, p): complete below arity k, i.i.d. Bernoulli(p) k-edges on one
// global vertex set [n].
class RandomHypergraph {
 public:
  explicit RandomHypergraph(const RandomGraphSpec& spec);
  int k() const { return k_; }
  int n() const { return n_; }
  bool has_edge(std::vector<int> vertices) const;
  std::size_t edge_count() const { return edges_; }
  std::size_t possible_edges() const { return possible_; }

 private:
  std::size_t index(const std::vector<int>& sorted) const;
  int k_;
  int n_;
  std::vector<std::uint8_t> bits_;
  std::size_t edges_ = 0;
  std::size_t possible_ = 0;
};

inline RandomHypergraph random_hypergraph(const RandomGraphSpec& spec) { return RandomHypergraph(spec); }

using VertexPartition = std::vector<std::pair<PartIndex, std::vector<int>>>;

// Parts of sizes as equal as possible, vertices dealt out in order.
VertexPartition balanced_partition(int n, const std::vector<PartIndex>& parts);

// J-partite view: one part per partition class, k-slots from the hypergraph,
// nothing stored below arity k.
template <class T>
WeightedGraph<T> to_partite(const RandomHypergraph& g, const VertexPartition& partition) {
  std::vector<std::pair<PartIndex, int>> parts;
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  for (const auto& [j, vs] : partition) {
    for (int v : vs) {
      if (v < 0 || v >= g.n()) throw DomainError("to_partite: vertex out of range");
      if (seen[static_cast<std::size_t>(v)]++) throw DomainError("to_partite: partition classes overlap");
    }
    parts.emplace_back(j, static_cast<int>(vs.size()));
  }
  WeightedGraph<T> out(parts, g.k(), T(1));
  std::vector<const std::vector<int>*> members(static_cast<std::size_t>(out.num_parts()));
  for (const auto& [j, vs] : partition) members[static_cast<std::size_t>(out.position(j))] = &vs;
  for (SlotMask m = 1; m <= out.all_parts(); ++m) {
    if (popcount(m) != g.k()) continue;
    std::vector<int> poss;
    for (int i = 0; i < out.num_parts(); ++i)
      if (m >> i & 1U) poss.push_back(i);
    std::vector<T> data(out.slot_size(m));
    for_each_tuple(out, m, [&](const std::vector<int>& coords, std::size_t flat) {
      std::vector<int> vs;
      for (std::size_t i = 0; i < coords.size(); ++i)
        vs.push_back((*members[static_cast<std::size_t>(poss[i])])[static_cast<std::size_t>(coords[i])]);
      data[flat] = g.has_edge(vs) ? T(1) : T(0);
    });
    out.set_slot(m, std::move(data));
  }
  return out;
}

// ---------------------------------------------------------------- random THC experiment

struct RandomThcOptions {
  int trials = 1;
  std::uint64_t seed = 0;
  int max_copies = 4;
  FamilyMode mode = FamilyMode::Octahedra;
  double eps = 0.5;  // the fixed ε of the p-condition
  bool nconc = true;
  long injective_limit = 1000000;  // enumerate N* only below this many maps
  std::optional<int> d_override;
  CountOptions count;
};

struct ThcTrialRow {
  int trial = 0;
  std::uint64_t seed = 0;
  bool passed = true;
  bool stuck = false;
  int steps_checked = 0;
  long counts_checked = 0;
  double worst_deviation = 0;
  int failing_step = -1;
  std::string failing_complex;
  long nconc_checked = 0;
  long nconc_within = 0;
  double nconc_worst = 0;            // all maps
  double nconc_worst_injective = 0;  // injective maps, when enumerated
  double nconc_worst_gap = 0;        // max |N − N*|/N
  bool nconc_degenerate = false;
};

struct RandomThcReport {
  int k = 2;
  int n = 0;
  double p = 0;
  double eta = 0;
  int c_star = 0;
  int d = 0;  // deg_k of the pattern under its order
  bool d_mismatch = false;
  int Delta = 0;
  double n0 = 0;
  bool parts_ok = true;
  double log2_p_condition_lhs = 0;
  double log2_p_condition_rhs = 0;
  bool p_condition = false;
  double n1 = 0;
  bool degenerate = false;
  std::size_t edges = 0;
  std::vector<ThcTrialRow> trials;
  double pass_frequency = 0;
  double nconc_frequency = 0;
};

// Builds Γ = G^{(k)}(n,p), partitions it, applies the standard construction
// for `pattern` with density graph Q (p on k-edges of the pattern), and walks
// random embeddings in the pattern's order, checking THC1 at each step over
// blow-ups of the unembedded pattern and N(φ,R,U_Z) on sampled U_z.
RandomThcReport random_thc_experiment(const RandomGraphSpec& spec, const PartiteComplex& pattern,
                                      const VertexPartition& partition, double eta, int c_star,
                                      const RandomThcOptions& opts = {});

}  // namespace hyperreg
