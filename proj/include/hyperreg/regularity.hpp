#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hyperreg/homcount.hpp"
#include "hyperreg/numeric.hpp"
#include "hyperreg/weighted_graph.hpp"

namespace hyperreg {

template <class T>
struct RegularityVerdict {
  int k = 0;
  T eps{0};
  T d{0};                 // density the clauses were checked against
  bool d_measured = true;  // d taken from the graphs themselves
  T density{0};           // 𝒢(Oct(1⃗))/Γ(Oct(1⃗)), 0 when degenerate
  T oct_ratio{0};         // 𝒢(Oct(2⃗))/Γ(Oct(2⃗))
  T g_oct1{0}, gamma_oct1{0}, g_oct2{0}, gamma_oct2{0};
  bool density_ok = true;
  bool oct_ok = true;
  bool passes = true;
  T density_slack{0};  // ε − |density − d|
  T oct_slack{0};      // d^{2^k} + ε − oct_ratio
  T slack{0};          // min of the two
  T lower_margin{0};   // oct_ratio − d^{2^k}; not part of `passes`
  bool degenerate = false;
};

// Why G and Γ fail the standing assumptions of regularity (G = Γ below arity
// k, G ≤ Γ on arity k), or nullopt if they hold.
template <class T>
std::optional<std::string> regularity_precondition_failure(const WeightedGraph<T>& g, const WeightedGraph<T>& gamma) {
  if (!same_parts(g, gamma)) return "graphs have different parts";
  int k = g.num_parts();
  bool below = compare_slots(g, gamma, [&](SlotMask m) { return popcount(m) < k; },
                             [](const T& a, const T& b) { return approx_equal(a, b); });
  if (!below) return "G and Gamma differ on a slot below arity " + std::to_string(k);
  bool top = compare_slots(g, gamma, [&](SlotMask m) { return popcount(m) == k; },
                           [](const T& a, const T& b) { return approx_le(a, b); });
  if (!top) return "G exceeds Gamma on the arity-" + std::to_string(k) + " slot";
  return std::nullopt;
}

// Regularity of G relative to Γ at (ε, d); with d omitted the measured
// density is used (ε-regularity).
template <class T>
RegularityVerdict<T> is_regular(const WeightedGraph<T>& g, const WeightedGraph<T>& gamma, const T& eps,
                                 const std::optional<T>& d = std::nullopt, const CountOptions& opts = {}) {
  if (auto why = regularity_precondition_failure(g, gamma)) throw DomainError("is_regular: " + *why);
  RegularityVerdict<T> v;
  int k = g.num_parts();
  v.k = k;
  v.eps = eps;
  OctSpec ones = oct_uniform(k, k, 1);
  OctSpec twos = oct_uniform(k, k, 2);
  v.gamma_oct1 = oct_count(gamma, ones, opts);
  v.g_oct1 = oct_count(g, ones, opts);
  if (is_zero(v.gamma_oct1)) {
    v.degenerate = true;
    v.d = d.value_or(T(0));
    v.d_measured = !d.has_value();
    return v;
  }
  v.gamma_oct2 = oct_count(gamma, twos, opts);
  v.g_oct2 = oct_count(g, twos, opts);
  v.density = v.g_oct1 / v.gamma_oct1;
  v.oct_ratio = is_zero(v.gamma_oct2) ? T(0) : v.g_oct2 / v.gamma_oct2;
  v.d_measured = !d.has_value();
  v.d = d.value_or(v.density);
  T dk = pow_int(v.d, 1ULL << k);
  T diff = v.density - v.d;
  if (diff < T(0)) diff = -diff;
  v.density_slack = eps - diff;
  v.density_ok = approx_le(diff, eps);
  v.oct_slack = dk + eps - v.oct_ratio;
  v.oct_ok = approx_le(v.g_oct2, (dk + eps) * v.gamma_oct2);
  v.passes = v.density_ok && v.oct_ok;
  v.slack = v.density_slack < v.oct_slack ? v.density_slack : v.oct_slack;
  v.lower_margin = v.oct_ratio - dk;
  return v;
}

// The admissible (i, a, b, c): a, b, c agree off i and (a_i, b_i, c_i) = (0, 1, 2).
struct OctTriple {
  int i = 0;
  std::vector<int> a, b, c;
};

std::vector<OctTriple> admissible_triples(int k);

template <class T>
struct MinimalityReport {
  T defect{0};
  bool infinite = false;  // some b-count vanished while c·a did not
  OctTriple witness;
  T count_a{0}, count_b{0}, count_c{0};
  std::size_t triples = 0;
};

// Octahedron counts of every vector in {0,1,2}^k, keyed by the vector.
template <class T>
std::map<std::vector<int>, T> oct_table(const WeightedGraph<T>& h, const CountOptions& opts = {}) {
  int k = h.num_parts();
  std::map<std::vector<int>, T> table;
  std::vector<int> a(static_cast<std::size_t>(k), 0);
  while (true) {
    table.emplace(a, oct_count(h, OctSpec{k, a, false}, opts));
    int j = k - 1;
    while (j >= 0 && ++a[static_cast<std::size_t>(j)] == 3) {
      a[static_cast<std::size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
  }
  return table;
}

// max over admissible triples of 𝓗(Oct(c))·𝓗(Oct(a))/𝓗(Oct(b))² − 1 (0/0 → 0).
template <class T>
MinimalityReport<T> minimality_report(const WeightedGraph<T>& h, const CountOptions& opts = {}) {
  int k = h.num_parts();
  auto table = oct_table(h, opts);
  MinimalityReport<T> r;
  bool first = true;
  for (const OctTriple& t : admissible_triples(k)) {
    ++r.triples;
    const T& ca = table.at(t.a);
    const T& cb = table.at(t.b);
    const T& cc = table.at(t.c);
    T num = ca * cc;
    bool inf = false;
    T value(0);
    if (is_zero(cb)) {
      if (!is_zero(num)) inf = true;
    } else {
      value = num / (cb * cb) - T(1);
    }
    bool better = first || (inf && !r.infinite) || (!r.infinite && !inf && value > r.defect);
    if (better) {
      r.defect = inf ? T(0) : value;
      r.infinite = inf;
      r.witness = t;
      r.count_a = ca;
      r.count_b = cb;
      r.count_c = cc;
      first = false;
    }
  }
  return r;
}

template <class T>
bool is_eta_minimal(const WeightedGraph<T>& h, const T& eta, const CountOptions& opts = {}) {
  auto r = minimality_report(h, opts);
  return !r.infinite && approx_le(r.defect, eta);
}

template <class T>
struct CsCheck {
  T count_a{0}, count_b{0}, count_c{0};
  bool holds = true;
};

// 𝓗(Oct(c))·𝓗(Oct(a)) ≥ 𝓗(Oct(b))², the Cauchy–Schwarz octahedron bound.
template <class T>
CsCheck<T> cs_lower_bound_check(const WeightedGraph<T>& h, const OctTriple& t, const CountOptions& opts = {}) {
  int k = h.num_parts();
  auto bad = [&] { throw DomainError("cs_lower_bound_check: triple is not admissible"); };
  if (t.i < 0 || t.i >= k || static_cast<int>(t.a.size()) != k || t.b.size() != t.a.size() || t.c.size() != t.a.size()) bad();
  for (int j = 0; j < k; ++j) {
    auto u = static_cast<std::size_t>(j);
    if (j == t.i) {
      if (t.a[u] != 0 || t.b[u] != 1 || t.c[u] != 2) bad();
    } else if (t.a[u] != t.b[u] || t.b[u] != t.c[u] || t.a[u] < 0 || t.a[u] > 2) {
      bad();
    }
  }
  CsCheck<T> r;
  r.count_a = oct_count(h, OctSpec{k, t.a, false}, opts);
  r.count_b = oct_count(h, OctSpec{k, t.b, false}, opts);
  r.count_c = oct_count(h, OctSpec{k, t.c, false}, opts);
  r.holds = approx_le(r.count_b * r.count_b, r.count_c * r.count_a);
  return r;
}

// ---------------------------------------------------------------------------
// Cauchy–Schwarz moment verifiers on finite distributions.

template <class T>
struct Atom {
  T p, w, x, y;
};

template <class T>
struct FiniteJointDist {
  std::vector<Atom<T>> atoms;

  void validate() const {
    T total(0);
    for (const Atom<T>& a : atoms) {
      if (a.p < T(0)) throw DomainError("negative atom probability");
      if (a.w < T(0) || a.w > T(1)) throw DomainError("W must take values in [0,1]");
      if (a.x < T(0)) throw DomainError("X must be nonnegative");
      total += a.p;
    }
    if (!approx_equal(total, T(1), 1e-12)) throw DomainError("atom probabilities must sum to 1");
  }

  template <class F>
  T expect(F&& f) const {
    T s(0);
    for (const Atom<T>& a : atoms) s += a.p * f(a);
    return s;
  }
};

template <class T>
struct EcsDistResult {
  bool hypotheses_ok = false;
  bool defined = true;  // false when E[WX] = 0
  T ex{0}, exy{0}, exy2{0}, ewx{0}, ewxy{0}, ewxy2{0};
  // Conclusion intervals, in floating point for reporting.
  double wxy_lo = 0, wxy_hi = 0, wxy2_lo = 0, wxy2_hi = 0;
  bool wxy_contained = true;
  bool wxy2_contained = true;
  bool verified() const { return !hypotheses_ok || !defined || (wxy_contained && wxy2_contained); }
};

// E[XY] = (1±ε)d·E[X] and E[XY^m] ≤ (1+ε)d^m·E[X].
template <class T>
bool ecs_hypotheses(const FiniteJointDist<T>& dist, const T& eps, const T& d, unsigned moment) {
  T ex = dist.expect([](const Atom<T>& a) { return a.x; });
  T exy = dist.expect([](const Atom<T>& a) { return a.x * a.y; });
  T exym = dist.expect([&](const Atom<T>& a) { return a.x * pow_int(a.y, moment); });
  T dev = exy - d * ex;
  if (dev < T(0)) dev = -dev;
  return approx_le(dev, eps * d * ex) && approx_le(exym, (T(1) + eps) * pow_int(d, moment) * ex);
}

// Measures E[WXY], E[WXY²] and tests them against the conclusion intervals.
// Containment is decided without square roots by squaring both sides.
template <class T>
EcsDistResult<T> ecs_dist(const FiniteJointDist<T>& dist, const T& eps, const T& d) {
  dist.validate();
  EcsDistResult<T> r;
  r.ex = dist.expect([](const Atom<T>& a) { return a.x; });
  r.exy = dist.expect([](const Atom<T>& a) { return a.x * a.y; });
  r.exy2 = dist.expect([](const Atom<T>& a) { return a.x * a.y * a.y; });
  r.ewx = dist.expect([](const Atom<T>& a) { return a.w * a.x; });
  r.ewxy = dist.expect([](const Atom<T>& a) { return a.w * a.x * a.y; });
  r.ewxy2 = dist.expect([](const Atom<T>& a) { return a.w * a.x * a.y * a.y; });
  r.hypotheses_ok = eps >= T(0) && eps <= T(1) && d >= T(0) && ecs_hypotheses(dist, eps, d, 2);
  if (is_zero(r.ewx)) {
    r.defined = false;
    return r;
  }
  double e = to_double(eps), dd = to_double(d), ex = to_double(r.ex), ewx = to_double(r.ewx);
  double w1 = 2 * std::sqrt(e * ex / ewx);
  r.wxy_lo = (1 - e - w1) * dd * ewx;
  r.wxy_hi = (1 - e + w1) * dd * ewx;
  double w2 = 7 * std::sqrt(e) * ex / ewx;
  r.wxy2_lo = (1 - 2 * e - w2) * dd * dd * ewx;
  r.wxy2_hi = (1 - 2 * e + w2) * dd * dd * ewx;
  T c1 = r.ewxy - (T(1) - eps) * d * r.ewx;
  r.wxy_contained = approx_le(c1 * c1, T(4) * eps * r.ex * r.ewx * d * d);
  T c2 = r.ewxy2 - (T(1) - T(2) * eps) * d * d * r.ewx;
  r.wxy2_contained = approx_le(c2 * c2, T(49) * eps * r.ex * r.ex * pow_int(d, 4));
  return r;
}

template <class T>
struct EcsConcResult {
  bool hypotheses_ok = false;
  unsigned t = 1;
  T ex{0};
  T ewx{0};  // mass of the window event, weighted by X
  double bound = 0;  // (1 − 4ε^{1/4})E[X] or (1 − 4ε^{1/8})E[X]
  bool holds = true;
  bool verified() const { return !hypotheses_ok || holds; }
};

// Window event Y = (1 ± 2ε^{1/4})d (t = 1) or Y = (1 ± 2ε^{1/8})d (t ≥ 2) and
// its X-weighted mass versus (1 − 4ε^{1/4})E[X] resp. (1 − 4ε^{1/8})E[X].
template <class T>
EcsConcResult<T> ecs_conc(const FiniteJointDist<T>& dist, const T& eps, const T& d, unsigned t) {
  dist.validate();
  if (t < 1 || t > 20) throw DomainError("ecs_conc: moment exponent out of range");
  EcsConcResult<T> r;
  r.t = t;
  unsigned root = t == 1 ? 4 : 8;
  unsigned moment = t == 1 ? 2U : (1U << t);
  r.hypotheses_ok = eps >= T(0) && d >= T(0) && ecs_hypotheses(dist, eps, d, moment);
  if (t == 1) {
    r.hypotheses_ok = r.hypotheses_ok && eps <= T(1);
  } else {
    r.hypotheses_ok = r.hypotheses_ok && eps * pow_int(T(2), 2 * t - 2) < T(1);
  }
  // |Y − d| ≤ 2dε^{1/root}  ⇔  (Y − d)^root ≤ 2^root d^root ε.
  T cap = pow_int(T(2), root) * pow_int(d, root) * eps;
  r.ex = dist.expect([](const Atom<T>& a) { return a.x; });
  r.ewx = dist.expect([&](const Atom<T>& a) {
    T dev = a.y - d;
    return approx_le(pow_int(dev, root), cap) ? a.x : T(0);
  });
  double e = to_double(eps);
  r.bound = (1 - 4 * std::pow(e, 1.0 / root)) * to_double(r.ex);
  // E[WX] ≥ (1 − 4ε^{1/root})E[X]  ⇔  E[X] − E[WX] ≤ 4ε^{1/root}E[X].
  T gap = r.ex - r.ewx;
  r.holds = gap <= T(0) || approx_le(pow_int(gap, root), pow_int(T(4), root) * eps * pow_int(r.ex, root));
  return r;
}

// Rejection sampler for distributions meeting the moment hypotheses: atoms
// are drawn at random, Y is rescaled multiplicatively so that E[XY] = t·d·E[X]
// for a random t ∈ [1−ε, 1+ε], and the draw is kept only if
// E[XY^moment] ≤ (1+ε)d^moment·E[X]. Multiplicative scaling keeps Y ≥ 0.
template <class T>
std::optional<FiniteJointDist<T>> sample_admissible_dist(std::mt19937_64& rng, const T& eps, const T& d,
                                                         unsigned moment, int max_tries = 1000) {
  auto uniform_step = [&](int steps) { return T(static_cast<long long>(rng() % static_cast<unsigned>(steps + 1))) / T(steps); };
  double spread = 2 * std::sqrt(to_double(eps)) / static_cast<double>(moment / 2);
  T amp_max = T(std::ldexp(std::floor(std::ldexp(spread, 30)), -30));
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    int n = 2 + static_cast<int>(rng() % 4);
    FiniteJointDist<T> dist;
    T total(0);
    std::vector<T> weights;
    for (int i = 0; i < n; ++i) {
      weights.push_back(T(1 + static_cast<long long>(rng() % 10)));
      total += weights.back();
    }
    T amp = amp_max * uniform_step(16);
    for (int i = 0; i < n; ++i) {
      Atom<T> a;
      a.p = weights[static_cast<std::size_t>(i)] / total;
      a.w = (rng() % 3 == 0) ? uniform_step(4) : T(static_cast<long long>(rng() % 2));
      a.x = T(static_cast<long long>(rng() % 5)) / T(4);
      T noise = uniform_step(16) * T(2) - T(1);
      a.y = d * (T(1) + amp * noise);
      if (a.y < T(0)) a.y = T(0);
      dist.atoms.push_back(a);
    }
    T ex = dist.expect([](const Atom<T>& a) { return a.x; });
    T exy = dist.expect([](const Atom<T>& a) { return a.x * a.y; });
    if (is_zero(ex) || is_zero(exy)) continue;
    T t = T(1) + eps * (uniform_step(16) * T(2) - T(1));
    T scale = t * d * ex / exy;
    for (Atom<T>& a : dist.atoms) a.y *= scale;
    if (ecs_hypotheses(dist, eps, d, moment)) return dist;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Composition results.

template <class T>
struct RelOctLower {
  T d{0};
  int t = 0;
  T bound{0};
  T measured{0};
  bool holds = true;
  bool degenerate = false;
  bool preconditions_ok = true;
  T gamma_defect{0};
  bool gamma_defect_infinite = false;
  std::string note;
};

// 𝒢(Oct(s)) ≥ d^{2^t}/(1+η)^{2^t−1}·Γ(Oct(s)) with d = 𝒢(Oct(s′))/Γ(Oct(s′)).
template <class T>
RelOctLower<T> rel_oct_lower(const WeightedGraph<T>& g, const WeightedGraph<T>& gamma, const std::vector<int>& s,
                             const std::vector<int>& s_prime, const T& eta, const CountOptions& opts = {}) {
  int k = g.num_parts();
  if (static_cast<int>(s.size()) != k || static_cast<int>(s_prime.size()) != k) {
    throw DomainError("rel_oct_lower: vectors must have one entry per part");
  }
  RelOctLower<T> r;
  for (int j = 0; j < k; ++j) {
    auto u = static_cast<std::size_t>(j);
    if (s[u] < 1 || s[u] > 2 || s_prime[u] < 1 || s_prime[u] > 2 || s[u] < s_prime[u]) {
      throw DomainError("rel_oct_lower: need s >= s' pointwise in {1,2}^k");
    }
    r.t += s[u] - s_prime[u];
  }
  if (!same_parts(g, gamma)) throw DomainError("rel_oct_lower: part mismatch");
  bool below = compare_slots(g, gamma, [&](SlotMask m) { return popcount(m) < k; },
                             [](const T& a, const T& b) { return approx_equal(a, b); });
  auto mr = minimality_report(gamma, opts);
  r.gamma_defect = mr.defect;
  r.gamma_defect_infinite = mr.infinite;
  r.preconditions_ok = below && !mr.infinite && approx_le(mr.defect, eta);
  if (!below) r.note = "G and Gamma differ below arity k";
  T gs_prime = oct_count(gamma, OctSpec{k, s_prime, false}, opts);
  if (is_zero(gs_prime)) {
    r.degenerate = true;
    return r;
  }
  r.d = oct_count(g, OctSpec{k, s_prime, false}, opts) / gs_prime;
  unsigned long long p = 1ULL << r.t;
  r.bound = pow_int(r.d, p) / pow_int(T(1) + eta, p - 1) * oct_count(gamma, OctSpec{k, s, false}, opts);
  r.measured = oct_count(g, OctSpec{k, s, false}, opts);
  r.holds = approx_le(r.bound, r.measured);
  return r;
}

// max{1 − (1−ε/d)^{2^k}/(1+η)^{2^k−1}, (1+εd^{−2^k})(1+η)^{2^k−1} − 1}.
template <class T>
T subregular_epsilon(const T& eps, const T& eta, const T& d, int k) {
  if (d <= T(0)) throw DomainError("subregular_epsilon: d must be positive");
  unsigned long long p = 1ULL << k;
  T lo = T(1) - pow_int(T(1) - eps / d, p) / pow_int(T(1) + eta, p - 1);
  T hi = (T(1) + eps / pow_int(d, p)) * pow_int(T(1) + eta, p - 1) - T(1);
  return lo > hi ? lo : hi;
}

// The crude form 2^{2^k}(εd^{−2^k} + η).
template <class T>
T subregular_epsilon_crude(const T& eps, const T& eta, const T& d, int k) {
  unsigned long long p = 1ULL << k;
  return pow_int(T(2), p) * (eps / pow_int(d, p) + eta);
}

// Smallest ε′ admitted by the slicing bound's three-term condition
// min{ε′, 1/2} ≥ η + max{…}; +∞ when that value exceeds 1/2.
double slicing_epsilon(double eps, double eta, double d, int k);
// 2^{2^{k−1}+18}k³(ε+√η)d^{−2^{k−1}}.
double slicing_epsilon_crude(double eps, double eta, double d, int k);

// The inheritance condition min{ε′, 2^{−k}} ≥ 2^{2^{k+6}}k³(ε^{1/16}+η^{1/32})d₀^{−2^{k+1}},
// evaluated in the log domain so that admissible ε far below double range
// can be tested.
struct InheritThreshold {
  int k = 1;
  double eps_prime = 0;
  double d0 = 1;

  // log2 of the left side and of the constant 2^{2^{k+6}}k³d₀^{−2^{k+1}}.
  double log2_lhs() const;
  double log2_constant() const;
  bool admits_log2(double log2_eps, double log2_eta) const;
  bool admits(double eps, double eta) const;
  // Largest admissible log2 ε at η = 0.
  double max_log2_eps() const;
};

template <class T>
struct CountRatio {
  std::vector<int> s;
  T g_count{0};
  T gamma_count{0};
  T ratio{0};
  T target{0};  // d^r
  bool within = true;
  bool degenerate = false;
};

template <class T>
struct SubregularCheck {
  T eps_out{0};
  bool hypotheses_ok = false;
  std::string failed_hypothesis;
  std::vector<CountRatio<T>> ratios;
  MinimalityReport<T> g_minimality;
  bool minimal_ok = true;
  bool holds = true;
};

// Checks the subregularity conclusion: G is ε′-minimal and every Oct(c),
// c ∈ {1,2}^k, has ratio (1±ε′)d^{∏c_i}.
template <class T>
SubregularCheck<T> subregular_check(const WeightedGraph<T>& g, const WeightedGraph<T>& gamma, const T& eps,
                                    const T& d, const T& eta, const CountOptions& opts = {}) {
  SubregularCheck<T> r;
  int k = g.num_parts();
  r.eps_out = subregular_epsilon(eps, eta, d, k);
  if (auto why = regularity_precondition_failure(g, gamma)) {
    r.failed_hypothesis = *why;
  } else {
    auto v = is_regular(g, gamma, eps, std::optional<T>(d), opts);
    auto mr = minimality_report(gamma, opts);
    if (!v.passes) {
      r.failed_hypothesis = "G is not (eps,d)-regular";
    } else if (mr.infinite || !approx_le(mr.defect, eta)) {
      r.failed_hypothesis = "Gamma is not eta-minimal";
    } else {
      r.hypotheses_ok = true;
    }
  }
  std::vector<int> c(static_cast<std::size_t>(k), 1);
  while (true) {
    CountRatio<T> cr;
    cr.s = c;
    unsigned long long prod = 1;
    for (int x : c) prod *= static_cast<unsigned long long>(x);
    cr.target = pow_int(d, prod);
    cr.gamma_count = oct_count(gamma, OctSpec{k, c, false}, opts);
    cr.g_count = oct_count(g, OctSpec{k, c, false}, opts);
    if (is_zero(cr.gamma_count)) {
      cr.degenerate = true;
    } else {
      cr.ratio = cr.g_count / cr.gamma_count;
      T dev = cr.ratio - cr.target;
      if (dev < T(0)) dev = -dev;
      cr.within = approx_le(dev, r.eps_out * cr.target);
    }
    r.ratios.push_back(cr);
    int j = k - 1;
    while (j >= 0 && ++c[static_cast<std::size_t>(j)] == 3) {
      c[static_cast<std::size_t>(j)] = 1;
      --j;
    }
    if (j < 0) break;
  }
  r.g_minimality = minimality_report(g, opts);
  r.minimal_ok = !r.g_minimality.infinite && approx_le(r.g_minimality.defect, r.eps_out);
  bool all = r.minimal_ok;
  for (const auto& cr : r.ratios) all = all && cr.within;
  r.holds = !r.hypotheses_ok || all;
  return r;
}

template <class T>
struct SlicingCheck {
  double eps_out = 0;  // +∞ when the slicing condition is unsatisfiable
  bool vacuous = false;
  bool hypotheses_ok = false;
  std::string failed_hypothesis;
  std::vector<CountRatio<T>> ratios;
  MinimalityReport<T> g_minimality;
  bool minimal_ok = true;
  bool conclusion_ok = true;
  bool holds = true;
};

// Slicing: G agrees with Γ except on the slot of the first ℓ parts, where
// G[V_1..V_ℓ] is (ε,d)-regular relative to Γ[V_1..V_ℓ]. Checks the count ratios
// (1±ε′)d^r, r = ∏_{i≤ℓ} s_i, over s ∈ {0,1,2}^k and ε′-minimality of G.
template <class T>
SlicingCheck<T> slicing_check(const WeightedGraph<T>& gamma, const WeightedGraph<T>& g, int ell, const T& eps,
                              const T& d, const T& eta, const CountOptions& opts = {}) {
  int k = g.num_parts();
  if (!same_parts(g, gamma)) throw DomainError("slicing_check: part mismatch");
  if (ell < 1 || ell >= k) throw DomainError("slicing_check: need 1 <= l < k");
  SlicingCheck<T> r;
  r.eps_out = slicing_epsilon(to_double(eps), to_double(eta), to_double(d), k);
  r.vacuous = std::isinf(r.eps_out);
  SlotMask slot = (SlotMask{1} << ell) - 1;
  std::vector<PartIndex> first(g.part_ids().begin(), g.part_ids().begin() + ell);
  bool agrees = compare_slots(g, gamma, [&](SlotMask m) { return m != slot; },
                              [](const T& a, const T& b) { return approx_equal(a, b); });
  if (!agrees) {
    r.failed_hypothesis = "G differs from Gamma outside the slot of the first l parts";
  } else {
    auto gi = induced(g, first);
    auto gammai = induced(gamma, first);
    auto why = regularity_precondition_failure(gi, gammai);
    auto mr = minimality_report(gamma, opts);
    if (why) {
      r.failed_hypothesis = *why;
    } else if (!is_regular(gi, gammai, eps, std::optional<T>(d), opts).passes) {
      r.failed_hypothesis = "G[V_1..V_l] is not (eps,d)-regular";
    } else if (mr.infinite || !approx_le(mr.defect, eta)) {
      r.failed_hypothesis = "Gamma is not eta-minimal";
    } else {
      r.hypotheses_ok = true;
    }
  }
  T eps_out = r.vacuous ? T(0) : T(r.eps_out);
  std::vector<int> s(static_cast<std::size_t>(k), 0);
  r.conclusion_ok = true;
  while (true) {
    CountRatio<T> cr;
    cr.s = s;
    unsigned long long prod = 1;
    for (int i = 0; i < ell; ++i) prod *= static_cast<unsigned long long>(s[static_cast<std::size_t>(i)]);
    cr.target = pow_int(d, prod);
    cr.gamma_count = oct_count(gamma, OctSpec{k, s, false}, opts);
    cr.g_count = oct_count(g, OctSpec{k, s, false}, opts);
    if (is_zero(cr.gamma_count)) {
      cr.degenerate = true;
    } else {
      cr.ratio = cr.g_count / cr.gamma_count;
      T dev = cr.ratio - cr.target;
      if (dev < T(0)) dev = -dev;
      cr.within = r.vacuous || approx_le(dev, eps_out * cr.target);
    }
    r.conclusion_ok = r.conclusion_ok && cr.within;
    r.ratios.push_back(cr);
    int j = k - 1;
    while (j >= 0 && ++s[static_cast<std::size_t>(j)] == 3) {
      s[static_cast<std::size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
  }
  r.g_minimality = minimality_report(g, opts);
  r.minimal_ok = r.vacuous || (!r.g_minimality.infinite && approx_le(r.g_minimality.defect, eps_out));
  r.holds = !r.hypotheses_ok || (r.conclusion_ok && r.minimal_ok);
  return r;
}

}  // namespace hyperreg
