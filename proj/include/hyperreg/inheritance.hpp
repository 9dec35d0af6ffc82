#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hyperreg/density_graph.hpp"
#include "hyperreg/homcount.hpp"
#include "hyperreg/parallel.hpp"
#include "hyperreg/regularity.hpp"
#include "hyperreg/weighted_graph.hpp"

namespace hyperreg {

template <class T>
struct InhHypothesisReport {
  int k = 0;
  bool inh1 = false;
  bool inh2 = false;
  bool inh3 = false;
  bool inh4 = false;
  int inh1_checked = 0;
  T inh1_worst{0};  // max |Γ(R)/((γ(∅)/p(∅))𝒫(R)) − 1|
  std::string inh1_witness;
  std::string inh2_detail;
  std::string inh3_detail;
  std::string inh4_detail;
  std::optional<RegularityVerdict<T>> inh3_verdict;
  std::optional<RegularityVerdict<T>> inh4_verdict;
  bool all() const { return inh1 && inh2 && inh3 && inh4; }
};

namespace detail {

inline std::string vec_string(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

inline bool next_vector(std::vector<int>& v, int base) {
  for (std::size_t j = v.size(); j-- > 0;) {
    if (++v[j] < base) return true;
    v[j] = 0;
  }
  return false;
}

}  // namespace detail

// INH1–INH4 for (k+1)-partite G ≤ Γ with parts V_0 (lowest index) .. V_k.
// INH1 runs over +2Oct(1,a) with the shared tail in V_0 (edges up to size
// k+1) for a ∈ {0,1,2}^k, and over Oct_{k+1}(b) for b ∈ {0,1,2}^{k+1}.
template <class T>
InhHypothesisReport<T> check_inh_hypotheses(const WeightedGraph<T>& g, const WeightedGraph<T>& gamma,
                                            const DensityGraph<T>& p, const T& eps, const T& d, const T& d_prime,
                                            const T& eta, const CountOptions& opts = {}) {
  if (!same_parts(g, gamma)) throw DomainError("check_inh_hypotheses: part mismatch");
  int parts = g.num_parts();
  if (parts < 2) throw DomainError("check_inh_hypotheses: need at least two parts");
  int k = parts - 1;
  InhHypothesisReport<T> r;
  r.k = k;

  T p_empty = p.get_slot(0);
  r.inh1 = true;
  auto check_r = [&](const OctSpec& spec, const std::string& name) {
    ++r.inh1_checked;
    PartiteComplex rc = oct_complex_for(gamma, spec);
    T count = hom_weight(rc, gamma, opts);
    if (is_zero(p_empty)) {
      r.inh1 = false;
      r.inh1_witness = "p(empty) = 0";
      return;
    }
    T predicted = gamma.empty_weight() / p_empty * density_value(p, rc);
    T dev;
    if (is_zero(predicted)) {
      if (is_zero(count)) return;
      r.inh1 = false;
      r.inh1_witness = name + " predicted 0";
      return;
    }
    dev = count / predicted - T(1);
    if (dev < T(0)) dev = -dev;
    if (dev > r.inh1_worst) {
      r.inh1_worst = dev;
      r.inh1_witness = name;
    }
    if (!approx_le(dev, eta)) r.inh1 = false;
  };
  std::vector<int> a(static_cast<std::size_t>(k), 0);
  do {
    std::vector<int> full{1};
    full.insert(full.end(), a.begin(), a.end());
    check_r(OctSpec{k + 1, full, true}, "+2Oct" + detail::vec_string(a));
  } while (detail::next_vector(a, 3));
  std::vector<int> b(static_cast<std::size_t>(k + 1), 0);
  do {
    check_r(OctSpec{k + 1, b, false}, "Oct" + detail::vec_string(b));
  } while (detail::next_vector(b, 3));

  SlotMask top = g.all_parts();
  SlotMask rest = top & ~SlotMask{1};
  r.inh2 = compare_slots(g, gamma, [&](SlotMask m) { return m != top && m != rest; },
                         [](const T& x, const T& y) { return approx_equal(x, y); });
  if (!r.inh2) r.inh2_detail = "G differs from Gamma outside the (k+1)-slot and the V_1..V_k slot";

  auto spliced = replace_layer(gamma, k + 1, g);
  if (auto why = regularity_precondition_failure(spliced, gamma)) {
    r.inh3_detail = *why;
  } else {
    r.inh3_verdict = is_regular(spliced, gamma, eps, std::optional<T>(d_prime), opts);
    r.inh3 = r.inh3_verdict->passes;
  }

  std::vector<PartIndex> upper(g.part_ids().begin() + 1, g.part_ids().end());
  auto gi = induced(g, upper);
  auto gammai = induced(gamma, upper);
  if (auto why = regularity_precondition_failure(gi, gammai)) {
    r.inh4_detail = *why;
  } else {
    r.inh4_verdict = is_regular(gi, gammai, eps, std::optional<T>(d), opts);
    r.inh4 = r.inh4_verdict->passes;
  }
  return r;
}

template <class T>
struct VertexScan {
  int vertex = 0;
  bool precondition_ok = true;
  std::string precondition_detail;
  RegularityVerdict<T> anchored;  // at (ε′, dd′); decides membership of good_set
  RegularityVerdict<T> measured;  // at ε′ with the link's own density
  bool good = false;
};

// Hypotheses behind the inheritance guarantee: inputs ε, η, the density graph P.
template <class T>
struct InheritHypotheses {
  T eps_in{0};
  T eta{0};
  DensityGraph<T> p;
};

template <class T>
struct InheritanceScan {
  PartIndex part = 0;
  T eps_prime{0};
  T target{0};  // dd′
  std::vector<int> good_set;
  T good_vnorm{0};
  T part_vnorm{0};
  T required_vnorm{0};
  T bad_fraction{0};  // 1 − good_vnorm/part_vnorm
  std::vector<VertexScan<T>> per_vertex;
  std::optional<InhHypothesisReport<T>> hypothesis_report;
  bool threshold_ok = false;
  bool asserted = false;  // hypotheses and threshold verified, guarantee applies
  bool guarantee_holds = true;
};

// Links every v ∈ V_0 and tests 𝒢_v against Γ_v at (ε′, dd′).
template <class T>
InheritanceScan<T> inherit_scan(const WeightedGraph<T>& g, const WeightedGraph<T>& gamma, const T& eps_prime,
                                const T& d, const T& d_prime,
                                const std::optional<InheritHypotheses<T>>& hyp = std::nullopt,
                                const CountOptions& opts = {}) {
  if (!same_parts(g, gamma)) throw DomainError("inherit_scan: part mismatch");
  if (g.num_parts() < 2) throw DomainError("inherit_scan: need at least two parts");
  InheritanceScan<T> s;
  s.part = g.part_id(0);
  s.eps_prime = eps_prime;
  s.target = d * d_prime;
  int n = g.part_size(0);
  s.per_vertex.resize(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      VertexScan<T>& vs = s.per_vertex[v];
      vs.vertex = static_cast<int>(v);
      auto gv = link(g, s.part, static_cast<int>(v));
      auto gammav = link(gamma, s.part, static_cast<int>(v));
      if (auto why = regularity_precondition_failure(gv, gammav)) {
        vs.precondition_ok = false;
        vs.precondition_detail = *why;
        continue;
      }
      vs.anchored = is_regular(gv, gammav, eps_prime, std::optional<T>(s.target), opts);
      vs.measured = is_regular(gv, gammav, eps_prime, std::optional<T>(), opts);
      vs.good = vs.anchored.passes;
    }
  });
  for (const auto& vs : s.per_vertex) {
    if (vs.good) s.good_set.push_back(vs.vertex);
  }
  auto report = vnorm(gamma, s.part, s.good_set);
  s.good_vnorm = report.vnorm;
  s.part_vnorm = report.part_vnorm;
  s.required_vnorm = (T(1) - eps_prime) * s.part_vnorm;
  s.bad_fraction = is_zero(s.part_vnorm) ? T(0) : T(1) - s.good_vnorm / s.part_vnorm;
  if (hyp) {
    s.hypothesis_report = check_inh_hypotheses(g, gamma, hyp->p, hyp->eps_in, d, d_prime, hyp->eta, opts);
    double d0 = std::min(to_double(d), to_double(d_prime));
    InheritThreshold th{g.num_parts() - 1, to_double(eps_prime), d0};
    s.threshold_ok = d0 > 0 && th.admits(to_double(hyp->eps_in), to_double(hyp->eta));
    s.asserted = s.threshold_ok && s.hypothesis_report->all();
    if (s.asserted) s.guarantee_holds = approx_le(s.required_vnorm, s.good_vnorm);
  }
  return s;
}

}  // namespace hyperreg
