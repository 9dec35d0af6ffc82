#include "hyperreg/thc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace hyperreg {

PartiteComplex blowup(const PartiteComplex& shape, const std::vector<VertexMask>& edges,
                      const std::vector<int>& copies) {
  int n = shape.num_vertices();
  if (static_cast<int>(copies.size()) != n) throw DomainError("blowup: need a copy count per vertex");
  std::map<PartIndex, std::vector<VertexId>> parts;
  std::vector<std::vector<VertexId>> ids(static_cast<std::size_t>(n));
  VertexId next = 0;
  for (int x = 0; x < n; ++x) {
    for (int c = 0; c < copies[static_cast<std::size_t>(x)]; ++c) {
      ids[static_cast<std::size_t>(x)].push_back(next);
      parts[shape.id(x)].push_back(next);
      ++next;
    }
  }
  std::vector<std::vector<VertexId>> gens;
  for (VertexMask f : edges) {
    std::vector<int> members;
    for (int x = 0; x < n; ++x)
      if (f >> x & 1U) members.push_back(x);
    if (members.empty()) continue;
    std::vector<int> pick(members.size(), 0);
    while (true) {
      std::vector<VertexId> g;
      for (std::size_t i = 0; i < members.size(); ++i)
        g.push_back(ids[static_cast<std::size_t>(members[i])][static_cast<std::size_t>(pick[i])]);
      gens.push_back(std::move(g));
      int i = static_cast<int>(members.size()) - 1;
      while (i >= 0 && ++pick[static_cast<std::size_t>(i)] == copies[static_cast<std::size_t>(members[static_cast<std::size_t>(i)])])
        pick[static_cast<std::size_t>(i--)] = 0;
      if (i < 0) break;
    }
  }
  return PartiteComplex::from_generators(parts, gens);
}

namespace {

// Calls f(copies) for every assignment of 1..max_copies to the vertices of
// `support` (0 elsewhere) with total at most max_total.
void for_each_copies(int n, VertexMask support, int max_copies, int max_total,
                     const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> members;
  for (int x = 0; x < n; ++x)
    if (support >> x & 1U) members.push_back(x);
  if (static_cast<int>(members.size()) > max_total) return;
  std::vector<int> copies(static_cast<std::size_t>(n), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == members.size()) {
      f(copies);
      return;
    }
    int left = static_cast<int>(members.size() - i - 1);
    for (int c = 1; c <= max_copies && used + c + left <= max_total; ++c) {
      copies[static_cast<std::size_t>(members[i])] = c;
      rec(i + 1, used + c);
    }
    copies[static_cast<std::size_t>(members[i])] = 0;
  };
  rec(0, 0);
}

}  // namespace

std::vector<PartiteComplex> blowup_family(const PartiteComplex& shape, int max_copies, int max_total,
                                          FamilyMode mode) {
  std::vector<PartiteComplex> out;
  int n = shape.num_vertices();
  if (mode == FamilyMode::Octahedra) {
    for (VertexMask e : shape.edges()) {
      if (e == 0) continue;
      for_each_copies(n, e, max_copies, max_total,
                      [&](const std::vector<int>& copies) { out.push_back(blowup(shape, {e}, copies)); });
    }
    return out;
  }
  if (n > 6) throw BudgetError("blowup_family: exhaustive mode is limited to 6 parts");
  for (VertexMask support = 1; support < (VertexMask{1} << n); ++support) {
    std::vector<VertexMask> cand;
    bool support_ok = true;
    for (int x = 0; x < n; ++x)
      if ((support >> x & 1U) && !shape.contains(VertexMask{1} << x)) support_ok = false;
    if (!support_ok) continue;
    for (VertexMask e : shape.edges())
      if (popcount(e) >= 2 && (e & support) == e) cand.push_back(e);
    std::stable_sort(cand.begin(), cand.end(), [](VertexMask a, VertexMask b) { return popcount(a) < popcount(b); });
    std::vector<VertexMask> chosen;
    std::vector<VertexMask> singles;
    for (int x = 0; x < n; ++x)
      if (support >> x & 1U) singles.push_back(VertexMask{1} << x);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == cand.size()) {
        std::vector<VertexMask> gens = singles;
        gens.insert(gens.end(), chosen.begin(), chosen.end());
        for_each_copies(n, support, max_copies, max_total,
                        [&](const std::vector<int>& copies) { out.push_back(blowup(shape, gens, copies)); });
        return;
      }
      rec(i + 1);
      VertexMask e = cand[i];
      bool closed = true;
      for (int x = 0; x < n && closed; ++x) {
        if (!(e >> x & 1U)) continue;
        VertexMask sub = e & ~(VertexMask{1} << x);
        if (popcount(sub) >= 2 && std::find(chosen.begin(), chosen.end(), sub) == chosen.end()) closed = false;
      }
      if (!closed) return;
      chosen.push_back(e);
      rec(i + 1);
      chosen.pop_back();
    };
    rec(0);
  }
  return out;
}

PartiteComplex complete_shape(const std::vector<PartIndex>& parts, int k) {
  std::map<PartIndex, std::vector<VertexId>> pm;
  for (PartIndex p : parts) pm[p].push_back(p);
  std::vector<std::vector<VertexId>> gens;
  int n = static_cast<int>(parts.size());
  std::vector<PartIndex> sorted = parts;
  std::sort(sorted.begin(), sorted.end());
  for (VertexMask m = 1; m < (VertexMask{1} << n); ++m) {
    if (popcount(m) > k) continue;
    std::vector<VertexId> g;
    for (int i = 0; i < n; ++i)
      if (m >> i & 1U) g.push_back(sorted[static_cast<std::size_t>(i)]);
    gens.push_back(std::move(g));
  }
  return PartiteComplex::from_generators(pm, gens);
}

// ---------------------------------------------------------------- random hypergraphs

RandomHypergraph::RandomHypergraph(const RandomGraphSpec& spec) : k_(spec.k), n_(spec.n) {
  if (spec.n < 1) throw DomainError("random_hypergraph: n must be positive");
  if (spec.k < 1) throw DomainError("random_hypergraph: k must be positive");
  if (!(spec.p >= 0 && spec.p <= 1)) throw DomainError("random_hypergraph: p must lie in [0,1]");
  double cells = std::pow(static_cast<double>(n_), k_);
  if (cells > 2e8) throw BudgetError("random_hypergraph: n^k too large for the dense store");
  bits_.assign(static_cast<std::size_t>(cells), 0);
  std::mt19937_64 rng(spec.seed);
  std::bernoulli_distribution coin(spec.p);
  if (k_ > n_) return;
  std::vector<int> t(static_cast<std::size_t>(k_));
  for (int i = 0; i < k_; ++i) t[static_cast<std::size_t>(i)] = i;
  while (true) {
    ++possible_;
    if (coin(rng)) {
      bits_[index(t)] = 1;
      ++edges_;
    }
    int i = k_ - 1;
    while (i >= 0 && t[static_cast<std::size_t>(i)] == n_ - k_ + i) --i;
    if (i < 0) break;
    ++t[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k_; ++j) t[static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(j - 1)] + 1;
  }
}

std::size_t RandomHypergraph::index(const std::vector<int>& sorted) const {
  std::size_t idx = 0;
  for (int v : sorted) idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
  return idx;
}

bool RandomHypergraph::has_edge(std::vector<int> vertices) const {
  if (static_cast<int>(vertices.size()) != k_) return true;  // complete below arity k
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end()) return false;
  for (int v : vertices)
    if (v < 0 || v >= n_) throw DomainError("random_hypergraph: vertex out of range");
  return bits_[index(vertices)] != 0;
}

VertexPartition balanced_partition(int n, const std::vector<PartIndex>& parts) {
  VertexPartition out;
  int m = static_cast<int>(parts.size());
  if (m == 0) throw DomainError("balanced_partition: no parts");
  int start = 0;
  for (int i = 0; i < m; ++i) {
    int size = n / m + (i < n % m ? 1 : 0);
    std::vector<int> vs;
    for (int v = start; v < start + size; ++v) vs.push_back(v);
    start += size;
    out.emplace_back(parts[static_cast<std::size_t>(i)], std::move(vs));
  }
  return out;
}

// ---------------------------------------------------------------- random THC experiment

namespace {

struct NconcResult {
  bool degenerate = false;
  double dev_all = 0;
  double dev_injective = 0;
  double gap = 0;
  bool within = true;
};

NconcResult nconc_check(const PartiteComplex& r, const WeightedGraph<double>& g, const DensityGraph<double>& q,
                        const PartiteComplex& pattern, const std::vector<const std::vector<int>*>& members_of_part,
                        int n1, double tol, long injective_limit, std::mt19937_64& rng) {
  NconcResult res;
  int z = r.num_vertices();
  std::vector<std::vector<int>> U(static_cast<std::size_t>(z));
  for (int a = 0; a < z; ++a) {
    int pos = g.position(r.part_of(a));
    std::vector<int> cand;
    for (int u = 0; u < g.part_size(pos); ++u)
      if (g.vertex_weight(pos, u) == 1.0) cand.push_back(u);
    if (static_cast<int>(cand.size()) < n1) {
      res.degenerate = true;
      return res;
    }
    std::shuffle(cand.begin(), cand.end(), rng);
    cand.resize(static_cast<std::size_t>(n1));
    U[static_cast<std::size_t>(a)] = std::move(cand);
  }
  PartiteComplex r1 = r.one_vertex_per_part();
  std::vector<std::pair<PartIndex, int>> parts;
  for (int a = 0; a < z; ++a) parts.emplace_back(r.id(a), n1);
  WeightedGraph<double> w(parts, g.arity_cap(), 1.0);
  double expected = 1;
  for (VertexMask f : r.edges()) {
    if (popcount(f) < 2) continue;
    std::vector<int> members;
    SlotMask qm = 0;
    for (int a = 0; a < z; ++a)
      if (f >> a & 1U) {
        members.push_back(a);
        qm |= SlotMask{1} << q.position(r.part_of(a));
      }
    expected *= q.get_slot(qm);
    if (popcount(f) > g.arity_cap()) continue;
    std::vector<double> data(w.slot_size(f));
    for_each_tuple(w, f, [&](const std::vector<int>& coords, std::size_t flat) {
      std::vector<GraphVertex> e;
      for (std::size_t i = 0; i < members.size(); ++i)
        e.push_back({r.part_of(members[i]), U[static_cast<std::size_t>(members[i])][static_cast<std::size_t>(coords[i])]});
      data[flat] = g.weight(e);
    });
    w.set_slot(f, std::move(data));
  }
  // Both sides are divided by n1^{|Z|}: hom_weight is already an average.
  double n_all = hom_weight(r1, w);
  res.dev_all = expected > 0 ? std::fabs(n_all / expected - 1) : (n_all == 0 ? 0 : INFINITY);
  res.dev_injective = res.dev_all;
  // Two vertices of Z can only collide in Γ when their parts copy the same class.
  bool shared = false;
  std::vector<PartIndex> cls(static_cast<std::size_t>(z));
  for (int a = 0; a < z; ++a) {
    cls[static_cast<std::size_t>(a)] = pattern.part_of(pattern.local_of(r.part_of(a)));
    for (int b = 0; b < a; ++b)
      if (cls[static_cast<std::size_t>(a)] == cls[static_cast<std::size_t>(b)]) shared = true;
  }
  if (shared && std::pow(static_cast<double>(n1), z) <= static_cast<double>(injective_limit)) {
    double total = 0;
    std::vector<int> psi(static_cast<std::size_t>(z), 0);
    std::vector<int> global(static_cast<std::size_t>(z));
    while (true) {
      bool inj = true;
      for (int a = 0; a < z && inj; ++a) {
        int pos_in_class = U[static_cast<std::size_t>(a)][static_cast<std::size_t>(psi[static_cast<std::size_t>(a)])];
        global[static_cast<std::size_t>(a)] =
            (*members_of_part[static_cast<std::size_t>(a)])[static_cast<std::size_t>(pos_in_class)];
        for (int b = 0; b < a && inj; ++b)
          if (global[static_cast<std::size_t>(b)] == global[static_cast<std::size_t>(a)]) inj = false;
      }
      if (inj) {
        double prod = 1;
        for (VertexMask f : r1.edges()) {
          if (popcount(f) < 2) continue;
          std::vector<GraphVertex> e;
          for (int a = 0; a < z; ++a)
            if (f >> a & 1U) e.push_back({r1.part_of(a), psi[static_cast<std::size_t>(a)]});
          prod *= w.weight(e);
          if (prod == 0) break;
        }
        total += prod;
      }
      int a = z - 1;
      while (a >= 0 && ++psi[static_cast<std::size_t>(a)] == n1) psi[static_cast<std::size_t>(a--)] = 0;
      if (a < 0) break;
    }
    double n_inj = total / std::pow(static_cast<double>(n1), z);
    res.dev_injective = expected > 0 ? std::fabs(n_inj / expected - 1) : (n_inj == 0 ? 0 : INFINITY);
    res.gap = n_all > 0 ? std::fabs(n_all - n_inj) / n_all : 0;
  }
  res.within = res.dev_all <= tol;
  return res;
}

}  // namespace

RandomThcReport random_thc_experiment(const RandomGraphSpec& spec, const PartiteComplex& pattern,
                                      const VertexPartition& partition, double eta, int c_star,
                                      const RandomThcOptions& opts) {
  RandomThcReport rep;
  rep.k = spec.k;
  rep.n = spec.n;
  rep.p = spec.p;
  rep.eta = eta;
  rep.c_star = c_star;
  rep.d = degk(pattern, spec.k);
  if (opts.d_override) {
    rep.d_mismatch = *opts.d_override != rep.d;
    rep.d = *opts.d_override;
  }
  rep.Delta = max_degree(pattern);
  double ln_n = std::log(static_cast<double>(spec.n));
  rep.n0 = spec.n / ln_n;
  for (const auto& [j, vs] : partition)
    if (static_cast<double>(vs.size()) < rep.n0) rep.parts_ok = false;
  double four_k = std::pow(4.0, spec.k);
  double e1 = four_k * c_star * rep.d;
  double e2 = four_k * rep.Delta + rep.d;
  double log2p = spec.p > 0 ? std::log2(spec.p) : -INFINITY;
  rep.log2_p_condition_lhs = spec.p >= 1 ? 0 : log2p * std::max(e1, e2);
  rep.log2_p_condition_rhs = std::log2(2 * ln_n) + (opts.eps - 1) * std::log2(static_cast<double>(spec.n));
  rep.p_condition = rep.log2_p_condition_lhs >= rep.log2_p_condition_rhs;
  rep.n1 = spec.n * std::pow(spec.p, rep.d) / (2 * ln_n);
  int n1 = static_cast<int>(std::floor(rep.n1));
  if (n1 < 1) rep.degenerate = true;

  RandomHypergraph gamma(spec);
  rep.edges = gamma.edge_count();
  auto g = to_partite<double>(gamma, partition);
  auto gprime = standard_construction(pattern, g);
  std::vector<PartIndex> ids;
  for (int x = 0; x < pattern.num_vertices(); ++x) ids.push_back(pattern.id(x));
  DensityGraph<double> q(ids);
  for (VertexMask f : pattern.edges())
    if (popcount(f) == spec.k) q.set_slot(static_cast<SlotMask>(f), spec.p);

  std::map<PartIndex, const std::vector<int>*> class_members;
  for (const auto& [j, vs] : partition) class_members[j] = &vs;

  Scaled eta_s = to_scaled(eta);
  double tol = 1 / ln_n;
  rep.trials.resize(static_cast<std::size_t>(std::max(opts.trials, 0)));
  parallel_for(rep.trials.size(), 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      ThcTrialRow& row = rep.trials[t];
      row.trial = static_cast<int>(t);
      std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                        static_cast<std::uint32_t>(t)};
      std::mt19937_64 rng(seq);
      row.seed = rng();
      auto cur = gprime;
      auto cur_q = q;
      VertexMask embedded = 0;
      for (int step = 0; step < pattern.num_vertices(); ++step) {
        PartiteComplex rest = pattern.remove_vertices(embedded).one_vertex_per_part();
        auto family = blowup_family(rest, opts.max_copies, c_star, opts.mode);
        ++row.steps_checked;
        for (const PartiteComplex& r : family) {
          auto c = count_check(r, cur, cur_q, eta_s, r.num_vertices(), opts.count);
          ++row.counts_checked;
          double dev = c.infinite ? INFINITY : c.deviation;
          row.worst_deviation = std::max(row.worst_deviation, dev);
          if (!c.ok && row.passed) {
            row.passed = false;
            row.failing_step = step;
            row.failing_complex = r.describe();
          }
          if (opts.nconc && n1 >= 1) {
            std::vector<const std::vector<int>*> members;
            for (int a = 0; a < r.num_vertices(); ++a)
              members.push_back(class_members.at(pattern.part_of(pattern.local_of(r.part_of(a)))));
            auto nc = nconc_check(r, cur, cur_q, pattern, members, n1, tol, opts.injective_limit, rng);
            if (nc.degenerate) {
              row.nconc_degenerate = true;
            } else {
              ++row.nconc_checked;
              if (nc.within) ++row.nconc_within;
              row.nconc_worst = std::max(row.nconc_worst, nc.dev_all);
              row.nconc_worst_injective = std::max(row.nconc_worst_injective, nc.dev_injective);
              row.nconc_worst_gap = std::max(row.nconc_worst_gap, nc.gap);
            }
          }
        }
        int x = pattern.order()[static_cast<std::size_t>(step)];
        PartIndex xid = pattern.id(x);
        int pos = cur.position(xid);
        std::vector<double> weights;
        double total = 0;
        for (int u = 0; u < cur.part_size(pos); ++u) {
          weights.push_back(cur.vertex_weight(pos, u));
          total += weights.back();
        }
        if (total <= 0) {
          row.stuck = true;
          row.passed = false;
          if (row.failing_step < 0) row.failing_step = step;
          break;
        }
        std::discrete_distribution<int> pick(weights.begin(), weights.end());
        int v = pick(rng);
        cur = link(cur, xid, v);
        cur_q = density_link(cur_q, xid);
        embedded |= VertexMask{1} << x;
      }
    }
  });
  long passed = 0, nc_checked = 0, nc_within = 0;
  for (const auto& row : rep.trials) {
    if (row.passed) ++passed;
    nc_checked += row.nconc_checked;
    nc_within += row.nconc_within;
  }
  rep.pass_frequency = rep.trials.empty() ? 0 : static_cast<double>(passed) / static_cast<double>(rep.trials.size());
  rep.nconc_frequency = nc_checked == 0 ? 0 : static_cast<double>(nc_within) / static_cast<double>(nc_checked);
  return rep;
}

}  // namespace hyperreg
