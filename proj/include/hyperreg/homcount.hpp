#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hyperreg/complex.hpp"
#include "hyperreg/errors.hpp"
#include "hyperreg/numeric.hpp"
#include "hyperreg/parallel.hpp"
#include "hyperreg/weighted_graph.hpp"

namespace hyperreg {

struct CountOptions {
  std::uint64_t budget = 100'000'000;  // multiply-adds
};

// Multiplicities a_j per part position of the host graph; `tailed` selects
// the +2Oct form whose first nonzero entry (which must be 1) is the shared tail.
struct OctSpec {
  int k = 0;
  std::vector<int> a;
  bool tailed = false;
};

struct HomEstimate {
  double value = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double std_error = 0;
};

namespace detail {

template <class T>
struct Factor {
  std::vector<int> vars;  // ascending
  std::vector<T> data;    // row-major over vars
};

struct Scope {
  std::vector<int> dims;  // per variable
};

inline std::size_t scope_size(const std::vector<int>& vars, const Scope& s) {
  std::size_t n = 1;
  for (int v : vars) n *= static_cast<std::size_t>(s.dims[static_cast<std::size_t>(v)]);
  return n;
}

inline std::vector<std::size_t> strides_in(const std::vector<int>& vars, const std::vector<int>& of, const Scope& s) {
  // Stride of each variable of `of` inside a factor over `vars` (0 if absent).
  std::vector<std::size_t> own(vars.size());
  std::size_t st = 1;
  for (std::size_t i = vars.size(); i-- > 0;) {
    own[i] = st;
    st *= static_cast<std::size_t>(s.dims[static_cast<std::size_t>(vars[i])]);
  }
  std::vector<std::size_t> out;
  for (int v : of) {
    auto it = std::find(vars.begin(), vars.end(), v);
    out.push_back(it == vars.end() ? 0 : own[static_cast<std::size_t>(it - vars.begin())]);
  }
  return out;
}

// Sums variable x out of the product of `fs`, dividing by its domain size.
template <class T>
Factor<T> eliminate(const std::vector<const Factor<T>*>& fs, int x, const Scope& s) {
  std::vector<int> u;
  for (const auto* f : fs) u.insert(u.end(), f->vars.begin(), f->vars.end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  u.erase(std::remove(u.begin(), u.end(), x), u.end());
  std::vector<std::vector<std::size_t>> st;
  std::vector<std::size_t> sx;
  for (const auto* f : fs) {
    st.push_back(strides_in(f->vars, u, s));
    sx.push_back(strides_in(f->vars, {x}, s)[0]);
  }
  int dx = s.dims[static_cast<std::size_t>(x)];
  std::size_t cells = scope_size(u, s);
  Factor<T> out;
  out.vars = u;
  out.data.assign(cells, T(0));
  T denom(dx);
  parallel_for(cells, 4096, [&](std::size_t begin, std::size_t end) {
    std::vector<int> coords(u.size(), 0);
    std::size_t rem = begin;
    for (std::size_t a = u.size(); a-- > 0;) {
      int d = s.dims[static_cast<std::size_t>(u[a])];
      coords[a] = static_cast<int>(rem % static_cast<std::size_t>(d));
      rem /= static_cast<std::size_t>(d);
    }
    std::vector<std::size_t> base(fs.size());
    T sum;
    T prod;
    for (std::size_t cell = begin; cell < end; ++cell) {
      for (std::size_t i = 0; i < fs.size(); ++i) {
        std::size_t off = 0;
        for (std::size_t a = 0; a < u.size(); ++a) off += static_cast<std::size_t>(coords[a]) * st[i][a];
        base[i] = off;
      }
      sum = T(0);
      for (int xi = 0; xi < dx; ++xi) {
        prod = fs[0]->data[base[0] + static_cast<std::size_t>(xi) * sx[0]];
        for (std::size_t i = 1; i < fs.size() && prod != T(0); ++i) {
          prod *= fs[i]->data[base[i] + static_cast<std::size_t>(xi) * sx[i]];
        }
        sum += prod;
      }
      out.data[cell] = sum / denom;
      for (std::size_t a = u.size(); a-- > 0;) {
        if (++coords[a] < s.dims[static_cast<std::size_t>(u[a])]) break;
        coords[a] = 0;
      }
    }
  });
  return out;
}

// Greedy min-fill elimination of every variable; returns the product of the
// resulting scalars. Variables touched by no factor average to 1.
template <class T>
T eliminate_all(std::vector<Factor<T>> factors, const Scope& s, std::uint64_t budget) {
  std::uint64_t spent = 0;
  T result(1);
  while (true) {
    std::vector<int> live;
    for (const auto& f : factors) live.insert(live.end(), f.vars.begin(), f.vars.end());
    std::sort(live.begin(), live.end());
    live.erase(std::unique(live.begin(), live.end()), live.end());
    if (live.empty()) break;
    int best = -1;
    long best_fill = 0;
    double best_cost = 0;
    for (int x : live) {
      std::vector<int> nb;
      std::size_t touching = 0;
      for (const auto& f : factors) {
        if (std::find(f.vars.begin(), f.vars.end(), x) == f.vars.end()) continue;
        ++touching;
        nb.insert(nb.end(), f.vars.begin(), f.vars.end());
      }
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
      nb.erase(std::remove(nb.begin(), nb.end(), x), nb.end());
      long fill = 0;
      for (std::size_t i = 0; i < nb.size(); ++i) {
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
          bool adjacent = false;
          for (const auto& f : factors) {
            bool hi = std::find(f.vars.begin(), f.vars.end(), nb[i]) != f.vars.end();
            bool hj = std::find(f.vars.begin(), f.vars.end(), nb[j]) != f.vars.end();
            if (hi && hj) {
              adjacent = true;
              break;
            }
          }
          if (!adjacent) ++fill;
        }
      }
      double cost = static_cast<double>(touching) * static_cast<double>(s.dims[static_cast<std::size_t>(x)]);
      for (int v : nb) cost *= s.dims[static_cast<std::size_t>(v)];
      if (best < 0 || fill < best_fill || (fill == best_fill && cost < best_cost)) {
        best = x;
        best_fill = fill;
        best_cost = cost;
      }
    }
    if (static_cast<double>(spent) + best_cost > static_cast<double>(budget)) {
      throw BudgetError("exact count needs more than " + std::to_string(budget) + " multiply-adds");
    }
    spent += static_cast<std::uint64_t>(best_cost);
    std::vector<const Factor<T>*> touching;
    std::vector<Factor<T>> rest;
    std::vector<Factor<T>> owned;
    for (auto& f : factors) {
      if (std::find(f.vars.begin(), f.vars.end(), best) != f.vars.end()) {
        owned.push_back(std::move(f));
      } else {
        rest.push_back(std::move(f));
      }
    }
    for (const auto& f : owned) touching.push_back(&f);
    Factor<T> nf = eliminate(touching, best, s);
    if (nf.vars.empty()) {
      result *= nf.data[0];
    } else {
      rest.push_back(std::move(nf));
    }
    factors = std::move(rest);
  }
  for (const auto& f : factors) result *= f.data[0];
  return result;
}

template <class T>
struct FactorModel {
  Scope scope;
  std::vector<Factor<T>> factors;
  std::vector<int> graph_pos;  // per H vertex
};

template <class T>
FactorModel<T> build_factors(const PartiteComplex& h, const WeightedGraph<T>& g) {
  FactorModel<T> model;
  int n = h.num_vertices();
  for (int x = 0; x < n; ++x) {
    auto pos = g.find_position(h.part_of(x));
    if (!pos) throw DomainError("complex uses part " + std::to_string(h.part_of(x)) + " absent from graph");
    if (g.part_size(*pos) == 0) throw DomainError("part " + std::to_string(h.part_of(x)) + " is empty");
    model.graph_pos.push_back(*pos);
    model.scope.dims.push_back(g.part_size(*pos));
  }
  for (VertexMask e : h.edges()) {
    if (e == 0 || popcount(e) > g.arity_cap()) continue;
    SlotMask gm = 0;
    std::vector<int> vars;
    for (int x = 0; x < n; ++x) {
      if (e >> x & 1U) {
        gm |= SlotMask{1} << model.graph_pos[static_cast<std::size_t>(x)];
        vars.push_back(x);
      }
    }
    const std::vector<T>* data = g.layer(gm);
    if (!data) continue;
    std::vector<std::size_t> gstride;
    for (int x : vars) gstride.push_back(g.stride(gm, model.graph_pos[static_cast<std::size_t>(x)]));
    Factor<T> f;
    f.vars = vars;
    std::size_t size = scope_size(vars, model.scope);
    f.data.resize(size);
    std::vector<int> coords(vars.size(), 0);
    for (std::size_t flat = 0; flat < size; ++flat) {
      std::size_t off = 0;
      for (std::size_t i = 0; i < vars.size(); ++i) off += static_cast<std::size_t>(coords[i]) * gstride[i];
      f.data[flat] = (*data)[off];
      for (std::size_t a = vars.size(); a-- > 0;) {
        if (++coords[a] < model.scope.dims[static_cast<std::size_t>(vars[a])]) break;
        coords[a] = 0;
      }
    }
    model.factors.push_back(std::move(f));
  }
  return model;
}

}  // namespace detail

// 𝒢(H): the expected product of g over all edges of H (∅ and singletons
// included) under a uniformly random partite map. Each H-vertex x ranges over
// the part of G with index part_of(x).
template <class T>
T hom_weight(const PartiteComplex& h, const WeightedGraph<T>& g, const CountOptions& opts = {}) {
  auto model = detail::build_factors(h, g);
  return g.empty_weight() * detail::eliminate_all(std::move(model.factors), model.scope, opts.budget);
}

// Full enumeration of all partite maps; the reference oracle for hom_weight.
template <class T>
T hom_weight_naive(const PartiteComplex& h, const WeightedGraph<T>& g, const CountOptions& opts = {}) {
  int n = h.num_vertices();
  std::vector<int> pos(static_cast<std::size_t>(n));
  std::vector<int> dims(static_cast<std::size_t>(n));
  double maps = 1;
  for (int x = 0; x < n; ++x) {
    pos[static_cast<std::size_t>(x)] = g.position(h.part_of(x));
    dims[static_cast<std::size_t>(x)] = g.part_size(pos[static_cast<std::size_t>(x)]);
    if (dims[static_cast<std::size_t>(x)] == 0) throw DomainError("part " + std::to_string(h.part_of(x)) + " is empty");
    maps *= dims[static_cast<std::size_t>(x)];
  }
  if (maps * static_cast<double>(h.edges().size()) > static_cast<double>(opts.budget)) {
    throw BudgetError("naive enumeration exceeds budget of " + std::to_string(opts.budget));
  }
  struct EdgeRef {
    SlotMask mask;
    std::vector<int> verts;  // H vertices in ascending graph position
  };
  std::vector<EdgeRef> edges;
  for (VertexMask e : h.edges()) {
    if (e == 0) continue;
    EdgeRef r{0, {}};
    for (int x = 0; x < n; ++x) {
      if (e >> x & 1U) {
        r.mask |= SlotMask{1} << pos[static_cast<std::size_t>(x)];
        r.verts.push_back(x);
      }
    }
    std::sort(r.verts.begin(), r.verts.end(),
              [&](int a, int b) { return pos[static_cast<std::size_t>(a)] < pos[static_cast<std::size_t>(b)]; });
    edges.push_back(std::move(r));
  }
  std::vector<int> phi(static_cast<std::size_t>(n), 0);
  std::vector<int> coords;
  T total(0);
  while (true) {
    T prod(1);
    for (const auto& e : edges) {
      coords.clear();
      for (int x : e.verts) coords.push_back(phi[static_cast<std::size_t>(x)]);
      prod *= g.weight_at(e.mask, coords);
    }
    total += prod;
    int a = n - 1;
    while (a >= 0 && ++phi[static_cast<std::size_t>(a)] == dims[static_cast<std::size_t>(a)]) {
      phi[static_cast<std::size_t>(a)] = 0;
      --a;
    }
    if (a < 0) break;
  }
  return g.empty_weight() * total / T(maps);
}

// The blow-up complex: entry j of `a` gives the number of vertices placed in
// part part_ids[j]; every crossing set of size ≤ k is an edge. The tailed form
// glues two copies along the vertex of the first nonzero entry.
PartiteComplex oct_complex(const OctSpec& spec, const std::vector<PartIndex>& part_ids);

template <class T>
PartiteComplex oct_complex_for(const WeightedGraph<T>& g, const OctSpec& spec) {
  if (static_cast<int>(spec.a.size()) != g.num_parts()) {
    throw DomainError("octahedron spec has " + std::to_string(spec.a.size()) + " entries for " +
                      std::to_string(g.num_parts()) + " parts");
  }
  return oct_complex(spec, g.part_ids());
}

namespace detail {

// Contracts one multiplicity-2 part by squaring its link sum.
template <class T>
T oct_count_fast(const WeightedGraph<T>& g, const OctSpec& spec, int doubled, const CountOptions& opts) {
  OctSpec half = spec;
  half.a[static_cast<std::size_t>(doubled)] = 1;
  PartiteComplex h1 = oct_complex_for(g, half);
  auto model = build_factors(h1, g);
  int u = -1;
  for (int x = 0; x < h1.num_vertices(); ++x) {
    if (h1.part_of(x) == g.part_id(doubled)) u = x;
  }
  std::vector<const Factor<T>*> touching;
  std::vector<Factor<T>> rest;
  for (const auto& f : model.factors) {
    if (std::find(f.vars.begin(), f.vars.end(), u) != f.vars.end()) {
      touching.push_back(&f);
    } else {
      rest.push_back(f);
    }
  }
  T scalar(1);
  if (!touching.empty()) {
    Factor<T> y = eliminate(touching, u, model.scope);
    for (T& v : y.data) v *= v;
    if (y.vars.empty()) {
      scalar = y.data[0];
    } else {
      rest.push_back(std::move(y));
    }
  }
  return g.empty_weight() * scalar * eliminate_all(std::move(rest), model.scope, opts.budget);
}

}  // namespace detail

// 𝒢(Oct_k(a)) or 𝒢(+2Oct_k(a)); `spec.a` is indexed by part position of g.
template <class T>
T oct_count(const WeightedGraph<T>& g, const OctSpec& spec, const CountOptions& opts = {}) {
  if (!spec.tailed) {
    for (std::size_t j = 0; j < spec.a.size(); ++j) {
      if (spec.a[j] == 2) return detail::oct_count_fast(g, spec, static_cast<int>(j), opts);
    }
  }
  return hom_weight(oct_complex_for(g, spec), g, opts);
}

inline OctSpec oct_uniform(int k, int parts, int value) {
  return OctSpec{k, std::vector<int>(static_cast<std::size_t>(parts), value), false};
}

// Monte Carlo estimate of 𝒢(H) from `samples` uniform partite maps.
template <class T>
HomEstimate hom_estimate(const PartiteComplex& h, const WeightedGraph<T>& g, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw DomainError("hom_estimate needs at least one sample");
  WeightedGraph<double> gd = convert_graph<double>(g);
  int n = h.num_vertices();
  std::vector<int> pos(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    pos[static_cast<std::size_t>(x)] = gd.position(h.part_of(x));
    if (gd.part_size(pos[static_cast<std::size_t>(x)]) == 0) throw DomainError("empty part");
  }
  struct EdgeRef {
    SlotMask mask;
    std::vector<int> verts;
  };
  std::vector<EdgeRef> edges;
  for (VertexMask e : h.edges()) {
    if (e == 0) continue;
    EdgeRef r{0, {}};
    for (int x = 0; x < n; ++x) {
      if (e >> x & 1U) {
        r.mask |= SlotMask{1} << pos[static_cast<std::size_t>(x)];
        r.verts.push_back(x);
      }
    }
    std::sort(r.verts.begin(), r.verts.end(),
              [&](int a, int b) { return pos[static_cast<std::size_t>(a)] < pos[static_cast<std::size_t>(b)]; });
    edges.push_back(std::move(r));
  }
  std::mt19937_64 rng(seed);
  std::vector<int> phi(static_cast<std::size_t>(n));
  std::vector<int> coords;
  double mean = 0;
  double m2 = 0;
  for (std::uint64_t s = 1; s <= samples; ++s) {
    for (int x = 0; x < n; ++x) {
      std::uniform_int_distribution<int> pick(0, gd.part_size(pos[static_cast<std::size_t>(x)]) - 1);
      phi[static_cast<std::size_t>(x)] = pick(rng);
    }
    double prod = gd.empty_weight();
    for (const auto& e : edges) {
      coords.clear();
      for (int x : e.verts) coords.push_back(phi[static_cast<std::size_t>(x)]);
      prod *= gd.weight_at(e.mask, coords);
    }
    double delta = prod - mean;
    mean += delta / static_cast<double>(s);
    m2 += delta * (prod - mean);
  }
  HomEstimate est;
  est.value = mean;
  est.samples = samples;
  est.seed = seed;
  est.std_error = samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1)) / std::sqrt(static_cast<double>(samples)) : 0.0;
  return est;
}

}  // namespace hyperreg
