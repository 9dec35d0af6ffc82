#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "hyperreg/complex.hpp"
#include "hyperreg/numeric.hpp"
#include "hyperreg/weighted_graph.hpp"

namespace hyperreg::testing {

enum class WeightKind { Binary, SmallRational, Unit };

template <class T>
T random_weight(std::mt19937_64& rng, WeightKind kind) {
  switch (kind) {
    case WeightKind::Binary:
      return T(static_cast<int>(rng() % 2));
    case WeightKind::SmallRational: {
      int num = static_cast<int>(rng() % 5);
      return T(num) / T(4);
    }
    case WeightKind::Unit:
      break;
  }
  return T(static_cast<double>(rng() % 1000) / 999.0);
}

// Random layers on every slot of size 1..arity_cap (each slot present with
// probability `fill`).
template <class T>
WeightedGraph<T> random_graph(const std::vector<std::pair<PartIndex, int>>& parts, int cap, std::mt19937_64& rng,
                              WeightKind kind = WeightKind::SmallRational, double fill = 1.0,
                              bool random_empty = false) {
  WeightedGraph<T> g(parts, cap, random_empty ? T(1) / T(2) : T(1));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (SlotMask m = 1; m <= g.all_parts(); ++m) {
    if (popcount(m) > cap || coin(rng) >= fill) continue;
    std::vector<T> data(g.slot_size(m));
    for (T& w : data) w = random_weight<T>(rng, kind);
    g.set_slot(m, std::move(data));
  }
  return g;
}

// 𝒢(φ) = ∏_{e∈H} g(φ(e)) for a map given as a vertex index per H vertex.
template <class T>
T map_weight(const PartiteComplex& h, const WeightedGraph<T>& g, const std::vector<int>& phi) {
  T prod(1);
  for (VertexMask e : h.edges()) {
    std::vector<GraphVertex> img;
    for (int x = 0; x < h.num_vertices(); ++x) {
      if (e >> x & 1U) img.push_back({h.part_of(x), phi[static_cast<std::size_t>(x)]});
    }
    prod *= g.weight(img);
  }
  return prod;
}

// Calls f(phi) for every partite map of H into G.
template <class T, class F>
void for_each_map(const PartiteComplex& h, const WeightedGraph<T>& g, F&& f) {
  int n = h.num_vertices();
  std::vector<int> dims;
  for (int x = 0; x < n; ++x) dims.push_back(g.size_of(h.part_of(x)));
  std::vector<int> phi(static_cast<std::size_t>(n), 0);
  while (true) {
    f(phi);
    int a = n - 1;
    while (a >= 0 && ++phi[static_cast<std::size_t>(a)] == dims[static_cast<std::size_t>(a)]) {
      phi[static_cast<std::size_t>(a)] = 0;
      --a;
    }
    if (a < 0) return;
  }
}

inline PartiteComplex complex_of(const std::map<PartIndex, std::vector<VertexId>>& parts,
                                 const std::vector<std::vector<VertexId>>& edges) {
  return PartiteComplex::from_generators(parts, edges);
}

// Random down-closed complex with one to `max_per_part` vertices in each of
// the given parts.
inline PartiteComplex random_complex(const std::vector<PartIndex>& part_ids, int max_per_part, std::mt19937_64& rng,
                                     int max_edge) {
  std::map<PartIndex, std::vector<VertexId>> parts;
  std::vector<std::pair<VertexId, PartIndex>> verts;
  VertexId next = 0;
  for (PartIndex p : part_ids) {
    int c = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_per_part));
    for (int i = 0; i < c; ++i) {
      parts[p].push_back(next);
      verts.emplace_back(next++, p);
    }
  }
  std::vector<std::vector<VertexId>> gens;
  int tries = 1 + static_cast<int>(rng() % 6);
  for (int t = 0; t < tries; ++t) {
    std::vector<VertexId> e;
    std::vector<PartIndex> used;
    auto shuffled = verts;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (auto [v, p] : shuffled) {
      if (static_cast<int>(e.size()) >= max_edge) break;
      if (std::find(used.begin(), used.end(), p) != used.end()) continue;
      if (rng() % 2) {
        e.push_back(v);
        used.push_back(p);
      }
    }
    gens.push_back(e);
  }
  return PartiteComplex::from_generators(parts, gens);
}

}  // namespace hyperreg::testing
