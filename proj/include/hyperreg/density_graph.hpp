#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "hyperreg/complex.hpp"
#include "hyperreg/errors.hpp"
#include "hyperreg/numeric.hpp"
#include "hyperreg/weighted_graph.hpp"

namespace hyperreg {

// d(f) for every f ⊆ J, stored sparsely over masks of index positions
// (missing entries are 1). Values start in [0,1]; products taken by links
// stay in [0,1].
template <class T>
class DensityGraph {
 public:
  DensityGraph() = default;
  explicit DensityGraph(std::vector<PartIndex> indices) : ids_(std::move(indices)) {
    std::sort(ids_.begin(), ids_.end());
    if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end()) throw DomainError("duplicate index in density graph");
    if (ids_.size() > 64) throw DomainError("at most 64 indices are supported");
  }

  const std::vector<PartIndex>& indices() const { return ids_; }
  int size() const { return static_cast<int>(ids_.size()); }
  std::optional<int> find_position(PartIndex p) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), p);
    if (it == ids_.end() || *it != p) return std::nullopt;
    return static_cast<int>(it - ids_.begin());
  }
  int position(PartIndex p) const {
    auto pos = find_position(p);
    if (!pos) throw DomainError("index " + std::to_string(p) + " not in density graph");
    return *pos;
  }
  SlotMask mask_of(const std::vector<PartIndex>& f) const {
    SlotMask m = 0;
    for (PartIndex p : f) m |= SlotMask{1} << position(p);
    return m;
  }
  std::vector<PartIndex> indices_of(SlotMask m) const {
    std::vector<PartIndex> out;
    for (int i = 0; i < size(); ++i) {
      if (m >> i & 1U) out.push_back(ids_[i]);
    }
    return out;
  }

  T get_slot(SlotMask m) const {
    auto it = values_.find(m);
    return it == values_.end() ? T(1) : it->second;
  }
  T get(const std::vector<PartIndex>& f) const { return get_slot(mask_of(f)); }
  void set_slot(SlotMask m, T value) {
    if (value < T(0) || value > T(1)) throw DomainError("density values must lie in [0,1]");
    if (value == T(1)) {
      values_.erase(m);
    } else {
      values_[m] = std::move(value);
    }
  }
  void set(const std::vector<PartIndex>& f, T value) { set_slot(mask_of(f), std::move(value)); }
  const std::map<SlotMask, T>& values() const { return values_; }

 private:
  std::vector<PartIndex> ids_;
  std::map<SlotMask, T> values_;
};

// d'(f) = d(f)·d({j}∪f) on J∖{j}.
template <class T>
DensityGraph<T> density_link(const DensityGraph<T>& d, PartIndex j) {
  int pos = d.position(j);
  std::vector<PartIndex> rest;
  for (PartIndex p : d.indices()) {
    if (p != j) rest.push_back(p);
  }
  DensityGraph<T> out(rest);
  std::map<SlotMask, T> acc;
  SlotMask bit = SlotMask{1} << pos;
  for (const auto& [m, v] : d.values()) {
    SlotMask target = drop_position(m & ~bit, pos);
    auto it = acc.find(target);
    if (it == acc.end()) {
      acc.emplace(target, v);
    } else {
      it->second *= v;
    }
  }
  for (auto& [m, v] : acc) out.set_slot(m, v);
  return out;
}

// ∏_{e∈H} d(index set of e), ∅ included.
template <class T>
T density_value(const DensityGraph<T>& d, const PartiteComplex& h) {
  T prod(1);
  for (VertexMask e : h.edges()) {
    SlotMask m = 0;
    for (int x = 0; x < h.num_vertices(); ++x) {
      if (e >> x & 1U) m |= SlotMask{1} << d.position(h.part_of(x));
    }
    prod *= d.get_slot(m);
  }
  return prod;
}

// Density graph over the parts of a complex in one-vertex-per-part form:
// index x carries d(part(f)) for f ∈ H and 1 elsewhere.
template <class T>
DensityGraph<T> density_standard_construction(const PartiteComplex& h, const DensityGraph<T>& d) {
  std::vector<PartIndex> ids;
  for (int x = 0; x < h.num_vertices(); ++x) ids.push_back(h.id(x));
  DensityGraph<T> out(ids);
  for (VertexMask f : h.edges()) {
    SlotMask m = 0;
    for (int x = 0; x < h.num_vertices(); ++x) {
      if (f >> x & 1U) m |= SlotMask{1} << d.position(h.part_of(x));
    }
    T v = d.get_slot(m);
    if (v != T(1)) out.set_slot(static_cast<SlotMask>(f), v);
  }
  return out;
}

}  // namespace hyperreg
