#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "hyperreg/complex.hpp"
#include "hyperreg/errors.hpp"
#include "hyperreg/numeric.hpp"

namespace hyperreg {

// Bitmask over the part positions of a WeightedGraph.
using SlotMask = std::uint64_t;

// A vertex of a weighted graph: its part index and its number within the part.
struct GraphVertex {
  PartIndex part;
  int index;
};

// A J-partite weighted k-graph. Parts are held in ascending index order and
// addressed by position; vertices of a part are numbered 0..size-1. Each slot
// (a set of at most `arity_cap` positions) may carry a dense row-major array,
// first axis = lowest position. Slots without an array weigh 1.
template <class T>
class WeightedGraph {
 public:
  WeightedGraph() = default;

  WeightedGraph(const std::vector<std::pair<PartIndex, int>>& parts, int arity_cap, T empty_weight = T(1))
      : arity_cap_(arity_cap), empty_weight_(std::move(empty_weight)) {
    if (arity_cap < 1) throw DomainError("arity_cap must be at least 1");
    std::vector<std::pair<PartIndex, int>> sorted = parts;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.size() > 64) throw DomainError("at most 64 parts are supported");
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (i > 0 && sorted[i].first == sorted[i - 1].first) {
        throw DomainError("duplicate part index " + std::to_string(sorted[i].first));
      }
      if (sorted[i].second < 0) throw DomainError("negative part size");
      ids_.push_back(sorted[i].first);
      sizes_.push_back(sorted[i].second);
      source_.push_back(sorted[i].first);
    }
    if (empty_weight_ < T(0)) throw DomainError("empty_weight must be nonnegative");
  }

  int num_parts() const { return static_cast<int>(ids_.size()); }
  const std::vector<PartIndex>& part_ids() const { return ids_; }
  PartIndex part_id(int pos) const { return ids_.at(pos); }
  int part_size(int pos) const { return sizes_.at(pos); }
  int size_of(PartIndex p) const { return sizes_[position(p)]; }
  // Index of the original part this one was copied from (standard construction).
  PartIndex source(int pos) const { return source_.at(pos); }
  void set_source(int pos, PartIndex p) { source_.at(pos) = p; }

  std::optional<int> find_position(PartIndex p) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), p);
    if (it == ids_.end() || *it != p) return std::nullopt;
    return static_cast<int>(it - ids_.begin());
  }
  int position(PartIndex p) const {
    auto pos = find_position(p);
    if (!pos) throw DomainError("part " + std::to_string(p) + " not in graph");
    return *pos;
  }
  SlotMask mask_of(const std::vector<PartIndex>& indices) const {
    SlotMask m = 0;
    for (PartIndex p : indices) {
      SlotMask bit = SlotMask{1} << position(p);
      if (m & bit) throw DomainError("repeated part index " + std::to_string(p));
      m |= bit;
    }
    return m;
  }
  std::vector<PartIndex> indices_of(SlotMask m) const {
    std::vector<PartIndex> out;
    for (int i = 0; i < num_parts(); ++i) {
      if (m >> i & 1U) out.push_back(ids_[i]);
    }
    return out;
  }
  SlotMask all_parts() const {
    return num_parts() == 64 ? ~SlotMask{0} : (SlotMask{1} << num_parts()) - 1;
  }

  int arity_cap() const { return arity_cap_; }
  const T& empty_weight() const { return empty_weight_; }
  void set_empty_weight(T w) {
    if (w < T(0)) throw DomainError("empty_weight must be nonnegative");
    empty_weight_ = std::move(w);
  }

  std::size_t slot_size(SlotMask m) const {
    std::size_t n = 1;
    for (int i = 0; i < num_parts(); ++i) {
      if (m >> i & 1U) n *= static_cast<std::size_t>(sizes_[i]);
    }
    return n;
  }
  // Row-major stride of position `pos` inside slot `m`.
  std::size_t stride(SlotMask m, int pos) const {
    std::size_t s = 1;
    for (int i = num_parts() - 1; i > pos; --i) {
      if (m >> i & 1U) s *= static_cast<std::size_t>(sizes_[i]);
    }
    return s;
  }

  const std::map<SlotMask, std::vector<T>>& layers() const { return layers_; }
  const std::vector<T>* layer(SlotMask m) const {
    auto it = layers_.find(m);
    return it == layers_.end() ? nullptr : &it->second;
  }
  void set_slot(SlotMask m, std::vector<T> data) {
    if (m == 0) throw DomainError("the empty slot is set through set_empty_weight");
    if ((m & ~all_parts()) != 0) throw DomainError("slot mentions an unknown part");
    if (popcount(m) > arity_cap_) {
      throw DomainError("slot of size " + std::to_string(popcount(m)) + " exceeds arity_cap " +
                        std::to_string(arity_cap_));
    }
    if (data.size() != slot_size(m)) {
      throw DomainError("layer has " + std::to_string(data.size()) + " weights, expected " +
                        std::to_string(slot_size(m)));
    }
    for (const T& w : data) {
      if (w < T(0)) throw DomainError("weights must be nonnegative");
    }
    layers_[m] = std::move(data);
  }
  void set_layer(const std::vector<PartIndex>& indices, std::vector<T> data) {
    set_slot(mask_of(indices), std::move(data));
  }
  void erase_layer(SlotMask m) { layers_.erase(m); }

  // Weight of the vertex tuple `coords` (one entry per position of `m`, in
  // ascending position order).
  T weight_at(SlotMask m, const std::vector<int>& coords) const {
    if (m == 0) return empty_weight_;
    if (popcount(m) > arity_cap_) return T(1);
    const std::vector<T>* data = layer(m);
    if (!data) return T(1);
    std::size_t off = 0;
    std::size_t k = 0;
    for (int i = 0; i < num_parts(); ++i) {
      if (m >> i & 1U) off = off * static_cast<std::size_t>(sizes_[i]) + static_cast<std::size_t>(coords[k++]);
    }
    return (*data)[off];
  }

  T weight(const std::vector<GraphVertex>& e) const {
    std::vector<std::pair<int, int>> by_pos;
    for (const GraphVertex& v : e) {
      int pos = position(v.part);
      if (v.index < 0 || v.index >= sizes_[pos]) {
        throw DomainError("vertex " + std::to_string(v.index) + " not in part " + std::to_string(v.part));
      }
      by_pos.emplace_back(pos, v.index);
    }
    std::sort(by_pos.begin(), by_pos.end());
    SlotMask m = 0;
    std::vector<int> coords;
    for (std::size_t i = 0; i < by_pos.size(); ++i) {
      if (i > 0 && by_pos[i].first == by_pos[i - 1].first) throw DomainError("edge is not crossing");
      m |= SlotMask{1} << by_pos[i].first;
      coords.push_back(by_pos[i].second);
    }
    return weight_at(m, coords);
  }

  // The weight of vertex v of part position `pos` (1 if no vertex layer).
  T vertex_weight(int pos, int v) const {
    const std::vector<T>* data = layer(SlotMask{1} << pos);
    return data ? (*data)[static_cast<std::size_t>(v)] : T(1);
  }

 private:
  std::vector<PartIndex> ids_;
  std::vector<int> sizes_;
  std::vector<PartIndex> source_;
  int arity_cap_ = 1;
  T empty_weight_ = T(1);
  std::map<SlotMask, std::vector<T>> layers_;
};

// Visits every coordinate tuple of slot `m` in row-major order.
template <class T, class F>
void for_each_tuple(const WeightedGraph<T>& g, SlotMask m, F&& f) {
  std::vector<int> dims;
  for (int i = 0; i < g.num_parts(); ++i) {
    if (m >> i & 1U) dims.push_back(g.part_size(i));
  }
  for (int d : dims) {
    if (d == 0) return;
  }
  std::vector<int> coords(dims.size(), 0);
  std::size_t flat = 0;
  while (true) {
    f(coords, flat);
    ++flat;
    int a = static_cast<int>(dims.size()) - 1;
    while (a >= 0 && ++coords[a] == dims[a]) {
      coords[a] = 0;
      --a;
    }
    if (a < 0) return;
  }
}

// Removes bit `pos` from `m` and shifts the higher bits down by one.
inline SlotMask drop_position(SlotMask m, int pos) {
  SlotMask low = m & ((SlotMask{1} << pos) - 1);
  SlotMask high = (m >> (pos + 1)) << pos;
  return low | high;
}

// Keeps the positions listed in `kept` (ascending) and renumbers them 0..
inline SlotMask compress_mask(SlotMask m, const std::vector<int>& kept) {
  SlotMask out = 0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (m >> kept[i] & 1U) out |= SlotMask{1} << i;
  }
  return out;
}

template <class T>
WeightedGraph<T> complete_graph(const std::vector<std::pair<PartIndex, int>>& parts, int arity_cap) {
  return WeightedGraph<T>(parts, arity_cap, T(1));
}

// Graph with parts of `g` but no layers and empty weight 1.
template <class T>
WeightedGraph<T> same_shape_complete(const WeightedGraph<T>& g) {
  std::vector<std::pair<PartIndex, int>> parts;
  for (int i = 0; i < g.num_parts(); ++i) parts.emplace_back(g.part_id(i), g.part_size(i));
  WeightedGraph<T> out(parts, g.arity_cap(), T(1));
  for (int i = 0; i < g.num_parts(); ++i) out.set_source(i, g.source(i));
  return out;
}

template <class T>
bool same_parts(const WeightedGraph<T>& a, const WeightedGraph<T>& b) {
  if (a.num_parts() != b.num_parts()) return false;
  for (int i = 0; i < a.num_parts(); ++i) {
    if (a.part_id(i) != b.part_id(i) || a.part_size(i) != b.part_size(i)) return false;
  }
  return true;
}

template <class T>
std::vector<T> layer_or_ones(const WeightedGraph<T>& g, SlotMask m) {
  const std::vector<T>* data = g.layer(m);
  if (data) return *data;
  return std::vector<T>(g.slot_size(m), T(1));
}

// Slice of slot `m` with part position `pos` fixed to vertex `v`; the result is
// laid out over m∖{pos} in the same axis order.
template <class T>
std::vector<T> slice_layer(const WeightedGraph<T>& g, SlotMask m, int pos, int v) {
  const std::vector<T>& data = *g.layer(m);
  SlotMask rest = m & ~(SlotMask{1} << pos);
  std::size_t inner = g.stride(m, pos);
  std::size_t size_pos = static_cast<std::size_t>(g.part_size(pos));
  std::size_t outer = g.slot_size(rest) / (inner == 0 ? 1 : inner);
  std::vector<T> out;
  out.reserve(g.slot_size(rest));
  for (std::size_t o = 0; o < outer; ++o) {
    std::size_t base = (o * size_pos + static_cast<std::size_t>(v)) * inner;
    for (std::size_t i = 0; i < inner; ++i) out.push_back(data[base + i]);
  }
  return out;
}

// g_v(e) = g(e)·g({v}∪e) on the remaining parts.
template <class T>
WeightedGraph<T> link(const WeightedGraph<T>& g, PartIndex part, int v) {
  int pos = g.position(part);
  if (v < 0 || v >= g.part_size(pos)) {
    throw DomainError("vertex " + std::to_string(v) + " not in part " + std::to_string(part));
  }
  std::vector<std::pair<PartIndex, int>> parts;
  for (int i = 0; i < g.num_parts(); ++i) {
    if (i != pos) parts.emplace_back(g.part_id(i), g.part_size(i));
  }
  WeightedGraph<T> out(parts, g.arity_cap(), g.empty_weight() * g.vertex_weight(pos, v));
  for (int i = 0, j = 0; i < g.num_parts(); ++i) {
    if (i != pos) out.set_source(j++, g.source(i));
  }
  SlotMask bit = SlotMask{1} << pos;
  std::map<SlotMask, std::vector<T>> acc;
  for (const auto& [m, data] : g.layers()) {
    if (m == bit) continue;
    std::vector<T> contrib = (m & bit) ? slice_layer(g, m, pos, v) : data;
    SlotMask target = drop_position(m & ~bit, pos);
    auto it = acc.find(target);
    if (it == acc.end()) {
      acc.emplace(target, std::move(contrib));
    } else {
      for (std::size_t i = 0; i < contrib.size(); ++i) it->second[i] *= contrib[i];
    }
  }
  for (auto& [m, data] : acc) out.set_slot(m, std::move(data));
  return out;
}

template <class T>
struct VertexWeightReport {
  std::vector<int> subset;
  T vnorm{0};
  T part_vnorm{0};
};

// ‖U‖ = E_{v∈V_j}[1_U(v)·g(v)].
template <class T>
VertexWeightReport<T> vnorm(const WeightedGraph<T>& g, PartIndex part, const std::vector<int>& subset) {
  int pos = g.position(part);
  int n = g.part_size(pos);
  if (n == 0) throw DomainError("vnorm of an empty part");
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (int v : subset) {
    if (v < 0 || v >= n) throw DomainError("vertex " + std::to_string(v) + " not in part " + std::to_string(part));
    in[static_cast<std::size_t>(v)] = 1;
  }
  VertexWeightReport<T> r;
  r.subset = subset;
  T sel(0);
  T all(0);
  for (int v = 0; v < n; ++v) {
    T w = g.vertex_weight(pos, v);
    all += w;
    if (in[static_cast<std::size_t>(v)]) sel += w;
  }
  r.vnorm = sel / T(n);
  r.part_vnorm = all / T(n);
  return r;
}

// Same, for a vertex set given explicitly; all vertices must share one part.
template <class T>
VertexWeightReport<T> vnorm(const WeightedGraph<T>& g, const std::vector<GraphVertex>& subset, PartIndex part) {
  std::vector<int> ids;
  for (const GraphVertex& v : subset) {
    if (v.part != part) throw DomainError("vnorm: vertex set spans more than one part");
    ids.push_back(v.index);
  }
  return vnorm(g, part, ids);
}

template <class T>
T part_vnorm(const WeightedGraph<T>& g, PartIndex part) {
  return vnorm(g, part, {}).part_vnorm;
}

// G with every arity-ℓ slot carrying H's weights.
template <class T>
WeightedGraph<T> replace_layer(const WeightedGraph<T>& g, int ell, const WeightedGraph<T>& h) {
  if (!same_parts(g, h)) throw DomainError("replace_layer: part mismatch");
  WeightedGraph<T> out = g;
  if (ell == 0) {
    out.set_empty_weight(h.empty_weight());
    return out;
  }
  if (ell > out.arity_cap() && !h.layers().empty()) {
    for (const auto& [m, data] : h.layers()) {
      if (popcount(m) == ell) throw DomainError("replace_layer: arity exceeds arity_cap");
    }
  }
  std::vector<SlotMask> drop;
  for (const auto& [m, data] : out.layers()) {
    if (popcount(m) == ell) drop.push_back(m);
  }
  for (SlotMask m : drop) out.erase_layer(m);
  for (const auto& [m, data] : h.layers()) {
    if (popcount(m) == ell) out.set_slot(m, data);
  }
  return out;
}

// G with the single slot `m` (non-empty) carrying H's weights.
template <class T>
WeightedGraph<T> replace_slot(const WeightedGraph<T>& g, SlotMask m, const WeightedGraph<T>& h) {
  if (!same_parts(g, h)) throw DomainError("replace_slot: part mismatch");
  WeightedGraph<T> out = g;
  out.erase_layer(m);
  if (const std::vector<T>* data = h.layer(m)) out.set_slot(m, *data);
  return out;
}

template <class T>
WeightedGraph<T> pointwise_product(const WeightedGraph<T>& g, const WeightedGraph<T>& h) {
  if (!same_parts(g, h)) throw DomainError("pointwise_product: part mismatch");
  if (g.arity_cap() != h.arity_cap()) throw DomainError("pointwise_product: arity_cap mismatch");
  WeightedGraph<T> out = g;
  out.set_empty_weight(g.empty_weight() * h.empty_weight());
  for (const auto& [m, data] : h.layers()) {
    const std::vector<T>* mine = g.layer(m);
    if (!mine) {
      out.set_slot(m, data);
      continue;
    }
    std::vector<T> prod = *mine;
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] *= data[i];
    out.set_slot(m, std::move(prod));
  }
  return out;
}

// The subgraph on the listed parts (layers inside them kept, empty weight kept).
template <class T>
WeightedGraph<T> induced(const WeightedGraph<T>& g, const std::vector<PartIndex>& keep) {
  std::vector<int> kept;
  for (PartIndex p : keep) kept.push_back(g.position(p));
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  SlotMask keep_mask = 0;
  std::vector<std::pair<PartIndex, int>> parts;
  for (int pos : kept) {
    keep_mask |= SlotMask{1} << pos;
    parts.emplace_back(g.part_id(pos), g.part_size(pos));
  }
  WeightedGraph<T> out(parts, g.arity_cap(), g.empty_weight());
  for (std::size_t i = 0; i < kept.size(); ++i) out.set_source(static_cast<int>(i), g.source(kept[i]));
  for (const auto& [m, data] : g.layers()) {
    if ((m & ~keep_mask) == 0) out.set_slot(compress_mask(m, kept), data);
  }
  return out;
}

// Slot-by-slot comparison of two graphs with equal parts, restricted to slots
// accepted by `select`. `cmp(a, b)` must hold for every pair of weights.
template <class T, class Select, class Cmp>
bool compare_slots(const WeightedGraph<T>& a, const WeightedGraph<T>& b, Select&& select, Cmp&& cmp) {
  if (!same_parts(a, b)) throw DomainError("compare_slots: part mismatch");
  if (select(SlotMask{0}) && !cmp(a.empty_weight(), b.empty_weight())) return false;
  std::vector<SlotMask> masks;
  for (const auto& [m, d] : a.layers()) masks.push_back(m);
  for (const auto& [m, d] : b.layers()) masks.push_back(m);
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  for (SlotMask m : masks) {
    if (!select(m)) continue;
    const std::vector<T>* da = a.layer(m);
    const std::vector<T>* db = b.layer(m);
    std::size_t n = a.slot_size(m);
    for (std::size_t i = 0; i < n; ++i) {
      T wa = da ? (*da)[i] : T(1);
      T wb = db ? (*db)[i] : T(1);
      if (!cmp(wa, wb)) return false;
    }
  }
  return true;
}

template <class T>
bool slots_equal(const WeightedGraph<T>& a, const WeightedGraph<T>& b) {
  return compare_slots(a, b, [](SlotMask) { return true; },
                       [](const T& x, const T& y) { return approx_equal(x, y); });
}

// Standard construction: part x of the result is a copy of V_{part(x)}; a slot
// f carries g(projection) if f ∈ H and weight 1 otherwise.
template <class T>
WeightedGraph<T> standard_construction(const PartiteComplex& h, const WeightedGraph<T>& g) {
  int n = h.num_vertices();
  std::vector<std::pair<PartIndex, int>> parts;
  std::vector<int> src_pos(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    auto pos = g.find_position(h.part_of(x));
    if (!pos) throw DomainError("complex uses part " + std::to_string(h.part_of(x)) + " absent from graph");
    src_pos[static_cast<std::size_t>(x)] = *pos;
    parts.emplace_back(h.id(x), g.part_size(*pos));
  }
  WeightedGraph<T> out(parts, g.arity_cap(), g.empty_weight());
  // Local vertex order equals ascending id, which equals the result's part order.
  for (int x = 0; x < n; ++x) out.set_source(x, g.source(src_pos[static_cast<std::size_t>(x)]));
  for (VertexMask f : h.edges()) {
    if (f == 0 || popcount(f) > g.arity_cap()) continue;
    SlotMask gm = 0;
    std::vector<int> verts;
    for (int x = 0; x < n; ++x) {
      if (f >> x & 1U) {
        gm |= SlotMask{1} << src_pos[static_cast<std::size_t>(x)];
        verts.push_back(x);
      }
    }
    const std::vector<T>* data = g.layer(gm);
    if (!data) continue;
    std::vector<std::size_t> strides;
    for (int x : verts) strides.push_back(g.stride(gm, src_pos[static_cast<std::size_t>(x)]));
    std::vector<T> layer(out.slot_size(f));
    for_each_tuple(out, f, [&](const std::vector<int>& coords, std::size_t flat) {
      std::size_t off = 0;
      for (std::size_t i = 0; i < coords.size(); ++i) off += static_cast<std::size_t>(coords[i]) * strides[i];
      layer[flat] = (*data)[off];
    });
    out.set_slot(f, std::move(layer));
  }
  return out;
}

template <class To, class From>
WeightedGraph<To> convert_graph(const WeightedGraph<From>& g) {
  std::vector<std::pair<PartIndex, int>> parts;
  for (int i = 0; i < g.num_parts(); ++i) parts.emplace_back(g.part_id(i), g.part_size(i));
  auto cv = [](const From& x) {
    if constexpr (std::is_same_v<To, double>) {
      return to_double(x);
    } else {
      return To(x);
    }
  };
  WeightedGraph<To> out(parts, g.arity_cap(), cv(g.empty_weight()));
  for (int i = 0; i < g.num_parts(); ++i) out.set_source(i, g.source(i));
  for (const auto& [m, data] : g.layers()) {
    std::vector<To> d;
    d.reserve(data.size());
    for (const From& x : data) d.push_back(cv(x));
    out.set_slot(m, std::move(d));
  }
  return out;
}

}  // namespace hyperreg
