#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hyperreg {

using VertexId = int;
using PartIndex = int;
// Bitmask over the local vertex indices of a complex (at most 64 vertices).
using VertexMask = std::uint64_t;

inline int popcount(std::uint64_t m) { return __builtin_popcountll(m); }

// A down-closed family of crossing vertex sets on a partitioned vertex set.
// Vertices keep their external ids; internally they are numbered 0..n-1 in
// ascending id order and edges are stored as bitmasks over those numbers.
class PartiteComplex {
 public:
  PartiteComplex() = default;

  // Down-closes `generators`; every listed vertex gets its singleton and ∅ is
  // always present.
  static PartiteComplex from_generators(const std::map<PartIndex, std::vector<VertexId>>& parts,
                                        const std::vector<std::vector<VertexId>>& generators,
                                        const std::optional<std::vector<VertexId>>& order = {});

  int num_vertices() const { return static_cast<int>(ids_.size()); }
  VertexId id(int local) const { return ids_.at(local); }
  PartIndex part_of(int local) const { return part_.at(local); }
  int local_of(VertexId v) const;  // throws DomainError if absent
  bool has_vertex(VertexId v) const;

  std::map<PartIndex, std::vector<VertexId>> parts() const;
  std::vector<PartIndex> part_indices() const;

  // Sorted ascending, starting with ∅ = 0.
  const std::vector<VertexMask>& edges() const { return edges_; }
  bool contains(VertexMask e) const;
  int max_edge_size() const;
  std::vector<VertexId> edge_ids(VertexMask e) const;
  VertexMask mask_of(const std::vector<VertexId>& vs) const;
  VertexMask all_vertices() const;

  // Local indices in the total order (ascending id unless one was supplied).
  const std::vector<int>& order() const { return order_; }
  bool has_explicit_order() const { return explicit_order_; }
  int position(int local) const { return position_.at(local); }

  // H − S: drops the vertices in S and every edge meeting them.
  PartiteComplex remove_vertices(VertexMask s) const;
  // Same vertices and edges with part_of(x) := id(x).
  PartiteComplex one_vertex_per_part() const;
  // Keeps only edges with at most `k` vertices.
  PartiteComplex truncate(int k) const;

  std::string describe() const;

 private:
  std::vector<VertexId> ids_;
  std::vector<PartIndex> part_;
  std::vector<VertexMask> edges_;
  std::vector<int> order_;
  std::vector<int> position_;
  bool explicit_order_ = false;

  void finish(std::vector<VertexMask> generators);
};

// Visits every subset of `m`, including m itself and ∅, in decreasing numeric order.
template <class F>
void for_each_subset(std::uint64_t m, F&& f) {
  for (std::uint64_t s = m;; s = (s - 1) & m) {
    f(s);
    if (s == 0) break;
  }
}

}  // namespace hyperreg
