#include "hyperreg/complex.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_set>

#include "hyperreg/errors.hpp"

namespace hyperreg {

PartiteComplex PartiteComplex::from_generators(const std::map<PartIndex, std::vector<VertexId>>& parts,
                                               const std::vector<std::vector<VertexId>>& generators,
                                               const std::optional<std::vector<VertexId>>& order) {
  PartiteComplex h;
  std::map<VertexId, PartIndex> owner;
  for (const auto& [p, vs] : parts) {
    for (VertexId v : vs) {
      if (!owner.emplace(v, p).second) {
        throw DomainError("vertex " + std::to_string(v) + " listed in two parts");
      }
    }
  }
  if (owner.size() > 64) throw DomainError("complexes are limited to 64 vertices");
  for (const auto& [v, p] : owner) {
    h.ids_.push_back(v);
    h.part_.push_back(p);
  }
  std::vector<VertexMask> gens;
  for (const auto& g : generators) {
    VertexMask m = 0;
    std::set<PartIndex> used;
    for (VertexId v : g) {
      int local = h.local_of(v);
      if (!used.insert(h.part_[local]).second) {
        throw DomainError("edge is not crossing: two vertices in part " +
                          std::to_string(h.part_[local]));
      }
      m |= VertexMask{1} << local;
    }
    gens.push_back(m);
  }
  int n = h.num_vertices();
  if (order) {
    if (static_cast<int>(order->size()) != n) throw DomainError("order must list every vertex exactly once");
    std::set<int> seen;
    for (VertexId v : *order) {
      int local = h.local_of(v);
      if (!seen.insert(local).second) throw DomainError("order repeats vertex " + std::to_string(v));
      h.order_.push_back(local);
    }
    h.explicit_order_ = true;
  } else {
    for (int i = 0; i < n; ++i) h.order_.push_back(i);
  }
  h.finish(std::move(gens));
  return h;
}

void PartiteComplex::finish(std::vector<VertexMask> generators) {
  int n = num_vertices();
  position_.assign(n, 0);
  for (int i = 0; i < n; ++i) position_[order_[i]] = i;
  std::unordered_set<VertexMask> all;
  all.insert(0);
  for (int i = 0; i < n; ++i) all.insert(VertexMask{1} << i);
  for (VertexMask g : generators) {
    if (all.count(g)) continue;
    for_each_subset(g, [&](VertexMask s) { all.insert(s); });
  }
  edges_.assign(all.begin(), all.end());
  std::sort(edges_.begin(), edges_.end());
}

int PartiteComplex::local_of(VertexId v) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
  if (it == ids_.end() || *it != v) throw DomainError("vertex " + std::to_string(v) + " not in complex");
  return static_cast<int>(it - ids_.begin());
}

bool PartiteComplex::has_vertex(VertexId v) const {
  return std::binary_search(ids_.begin(), ids_.end(), v);
}

std::map<PartIndex, std::vector<VertexId>> PartiteComplex::parts() const {
  std::map<PartIndex, std::vector<VertexId>> out;
  for (int i = 0; i < num_vertices(); ++i) out[part_[i]].push_back(ids_[i]);
  return out;
}

std::vector<PartIndex> PartiteComplex::part_indices() const {
  std::vector<PartIndex> out(part_.begin(), part_.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool PartiteComplex::contains(VertexMask e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

int PartiteComplex::max_edge_size() const {
  int best = 0;
  for (VertexMask e : edges_) best = std::max(best, popcount(e));
  return best;
}

std::vector<VertexId> PartiteComplex::edge_ids(VertexMask e) const {
  std::vector<VertexId> out;
  for (int i = 0; i < num_vertices(); ++i) {
    if (e >> i & 1U) out.push_back(ids_[i]);
  }
  return out;
}

VertexMask PartiteComplex::mask_of(const std::vector<VertexId>& vs) const {
  VertexMask m = 0;
  for (VertexId v : vs) m |= VertexMask{1} << local_of(v);
  return m;
}

VertexMask PartiteComplex::all_vertices() const {
  int n = num_vertices();
  return n == 64 ? ~VertexMask{0} : (VertexMask{1} << n) - 1;
}

PartiteComplex PartiteComplex::remove_vertices(VertexMask s) const {
  std::map<PartIndex, std::vector<VertexId>> parts_out;
  for (int i = 0; i < num_vertices(); ++i) {
    if (!(s >> i & 1U)) parts_out[part_[i]].push_back(ids_[i]);
  }
  std::vector<std::vector<VertexId>> gens;
  for (VertexMask e : edges_) {
    if (e != 0 && (e & s) == 0) gens.push_back(edge_ids(e));
  }
  std::optional<std::vector<VertexId>> ord;
  if (explicit_order_) {
    ord.emplace();
    for (int local : order_) {
      if (!(s >> local & 1U)) ord->push_back(ids_[local]);
    }
  }
  return from_generators(parts_out, gens, ord);
}

PartiteComplex PartiteComplex::one_vertex_per_part() const {
  PartiteComplex h = *this;
  for (int i = 0; i < num_vertices(); ++i) h.part_[i] = ids_[i];
  return h;
}

PartiteComplex PartiteComplex::truncate(int k) const {
  PartiteComplex h = *this;
  h.edges_.clear();
  for (VertexMask e : edges_) {
    if (popcount(e) <= k) h.edges_.push_back(e);
  }
  return h;
}

std::string PartiteComplex::describe() const {
  std::ostringstream os;
  os << num_vertices() << " vertices, " << edges_.size() << " edges (incl. empty)";
  return os.str();
}

}  // namespace hyperreg
