#include "hyperreg/homcount.hpp"

namespace hyperreg {

namespace {

// Adds every crossing subset of size ≤ k of the given per-part vertex lists.
void crossing_subsets(const std::vector<std::vector<VertexId>>& by_part, int k, std::size_t part,
                      std::vector<VertexId>& current, std::vector<std::vector<VertexId>>& out) {
  if (part == by_part.size()) {
    if (!current.empty()) out.push_back(current);
    return;
  }
  crossing_subsets(by_part, k, part + 1, current, out);
  if (static_cast<int>(current.size()) >= k) return;
  for (VertexId v : by_part[part]) {
    current.push_back(v);
    crossing_subsets(by_part, k, part + 1, current, out);
    current.pop_back();
  }
}

}  // namespace

PartiteComplex oct_complex(const OctSpec& spec, const std::vector<PartIndex>& part_ids) {
  if (spec.a.size() != part_ids.size()) throw DomainError("octahedron spec and part list differ in length");
  if (spec.k < 1) throw DomainError("octahedron arity must be at least 1");
  for (int v : spec.a) {
    if (v < 0 || v > 2) throw DomainError("octahedron entries must lie in {0,1,2}");
  }
  std::map<PartIndex, std::vector<VertexId>> parts;
  std::vector<std::vector<VertexId>> gens;
  VertexId next = 0;
  std::vector<VertexId> current;
  if (!spec.tailed) {
    std::vector<std::vector<VertexId>> by_part;
    for (std::size_t j = 0; j < spec.a.size(); ++j) {
      if (spec.a[j] == 0) continue;
      by_part.emplace_back();
      for (int c = 0; c < spec.a[j]; ++c) {
        parts[part_ids[j]].push_back(next);
        by_part.back().push_back(next++);
      }
    }
    crossing_subsets(by_part, spec.k, 0, current, gens);
    return PartiteComplex::from_generators(parts, gens);
  }
  std::size_t tail_part = spec.a.size();
  for (std::size_t j = 0; j < spec.a.size(); ++j) {
    if (spec.a[j] != 0) {
      tail_part = j;
      break;
    }
  }
  if (tail_part == spec.a.size() || spec.a[tail_part] != 1) {
    throw DomainError("tailed octahedron needs a first nonzero entry equal to 1");
  }
  VertexId tail = next++;
  parts[part_ids[tail_part]].push_back(tail);
  for (int copy = 0; copy < 2; ++copy) {
    std::vector<std::vector<VertexId>> by_part{{tail}};
    for (std::size_t j = tail_part + 1; j < spec.a.size(); ++j) {
      if (spec.a[j] == 0) continue;
      by_part.emplace_back();
      for (int c = 0; c < spec.a[j]; ++c) {
        parts[part_ids[j]].push_back(next);
        by_part.back().push_back(next++);
      }
    }
    crossing_subsets(by_part, spec.k, 0, current, gens);
  }
  return PartiteComplex::from_generators(parts, gens);
}

}  // namespace hyperreg
