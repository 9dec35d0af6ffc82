#include "hyperreg/degeneracy.hpp"

#include <algorithm>

namespace hyperreg {

namespace {

bool touches(const PartiteComplex& h, int x, VertexMask e) {
  VertexMask bit = VertexMask{1} << x;
  bool hit = false;
  for_each_subset(e, [&](VertexMask s) {
    if (!hit && s != 0 && h.contains(s | bit)) hit = true;
  });
  return hit;
}

bool precedes_all(const PartiteComplex& h, int x, VertexMask e) {
  for (int y = 0; y < h.num_vertices(); ++y)
    if ((e >> y & 1U) && h.position(x) >= h.position(y)) return false;
  return true;
}

}  // namespace

int pi_hits(const PartiteComplex& h, VertexMask dom, VertexMask e) {
  int count = 0;
  for (int x = 0; x < h.num_vertices(); ++x)
    if ((dom >> x & 1U) && touches(h, x, e)) ++count;
  return count;
}

int vdeg(const PartiteComplex& h) {
  int best = 0;
  for (VertexMask e : h.edges()) {
    if (e == 0) continue;
    int count = 0;
    for (int x = 0; x < h.num_vertices(); ++x) {
      if ((e >> x & 1U) || !precedes_all(h, x, e)) continue;
      if (touches(h, x, e)) ++count;
    }
    best = std::max(best, count);
  }
  return best;
}

int degk(const PartiteComplex& h, int k) {
  int best = 0;
  for (VertexMask e : h.edges()) {
    if (e == 0) continue;
    int count = 0;
    for (VertexMask f : h.edges()) {
      if (popcount(f) != k || (f & e) != e || f == e) continue;
      VertexMask rest = f & ~e;
      bool ok = true;
      for (int x = 0; x < h.num_vertices() && ok; ++x)
        if (rest >> x & 1U) ok = precedes_all(h, x, e);
      if (ok) ++count;
    }
    best = std::max(best, count);
  }
  return best;
}

int max_degree(const PartiteComplex& h) {
  int best = 0;
  for (int x = 0; x < h.num_vertices(); ++x) {
    int count = 0;
    for (VertexMask e : h.edges())
      if ((e >> x & 1U) && popcount(e) >= 2) ++count;
    best = std::max(best, count);
  }
  return best;
}

VertexMask initial_segment(const PartiteComplex& h, int count) {
  VertexMask m = 0;
  for (int i = 0; i < count && i < h.num_vertices(); ++i) m |= VertexMask{1} << h.order()[static_cast<std::size_t>(i)];
  return m;
}

}  // namespace hyperreg
