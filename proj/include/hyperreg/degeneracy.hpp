#pragma once

#include "hyperreg/complex.hpp"

namespace hyperreg {

// Number of x ∈ dom with {x} ∪ e′ ∈ H for some nonempty e′ ⊆ e.
int pi_hits(const PartiteComplex& h, VertexMask dom, VertexMask e);

// max over e ∈ H of #{x : x precedes every y ∈ e, {x} ∪ e′ ∈ H for some nonempty e′ ⊆ e},
// using H's order. x ∈ e is never counted.
int vdeg(const PartiteComplex& h);

// max over nonempty e ∈ H of #{f ∈ H^{(k)} : e ⊊ f, f∖e precedes e}.
int degk(const PartiteComplex& h, int k);

// max over x of #{e ∈ H : x ∈ e, |e| ≥ 2}.
int max_degree(const PartiteComplex& h);

// Local indices of the first `count` vertices in H's order, as a mask.
VertexMask initial_segment(const PartiteComplex& h, int count);

}  // namespace hyperreg
