#pragma once

#include <string>
#include <vector>

#include "hyperreg/scaled_rational.hpp"

namespace hyperreg {


// δ_1..δ_k, η_0..η_k and ε_{ℓ,r,h} for ℓ, r ∈ [k], 0 ≤ h ≤ h*.
struct Ensemble {
  int k = 2;
  int c_star = 1;
  int h_star = 1;
  int Delta = 1;
  std::vector<Scaled> delta;  // index 1..k; delta[0] unused
  std::vector<Scaled> eta;    // index 0..k
  std::vector<Scaled> eps_flat;

  Ensemble() = default;
  Ensemble(int k, int c_star, int h_star, int Delta);

  std::size_t eps_index(int l, int r, int h) const;
  Scaled& eps(int l, int r, int h) { return eps_flat[eps_index(l, r, h)]; }
  const Scaled& eps(int l, int r, int h) const { return eps_flat[eps_index(l, r, h)]; }
  Scaled best(int l) const;   // min over (r, h)
  Scaled worst(int l) const;  // max over (r, h)
};

enum class VeClause { VE1, VE2, VE3, VE4 };
const char* clause_name(VeClause c);

struct EnsembleReport {
  bool ve[4] = {true, true, true, true};
  std::vector<std::string> failures[4];  // first few witnesses per clause

  bool ok(VeClause c) const { return ve[static_cast<int>(c)]; }
  bool valid() const { return ve[0] && ve[1] && ve[2] && ve[3]; }
  std::vector<VeClause> failing() const;
};

EnsembleReport check_valid_ensemble(const Ensemble& e);

// Constructs the ensemble top-down, each parameter at the largest power of
// two not exceeding half its tightest bound.
Ensemble make_valid_ensemble(int k, int Delta, int c_star, int h_star, const std::vector<Rational>& delta,
                             const Rational& eta_k);

// Per-clause caps, exposed for reporting and for boundary probes.
Scaled ve1_eta0_cap(const Ensemble& e, int l);
Scaled ve1_worst_cap(const Ensemble& e, int l_prime, int l);
// Constant 2^{2^{r+6}} r³ d₀^{−2^{r+1}} of the inheritance threshold.
Scaled inherit_constant(int r, const Scaled& d0);
// Bound on ε (and on η) from the inheritance threshold with input (d₀, ε′),
// each getting half of min{ε′, 2^{−r}}.
Scaled inherit_eps_cap(int r, const Scaled& eps_prime, const Scaled& d0);
Scaled inherit_eta_cap(int r, const Scaled& eps_prime, const Scaled& d0);
Scaled ve2_cap(const Ensemble& e, int l, int r, int h);
Scaled ve4_eta_cap(const Ensemble& e, int l);  // bound on η_{ℓ−1}

struct EnsembleParam {
  enum Kind { Eta, Eps } kind = Eps;
  int l = 1, r = 1, h = 0;  // Eta uses l only
  std::string label() const;
};

struct ParamBound {
  bool bounded = false;
  Scaled bound;
  VeClause clause = VeClause::VE1;
};

// All η and ε parameters (δ is an input and is not listed).
std::vector<EnsembleParam> ensemble_params(const Ensemble& e);
Scaled& param_value(Ensemble& e, const EnsembleParam& p);
// Tightest upper bound on p given the other parameters, and the clause that sets it.
ParamBound tightest_upper_bound(const Ensemble& e, const EnsembleParam& p);

}  // namespace hyperreg
