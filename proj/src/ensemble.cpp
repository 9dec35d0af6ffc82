#include "hyperreg/ensemble.hpp"

#include "hyperreg/errors.hpp"

namespace hyperreg {

namespace {

constexpr std::size_t kMaxWitnesses = 4;

Scaled int_scaled(long long n) { return Scaled(Rational(n)); }

Scaled delta_prod(const Ensemble& e, int from_excl, int to_incl) {
  Scaled p(1);
  for (int j = from_excl + 1; j <= to_incl; ++j) p = p * e.delta[static_cast<std::size_t>(j)].pow(e.c_star);
  return p;
}

void fail(EnsembleReport& rep, VeClause c, std::string what) {
  auto i = static_cast<int>(c);
  rep.ve[i] = false;
  if (rep.failures[i].size() < kMaxWitnesses) rep.failures[i].push_back(std::move(what));
}

std::string eps_label(int l, int r, int h) {
  return "eps[" + std::to_string(l) + "][" + std::to_string(r) + "][" + std::to_string(h) + "]";
}

}  // namespace

Ensemble::Ensemble(int k_, int c, int h, int D) : k(k_), c_star(c), h_star(h), Delta(D) {
  if (k < 1 || c < 1 || h < 1 || D < 1) throw DomainError("Ensemble: k, c*, h*, Delta must be positive");
  delta.assign(static_cast<std::size_t>(k + 1), Scaled(1));
  eta.assign(static_cast<std::size_t>(k + 1), Scaled(1));
  eps_flat.assign(static_cast<std::size_t>(k * k * (h_star + 1)), Scaled(1));
}

std::size_t Ensemble::eps_index(int l, int r, int h) const {
  if (l < 1 || l > k || r < 1 || r > k || h < 0 || h > h_star) throw DomainError("Ensemble: eps index out of range");
  return static_cast<std::size_t>(((l - 1) * k + (r - 1)) * (h_star + 1) + h);
}

Scaled Ensemble::best(int l) const {
  Scaled m = eps(l, 1, 0);
  for (int r = 1; r <= k; ++r)
    for (int h = 0; h <= h_star; ++h) m = min(m, eps(l, r, h));
  return m;
}

Scaled Ensemble::worst(int l) const {
  Scaled m = eps(l, 1, 0);
  for (int r = 1; r <= k; ++r)
    for (int h = 0; h <= h_star; ++h) m = max(m, eps(l, r, h));
  return m;
}

const char* clause_name(VeClause c) {
  switch (c) {
    case VeClause::VE1: return "VE1";
    case VeClause::VE2: return "VE2";
    case VeClause::VE3: return "VE3";
    case VeClause::VE4: return "VE4";
  }
  return "?";
}

std::vector<VeClause> EnsembleReport::failing() const {
  std::vector<VeClause> out;
  for (int i = 0; i < 4; ++i)
    if (!ve[i]) out.push_back(static_cast<VeClause>(i));
  return out;
}

Scaled ve1_eta0_cap(const Ensemble& e, int l) {
  Scaled denom = int_scaled(72LL * (e.k + 1) * e.c_star);
  return e.eta[static_cast<std::size_t>(l)] / denom * delta_prod(e, 0, l);
}

Scaled ve1_worst_cap(const Ensemble& e, int lp, int l) {
  Scaled denom = int_scaled(72LL * e.k * (e.k + 1) * e.Delta * e.Delta);
  return e.eta[static_cast<std::size_t>(l)] * e.delta[static_cast<std::size_t>(lp)] / denom * delta_prod(e, lp, l);
}

Scaled inherit_constant(int r, const Scaled& d0) {
  Scaled c = Scaled::pow2(BigInt(1) << (r + 6));
  c = c * int_scaled(static_cast<long long>(r) * r * r);
  return c / d0.pow(1ULL << (r + 1));
}

namespace {

Scaled inherit_share(int r, const Scaled& eps_prime, const Scaled& d0) {
  Scaled a = min(eps_prime, Scaled::pow2(BigInt(-r)));
  return a / (int_scaled(2) * inherit_constant(r, d0));
}

}  // namespace

Scaled inherit_eps_cap(int r, const Scaled& eps_prime, const Scaled& d0) {
  return inherit_share(r, eps_prime, d0).pow(16);
}

Scaled inherit_eta_cap(int r, const Scaled& eps_prime, const Scaled& d0) {
  return inherit_share(r, eps_prime, d0).pow(32);
}

Scaled ve2_cap(const Ensemble& e, int l, int r, int h) {
  return inherit_eps_cap(r, e.eps(l, r, h + 1), e.delta[static_cast<std::size_t>(l)]);
}

Scaled ve4_eta_cap(const Ensemble& e, int l) {
  Scaled cap;
  bool first = true;
  for (int r = 1; r <= e.k; ++r)
    for (int h = 1; h <= e.h_star; ++h) {
      Scaled c = inherit_eta_cap(r, e.eps(l, r, h), e.delta[static_cast<std::size_t>(l)]);
      cap = first ? c : min(cap, c);
      first = false;
    }
  return cap / int_scaled(4LL * e.k + 1);
}

EnsembleReport check_valid_ensemble(const Ensemble& e) {
  EnsembleReport rep;
  int k = e.k;
  for (int l = 1; l <= k; ++l) {
    if (e.eta[0] > ve1_eta0_cap(e, l)) fail(rep, VeClause::VE1, "eta[0] above cap from level " + std::to_string(l));
    for (int lp = 1; lp <= l; ++lp)
      if (e.worst(lp) > ve1_worst_cap(e, lp, l))
        fail(rep, VeClause::VE1,
             "worst eps of level " + std::to_string(lp) + " above cap from level " + std::to_string(l));

    for (int r = 1; r <= k; ++r)
      for (int h = 0; h < e.h_star; ++h) {
        const Scaled& x = e.eps(l, r, h);
        if (x > ve2_cap(e, l, r, h)) fail(rep, VeClause::VE2, eps_label(l, r, h) + " above inheritance cap");
        if (!(x < e.eps(l, r, h + 1))) fail(rep, VeClause::VE2, eps_label(l, r, h) + " not increasing in h");
      }

    for (int r = 1; r < k; ++r)
      if (e.eps(l, r + 1, e.h_star) > e.eps(l, r, 0))
        fail(rep, VeClause::VE3, eps_label(l, r + 1, e.h_star) + " > " + eps_label(l, r, 0));

    if (e.eta[static_cast<std::size_t>(l - 1)] > ve4_eta_cap(e, l))
      fail(rep, VeClause::VE4, "(4k+1)eta[" + std::to_string(l - 1) + "] above inheritance cap");
  }
  return rep;
}

Ensemble make_valid_ensemble(int k, int Delta, int c_star, int h_star, const std::vector<Rational>& delta,
                             const Rational& eta_k) {
  if (static_cast<int>(delta.size()) != k) throw DomainError("make_valid_ensemble: need k densities");
  for (const Rational& d : delta)
    if (d <= 0 || d > 1) throw DomainError("make_valid_ensemble: densities must lie in (0,1]");
  if (eta_k <= 0 || eta_k >= 1) throw DomainError("make_valid_ensemble: eta_k must lie in (0,1)");
  Ensemble e(k, c_star, h_star, Delta);
  for (int l = 1; l <= k; ++l) e.delta[static_cast<std::size_t>(l)] = Scaled(delta[static_cast<std::size_t>(l - 1)]);
  e.eta[static_cast<std::size_t>(k)] = Scaled(eta_k);
  Scaled half(Rational(1, 2));
  auto settle = [&](const Scaled& cap) { return (cap * half).floor_pow2(); };

  for (int l = k; l >= 1; --l) {
    Scaled cap = ve1_worst_cap(e, l, l);
    for (int l2 = l + 1; l2 <= k; ++l2) cap = min(cap, ve1_worst_cap(e, l, l2));
    e.eps(l, 1, h_star) = settle(cap);
    for (int r = 1; r <= k; ++r) {
      if (r > 1) e.eps(l, r, h_star) = settle(e.eps(l, r - 1, 0));
      for (int h = h_star - 1; h >= 0; --h) e.eps(l, r, h) = settle(ve2_cap(e, l, r, h));
    }
    Scaled eta_cap = ve4_eta_cap(e, l);
    if (l == 1)
      for (int l2 = 1; l2 <= k; ++l2) eta_cap = min(eta_cap, ve1_eta0_cap(e, l2));
    e.eta[static_cast<std::size_t>(l - 1)] = settle(eta_cap);
  }
  return e;
}

std::string EnsembleParam::label() const {
  if (kind == Eta) return "eta[" + std::to_string(l) + "]";
  return eps_label(l, r, h);
}

std::vector<EnsembleParam> ensemble_params(const Ensemble& e) {
  std::vector<EnsembleParam> out;
  for (int l = 0; l <= e.k; ++l) out.push_back({EnsembleParam::Eta, l, 0, 0});
  for (int l = 1; l <= e.k; ++l)
    for (int r = 1; r <= e.k; ++r)
      for (int h = 0; h <= e.h_star; ++h) out.push_back({EnsembleParam::Eps, l, r, h});
  return out;
}

Scaled& param_value(Ensemble& e, const EnsembleParam& p) {
  if (p.kind == EnsembleParam::Eta) return e.eta.at(static_cast<std::size_t>(p.l));
  return e.eps(p.l, p.r, p.h);
}

ParamBound tightest_upper_bound(const Ensemble& e, const EnsembleParam& p) {
  ParamBound b;
  auto offer = [&](const Scaled& cap, VeClause c) {
    if (!b.bounded || cap < b.bound) {
      b.bounded = true;
      b.bound = cap;
      b.clause = c;
    }
  };
  if (p.kind == EnsembleParam::Eta) {
    if (p.l == 0)
      for (int l = 1; l <= e.k; ++l) offer(ve1_eta0_cap(e, l), VeClause::VE1);
    if (p.l < e.k) offer(ve4_eta_cap(e, p.l + 1), VeClause::VE4);
    return b;
  }
  // Every ε of level ℓ is at most the worst case, which VE1 caps.
  for (int l = p.l; l <= e.k; ++l) offer(ve1_worst_cap(e, p.l, l), VeClause::VE1);
  if (p.h < e.h_star) {
    offer(ve2_cap(e, p.l, p.r, p.h), VeClause::VE2);
    offer(e.eps(p.l, p.r, p.h + 1), VeClause::VE2);
  }
  if (p.h == e.h_star && p.r > 1) offer(e.eps(p.l, p.r - 1, 0), VeClause::VE3);
  return b;
}

}  // namespace hyperreg
