#include "hyperreg/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hyperreg {

std::vector<OctTriple> admissible_triples(int k) {
  std::vector<OctTriple> out;
  if (k < 1) return out;
  for (int i = 0; i < k; ++i) {
    std::vector<int> rest(static_cast<std::size_t>(k - 1), 0);
    while (true) {
      OctTriple t;
      t.i = i;
      for (int v = 0; v < 3; ++v) {
        std::vector<int> vec;
        for (int j = 0, r = 0; j < k; ++j) vec.push_back(j == i ? v : rest[static_cast<std::size_t>(r++)]);
        (v == 0 ? t.a : v == 1 ? t.b : t.c) = std::move(vec);
      }
      out.push_back(std::move(t));
      int j = k - 2;
      while (j >= 0 && ++rest[static_cast<std::size_t>(j)] == 3) {
        rest[static_cast<std::size_t>(j)] = 0;
        --j;
      }
      if (j < 0) break;
    }
  }
  return out;
}

double slicing_epsilon(double eps, double eta, double d, int k) {
  if (d <= 0) throw DomainError("slicing_epsilon: d must be positive");
  double m = std::ldexp(1.0, k - 1);
  double k3 = static_cast<double>(k) * k * k;
  double a = 128 * k3 * (1 - std::pow(1 - eps / d, m) / std::pow(1 + eta, m - 1));
  double b = 128 * k3 * ((1 + eps * std::pow(d, -m)) * std::pow(1 + eta, m - 1) - 1);
  double c = 512 * k3 * ((1 + 100 * std::sqrt(eta) * std::pow(d, -m)) * (1 + 2 * eta) - 1);
  double v = eta + std::max({a, b, c});
  if (v > 0.5) return std::numeric_limits<double>::infinity();
  return v;
}

double slicing_epsilon_crude(double eps, double eta, double d, int k) {
  double m = std::ldexp(1.0, k - 1);
  double k3 = static_cast<double>(k) * k * k;
  return std::ldexp(1.0, static_cast<int>(m) + 18) * k3 * (eps + std::sqrt(eta)) * std::pow(d, -m);
}

double InheritThreshold::log2_lhs() const {
  return std::min(std::log2(eps_prime), -static_cast<double>(k));
}

double InheritThreshold::log2_constant() const {
  return std::ldexp(1.0, k + 6) + 3 * std::log2(static_cast<double>(k)) - std::ldexp(1.0, k + 1) * std::log2(d0);
}

bool InheritThreshold::admits_log2(double log2_eps, double log2_eta) const {
  double a = log2_eps / 16;
  double b = log2_eta / 32;
  double hi = std::max(a, b);
  double lo = std::min(a, b);
  double term = std::isinf(lo) ? hi : hi + std::log2(1 + std::exp2(lo - hi));
  return log2_lhs() >= log2_constant() + term;
}

bool InheritThreshold::admits(double eps, double eta) const {
  return admits_log2(std::log2(eps), std::log2(eta));
}

double InheritThreshold::max_log2_eps() const { return 16 * (log2_lhs() - log2_constant()); }

}  // namespace hyperreg
