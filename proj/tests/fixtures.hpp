#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "g3/setup.hpp"

namespace fx {

struct Case {
  std::string alg;
  g3::AuxKind aux;
};

inline const std::vector<Case>& identity_cases() {
  static const std::vector<Case> c{{"su2", g3::AuxKind::V}, {"su3", g3::AuxKind::Pair}, {"so4", g3::AuxKind::Pair}};
  return c;
}

inline std::shared_ptr<const g3::Theory> theory(const Case& c, std::uint64_t seed = 1,
                                                g3::Signature sig = g3::Signature::Euclidean) {
  const g3::LieAlgebra alg = g3::builtin_algebra(c.alg);
  return g3::make_theory(alg, g3::make_aux(alg, c.aux, seed), sig);
}

// Random configuration at a fraction of the guard amplitude.
inline g3::GaugeConfig config(const Case& c, std::uint64_t seed, int N = 16, double fraction = 0.8,
                              g3::DerivMode mode = g3::DerivMode::Spectral,
                              g3::Signature sig = g3::Signature::Euclidean) {
  auto th = theory(c, seed, sig);
  const double amp = fraction * g3::default_amplitude(*th);
  return g3::random_config(th, g3::make_lattice(N, sig, mode), seed, amp);
}

inline double sup(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline std::vector<double> axpy(const std::vector<double>& x, double t, const std::vector<double>& y) {
  std::vector<double> r(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += t * y[i];
  return r;
}

}  // namespace fx
