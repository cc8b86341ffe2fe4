#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "g3/error.hpp"
#include "g3/identities.hpp"
#include "g3/transforms.hpp"

using namespace g3;

namespace {

// Σ_{j<30} ad^j / (j + shift)!
Mat series(const Mat& ad, int shift) {
  Mat term = Mat::Identity(3, 3), sum = Mat::Zero(3, 3);
  double fact = 1;
  for (int f = 2; f <= shift; ++f) fact *= f;
  for (int j = 0; j < 30; ++j) {
    sum += term / fact;
    term = term * ad;
    fact *= (j + 1 + shift);
  }
  return sum;
}

Vec rand_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-1, 1);
  Vec v(3);
  for (int i = 0; i < 3; ++i) v[i] = scale * u(rng);
  return v;
}

// ξ(x) = f(x) v̂
JetField along(const JetField& f, const Vec& dir) {
  JetField x(f.points(), 3, 2);
  for (std::size_t p = 0; p < f.points(); ++p)
    for (int a = 0; a < 3; ++a) {
      x.v(p, a) = f.v(p, 0) * dir[a];
      for (int s = 0; s < 3; ++s) x.d(p, a, s) = f.d(p, 0, s) * dir[a];
      for (int s = 0; s < 6; ++s) x.dd(p, a, s) = f.dd(p, 0, s) * dir[a];
    }
  return x;
}

}  // namespace

TEST_CASE("R and R' match exponential series oracles") {
  const LieAlgebra su2 = builtin_algebra("su2");
  std::mt19937_64 rng(4);
  for (double scale : {1e-4, 0.03, 0.09, 0.2, 1.0, 2.5}) {
    for (int rep = 0; rep < 5; ++rep) {
      const Vec xi = rand_vec(rng, scale);
      const RotationOps ops = rotation_ops(su2, xi);
      const Mat ad = ad_matrix(su2, xi);
      CHECK((ops.R - series(ad, 0)).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((ops.Rp - series(ad, 1)).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((ops.R.transpose() * su2.k() * ops.R - su2.k()).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(std::abs(ops.R.determinant() - 1) <= 1e-12);
    }
  }
  const RotationOps z = rotation_ops(su2, Vec::Zero(3));
  CHECK(z.R == Mat::Identity(3, 3));
  CHECK(z.Rp == Mat::Identity(3, 3));
}

TEST_CASE("rotation formulas reject other algebras") {
  CHECK_THROWS_AS(rotation_ops(builtin_algebra("su3"), Vec::Zero(8)), Error);
  CHECK_THROWS_AS(rotation_ops(builtin_algebra("so4"), Vec::Zero(6)), Error);
}

TEST_CASE("composition formula is second order in t") {
  const LieAlgebra su2 = builtin_algebra("su2");
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 5; ++rep) {
    const Vec x1 = rand_vec(rng, 1.2), x2 = rand_vec(rng, 1.0);
    const CompositionReport c = composition_check(su2, x1, x2);
    INFO("order " << c.order << " literal " << c.literal_order);
    CHECK(c.order >= 1.95);
    CHECK(c.report.pass);
    CHECK(c.literal_order == doctest::Approx(1.0).epsilon(0.05));
    CHECK(composition_residual(su2, x1, Vec::Zero(3), 0.3) <= 1e-15);
    CHECK(composition_residual(su2, Vec::Zero(3), x2, 0.3) <= 1e-15);
  }
}

TEST_CASE("finite transform along v preserves the action") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const GaugeConfig cfg = fx::config({"su2", AuxKind::V}, seed, 16, 0.5);
    const Vec vhat = cfg.theory().aux().sources()[0].normalized();
    const JetField f = random_lie_modes(1, seed + 40, 1, 1.5).sample(cfg.lattice(), 2);
    const GaugeConfig g = finite_gauge_su2(cfg, along(f, vhat));
    const double s0 = action(cfg), s1 = action(g);
    INFO(s0 << " " << s1);
    CHECK(std::abs(s1 - s0) <= 1e-8 * std::abs(s0));
  }
}

TEST_CASE("finite transform expands to the infinitesimal one") {
  const GaugeConfig cfg = fx::config({"su2", AuxKind::V}, 5, 16, 0.5);
  const JetField xi = random_parameter(cfg.theory().alg(), cfg.lattice(), 55, 0.5);
  const auto dA = gauge_variation(cfg, xi);
  auto err = [&](double t) {
    JetField tx = xi;
    for (auto* v : {&tx.values(), &tx.first(), &tx.second()})
      for (double& x : *v) x *= t;
    const GaugeConfig g = finite_gauge_su2(cfg, tx);
    return fx::max_diff(g.A().values(), fx::axpy(cfg.A().values(), t, dA));
  };
  const double e1 = err(0.02), e2 = err(0.01);
  INFO(e1 << " " << e2);
  CHECK(std::abs(std::log2(e1 / e2) - 2.0) <= 0.1);
}

TEST_CASE("constant parameter leaves A = 0 unchanged") {
  auto th = fx::theory({"su2", AuxKind::V});
  const Lattice3 lat = make_lattice(8);
  const GaugeConfig cfg(th, lat, JetField(lat.points(), 9, 2));
  JetField xi(lat.points(), 3, 2);
  for (std::size_t p = 0; p < lat.points(); ++p) {
    xi.v(p, 0) = 0.4;
    xi.v(p, 1) = -1.1;
    xi.v(p, 2) = 0.7;
  }
  const GaugeConfig g = finite_gauge_su2(cfg, xi);
  CHECK(fx::sup(g.A().values()) == 0.0);
  CHECK(fx::sup(g.A().first()) == 0.0);
}
