#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "g3/currents.hpp"

using namespace g3;

TEST_CASE("Noether current is divergence free and satisfies the rearranged field equation") {
  for (const auto& c : fx::identity_cases()) {
    const GaugeConfig cfg = fx::config(c, 3);
    const NoetherCurrent nc = noether_current(cfg);
    INFO(c.alg << " div " << nc.div.residual << " onshell " << nc.onshell.residual << " / " << nc.onshell.scale);
    CHECK(nc.div.pass);
    CHECK(nc.onshell.pass);
  }
}

TEST_CASE("A = 0 gives J = 0 and zero charges") {
  auto th = fx::theory({"su2", AuxKind::V});
  const Lattice3 lat = make_lattice(8);
  const GaugeConfig cfg(th, lat, JetField(lat.points(), 9, 2));
  CHECK(fx::sup(noether_current(cfg).J) == 0.0);
  const Charge q = charge(cfg, default_window(lat));
  CHECK(fx::sup(q.surface) == 0.0);
  CHECK(fx::sup(q.loop) == 0.0);
}

TEST_CASE("discrete Stokes agreement on every plane orientation") {
  for (const auto& c : fx::identity_cases()) {
    const GaugeConfig cfg = fx::config(c, 4);
    for (int axis = 0; axis < 3; ++axis) {
      ChargeWindow w = default_window(cfg.lattice(), axis);
      w.index = 3;
      w.u0 = -2;  // windows may wrap around the torus
      const Charge q = charge(cfg, w);
      INFO(c.alg << " axis " << axis << " " << q.stokes.residual << " / " << q.stokes.scale);
      CHECK(q.stokes.pass);
      // continuum flux agrees at quadrature accuracy
      for (int a = 0; a < cfg.theory().n(); ++a)
        CHECK(std::abs(q.flux[a] - q.loop[a]) <= 1e-2 * (q.stokes.scale + 1e-12));
    }
  }
}

TEST_CASE("charge covariance bound holds off shell") {
  const GaugeConfig cfg = fx::config({"su2", AuxKind::V}, 6);
  Vec xi(3);
  xi << 0.3, -0.5, 0.8;
  const ResidualReport r = charge_covariance(cfg, default_window(cfg.lattice()), xi);
  INFO(r.residual << " / " << r.scale);
  CHECK(r.pass);
}

TEST_CASE("stress tensor algebra and divergence identity") {
  for (const auto& c : fx::identity_cases()) {
    const GaugeConfig cfg = fx::config(c, 7);
    const JetField xi = random_parameter(cfg.theory().alg(), cfg.lattice(), 70, 0.5);
    const StressTensor st = stress_tensor(cfg, &xi);
    for (const auto& r : st.reports) {
      INFO(c.alg << " " << r.name << " " << r.residual << " / " << r.scale);
      CHECK(r.pass);
    }
  }
  const GaugeConfig lor = fx::config({"su2", AuxKind::V}, 2, 16, 0.8, DerivMode::Spectral, Signature::Lorentzian);
  for (const auto& r : stress_tensor(lor).reports) {
    INFO("lorentz " << r.name << " " << r.residual << " / " << r.scale);
    CHECK(r.pass);
  }
}

TEST_CASE("rigid abelian symmetry on constant-plus-gradient fields") {
  const LieAlgebra su2 = builtin_algebra("su2");
  const AuxBracket aux = make_aux(su2, AuxKind::V, 3);
  const Lattice3 lat = make_lattice(16);
  const JetField f = random_lie_modes(3, 12, 1, 0.6).sample(lat, 2);
  JetField A(lat.points(), 9, 1);
  const double c0[9] = {0.2, -0.1, 0.05, 0.3, 0.0, -0.25, 0.1, 0.15, -0.05};
  for (std::size_t p = 0; p < lat.points(); ++p)
    for (int a = 0; a < 3; ++a)
      for (int mu = 0; mu < 3; ++mu) {
        A.v(p, a * 3 + mu) = c0[a * 3 + mu] + f.d(p, a, mu);
        for (int s = 0; s < 3; ++s) A.d(p, a * 3 + mu, s) = f.dd(p, a, sym_index(mu, s));
      }
  Vec x1(3), x2(3);
  x1 << 0.4, 0.1, -0.3;
  x2 << -0.2, 0.7, 0.5;
  for (const auto& r : rigid_symmetry_abelian(lat, su2, aux, A, x1, x2)) {
    INFO(r.name << " " << r.residual << " / " << r.scale);
    CHECK(r.pass);
  }
  for (const auto& r : rigid_symmetry_abelian(lat, su2, aux, A, Vec::Zero(3), Vec::Zero(3))) CHECK(r.residual == 0.0);
}
