#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "g3/error.hpp"
#include "g3/identities.hpp"

using namespace g3;

namespace {

int levi(int a, int b, int c) { return (a - b) * (b - c) * (c - a) / 2; }

ModeField mode_sum(const ModeField& a, double t, const ModeField& b) {
  ModeField r = a;
  for (int c = 0; c < a.comps(); ++c)
    for (Mode md : b.modes(c)) {
      md.c *= t;
      md.s *= t;
      r.modes(c).push_back(md);
    }
  return r;
}

GaugeConfig constant_config(std::shared_ptr<const Theory> th, const Lattice3& lat, const std::vector<double>& A0) {
  JetField A(lat.points(), th->m(), 2);
  for (std::size_t p = 0; p < lat.points(); ++p)
    for (int c = 0; c < th->m(); ++c) A.v(p, c) = A0[c];
  return GaugeConfig(th, lat, A);
}

}  // namespace

TEST_CASE("constant su2 field has F^3_12 = c1 c2 / 2") {
  const LieAlgebra su2 = builtin_algebra("su2");
  auto th = make_theory(su2, make_aux(su2, AuxKind::None, 0));
  std::vector<double> A0(9, 0.0);
  A0[0 * 3 + 0] = 0.3;  // A^1_1
  A0[1 * 3 + 1] = 0.7;  // A^2_2
  const GaugeConfig cfg = constant_config(th, make_lattice(8), A0);
  const Curvature cv = curvature(cfg);
  // F2 layout P × n × 3 × 3
  CHECK(cv.F2[(2 * 3 + 0) * 3 + 1] == doctest::Approx(0.5 * 0.3 * 0.7).epsilon(1e-15));
  CHECK(cv.F2[(2 * 3 + 1) * 3 + 0] == doctest::Approx(-0.5 * 0.3 * 0.7).epsilon(1e-15));
  // dual F_3 = ε_3^{12}F_12 + ε_3^{21}F_21
  CHECK(cv.Fdual[2 * 3 + 2] == doctest::Approx(0.3 * 0.7).epsilon(1e-15));
}

TEST_CASE("abelian single mode: dual curvature is the analytic curl") {
  const LieAlgebra ab = builtin_algebra("abelian(1)");
  auto th = make_theory(ab, make_aux(ab, AuxKind::None, 0));
  ModeField mf(3);
  mf.modes(1).push_back({{2, 0, 1}, 0.4, -0.2});  // A_2
  const Lattice3 lat = make_lattice(16);
  const GaugeConfig cfg = GaugeConfig::from_modes(th, lat, mf);
  const Curvature cv = curvature(cfg);
  double err = 0;
  for (std::size_t p = 0; p < lat.points(); ++p) {
    const auto x = lat.coord(p);
    const double ph = 2 * x[0] + x[2];
    const double dA2 = -0.4 * std::sin(ph) - 0.2 * std::cos(ph);  // d/dphase
    // curl: F_1 = -∂_3 A_2, F_3 = ∂_1 A_2
    err = std::max({err, std::abs(cv.Fdual[p * 3 + 0] + 1 * dA2), std::abs(cv.Fdual[p * 3 + 1]),
                    std::abs(cv.Fdual[p * 3 + 2] - 2 * dA2)});
  }
  CHECK(err <= 1e-13);
}

TEST_CASE("pure gauge abelian field has zero curvature") {
  const LieAlgebra ab = builtin_algebra("abelian(2)");
  auto th = make_theory(ab, make_aux(ab, AuxKind::None, 0));
  const Lattice3 lat = make_lattice(16);
  const JetField xi = random_parameter(ab, lat, 3, 0.5);
  JetField A(lat.points(), 6, 1);
  for (std::size_t p = 0; p < lat.points(); ++p)
    for (int a = 0; a < 2; ++a)
      for (int mu = 0; mu < 3; ++mu) {
        A.v(p, a * 3 + mu) = xi.d(p, a, mu);
        for (int s = 0; s < 3; ++s) A.d(p, a * 3 + mu, s) = xi.dd(p, a, sym_index(mu, s));
      }
  const GaugeConfig cfg(th, lat, A);
  CHECK(fx::sup(curvature(cfg).Fdual) <= 1e-13);
}

TEST_CASE("Y is the identity for A = 0 or B = 0") {
  const LieAlgebra su2 = builtin_algebra("su2");
  const Lattice3 lat = make_lattice(8);
  auto th = make_theory(su2, make_aux(su2, AuxKind::V, 4));
  const YOperator y0 = assemble_y(constant_config(th, lat, std::vector<double>(9, 0.0)));
  auto thz = make_theory(su2, make_aux(su2, AuxKind::None, 0));
  const YOperator y1 = assemble_y(random_config(thz, lat, 2, 0.4));
  for (const YOperator* y : {&y0, &y1}) {
    double err = 0;
    for (std::size_t p = 0; p < lat.points(); ++p)
      for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) err = std::max(err, std::abs(y->Y[(p * 9 + i) * 9 + j] - (i == j)));
    CHECK(err == 0.0);
  }
}

TEST_CASE("lowered Y bilinear form is symmetric") {
  for (const auto& c : fx::identity_cases()) {
    const GaugeConfig cfg = fx::config(c, 5, 8);
    const YOperator y = assemble_y(cfg);
    const Mat& k = cfg.theory().alg().k();
    const int n = cfg.theory().n(), m = 3 * n;
    double err = 0, scale = 0;
    for (std::size_t p = 0; p < cfg.lattice().points(); p += 7) {
      Eigen::Map<const Eigen::Matrix<double, -1, -1, Eigen::RowMajor>> M(y.Y.data() + p * m * m, m, m);
      Mat G = Mat::Zero(m, m);  // G[(a,μ),(b,ν)] = η_μμ k_ad M[(d,μ),(b,ν)]
      for (int a = 0; a < n; ++a)
        for (int mu = 0; mu < 3; ++mu)
          for (int d = 0; d < n; ++d) G.row(a * 3 + mu) += k(a, d) * M.row(d * 3 + mu);
      err = std::max(err, (G - G.transpose()).cwiseAbs().maxCoeff());
      scale = std::max(scale, G.cwiseAbs().maxCoeff());
    }
    CHECK(err <= 1e-13 * scale);
  }
}

TEST_CASE("guard-limit random fields keep det Y away from zero") {
  for (const auto& c : fx::identity_cases())
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const GaugeConfig cfg = fx::config(c, seed, 8, 1.0);
      CHECK(cfg.min_det_y() > 0.01);
    }
  const LieAlgebra su2 = builtin_algebra("su2");
  auto th = make_theory(su2, make_aux(su2, AuxKind::V, 1));
  CHECK_THROWS_AS(random_config(th, make_lattice(8), 1, 1.01 * th->guard_amplitude()), Error);
}

TEST_CASE("K matches the three-term Neumann series to third order") {
  const fx::Case c{"su2", AuxKind::V};
  auto err_at = [&](double frac) {
    const GaugeConfig cfg = fx::config(c, 7, 8, frac);
    const Evaluation ev = evaluate(cfg, false);
    const int m = 9;
    double e = 0;
    Mat X;
    for (std::size_t p = 0; p < ev.P; ++p) {
      cfg.theory().xmap(cfg.A().val_at(p), X);
      const Eigen::Map<const Vec> F(ev.F.data() + p * m, m), K(ev.K.data() + p * m, m);
      const Vec S = F + X * F + X * (X * F);
      e = std::max(e, (K - S).cwiseAbs().maxCoeff() / F.cwiseAbs().maxCoeff());
    }
    return e;
  };
  const double e1 = err_at(0.2), e2 = err_at(0.1);
  CHECK(std::log2(e1 / e2) > 2.8);
}

TEST_CASE("v = 0 reproduces Yang-Mills exactly") {
  for (const char* label : {"su2", "su3"}) {
    const LieAlgebra alg = builtin_algebra(label);
    auto th = make_theory(alg, make_aux(alg, AuxKind::None, 0));
    const Lattice3 lat = make_lattice(16);
    const GaugeConfig cfg = random_config(th, lat, 11, 0.3);
    const Evaluation ev = evaluate(cfg, true);
    const Curvature cv = curvature(cfg);
    CHECK(ev.K == cv.Fdual);
    // independent YM: F from Levi-Civita, ∂F by FFT, E = 2ε(∂F + [A,F])
    const int n = alg.dim(), m = 3 * n;
    std::vector<double> F(lat.points() * m, 0.0);
    for (std::size_t p = 0; p < lat.points(); ++p)
      for (int a = 0; a < n; ++a)
        for (int s = 0; s < 3; ++s) {
          double f = 0;
          for (int mu = 0; mu < 3; ++mu)
            for (int nu = 0; nu < 3; ++nu) {
              const int e = levi(s, mu, nu);
              if (!e) continue;
              f += e * cfg.A().d(p, a * 3 + nu, mu);
              for (int b = 0; b < n; ++b)
                for (int cc = 0; cc < n; ++cc)
                  f += 0.5 * e * alg.C()(b, cc, a) * cfg.A().v(p, b * 3 + mu) * cfg.A().v(p, cc * 3 + nu);
            }
          F[p * m + a * 3 + s] = f;
        }
    GridDerivative D(lat);
    std::vector<std::vector<double>> dF;
    for (int ax = 0; ax < 3; ++ax) dF.push_back(D.derivative(F, m, ax));
    double err = 0, scale = fx::sup(ev.E);
    for (std::size_t p = 0; p < lat.points(); ++p)
      for (int a = 0; a < n; ++a)
        for (int mu = 0; mu < 3; ++mu) {
          double e = 0;
          for (int s = 0; s < 3; ++s)
            for (int nu = 0; nu < 3; ++nu) {
              const int l = levi(mu, s, nu);
              if (!l) continue;
              e += 2 * l * dF[s][p * m + a * 3 + nu];
              for (int b = 0; b < n; ++b)
                for (int cc = 0; cc < n; ++cc)
                  e += 2 * l * alg.C()(b, cc, a) * cfg.A().v(p, b * 3 + s) * F[p * m + cc * 3 + nu];
            }
          err = std::max(err, std::abs(e - ev.E[p * m + a * 3 + mu]));
        }
    CHECK(err <= 1e-13 * std::max(1.0, scale));
  }
}

TEST_CASE("A = 0 gives vanishing L and E") {
  const fx::Case c{"su2", AuxKind::V};
  auto th = fx::theory(c);
  const GaugeConfig cfg = constant_config(th, make_lattice(8), std::vector<double>(9, 0.0));
  CHECK(fx::sup(lagrangian(cfg).density) == 0.0);
  CHECK(fx::sup(field_equations(cfg)) == 0.0);
}

TEST_CASE("exact identities on random configurations") {
  for (const auto& c : fx::identity_cases())
    for (std::uint64_t seed : {1u, 2u}) {
      const GaugeConfig cfg = fx::config(c, seed);
      const JetField x1 = random_parameter(cfg.theory().alg(), cfg.lattice(), seed + 100, 0.7);
      const JetField x2 = random_parameter(cfg.theory().alg(), cfg.lattice(), seed + 200, 0.7);
      for (const ResidualReport& r :
           {k_relation_report(cfg), lagrangian_forms_report(cfg), bianchi_residual(cfg),
            k_variation_residual(cfg, x1), commutator_residual(cfg, x1, x2), noether_identity(cfg, x1)}) {
        INFO(c.alg << " seed " << seed << " " << r.name << " residual " << r.residual << " scale " << r.scale);
        CHECK(r.pass);
      }
    }
}

TEST_CASE("identities hold under Lorentzian signature") {
  const GaugeConfig cfg = fx::config({"su2", AuxKind::V}, 3, 16, 0.8, DerivMode::Spectral, Signature::Lorentzian);
  const JetField x1 = random_parameter(cfg.theory().alg(), cfg.lattice(), 31, 0.7);
  const JetField x2 = random_parameter(cfg.theory().alg(), cfg.lattice(), 32, 0.7);
  for (const ResidualReport& r : {bianchi_residual(cfg), k_variation_residual(cfg, x1),
                                  commutator_residual(cfg, x1, x2), noether_identity(cfg, x1)}) {
    INFO(r.name << " " << r.residual);
    CHECK(r.pass);
  }
}

TEST_CASE("commutator with equal parameters vanishes on both sides") {
  const GaugeConfig cfg = fx::config({"su2", AuxKind::V}, 4);
  const JetField x = random_parameter(cfg.theory().alg(), cfg.lattice(), 9, 0.5);
  CHECK(commutator_residual(cfg, x, x).residual <= 1e-13);
}

TEST_CASE("A = 0 gives delta A = grad xi") {
  auto th = fx::theory({"su2", AuxKind::V});
  const Lattice3 lat = make_lattice(8);
  const GaugeConfig cfg = constant_config(th, lat, std::vector<double>(9, 0.0));
  const JetField xi = random_parameter(th->alg(), lat, 1, 0.5);
  const auto dA = gauge_variation(cfg, xi);
  double err = 0;
  for (std::size_t p = 0; p < lat.points(); ++p)
    for (int a = 0; a < 3; ++a)
      for (int mu = 0; mu < 3; ++mu) err = std::max(err, std::abs(dA[p * 9 + a * 3 + mu] - xi.d(p, a, mu)));
  CHECK(err == 0.0);
}

TEST_CASE("covariant pair formulation matches components") {
  for (const char* label : {"su3", "so4"}) {
    const GaugeConfig cfg = fx::config({label, AuxKind::Pair}, 6);
    for (const ResidualReport& r : covariant_general_residuals(cfg)) {
      INFO(label << " " << r.name << " " << r.residual);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("field equations match the action derivative at slope 2") {
  for (const auto& c : fx::identity_cases()) {
    auto th = fx::theory(c, 2);
    const Lattice3 lat = make_lattice(16);
    const double amp = 0.6 * default_amplitude(*th);
    const ModeField A = random_gauge_modes(th->alg(), 2, 1, amp);
    const ModeField dA = random_gauge_modes(th->alg(), 77, 1, amp);
    const GaugeConfig cfg = GaugeConfig::from_modes(th, lat, A);
    const std::vector<double> E = field_equations(cfg);
    const double exact = pairing(cfg, E, dA.sample(lat, 0).values());
    auto err = [&](double t) {
      const double sp = action(GaugeConfig::from_modes(th, lat, mode_sum(A, t, dA)));
      const double sm = action(GaugeConfig::from_modes(th, lat, mode_sum(A, -t, dA)));
      return std::abs((sp - sm) / (2 * t) - exact);
    };
    const double e1 = err(0.2), e2 = err(0.1);
    INFO(c.alg << " " << e1 << " " << e2 << " exact " << exact);
    CHECK(std::abs(std::log2(e1 / e2) - 2.0) <= 0.1);
  }
}

TEST_CASE("linearize matches finite differences and is linear") {
  const fx::Case c{"su3", AuxKind::Pair};
  auto th = fx::theory(c, 3);
  const Lattice3 lat = make_lattice(16);
  const double amp = 0.6 * default_amplitude(*th);
  const ModeField A = random_gauge_modes(th->alg(), 3, 1, amp);
  const ModeField dA = random_gauge_modes(th->alg(), 33, 1, amp);
  const GaugeConfig cfg = GaugeConfig::from_modes(th, lat, A);
  const Evaluation ev = evaluate(cfg, true);
  const JetField dj = dA.sample(lat, 2);
  const Linearization lin = linearize(cfg, ev, dj);
  auto err = [&](double t) {
    const Evaluation ep = evaluate(GaugeConfig::from_modes(th, lat, mode_sum(A, t, dA)), true);
    const Evaluation em = evaluate(GaugeConfig::from_modes(th, lat, mode_sum(A, -t, dA)), true);
    double eK = 0, eE = 0;
    for (std::size_t i = 0; i < ep.K.size(); ++i) {
      eK = std::max(eK, std::abs((ep.K[i] - em.K[i]) / (2 * t) - lin.dK[i]));
      eE = std::max(eE, std::abs((ep.E[i] - em.E[i]) / (2 * t) - lin.dE[i]));
    }
    return std::pair{eK, eE};
  };
  const auto [k1, e1] = err(0.2);
  const auto [k2, e2] = err(0.1);
  INFO(k1 << " " << k2 << " " << e1 << " " << e2);
  CHECK(std::abs(std::log2(k1 / k2) - 2.0) <= 0.1);
  CHECK(std::abs(std::log2(e1 / e2) - 2.0) <= 0.1);

  JetField d2 = dj;
  for (auto* v : {&d2.values(), &d2.first(), &d2.second()})
    for (double& x : *v) x *= 2;
  const Linearization lin2 = linearize(cfg, ev, d2);
  CHECK(fx::max_diff(lin2.dE, fx::axpy(lin.dE, 1.0, lin.dE)) <= 1e-13 * std::max(1.0, fx::sup(lin2.dE)));
  const Linearization lz = linearize(cfg, ev, JetField(lat.points(), th->m(), 2));
  CHECK(fx::sup(lz.dE) == 0.0);
  CHECK(fx::sup(lz.dK) == 0.0);
}

TEST_CASE("central-2 Bianchi residual decreases at slope 2") {
  const fx::Case c{"su2", AuxKind::V};
  auto th = fx::theory(c, 1);
  const double amp = 0.6 * default_amplitude(*th);
  const ModeField A = random_gauge_modes(th->alg(), 1, 1, amp);
  auto res = [&](int N) {
    const GaugeConfig cfg = GaugeConfig::from_modes(th, make_lattice(N, Signature::Euclidean, DerivMode::Central2), A);
    return bianchi_residual(cfg).residual;
  };
  const double r1 = res(16), r2 = res(32);
  INFO(r1 << " " << r2);
  CHECK(std::abs(std::log2(r1 / r2) - 2.0) <= 0.2);
}
