#include "g3/identities.hpp"

#include <cmath>

#include "g3/error.hpp"
#include "g3/parallel.hpp"

namespace g3 {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_xi(const GaugeConfig& cfg, const JetField& xi, int order) {
  if (xi.comps() != cfg.theory().n() || xi.points() != cfg.lattice().points() || xi.order() < order)
    throw Error(ErrorCode::DimensionMismatch, "gauge parameter does not match the configuration");
}

// c^l = T(i,j,l) x^i y^j for Lie vectors
void lie_bilinear(const std::vector<TEntry>& T, const double* x, const double* y, double w, double* out) {
  for (const TEntry& t : T) out[t.l] += w * t.w * x[t.i] * y[t.j];
}

double l2(const Lattice3& lat, const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s * lat.cell_volume());
}

ResidualReport tagged(ResidualReport r, const GaugeConfig& cfg) {
  r.algebra = cfg.theory().alg().label();
  r.N = cfg.lattice().N();
  r.deriv_mode = to_string(cfg.lattice().deriv_mode());
  return r;
}

// Z(ξ) = Y⁻¹ duB(E, ξ) at one point
void zmap(const Theory& th, const double* Yinv, const double* E, const double* xi, double* out) {
  const int m = th.m();
  std::vector<double> w(m, 0.0);
  th.plain_bilinear(th.duB_entries(), E, xi, 1.0, w.data());
  Eigen::Map<Vec>(out, m) = Eigen::Map<const RowMat>(Yinv, m, m) * Eigen::Map<const Vec>(w.data(), m);
}

}  // namespace

double yinv_row_norm(const Evaluation& ev) {
  double mx = 0;
  const int m = ev.m;
  for (std::size_t p = 0; p < ev.P; ++p)
    mx = std::max(mx, Eigen::Map<const RowMat>(ev.Yinv.data() + p * m * m, m, m).cwiseAbs().rowwise().sum().maxCoeff());
  return mx;
}

JetField gauge_variation_jet(const GaugeConfig& cfg, const Evaluation& ev, const JetField& xi) {
  check_xi(cfg, xi, 2);
  if (!ev.full) throw Error(ErrorCode::DimensionMismatch, "gauge variation needs derivatives of K");
  const Theory& th = cfg.theory();
  const int n = th.n(), m = th.m();
  const std::size_t P = ev.P;
  JetField out(P, m, 1);
  parallel_for(P, [&](std::size_t b, std::size_t e) {
    std::vector<double> dAr(m), dKr(m), dxr(n);
    for (std::size_t p = b; p < e; ++p) {
      const double* A = cfg.A().val_at(p);
      const double* K = ev.K.data() + p * m;
      const double* x = xi.val_at(p);
      double* v = out.val_at(p);
      for (int a = 0; a < n; ++a)
        for (int mu = 0; mu < 3; ++mu) v[a * 3 + mu] = xi.d(p, a, mu);
      th.plain_bilinear(th.C_entries(), A, x, 1.0, v);
      th.plain_bilinear(th.duB_entries(), K, x, 1.0, v);
      for (int r = 0; r < 3; ++r) {
        std::vector<double> acc(m, 0.0);
        for (int c = 0; c < m; ++c) {
          dAr[c] = cfg.A().d(p, c, r);
          dKr[c] = ev.dK[(p * m + c) * 3 + r];
        }
        for (int a = 0; a < n; ++a) {
          dxr[a] = xi.d(p, a, r);
          for (int mu = 0; mu < 3; ++mu) acc[a * 3 + mu] = xi.dd(p, a, sym_index(r, mu));
        }
        th.plain_bilinear(th.C_entries(), dAr.data(), x, 1.0, acc.data());
        th.plain_bilinear(th.C_entries(), A, dxr.data(), 1.0, acc.data());
        th.plain_bilinear(th.duB_entries(), dKr.data(), x, 1.0, acc.data());
        th.plain_bilinear(th.duB_entries(), K, dxr.data(), 1.0, acc.data());
        for (int c = 0; c < m; ++c) out.d(p, c, r) = acc[c];
      }
    }
  });
  return out;
}

std::vector<double> gauge_variation(const GaugeConfig& cfg, const JetField& xi) {
  const Evaluation ev = evaluate(cfg, true);
  return gauge_variation_jet(cfg, ev, xi).values();
}

ResidualReport k_relation_report(const GaugeConfig& cfg, double tol) {
  const KStrength k = compute_k(cfg);
  return tagged(ResidualReport::check("k-relation", k.relation_residual, 1.0, tol), cfg);
}

ResidualReport lagrangian_forms_report(const GaugeConfig& cfg, double tol) {
  const Theory& th = cfg.theory();
  const Evaluation ev = evaluate(cfg, false);
  const int m = th.m();
  double worst = 0, scale = 0;
  Mat X;
  for (std::size_t p = 0; p < ev.P; ++p) {
    const Eigen::Map<const Vec> K(ev.K.data() + p * m, m), F(ev.F.data() + p * m, m);
    th.xmap(cfg.A().val_at(p), X);
    const Vec YK = K - X * K;
    const Vec YiF = Eigen::Map<const RowMat>(ev.Yinv.data() + p * m * m, m, m) * F;
    const double l1 = ev.L[p];
    const double l2v = th.lagrangian(YK.data(), K.data());
    const double l3 = th.lagrangian(YiF.data(), F.data());
    worst = std::max({worst, std::abs(l1 - l2v), std::abs(l1 - l3)});
    scale = std::max({scale, std::abs(l1), std::abs(l2v), std::abs(l3)});
  }
  return tagged(ResidualReport::check("lagrangian-forms", scale > 0 ? worst / scale : worst, 1.0, tol), cfg);
}

std::vector<double> bianchi_lhs(const GaugeConfig& cfg, const Evaluation& ev) {
  const Theory& th = cfg.theory();
  const int n = th.n(), m = th.m();
  const auto& ei = th.metric().eta_inv;
  std::vector<double> out(ev.P * n, 0.0);
  for (std::size_t p = 0; p < ev.P; ++p) {
    const double* A = cfg.A().val_at(p);
    const double* K = ev.K.data() + p * m;
    double* o = out.data() + p * n;
    for (int a = 0; a < n; ++a)
      for (int mu = 0; mu < 3; ++mu) o[a] += ei(mu, mu) * ev.dK[((p * m) + a * 3 + mu) * 3 + mu];
    for (int mu = 0; mu < 3; ++mu) {
      std::vector<double> Am(n), Km(n);
      for (int a = 0; a < n; ++a) {
        Am[a] = A[a * 3 + mu];
        Km[a] = K[a * 3 + mu];
      }
      lie_bilinear(th.C_entries(), Am.data(), Km.data(), ei(mu, mu), o);
      lie_bilinear(th.duB_entries(), Km.data(), Km.data(), ei(mu, mu), o);
    }
  }
  return out;
}

ResidualReport bianchi_residual(const GaugeConfig& cfg, double tol) {
  const Theory& th = cfg.theory();
  const Evaluation ev = evaluate(cfg, true);
  const int n = th.n(), m = th.m();
  const auto& ei = th.metric().eta_inv;
  double worst = 0, scale = 0;
  for (std::size_t p = 0; p < ev.P; ++p) {
    const double* A = cfg.A().val_at(p);
    const double* K = ev.K.data() + p * m;
    const double* E = ev.E.data() + p * m;
    std::vector<double> div(n, 0.0), cak(n, 0.0), dkk(n, 0.0), dea(n, 0.0);
    for (int a = 0; a < n; ++a)
      for (int mu = 0; mu < 3; ++mu) div[a] += ei(mu, mu) * ev.dK[(p * m + a * 3 + mu) * 3 + mu];
    for (int mu = 0; mu < 3; ++mu) {
      std::vector<double> Am(n), Km(n), Em(n);
      for (int a = 0; a < n; ++a) {
        Am[a] = A[a * 3 + mu];
        Km[a] = K[a * 3 + mu];
        Em[a] = E[a * 3 + mu];
      }
      lie_bilinear(th.C_entries(), Am.data(), Km.data(), ei(mu, mu), cak.data());
      lie_bilinear(th.duB_entries(), Km.data(), Km.data(), ei(mu, mu), dkk.data());
      lie_bilinear(th.duB_entries(), Em.data(), Am.data(), 0.5 * ei(mu, mu), dea.data());
    }
    for (int a = 0; a < n; ++a) {
      worst = std::max(worst, std::abs(div[a] + cak[a] + dkk[a] - dea[a]));
      scale = std::max({scale, std::abs(div[a]), std::abs(cak[a]), std::abs(dkk[a]), std::abs(dea[a])});
    }
  }
  return tagged(ResidualReport::check("bianchi", scale > 0 ? worst / scale : worst, 1.0, tol), cfg);
}

namespace {

struct KVariation {
  std::vector<double> dK, rot, extra;  // δK, [K,ξ], ½ Y⁻¹ duB(E, ξ)
};

KVariation k_variation_parts(const GaugeConfig& cfg, const Evaluation& ev, const JetField& xi) {
  const Theory& th = cfg.theory();
  const int m = th.m();
  const JetField dA = gauge_variation_jet(cfg, ev, xi);
  KVariation kv;
  kv.dK = linearize(cfg, ev, dA).dK;
  kv.rot.assign(ev.P * m, 0.0);
  kv.extra.assign(ev.P * m, 0.0);
  for (std::size_t p = 0; p < ev.P; ++p) {
    th.plain_bilinear(th.C_entries(), ev.K.data() + p * m, xi.val_at(p), 1.0, kv.rot.data() + p * m);
    zmap(th, ev.Yinv.data() + p * m * m, ev.E.data() + p * m, xi.val_at(p), kv.extra.data() + p * m);
    for (int c = 0; c < m; ++c) kv.extra[p * m + c] *= 0.5;
  }
  return kv;
}


struct Commutator {
  std::vector<double> comm, d3A, extra;
};

Commutator commutator_parts(const GaugeConfig& cfg, const Evaluation& ev, const JetField& xi1, const JetField& xi2) {
  const Theory& th = cfg.theory();
  const int n = th.n(), m = th.m();
  const JetField d1 = gauge_variation_jet(cfg, ev, xi1);
  const JetField d2 = gauge_variation_jet(cfg, ev, xi2);
  const auto dK1 = linearize(cfg, ev, d1).dK;
  const auto dK2 = linearize(cfg, ev, d2).dK;
  Commutator c;
  c.comm.assign(ev.P * m, 0.0);
  c.d3A.assign(ev.P * m, 0.0);
  c.extra.assign(ev.P * m, 0.0);
  std::vector<double> x3(n), z1(m), z2(m);
  for (std::size_t p = 0; p < ev.P; ++p) {
    const double* x1 = xi1.val_at(p);
    const double* x2 = xi2.val_at(p);
    double* o = c.comm.data() + p * m;
    th.plain_bilinear(th.C_entries(), d2.val_at(p), x1, 1.0, o);
    th.plain_bilinear(th.duB_entries(), dK2.data() + p * m, x1, 1.0, o);
    th.plain_bilinear(th.C_entries(), d1.val_at(p), x2, -1.0, o);
    th.plain_bilinear(th.duB_entries(), dK1.data() + p * m, x2, -1.0, o);
    // ξ3 = [ξ2, ξ1] and its gradient
    std::fill(x3.begin(), x3.end(), 0.0);
    lie_bilinear(th.C_entries(), x2, x1, 1.0, x3.data());
    double* d3 = c.d3A.data() + p * m;
    for (int mu = 0; mu < 3; ++mu) {
      std::vector<double> g1(n), g2(n), g3(n, 0.0);
      for (int a = 0; a < n; ++a) {
        g1[a] = xi1.d(p, a, mu);
        g2[a] = xi2.d(p, a, mu);
      }
      lie_bilinear(th.C_entries(), g2.data(), x1, 1.0, g3.data());
      lie_bilinear(th.C_entries(), x2, g1.data(), 1.0, g3.data());
      for (int a = 0; a < n; ++a) d3[a * 3 + mu] = g3[a];
    }
    th.plain_bilinear(th.C_entries(), cfg.A().val_at(p), x3.data(), 1.0, d3);
    th.plain_bilinear(th.duB_entries(), ev.K.data() + p * m, x3.data(), 1.0, d3);
    zmap(th, ev.Yinv.data() + p * m * m, ev.E.data() + p * m, x1, z1.data());
    zmap(th, ev.Yinv.data() + p * m * m, ev.E.data() + p * m, x2, z2.data());
    double* ex = c.extra.data() + p * m;
    th.plain_bilinear(th.duB_entries(), z2.data(), x1, 0.5, ex);
    th.plain_bilinear(th.duB_entries(), z1.data(), x2, -0.5, ex);
  }
  return c;
}

double sup(const JetField& f) {
  double m = 0;
  for (double x : f.values()) m = std::max(m, std::abs(x));
  return m;
}

double variation_floor(const GaugeConfig& cfg, const Evaluation& ev, const JetField& xi1, const JetField& xi2) {
  const double a1 = sup(gauge_variation_jet(cfg, ev, xi1)), a2 = sup(gauge_variation_jet(cfg, ev, xi2));
  const double c = cfg.theory().alg().C().max_abs() + cfg.theory().dub_row_norm();
  return c * (a1 * sup(xi2) + a2 * sup(xi1));
}

}  // namespace

ResidualReport k_variation_residual(const GaugeConfig& cfg, const JetField& xi, double tol) {
  check_xi(cfg, xi, 2);
  const Evaluation ev = evaluate(cfg, true);
  const KVariation kv = k_variation_parts(cfg, ev, xi);
  double worst = 0, scale = 0;
  for (std::size_t i = 0; i < kv.dK.size(); ++i) {
    worst = std::max(worst, std::abs(kv.dK[i] - kv.rot[i] - kv.extra[i]));
    scale = std::max({scale, std::abs(kv.dK[i]), std::abs(kv.rot[i]), std::abs(kv.extra[i])});
  }
  return tagged(ResidualReport::check("k-variation", scale > 0 ? worst / scale : worst, 1.0, tol), cfg);
}

ResidualReport commutator_residual(const GaugeConfig& cfg, const JetField& xi1, const JetField& xi2, double tol) {
  check_xi(cfg, xi1, 2);
  check_xi(cfg, xi2, 2);
  const Evaluation ev = evaluate(cfg, true);
  const Commutator c = commutator_parts(cfg, ev, xi1, xi2);
  // floor: natural size of each second variation, so ξ1 = ξ2 is not divided by roundoff
  double worst = 0;
  double scale = variation_floor(cfg, ev, xi1, xi2);
  for (std::size_t i = 0; i < c.comm.size(); ++i) {
    worst = std::max(worst, std::abs(c.comm[i] - c.d3A[i] - c.extra[i]));
    scale = std::max({scale, std::abs(c.comm[i]), std::abs(c.d3A[i]), std::abs(c.extra[i])});
  }
  return tagged(ResidualReport::check("commutator", scale > 0 ? worst / scale : worst, 1.0, tol), cfg);
}

ResidualReport k_rotation_onshell(const GaugeConfig& cfg, const JetField& xi, double factor) {
  check_xi(cfg, xi, 2);
  const Evaluation ev = evaluate(cfg, true);
  const KVariation kv = k_variation_parts(cfg, ev, xi);
  double worst = 0;
  for (std::size_t i = 0; i < kv.dK.size(); ++i) worst = std::max(worst, std::abs(kv.dK[i] - kv.rot[i]));
  // |½ Y⁻¹ duB(E, ξ)| <= ½ ‖Y⁻¹‖∞ ‖duB‖ ‖E‖∞ ‖ξ‖∞
  const double c = 0.5 * yinv_row_norm(ev) * cfg.theory().dub_row_norm() * sup(xi);
  const double bound = c * ev.max_abs_E();
  return tagged(ResidualReport::check("k-rotation-onshell", worst, bound + 1e-13, factor), cfg);
}

ResidualReport closure_onshell(const GaugeConfig& cfg, const JetField& xi1, const JetField& xi2, double factor) {
  check_xi(cfg, xi1, 2);
  check_xi(cfg, xi2, 2);
  const Evaluation ev = evaluate(cfg, true);
  const Commutator cm = commutator_parts(cfg, ev, xi1, xi2);
  double worst = 0;
  for (std::size_t i = 0; i < cm.comm.size(); ++i) worst = std::max(worst, std::abs(cm.comm[i] - cm.d3A[i]));
  const double d = cfg.theory().dub_row_norm();
  const double c = d * yinv_row_norm(ev) * d * sup(xi1) * sup(xi2);
  return tagged(ResidualReport::check("closure-onshell", worst, c * ev.max_abs_E() + 1e-13, factor), cfg);
}

ResidualReport noether_identity(const GaugeConfig& cfg, const JetField& xi, double tol) {
  const Evaluation ev = evaluate(cfg, true);
  const auto dA = gauge_variation_jet(cfg, ev, xi).values();
  const double val = pairing(cfg, ev.E, dA);
  const Theory& th = cfg.theory();
  const double scale = th.n() * th.alg().k().cwiseAbs().maxCoeff() * l2(cfg.lattice(), ev.E) * l2(cfg.lattice(), dA);
  return tagged(ResidualReport::check("noether-identity", std::abs(val), scale, tol), cfg);
}

std::vector<ResidualReport> covariant_general_residuals(const GaugeConfig& cfg, double tol) {
  const Theory& th = cfg.theory();
  const LieAlgebra& alg = th.alg();
  const AuxBracket& aux = th.aux();
  if (aux.provenance() != Provenance::Pair && aux.provenance() != Provenance::PairSum)
    throw Error(ErrorCode::WrongAlgebra, "covariant pair form needs a pair-built aux bracket");
  const int n = th.n(), m = th.m();
  const auto& cr = th.metric().cross;
  const auto& ei = th.metric().eta_inv;
  auto V = [&](const Vec& x) { return vmap_apply(alg, aux, x); };
  auto duB = [&](const Vec& x, const Vec& y) {
    Vec o = Vec::Zero(n);
    lie_bilinear(th.duB_entries(), x.data(), y.data(), 1.0, o.data());
    return o;
  };
  const Evaluation ev = evaluate(cfg, true);
  double r1 = 0, s1 = 0, r2 = 0, s2 = 0, r3 = 0, s3 = 0, r4 = 0, s4 = 0;
  const auto lhs = bianchi_lhs(cfg, ev);
  for (std::size_t p = 0; p < ev.P; ++p) {
    const double* A = cfg.A().val_at(p);
    const double* K = ev.K.data() + p * m;
    std::vector<Vec> Av(3, Vec(n)), Kv(3, Vec(n));
    std::vector<std::vector<Vec>> dKv(3, std::vector<Vec>(3, Vec(n)));  // dKv[σ][ν] = ∂_σ K_ν
    for (int s = 0; s < 3; ++s)
      for (int a = 0; a < n; ++a) {
        Av[s][a] = A[a * 3 + s];
        Kv[s][a] = K[a * 3 + s];
        for (int nu = 0; nu < 3; ++nu) dKv[s][nu][a] = ev.dK[(p * m + a * 3 + nu) * 3 + s];
      }
    // (i) and (iv) on field values
    for (int s = 0; s < 3; ++s) {
      const Vec& f = Kv[s];
      const Vec& g = Av[(s + 1) % 3];
      const Vec want = bracket(alg, g, V(f)) + V(bracket(alg, f, g));
      r1 = std::max(r1, (duB(f, g) - want).cwiseAbs().maxCoeff());
      s1 = std::max({s1, duB(f, g).cwiseAbs().maxCoeff(), want.cwiseAbs().maxCoeff()});
      const double a1 = alg.inner(f, V(g)), a2 = alg.inner(V(f), g);
      r4 = std::max(r4, std::abs(a1 + a2));
      s4 = std::max({s4, std::abs(a1), std::abs(a2)});
    }
    // (ii) E = 2ε(DK − [V(K),K]) with D_σK_ν = ∂_σK_ν + [A_σ,K_ν]
    for (int mu = 0; mu < 3; ++mu) {
      Vec Ec = Vec::Zero(n);
      for (int s = 0; s < 3; ++s)
        for (int nu = 0; nu < 3; ++nu) {
          if (cr[mu][s][nu] == 0) continue;
          Ec += 2 * cr[mu][s][nu] * (dKv[s][nu] + bracket(alg, Av[s], Kv[nu]) - bracket(alg, V(Kv[s]), Kv[nu]));
        }
      for (int a = 0; a < n; ++a) {
        r2 = std::max(r2, std::abs(Ec[a] - ev.E[p * m + a * 3 + mu]));
        s2 = std::max({s2, std::abs(Ec[a]), std::abs(ev.E[p * m + a * 3 + mu])});
      }
    }
    // (iii) η^{μν}(D_μK_ν + V([K_μ,K_ν]) − [V(K_μ),K_ν]) against the component form
    Vec cov = Vec::Zero(n);
    for (int mu = 0; mu < 3; ++mu)
      cov += ei(mu, mu) * (dKv[mu][mu] + bracket(alg, Av[mu], Kv[mu]) + V(bracket(alg, Kv[mu], Kv[mu])) -
                           bracket(alg, V(Kv[mu]), Kv[mu]));
    for (int a = 0; a < n; ++a) {
      r3 = std::max(r3, std::abs(cov[a] - lhs[p * n + a]));
      s3 = std::max({s3, std::abs(cov[a]), std::abs(lhs[p * n + a])});
    }
  }
  auto rel = [](double r, double s) { return s > 0 ? r / s : r; };
  return {tagged(ResidualReport::check("covariant-v-vs-duB", rel(r1, s1), 1.0, tol), cfg),
          tagged(ResidualReport::check("covariant-field-equation", rel(r2, s2), 1.0, tol), cfg),
          tagged(ResidualReport::check("covariant-differential-identity", rel(r3, s3), 1.0, tol), cfg),
          tagged(ResidualReport::check("covariant-v-antisymmetry", rel(r4, s4), 1.0, tol), cfg)};
}

}  // namespace g3
