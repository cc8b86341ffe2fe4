#include "g3/currents.hpp"

#include <cmath>

#include "g3/error.hpp"
#include "g3/identities.hpp"

namespace g3 {

namespace {

double sup(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

ResidualReport tagged(ResidualReport r, const GaugeConfig& cfg) {
  r.algebra = cfg.theory().alg().label();
  r.N = cfg.lattice().N();
  r.deriv_mode = to_string(cfg.lattice().deriv_mode());
  return r;
}

// out^a_μ = ε_μ^{σν} ∂_σ f^a_ν from three derivative grids
std::vector<double> curl(const Metric3& g, const std::array<std::vector<double>, 3>& d, int n) {
  const std::size_t P = d[0].size() / (3 * n);
  std::vector<double> out(d[0].size(), 0.0);
  for (std::size_t p = 0; p < P; ++p)
    for (int a = 0; a < n; ++a)
      for (int mu = 0; mu < 3; ++mu) {
        double s = 0;
        for (int sg = 0; sg < 3; ++sg)
          for (int nu = 0; nu < 3; ++nu)
            if (g.cross[mu][sg][nu] != 0) s += g.cross[mu][sg][nu] * d[sg][(p * n + a) * 3 + nu];
        out[(p * n + a) * 3 + mu] = s;
      }
  return out;
}

std::array<std::vector<double>, 3> grads(const GridDerivative& D, const std::vector<double>& f, int comps) {
  return {D.derivative(f, comps, 0), D.derivative(f, comps, 1), D.derivative(f, comps, 2)};
}

std::vector<double> divergence(const Metric3& g, const std::array<std::vector<double>, 3>& d, int n) {
  const std::size_t P = d[0].size() / (3 * n);
  std::vector<double> out(P * n, 0.0);
  for (std::size_t p = 0; p < P; ++p)
    for (int a = 0; a < n; ++a)
      for (int mu = 0; mu < 3; ++mu) out[p * n + a] += g.eta_inv(mu, mu) * d[mu][(p * n + a) * 3 + mu];
  return out;
}

}  // namespace

NoetherCurrent noether_current(const GaugeConfig& cfg) {
  const Theory& th = cfg.theory();
  const int n = th.n(), m = th.m();
  const Evaluation ev = evaluate(cfg, true);
  GridDerivative D(cfg.lattice());
  NoetherCurrent nc;
  nc.J = curl(th.metric(), grads(D, ev.K, m), n);
  const auto divJ = divergence(th.metric(), grads(D, nc.J, m), n);
  nc.div = tagged(ResidualReport::check("noether-div", sup(divJ), 1.0, 1e-13), cfg);
  std::vector<double> r(nc.J);
  for (std::size_t p = 0; p < ev.P; ++p) {
    th.eps_bilinear(th.C_entries(), cfg.A().val_at(p), ev.K.data() + p * m, 1.0, r.data() + p * m);
    th.eps_bilinear(th.B_entries(), ev.K.data() + p * m, ev.K.data() + p * m, 0.5, r.data() + p * m);
  }
  nc.onshell = tagged(ResidualReport::check("noether-onshell", sup(r), ev.max_abs_E() + 1e-9, 1.0), cfg);
  return nc;
}

ChargeWindow default_window(const Lattice3& lat, int axis) {
  const int N = lat.N();
  return ChargeWindow{axis, N / 2, N / 4, 3 * N / 4, N / 4, 3 * N / 4};
}

Charge charge_of(const GaugeConfig& cfg, const std::vector<double>& K, const std::vector<double>& dK,
                 const ChargeWindow& win) {
  const Lattice3& lat = cfg.lattice();
  const int n = cfg.theory().n(), m = 3 * n;
  const int t = win.axis, u = (t + 1) % 3, w = (t + 2) % 3;
  if (t < 0 || t > 2 || win.u1 <= win.u0 || win.w1 <= win.w0)
    throw Error(ErrorCode::ConfigError, "empty charge window");
  const double h = lat.h();
  auto node = [&](int i, int j) {
    std::array<int, 3> c{};
    c[t] = win.index;
    c[u] = i;
    c[w] = j;
    return lat.index(c[0], c[1], c[2]);
  };
  // trapezoid edge integrals of K along u and w
  auto eu = [&](int i, int j, int a) { return 0.5 * h * (K[node(i, j) * m + a * 3 + u] + K[node(i + 1, j) * m + a * 3 + u]); };
  auto ew = [&](int i, int j, int a) { return 0.5 * h * (K[node(i, j) * m + a * 3 + w] + K[node(i, j + 1) * m + a * 3 + w]); };

  Charge q;
  q.surface.assign(n, 0.0);
  q.loop.assign(n, 0.0);
  q.flux.assign(n, 0.0);
  double scale = 0;
  for (int a = 0; a < n; ++a) {
    std::vector<double> faces;
    for (int i = win.u0; i < win.u1; ++i)
      for (int j = win.w0; j < win.w1; ++j) faces.push_back(eu(i, j, a) + ew(i + 1, j, a) - eu(i, j + 1, a) - ew(i, j, a));
    q.surface[a] = neumaier_sum(faces);
    std::vector<double> edges;
    for (int i = win.u0; i < win.u1; ++i) {
      edges.push_back(eu(i, win.w0, a));
      edges.push_back(-eu(i, win.w1, a));
    }
    for (int j = win.w0; j < win.w1; ++j) {
      edges.push_back(ew(win.u1, j, a));
      edges.push_back(-ew(win.u0, j, a));
    }
    q.loop[a] = neumaier_sum(edges);
    for (double e : edges) scale += std::abs(e);
    if (!dK.empty()) {
      // node trapezoid rule for ∫ (∂_u K_w − ∂_w K_u)
      std::vector<double> f;
      for (int i = win.u0; i <= win.u1; ++i)
        for (int j = win.w0; j <= win.w1; ++j) {
          const double wt = ((i == win.u0 || i == win.u1) ? 0.5 : 1.0) * ((j == win.w0 || j == win.w1) ? 0.5 : 1.0);
          const std::size_t p = node(i, j);
          f.push_back(wt * h * h * (dK[(p * m + a * 3 + w) * 3 + u] - dK[(p * m + a * 3 + u) * 3 + w]));
        }
      q.flux[a] = neumaier_sum(f);
    }
  }
  double diff = 0;
  for (int a = 0; a < n; ++a) diff = std::max(diff, std::abs(q.surface[a] - q.loop[a]));
  q.stokes = tagged(ResidualReport::check("charge-stokes", diff, std::max(scale, 1e-300), 1e-10), cfg);
  return q;
}

Charge charge(const GaugeConfig& cfg, const ChargeWindow& win) {
  const Evaluation ev = evaluate(cfg, true);
  return charge_of(cfg, ev.K, ev.dK, win);
}

ResidualReport charge_covariance(const GaugeConfig& cfg, const ChargeWindow& win, const Vec& xi, double factor) {
  const Theory& th = cfg.theory();
  const LieAlgebra& alg = th.alg();
  check_dim(alg, xi);
  const Evaluation ev = evaluate(cfg, true);
  JetField xj(ev.P, th.n(), 2);
  for (std::size_t p = 0; p < ev.P; ++p)
    for (int a = 0; a < th.n(); ++a) xj.v(p, a) = xi[a];
  const JetField dA = gauge_variation_jet(cfg, ev, xj);
  const auto dK = linearize(cfg, ev, dA).dK;
  const Charge q = charge_of(cfg, ev.K, {}, win);
  const Charge dq = charge_of(cfg, dK, {}, win);
  const Vec want = bracket(alg, Eigen::Map<const Vec>(q.loop.data(), th.n()), xi);
  double r = 0;
  for (int a = 0; a < th.n(); ++a) r = std::max(r, std::abs(dq.loop[a] - want[a]));
  const double perimeter = 2 * cfg.lattice().h() * ((win.u1 - win.u0) + (win.w1 - win.w0));
  const double c = perimeter * 0.5 * yinv_row_norm(ev) * th.dub_row_norm() * xi.cwiseAbs().maxCoeff();
  return tagged(ResidualReport::check("charge-covariance", r, c * ev.max_abs_E() + 1e-12, factor), cfg);
}

StressTensor stress_tensor(const GaugeConfig& cfg, const JetField* xi, double factor) {
  const Theory& th = cfg.theory();
  const Lattice3& lat = cfg.lattice();
  const int n = th.n(), m = th.m();
  const Mat& k = th.alg().k();
  const auto& g = th.metric();
  const Evaluation ev = evaluate(cfg, true);
  const std::size_t P = ev.P;

  // kk(x, y)[μ][ν] = k_ab x^a_μ y^b_ν
  auto kk = [&](const double* x, const double* y, int mu, int nu) {
    double s = 0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (k(a, b) != 0) s += k(a, b) * x[a * 3 + mu] * y[b * 3 + nu];
    return s;
  };
  auto tmunu = [&](const double* K1, const double* K2, int mu, int nu) {
    // bilinear T(K1, K2), symmetrized in the pair
    double tr = 0;
    for (int s = 0; s < 3; ++s) tr += g.eta_inv(s, s) * kk(K1, K2, s, s);
    return 0.5 * (kk(K1, K2, mu, nu) + kk(K2, K1, mu, nu)) - 0.5 * g.eta(mu, nu) * tr;
  };

  StressTensor st;
  st.T.assign(P * 9, 0.0);
  double sym = 0, tr_err = 0, tr_scale = 0, Tmax = 0;
  std::vector<double> divT(P * 3, 0.0), rhs(P * 3, 0.0);
  std::vector<double> dKr(m);
  const double sgn = g.eta.determinant() < 0 ? -1.0 : 1.0;
  double term_scale = 0;  // largest Σ|terms| of the off-shell form, so cancellations are not divided out
  for (std::size_t p = 0; p < P; ++p) {
    const double* K = ev.K.data() + p * m;
    double trK = 0;
    for (int s = 0; s < 3; ++s) trK += g.eta_inv(s, s) * kk(K, K, s, s);
    double trT = 0;
    for (int mu = 0; mu < 3; ++mu)
      for (int nu = 0; nu < 3; ++nu) {
        const double t = kk(K, K, mu, nu) - 0.5 * g.eta(mu, nu) * trK;
        st.T[p * 9 + mu * 3 + nu] = t;
        Tmax = std::max(Tmax, std::abs(t));
      }
    for (int mu = 0; mu < 3; ++mu) {
      trT += g.eta_inv(mu, mu) * st.T[p * 9 + mu * 3 + mu];
      for (int nu = 0; nu < 3; ++nu) sym = std::max(sym, std::abs(st.T[p * 9 + mu * 3 + nu] - st.T[p * 9 + nu * 3 + mu]));
    }
    tr_err = std::max(tr_err, std::abs(trT + 0.5 * trK));
    tr_scale = std::max(tr_scale, std::abs(trK));
    // ∂^μ T_μν = η^{μμ} 2 T(∂_μK, K)_{μν}
    for (int mu = 0; mu < 3; ++mu) {
      for (int c = 0; c < m; ++c) dKr[c] = ev.dK[(p * m + c) * 3 + mu];
      for (int nu = 0; nu < 3; ++nu) divT[p * 3 + nu] += g.eta_inv(mu, mu) * 2 * tmunu(dKr.data(), K, mu, nu);
    }
    // off-shell form: k(½ duB(E^μ, A_μ), K_ν) + sgn(det η) k(K^μ, ½ ε_{μνρ} E^ρ)
    const double* A = cfg.A().val_at(p);
    const double* E = ev.E.data() + p * m;
    std::vector<double> Em(n), Am(n), w(n);
    for (int nu = 0; nu < 3; ++nu) {
      double s = 0, sabs = 0;
      for (int mu = 0; mu < 3; ++mu) {
        std::fill(w.begin(), w.end(), 0.0);
        for (int a = 0; a < n; ++a) {
          Em[a] = g.eta_inv(mu, mu) * E[a * 3 + mu];
          Am[a] = A[a * 3 + mu];
        }
        for (const TEntry& te : th.duB_entries()) w[te.l] += 0.5 * te.w * Em[te.i] * Am[te.j];
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            s += k(a, b) * w[a] * K[b * 3 + nu];
            sabs += std::abs(k(a, b) * w[a] * K[b * 3 + nu]);
          }
        for (int rho = 0; rho < 3; ++rho) {
          const double e = g.eps_low[mu][nu][rho];
          if (e == 0) continue;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
              const double t = 0.5 * sgn * e * g.eta_inv(mu, mu) * g.eta_inv(rho, rho) * k(a, b) * K[a * 3 + mu] * E[b * 3 + rho];
              s += t;
              sabs += std::abs(t);
            }
        }
      }
      rhs[p * 3 + nu] = s;
      term_scale = std::max(term_scale, sabs);
    }
  }
  const double Emax = ev.max_abs_E(), Kmax = sup(ev.K), Amax = sup(cfg.A().values());
  const double knorm = th.killing_norm(), dmax = th.dub_row_norm();
  const double cT = knorm * Kmax * (1.5 * dmax * Amax + 1);
  double id_err = 0, id_scale = 0;
  for (std::size_t i = 0; i < divT.size(); ++i) {
    id_err = std::max(id_err, std::abs(divT[i] - rhs[i]));
    id_scale = std::max({id_scale, std::abs(divT[i]), std::abs(rhs[i])});
  }
  id_scale = std::max(id_scale, term_scale);
  auto& R = st.reports;
  R.push_back(tagged(ResidualReport::check("stress-symmetry", sym, std::max(Tmax, 1e-300), 1e-15), cfg));
  R.push_back(tagged(ResidualReport::check("stress-trace", tr_err, std::max(tr_scale, 1e-300), 1e-13), cfg));
  R.push_back(tagged(ResidualReport::check("stress-divergence-identity", id_err, std::max(id_scale, 1e-300), 1e-10), cfg));
  R.push_back(tagged(ResidualReport::check("stress-conservation", sup(divT), cT * Emax + 1e-13, factor), cfg));

  if (xi != nullptr) {
    const JetField dA = gauge_variation_jet(cfg, ev, *xi);
    const auto dK = linearize(cfg, ev, dA).dK;
    double dT = 0;
    for (std::size_t p = 0; p < P; ++p)
      for (int mu = 0; mu < 3; ++mu)
        for (int nu = 0; nu < 3; ++nu)
          dT = std::max(dT, std::abs(2 * tmunu(dK.data() + p * m, ev.K.data() + p * m, mu, nu)));
    // rotation part cancels by invariance of k; the rest is (2 + 3)|k(r, K)| with r = ½ Y⁻¹ duB(E, ξ)
    const double r = 0.5 * yinv_row_norm(ev) * dmax * sup(xi->values());
    R.push_back(tagged(ResidualReport::check("stress-gauge-variation", dT, 5 * knorm * Kmax * r * Emax + 1e-13, factor), cfg));
  }

  // flux of T^0_ν through the planes x_0 = const
  const int N = lat.N();
  std::vector<std::array<double, 3>> flux(N);
  for (int i = 0; i < N; ++i)
    for (int nu = 0; nu < 3; ++nu) {
      std::vector<double> f;
      f.reserve(static_cast<std::size_t>(N) * N);
      for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l) f.push_back(lat.h() * lat.h() * g.eta_inv(0, 0) * st.T[lat.index(i, j, l) * 9 + nu]);
      flux[i][nu] = neumaier_sum(f);
    }
  double fvar = 0;
  for (int i = 1; i < N; ++i)
    for (int nu = 0; nu < 3; ++nu) fvar = std::max(fvar, std::abs(flux[i][nu] - flux[0][nu]));
  const double L = N * lat.h();
  R.push_back(tagged(ResidualReport::check("stress-flux", fvar, L * L * L * cT * Emax + 1e-10 * L * L * Tmax + 1e-15, factor), cfg));
  return st;
}

std::vector<ResidualReport> rigid_symmetry_abelian(const Lattice3& lat, const LieAlgebra& alg, const AuxBracket& aux,
                                                   const JetField& A, const Vec& xi1, const Vec& xi2) {
  const auto th = make_theory(alg, aux, lat.metric().signature);
  const int n = th->n();
  const int m = th->m();
  if (A.comps() != m || A.points() != lat.points() || A.order() < 1)
    throw Error(ErrorCode::DimensionMismatch, "abelian field does not match the lattice");
  check_dim(alg, xi1);
  check_dim(alg, xi2);
  const auto& g = th->metric();
  const std::size_t P = lat.points();
  GridDerivative D(lat);
  const Mat kq = alg.k_inv().has_value() ? alg.k() : Mat::Identity(n, n);

  auto F_of = [&](const std::vector<double>& X) { return curl(g, grads(D, X, m), n); };
  // δ_ξ X = C(X, ξ) + duB(F(X), ξ), with F the linear curl
  auto delta = [&](const std::vector<double>& X, const Vec& xi) {
    const auto F = F_of(X);
    std::vector<double> out(P * m, 0.0);
    for (std::size_t p = 0; p < P; ++p) {
      th->plain_bilinear(th->C_entries(), X.data() + p * m, xi.data(), 1.0, out.data() + p * m);
      th->plain_bilinear(th->duB_entries(), F.data() + p * m, xi.data(), 1.0, out.data() + p * m);
    }
    return out;
  };
  auto act = [&](const std::vector<double>& X) {
    const auto F = F_of(X);
    std::vector<double> dens(P, 0.0);
    for (std::size_t p = 0; p < P; ++p)
      for (int mu = 0; mu < 3; ++mu)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) dens[p] += g.eta_inv(mu, mu) * kq(a, b) * F[p * m + a * 3 + mu] * F[p * m + b * 3 + mu];
    return integrate(lat, dens);
  };

  const std::vector<double>& Av = A.values();
  // first-order action variation 2∫ η k F(A)·F(δA)
  const auto FA = F_of(Av);
  const auto d1 = delta(Av, xi1), d2 = delta(Av, xi2);
  const auto Fd = F_of(d1);
  std::vector<double> dens(P, 0.0);
  for (std::size_t p = 0; p < P; ++p)
    for (int mu = 0; mu < 3; ++mu)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) dens[p] += 2 * g.eta_inv(mu, mu) * kq(a, b) * FA[p * m + a * 3 + mu] * Fd[p * m + b * 3 + mu];
  const double dS = integrate(lat, dens);
  double a2 = 0;
  for (double x : Av) a2 += x * x;
  const double scale = 1 + act(Av) + a2 * lat.cell_volume();

  // δ2(δ1 A) − δ1(δ2 A) = δ3 A with ξ3 = [ξ2, ξ1]
  const Vec xi3 = bracket(alg, xi2, xi1);
  const auto l = delta(d2, xi1), r = delta(d1, xi2), d3 = delta(Av, xi3);
  double err = 0, mag = 0;
  for (std::size_t i = 0; i < l.size(); ++i) {
    err = std::max(err, std::abs(l[i] - r[i] - d3[i]));
    mag = std::max({mag, std::abs(l[i]), std::abs(r[i]), std::abs(d3[i])});
  }
  auto tag = [&](ResidualReport rep) {
    rep.algebra = alg.label();
    rep.N = lat.N();
    rep.deriv_mode = to_string(lat.deriv_mode());
    return rep;
  };
  return {tag(ResidualReport::check("rigid-action-variation", std::abs(dS), scale, 1e-12)),
          tag(ResidualReport::check("rigid-closure", mag > 0 ? err / mag : err, 1.0, 1e-10))};
}

}  // namespace g3
