#include "g3/gauge_config.hpp"

#include <cmath>
#include <limits>

#include "g3/error.hpp"
#include "g3/parallel.hpp"

namespace g3 {

namespace {

std::vector<TEntry> entries(const Tensor3& T, bool transpose_du) {
  std::vector<TEntry> out;
  const int n = T.dim();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const double w = T(x, y, z);
        if (w == 0) continue;
        // duB stored as (d, b, e); as a bilinear map it sends (p^b, q^e) to slot d
        if (transpose_du) out.push_back({y, z, x, w});
        else out.push_back({x, y, z, w});
      }
  return out;
}

}  // namespace

Theory::Theory(LieAlgebra alg, AuxBracket aux, Metric3 metric)
    : alg_(std::move(alg)), aux_(std::move(aux)), metric_(metric), n_(alg_.dim()) {
  if (aux_.dim() != n_) throw Error(ErrorCode::DimensionMismatch, "aux bracket does not match the algebra");
  if (!alg_.semisimple() && !aux_.is_zero())
    throw Error(ErrorCode::WrongAlgebra, "a nonzero aux bracket needs an invertible Killing metric");
  C_ = entries(alg_.C(), false);
  B_ = entries(aux_.up(), false);
  duB_ = entries(aux_.du(), true);
}

std::shared_ptr<const Theory> Theory::with_aux(AuxBracket aux) const {
  return std::make_shared<const Theory>(alg_, std::move(aux), metric_);
}

std::shared_ptr<const Theory> make_theory(const LieAlgebra& alg, const AuxBracket& aux, Signature sig) {
  return std::make_shared<const Theory>(alg, aux, Metric3::make(sig));
}

void Theory::eps_bilinear(const std::vector<TEntry>& T, const double* P, const double* Q, double w,
                          double* out) const {
  const auto& cr = metric_.cross;
  for (const TEntry& t : T) {
    const double* p = P + 3 * t.i;
    const double* q = Q + 3 * t.j;
    double* o = out + 3 * t.l;
    const double tw = t.w * w;
    for (int mu = 0; mu < 3; ++mu) {
      const int s = (mu + 1) % 3, r = (mu + 2) % 3;
      // only (σ,τ) = (s,r), (r,s) survive for diagonal metrics
      o[mu] += tw * (cr[mu][s][r] * p[s] * q[r] + cr[mu][r][s] * p[r] * q[s]);
    }
  }
}

void Theory::plain_bilinear(const std::vector<TEntry>& T, const double* P, const double* xi, double w,
                            double* out) const {
  for (const TEntry& t : T) {
    const double c = t.w * w * xi[t.j];
    if (c == 0) continue;
    for (int mu = 0; mu < 3; ++mu) out[3 * t.l + mu] += c * P[3 * t.i + mu];
  }
}

void Theory::fdual(const double* A, const double* dA, double* F) const {
  const auto& cr = metric_.cross;
  for (int a = 0; a < n_; ++a)
    for (int mu = 0; mu < 3; ++mu) {
      double s = 0;
      for (int sg = 0; sg < 3; ++sg)
        for (int t = 0; t < 3; ++t)
          if (cr[mu][sg][t] != 0) s += cr[mu][sg][t] * dA[(a * 3 + t) * 3 + sg];
      F[a * 3 + mu] = s;
    }
  eps_bilinear(C_, A, A, 0.5, F);
}

void Theory::dfdual(const double* A, const double* dA, const double* ddA, double* dF) const {
  const int m = this->m();
  const auto& cr = metric_.cross;
  std::vector<double> dAr(m), tmp(m);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < m; ++c) dAr[c] = dA[c * 3 + r];
    for (int a = 0; a < n_; ++a)
      for (int mu = 0; mu < 3; ++mu) {
        double s = 0;
        for (int sg = 0; sg < 3; ++sg)
          for (int t = 0; t < 3; ++t)
            if (cr[mu][sg][t] != 0) s += cr[mu][sg][t] * ddA[(a * 3 + t) * 6 + sym_index(sg, r)];
        tmp[a * 3 + mu] = s;
      }
    eps_bilinear(C_, dAr.data(), A, 0.5, tmp.data());
    eps_bilinear(C_, A, dAr.data(), 0.5, tmp.data());
    for (int c = 0; c < m; ++c) dF[c * 3 + r] = tmp[c];
  }
}

void Theory::xmap(const double* W, Mat& X) const {
  const int m = this->m();
  X.setZero(m, m);
  const auto& cr = metric_.cross;
  // duB entries (i=a, j=m, l=d): X[(d,μ),(a,σ)] += w ε_μ^{στ} W^m_τ
  for (const TEntry& t : duB_)
    for (int mu = 0; mu < 3; ++mu)
      for (int sg = 0; sg < 3; ++sg) {
        double s = 0;
        for (int tau = 0; tau < 3; ++tau) s += cr[mu][sg][tau] * W[3 * t.j + tau];
        X(3 * t.l + mu, 3 * t.i + sg) += t.w * s;
      }
}

void Theory::xmap_apply(const double* W, const double* K, double* out) const { eps_bilinear(duB_, K, W, 1.0, out); }

void Theory::field_eq(const double* A, const double* K, const double* dK, double* E) const {
  const auto& cr = metric_.cross;
  for (int a = 0; a < n_; ++a)
    for (int mu = 0; mu < 3; ++mu) {
      double s = 0;
      for (int sg = 0; sg < 3; ++sg)
        for (int nu = 0; nu < 3; ++nu)
          if (cr[mu][sg][nu] != 0) s += cr[mu][sg][nu] * dK[(a * 3 + nu) * 3 + sg];
      E[a * 3 + mu] = 2 * s;
    }
  eps_bilinear(C_, A, K, 2.0, E);
  eps_bilinear(B_, K, K, 1.0, E);
}

double Theory::lagrangian(const double* K, const double* F) const {
  const Mat& k = alg_.k();
  double s = 0;
  for (int mu = 0; mu < 3; ++mu) {
    double t = 0;
    for (int a = 0; a < n_; ++a)
      for (int d = 0; d < n_; ++d)
        if (k(a, d) != 0) t += k(a, d) * K[a * 3 + mu] * F[d * 3 + mu];
    s += metric_.eta_inv(mu, mu) * t;
  }
  return s;
}

double Theory::guard_amplitude() const {
  const int m = this->m();
  Mat X;
  std::vector<double> e(m, 0.0);
  if (m <= 12) {
    // ‖X(W)‖₂ is convex in W, so its maximum over the box |W_c| <= 1 sits at a vertex; W and −W agree
    double worst = 0;
    for (unsigned long bits = 0; bits < (1ul << (m - 1)); ++bits) {
      for (int c = 0; c < m; ++c) e[c] = (c < m - 1 && ((bits >> c) & 1)) ? -1.0 : 1.0;
      xmap(e.data(), X);
      if (X.cwiseAbs().maxCoeff() == 0) continue;
      worst = std::max(worst, Eigen::JacobiSVD<Mat>(X).singularValues()[0]);
    }
    return worst == 0 ? std::numeric_limits<double>::infinity() : 0.5 / worst;
  }
  // triangle inequality over the unit vectors
  double beta = 0;
  for (int c = 0; c < m; ++c) {
    e[c] = 1;
    xmap(e.data(), X);
    e[c] = 0;
    if (X.cwiseAbs().maxCoeff() == 0) continue;
    beta += Eigen::JacobiSVD<Mat>(X).singularValues()[0];
  }
  return beta == 0 ? std::numeric_limits<double>::infinity() : 0.5 / beta;
}

double Theory::dub_row_norm() const {
  std::vector<double> row(n_, 0.0);
  for (const TEntry& t : duB_) row[t.l] += std::abs(t.w);
  double m = 0;
  for (double r : row) m = std::max(m, r);
  return m;
}

double Theory::killing_norm() const {
  return n_ * alg_.k().cwiseAbs().rowwise().sum().maxCoeff();
}

GaugeConfig::GaugeConfig(std::shared_ptr<const Theory> theory, Lattice3 lattice, JetField A)
    : theory_(std::move(theory)), lattice_(std::move(lattice)), A_(std::move(A)) {
  if (A_.comps() != theory_->m() || A_.points() != lattice_.points())
    throw Error(ErrorCode::DimensionMismatch, "gauge field does not match theory and lattice");
  if (A_.order() < 1) throw Error(ErrorCode::DimensionMismatch, "gauge field needs first derivatives");
  for (double x : A_.values())
    if (!std::isfinite(x)) throw Error(ErrorCode::ConfigError, "non-finite gauge field");
  const YOperator y = assemble_y(*this);
  min_det_ = y.min_abs_det;
  if (!(min_det_ >= kDetGuard))
    throw Error(ErrorCode::SingularY, "min|det Y| = " + std::to_string(min_det_));
}

GaugeConfig GaugeConfig::from_modes(std::shared_ptr<const Theory> theory, const Lattice3& lattice, const ModeField& A) {
  if (lattice.deriv_mode() == DerivMode::Spectral) return GaugeConfig(std::move(theory), lattice, A.sample(lattice, 2));
  return from_grid(std::move(theory), lattice, A.sample(lattice, 0).values());
}

GaugeConfig GaugeConfig::from_grid(std::shared_ptr<const Theory> theory, const Lattice3& lattice, std::vector<double> A) {
  GridDerivative D(lattice);
  const int m = theory->m();
  JetField j = D.jets(A, m, 2);
  return GaugeConfig(std::move(theory), lattice, std::move(j));
}

GaugeConfig GaugeConfig::with_theory(std::shared_ptr<const Theory> theory) const {
  return GaugeConfig(std::move(theory), lattice_, A_);
}

Curvature curvature(const GaugeConfig& cfg) {
  const Theory& th = cfg.theory();
  const std::size_t P = cfg.lattice().points();
  const int n = th.n(), m = th.m();
  Curvature out;
  out.F2.assign(P * n * 9, 0.0);
  out.Fdual.assign(P * m, 0.0);
  parallel_for(P, [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      const double* A = cfg.A().val_at(p);
      const double* dA = cfg.A().d1_at(p);
      th.fdual(A, dA, out.Fdual.data() + p * m);
      double* F2 = out.F2.data() + p * n * 9;
      for (int a = 0; a < n; ++a)
        for (int mu = 0; mu < 3; ++mu)
          for (int nu = 0; nu < 3; ++nu) {
            double s = 0.5 * (dA[(a * 3 + nu) * 3 + mu] - dA[(a * 3 + mu) * 3 + nu]);
            for (const TEntry& t : th.C_entries())
              if (t.l == a) s += 0.5 * t.w * A[t.i * 3 + mu] * A[t.j * 3 + nu];
            F2[(a * 3 + mu) * 3 + nu] = s;
          }
    }
  });
  return out;
}

YOperator assemble_y(const GaugeConfig& cfg) {
  const Theory& th = cfg.theory();
  const std::size_t P = cfg.lattice().points();
  const int m = th.m();
  YOperator out;
  out.m = m;
  out.Y.assign(P * m * m, 0.0);
  out.det.assign(P, 1.0);
  parallel_for(P, [&](std::size_t b, std::size_t e) {
    Mat X;
    for (std::size_t p = b; p < e; ++p) {
      th.xmap(cfg.A().val_at(p), X);
      Mat Y = Mat::Identity(m, m) - X;
      Eigen::Map<Mat>(out.Y.data() + p * m * m, m, m) = Y.transpose();  // row-major storage
      out.det[p] = Y.determinant();
    }
  });
  double md = std::numeric_limits<double>::infinity();
  for (double d : out.det) md = std::min(md, std::abs(d));
  out.min_abs_det = md;
  return out;
}

double Evaluation::max_abs_E() const {
  double m = 0;
  for (double x : E) m = std::max(m, std::abs(x));
  return m;
}

Evaluation evaluate(const GaugeConfig& cfg, bool full) {
  const Theory& th = cfg.theory();
  const Lattice3& lat = cfg.lattice();
  const std::size_t P = lat.points();
  const int m = th.m();
  const bool spectral = lat.deriv_mode() == DerivMode::Spectral;
  if (full && spectral && cfg.A().order() < 2)
    throw Error(ErrorCode::DimensionMismatch, "field equations need second derivatives of A");
  Evaluation ev;
  ev.P = P;
  ev.m = m;
  ev.full = full;
  ev.F.assign(P * m, 0.0);
  ev.K.assign(P * m, 0.0);
  ev.L.assign(P, 0.0);
  ev.det.assign(P, 0.0);
  ev.Yinv.assign(P * m * m, 0.0);
  if (full) {
    ev.dK.assign(P * m * 3, 0.0);
    ev.E.assign(P * m, 0.0);
  }
  parallel_for(P, [&](std::size_t b, std::size_t e) {
    Mat X;
    std::vector<double> dF(m * 3), rhs(m);
    for (std::size_t p = b; p < e; ++p) {
      const double* A = cfg.A().val_at(p);
      const double* dA = cfg.A().d1_at(p);
      th.xmap(A, X);
      const Mat Y = Mat::Identity(m, m) - X;
      Eigen::PartialPivLU<Mat> lu(Y);
      ev.det[p] = lu.determinant();
      const Mat Yi = lu.inverse();
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(ev.Yinv.data() + p * m * m, m, m) = Yi;
      double* F = ev.F.data() + p * m;
      double* K = ev.K.data() + p * m;
      th.fdual(A, dA, F);
      Eigen::Map<Vec>(K, m) = lu.solve(Eigen::Map<const Vec>(F, m));
      ev.L[p] = th.lagrangian(K, F);
      if (full && spectral) {
        th.dfdual(A, dA, cfg.A().d2_at(p), dF.data());
        double* dK = ev.dK.data() + p * m * 3;
        for (int r = 0; r < 3; ++r) {
          std::vector<double> dAr(m);
          for (int c = 0; c < m; ++c) {
            rhs[c] = dF[c * 3 + r];
            dAr[c] = dA[c * 3 + r];
          }
          th.xmap_apply(dAr.data(), K, rhs.data());
          const Vec sol = lu.solve(Eigen::Map<const Vec>(rhs.data(), m));
          for (int c = 0; c < m; ++c) dK[c * 3 + r] = sol[c];
        }
        th.field_eq(A, K, dK, ev.E.data() + p * m);
      }
    }
  });
  double md = std::numeric_limits<double>::infinity();
  for (double d : ev.det) md = std::min(md, std::abs(d));
  ev.min_abs_det = md;
  if (!(md >= kDetGuard)) throw Error(ErrorCode::SingularY, "min|det Y| = " + std::to_string(md));
  if (full && !spectral) {
    GridDerivative D(lat);
    for (int r = 0; r < 3; ++r) {
      const auto d = D.derivative(ev.K, m, r);
      for (std::size_t p = 0; p < P; ++p)
        for (int c = 0; c < m; ++c) ev.dK[(p * m + c) * 3 + r] = d[p * m + c];
    }
    parallel_for(P, [&](std::size_t b, std::size_t e) {
      for (std::size_t p = b; p < e; ++p)
        th.field_eq(cfg.A().val_at(p), ev.K.data() + p * m, ev.dK.data() + p * m * 3, ev.E.data() + p * m);
    });
  }
  return ev;
}

namespace {

// K − ε(...) − F with the covariant form of the aux bracket; returns max|residual| / scale.
double k_relation(const GaugeConfig& cfg, const Evaluation& ev) {
  const Theory& th = cfg.theory();
  const LieAlgebra& alg = th.alg();
  const AuxBracket& aux = th.aux();
  const int n = th.n(), m = th.m();
  const auto& cr = th.metric().cross;
  const Provenance prov = aux.provenance();
  double worst = 0, scale = 0;
  for (std::size_t p = 0; p < ev.P; ++p) {
    const double* A = cfg.A().val_at(p);
    const double* K = ev.K.data() + p * m;
    const double* F = ev.F.data() + p * m;
    std::vector<Vec> Kv(3, Vec(n)), Av(3, Vec(n));
    for (int s = 0; s < 3; ++s)
      for (int a = 0; a < n; ++a) {
        Kv[s][a] = K[a * 3 + s];
        Av[s][a] = A[a * 3 + s];
      }
    for (int mu = 0; mu < 3; ++mu) {
      Vec corr = Vec::Zero(n);
      for (int s = 0; s < 3; ++s)
        for (int t = 0; t < 3; ++t) {
          if (cr[mu][s][t] == 0) continue;
          Vec term;
          if (prov == Provenance::Su2V) {
            term = bracket(alg, Kv[s], bracket(alg, Av[t], aux.sources()[0]));
          } else if (prov == Provenance::Pair || prov == Provenance::PairSum) {
            term = vmap_apply(alg, aux, bracket(alg, Kv[s], Av[t])) - bracket(alg, vmap_apply(alg, aux, Kv[s]), Av[t]);
          } else {
            // generic: X(A)K written out
            term = Vec::Zero(n);
            for (const TEntry& e : th.duB_entries()) term[e.l] += e.w * Kv[s][e.i] * Av[t][e.j];
          }
          corr += cr[mu][s][t] * term;
        }
      for (int a = 0; a < n; ++a) {
        worst = std::max(worst, std::abs(K[a * 3 + mu] - corr[a] - F[a * 3 + mu]));
        scale = std::max({scale, std::abs(K[a * 3 + mu]), std::abs(F[a * 3 + mu]), std::abs(corr[a])});
      }
    }
  }
  return scale > 0 ? worst / scale : worst;
}

}  // namespace

KStrength compute_k(const GaugeConfig& cfg) {
  const Evaluation ev = evaluate(cfg, false);
  return {ev.K, k_relation(cfg, ev)};
}

Lagrangian lagrangian(const GaugeConfig& cfg) {
  const Evaluation ev = evaluate(cfg, false);
  return {ev.L, integrate(cfg.lattice(), ev.L)};
}

double action(const GaugeConfig& cfg) { return lagrangian(cfg).action; }

std::vector<double> field_equations(const GaugeConfig& cfg) { return evaluate(cfg, true).E; }

void linearize_point(const Theory& th, const PointView& pv, const double* dA0, const double* dA1, const double* dA2,
                     double* dF, double* dK, double* ddK, double* dE) {
  const int m = th.m();
  const auto& cr = th.metric().cross;
  const auto& C = th.C_entries();
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Yi(pv.Yinv, m, m);
  // δF
  for (int c = 0; c < m; ++c) dF[c] = 0;
  for (int a = 0; a < th.n(); ++a)
    for (int mu = 0; mu < 3; ++mu) {
      double s = 0;
      for (int sg = 0; sg < 3; ++sg)
        for (int t = 0; t < 3; ++t)
          if (cr[mu][sg][t] != 0) s += cr[mu][sg][t] * dA1[(a * 3 + t) * 3 + sg];
      dF[a * 3 + mu] = s;
    }
  th.eps_bilinear(C, dA0, pv.A, 0.5, dF);
  th.eps_bilinear(C, pv.A, dA0, 0.5, dF);
  // δK = Y⁻¹(δF + X(δA)K)
  std::vector<double> rhs(dF, dF + m);
  th.xmap_apply(dA0, pv.K, rhs.data());
  Eigen::Map<Vec>(dK, m) = Yi * Eigen::Map<const Vec>(rhs.data(), m);
  if (!dA2) return;

  std::vector<double> dAr(m), ddAr(m), dKr(m), dKlin(m * 3);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < m; ++c) {
      dAr[c] = pv.dA[c * 3 + r];
      ddAr[c] = dA1[c * 3 + r];
      dKr[c] = pv.dK[c * 3 + r];
    }
    for (int a = 0; a < th.n(); ++a)
      for (int mu = 0; mu < 3; ++mu) {
        double s = 0;
        for (int sg = 0; sg < 3; ++sg)
          for (int t = 0; t < 3; ++t)
            if (cr[mu][sg][t] != 0) s += cr[mu][sg][t] * dA2[(a * 3 + t) * 6 + sym_index(sg, r)];
        rhs[a * 3 + mu] = s;
      }
    th.eps_bilinear(C, ddAr.data(), pv.A, 0.5, rhs.data());
    th.eps_bilinear(C, dAr.data(), dA0, 0.5, rhs.data());
    th.eps_bilinear(C, dA0, dAr.data(), 0.5, rhs.data());
    th.eps_bilinear(C, pv.A, ddAr.data(), 0.5, rhs.data());
    th.xmap_apply(ddAr.data(), pv.K, rhs.data());
    th.xmap_apply(dAr.data(), dK, rhs.data());
    th.xmap_apply(dA0, dKr.data(), rhs.data());
    const Vec sol = Yi * Eigen::Map<const Vec>(rhs.data(), m);
    for (int c = 0; c < m; ++c) dKlin[c * 3 + r] = sol[c];
  }
  if (ddK) std::copy(dKlin.begin(), dKlin.end(), ddK);
  if (!dE) return;
  // δE = 2ε δ∂K + 2Cε(δA K + A δK) + Bε(δK K + K δK)
  for (int a = 0; a < th.n(); ++a)
    for (int mu = 0; mu < 3; ++mu) {
      double s = 0;
      for (int sg = 0; sg < 3; ++sg)
        for (int nu = 0; nu < 3; ++nu)
          if (cr[mu][sg][nu] != 0) s += cr[mu][sg][nu] * dKlin[(a * 3 + nu) * 3 + sg];
      dE[a * 3 + mu] = 2 * s;
    }
  th.eps_bilinear(C, dA0, pv.K, 2.0, dE);
  th.eps_bilinear(C, pv.A, dK, 2.0, dE);
  th.eps_bilinear(th.B_entries(), dK, pv.K, 1.0, dE);
  th.eps_bilinear(th.B_entries(), pv.K, dK, 1.0, dE);
}

Linearization linearize(const GaugeConfig& cfg, const Evaluation& ev, const JetField& dA) {
  const Theory& th = cfg.theory();
  const std::size_t P = ev.P;
  const int m = ev.m;
  if (dA.comps() != m || dA.points() != P || dA.order() < 1)
    throw Error(ErrorCode::DimensionMismatch, "variation does not match the configuration");
  const bool spectral = cfg.lattice().deriv_mode() == DerivMode::Spectral;
  const bool want_E = dA.order() >= 2 && ev.full;
  Linearization out;
  out.dF.assign(P * m, 0.0);
  out.dK.assign(P * m, 0.0);
  if (want_E) out.dE.assign(P * m, 0.0);
  parallel_for(P, [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      const PointView pv{cfg.A().val_at(p), cfg.A().d1_at(p), ev.K.data() + p * m,
                         ev.full ? ev.dK.data() + p * m * 3 : nullptr, ev.Yinv.data() + p * m * m};
      const bool chain = want_E && spectral;
      linearize_point(th, pv, dA.val_at(p), dA.d1_at(p), chain ? dA.d2_at(p) : nullptr, out.dF.data() + p * m,
                      out.dK.data() + p * m, nullptr, chain ? out.dE.data() + p * m : nullptr);
    }
  });
  if (want_E && !spectral) {
    GridDerivative D(cfg.lattice());
    std::vector<double> ddK(P * m * 3);
    for (int r = 0; r < 3; ++r) {
      const auto d = D.derivative(out.dK, m, r);
      for (std::size_t p = 0; p < P; ++p)
        for (int c = 0; c < m; ++c) ddK[(p * m + c) * 3 + r] = d[p * m + c];
    }
    for (std::size_t p = 0; p < P; ++p) {
      double* dE = out.dE.data() + p * m;
      th.field_eq(dA.val_at(p), ev.K.data() + p * m, ddK.data() + p * m * 3, dE);
      // field_eq(δA, K, δ∂K) gives 2εδ∂K + 2Cε δA K + Bε K K; fix up the remaining terms
      th.eps_bilinear(th.B_entries(), ev.K.data() + p * m, ev.K.data() + p * m, -1.0, dE);
      th.eps_bilinear(th.C_entries(), cfg.A().val_at(p), out.dK.data() + p * m, 2.0, dE);
      th.eps_bilinear(th.B_entries(), out.dK.data() + p * m, ev.K.data() + p * m, 1.0, dE);
      th.eps_bilinear(th.B_entries(), ev.K.data() + p * m, out.dK.data() + p * m, 1.0, dE);
    }
  }
  return out;
}

Linearization linearize(const GaugeConfig& cfg, const JetField& dA) {
  return linearize(cfg, evaluate(cfg, dA.order() >= 2), dA);
}

double pairing(const GaugeConfig& cfg, const std::vector<double>& x, const std::vector<double>& y) {
  const Theory& th = cfg.theory();
  const int n = th.n(), m = th.m();
  const Mat& k = th.alg().k();
  const auto& ei = th.metric().eta_inv;
  const std::size_t P = cfg.lattice().points();
  std::vector<double> dens(P, 0.0);
  for (std::size_t p = 0; p < P; ++p) {
    double s = 0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (k(a, b) == 0) continue;
        for (int mu = 0; mu < 3; ++mu) s += ei(mu, mu) * k(a, b) * x[p * m + a * 3 + mu] * y[p * m + b * 3 + mu];
      }
    dens[p] = s;
  }
  return integrate(cfg.lattice(), dens);
}

}  // namespace g3
