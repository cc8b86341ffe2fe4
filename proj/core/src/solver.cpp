#include "g3/solver.hpp"

#include <cmath>
#include <complex>
#include <optional>

#include "g3/error.hpp"
#include "g3/parallel.hpp"

namespace g3 {

void SolveOptions::validate() const {
  if (!(residual_tol > 0)) throw Error(ErrorCode::ConfigError, "residual tolerance must be positive");
  if (!(gauge_penalty >= 0)) throw Error(ErrorCode::ConfigError, "gauge penalty weight must be non-negative");
  if (max_iters < 0 || max_cg_iters <= 0) throw Error(ErrorCode::ConfigError, "iteration limits must be positive");
  if (!(backtrack > 0 && backtrack < 1)) throw Error(ErrorCode::ConfigError, "backtracking factor must lie in (0,1)");
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> t(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) t[i] = a[i] * b[i];
  return neumaier_sum(t);
}

// Residual (E, √λ ∂^μA_μ) per point and its Jacobian in jet form:
// rows = m + n, columns = 10m ordered (value, first c*3+σ, second c*6+slot).
class Problem {
 public:
  Problem(const Theory& th, const Lattice3& lat, double lambda)
      : th_(th), lat_(lat), D_(lat), n_(th.n()), m_(th.m()), rows_(m_ + n_), cols_(10 * m_),
        sl_(std::sqrt(lambda)), lambda_(lambda) {}

  int rows() const { return rows_; }

  std::vector<double> residual(const GaugeConfig& cfg, const Evaluation& ev) const {
    const std::size_t P = ev.P;
    std::vector<double> r(P * rows_, 0.0);
    const auto& ei = th_.metric().eta_inv;
    for (std::size_t p = 0; p < P; ++p) {
      for (int c = 0; c < m_; ++c) r[p * rows_ + c] = ev.E[p * m_ + c];
      for (int a = 0; a < n_; ++a) {
        double d = 0;
        for (int mu = 0; mu < 3; ++mu) d += ei(mu, mu) * cfg.A().d(p, a * 3 + mu, mu);
        r[p * rows_ + m_ + a] = sl_ * d;
      }
    }
    return r;
  }

  void assemble(const GaugeConfig& cfg, const Evaluation& ev) {
    const std::size_t P = ev.P;
    G_.assign(P * rows_ * cols_, 0.0);
    const auto& ei = th_.metric().eta_inv;
    parallel_for(P, [&](std::size_t b, std::size_t e) {
      std::vector<double> j0(m_), j1(3 * m_), j2(6 * m_), dF(m_), dK(m_), dE(m_);
      for (std::size_t p = b; p < e; ++p) {
        const PointView pv{cfg.A().val_at(p), cfg.A().d1_at(p), ev.K.data() + p * m_, ev.dK.data() + p * m_ * 3,
                           ev.Yinv.data() + p * m_ * m_};
        double* Gp = G_.data() + p * rows_ * cols_;
        for (int col = 0; col < cols_; ++col) {
          std::fill(j0.begin(), j0.end(), 0.0);
          std::fill(j1.begin(), j1.end(), 0.0);
          std::fill(j2.begin(), j2.end(), 0.0);
          if (col < m_)
            j0[col] = 1;
          else if (col < 4 * m_)
            j1[col - m_] = 1;
          else
            j2[col - 4 * m_] = 1;
          linearize_point(th_, pv, j0.data(), j1.data(), j2.data(), dF.data(), dK.data(), nullptr, dE.data());
          for (int r = 0; r < m_; ++r) Gp[r * cols_ + col] = dE[r];
        }
        // penalty rows: √λ η^{μμ} ∂_μ A^a_μ
        for (int a = 0; a < n_; ++a)
          for (int mu = 0; mu < 3; ++mu) Gp[(m_ + a) * cols_ + m_ + (a * 3 + mu) * 3 + mu] = sl_ * ei(mu, mu);
      }
    });
  }

  std::vector<double> apply(const std::vector<double>& v) const {
    const JetField j = D_.jets(v, m_, 2);
    const std::size_t P = lat_.points();
    std::vector<double> out(P * rows_, 0.0);
    parallel_for(P, [&](std::size_t b, std::size_t e) {
      std::vector<double> x(cols_);
      for (std::size_t p = b; p < e; ++p) {
        std::copy(j.val_at(p), j.val_at(p) + m_, x.begin());
        std::copy(j.d1_at(p), j.d1_at(p) + 3 * m_, x.begin() + m_);
        std::copy(j.d2_at(p), j.d2_at(p) + 6 * m_, x.begin() + 4 * m_);
        Eigen::Map<Vec>(out.data() + p * rows_, rows_) =
            Eigen::Map<const Eigen::Matrix<double, -1, -1, Eigen::RowMajor>>(G_.data() + p * rows_ * cols_, rows_, cols_) *
            Eigen::Map<const Vec>(x.data(), cols_);
      }
    });
    return out;
  }

  std::vector<double> apply_transpose(const std::vector<double>& w) const {
    const std::size_t P = lat_.points();
    std::vector<double> g(P * cols_);
    parallel_for(P, [&](std::size_t b, std::size_t e) {
      for (std::size_t p = b; p < e; ++p)
        Eigen::Map<Vec>(g.data() + p * cols_, cols_) =
            Eigen::Map<const Eigen::Matrix<double, -1, -1, Eigen::RowMajor>>(G_.data() + p * rows_ * cols_, rows_, cols_)
                .transpose() *
            Eigen::Map<const Vec>(w.data() + p * rows_, rows_);
    });
    // adjoint of the jet map: Fourier multipliers conjugated
    const std::size_t Q = D_.spectrum_points();
    std::vector<double> part(P * m_);
    auto slice = [&](int offset, int stride, int k) {
      for (std::size_t p = 0; p < P; ++p)
        for (int c = 0; c < m_; ++c) part[p * m_ + c] = g[p * cols_ + offset + c * stride + k];
      return D_.forward(part.data(), m_);
    };
    Spectrum acc = slice(0, 1, 0);
    for (int s = 0; s < 3; ++s) {
      const Spectrum f = slice(m_, 3, s);
      for (std::size_t q = 0; q < Q; ++q) {
        const std::complex<double> mult(0, -D_.wavenumber(q)[s]);
        for (int c = 0; c < m_; ++c) acc[q * m_ + c] += mult * f[q * m_ + c];
      }
    }
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) {
        const Spectrum f = slice(4 * m_, 6, sym_index(a, b));
        for (std::size_t q = 0; q < Q; ++q) {
          const auto k = D_.wavenumber(q);
          const double mult = -k[a] * k[b];
          for (int c = 0; c < m_; ++c) acc[q * m_ + c] += mult * f[q * m_ + c];
        }
      }
    return D_.inverse(acc, m_);
  }

  // Fourier-diagonal inverse of the A = 0 normal operator 4|k|⁴P_T + λ|k|²P_L
  std::vector<double> precondition(const std::vector<double>& r) const {
    Spectrum s = D_.forward(r.data(), m_);
    const std::size_t Q = D_.spectrum_points();
    for (std::size_t q = 0; q < Q; ++q) {
      const auto k = D_.wavenumber(q);
      const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
      if (k2 == 0) continue;
      const double t = 1.0 / (4 * k2 * k2), l = lambda_ > 0 ? 1.0 / (lambda_ * k2) : t;
      for (int a = 0; a < n_; ++a) {
        std::complex<double>* x = &s[q * m_ + a * 3];
        const std::complex<double> kx = (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]) / k2;
        for (int mu = 0; mu < 3; ++mu) {
          const std::complex<double> L = kx * k[mu];
          x[mu] = t * (x[mu] - L) + l * L;
        }
      }
    }
    return D_.inverse(s, m_);
  }

 private:
  const Theory& th_;
  Lattice3 lat_;
  GridDerivative D_;
  int n_, m_, rows_, cols_;
  double sl_, lambda_;
  std::vector<double> G_;
};

double half_sq(const std::vector<double>& r, double w) { return 0.5 * w * dot(r, r); }

void require_spectral(const GaugeConfig& cfg) {
  if (cfg.lattice().deriv_mode() != DerivMode::Spectral)
    throw Error(ErrorCode::ConfigError, "the solver runs on spectral lattices only");
}

}  // namespace

double objective(const GaugeConfig& cfg, const SolveOptions& opts) {
  opts.validate();
  require_spectral(cfg);
  const Evaluation ev = evaluate(cfg, true);
  Problem pb(cfg.theory(), cfg.lattice(), opts.gauge_penalty);
  return half_sq(pb.residual(cfg, ev), cfg.lattice().cell_volume());
}

std::vector<double> objective_gradient(const GaugeConfig& cfg, const SolveOptions& opts) {
  opts.validate();
  require_spectral(cfg);
  const Evaluation ev = evaluate(cfg, true);
  Problem pb(cfg.theory(), cfg.lattice(), opts.gauge_penalty);
  pb.assemble(cfg, ev);
  std::vector<double> g = pb.apply_transpose(pb.residual(cfg, ev));
  for (double& x : g) x *= cfg.lattice().cell_volume();
  return g;
}

SolveResult gauss_newton_solve(const GaugeConfig& cfg0, const SolveOptions& opts) {
  opts.validate();
  require_spectral(cfg0);
  const auto th = cfg0.theory_ptr();
  const Lattice3& lat = cfg0.lattice();
  Problem pb(*th, lat, opts.gauge_penalty);

  GaugeConfig cfg = cfg0;
  Evaluation ev = evaluate(cfg, true);
  std::vector<double> r = pb.residual(cfg, ev);
  double phi = half_sq(r, 1.0);
  SolveReport rep;
  rep.initial_residual = ev.max_abs_E();
  rep.min_det_trajectory.push_back(ev.min_abs_det);

  for (int it = 0;; ++it) {
    const double einf = ev.max_abs_E();
    rep.residual_trajectory.push_back(einf);
    if (einf <= opts.residual_tol) {
      rep.converged = true;
      break;
    }
    if (it >= opts.max_iters) {
      rep.message = "iteration limit reached";
      break;
    }
    pb.assemble(cfg, ev);
    std::vector<double> b = pb.apply_transpose(r);
    for (double& x : b) x = -x;

    // PCG on JᵀJ x = b
    const double tol = std::min(opts.cg_tol_cap, einf);
    const double bnorm = std::sqrt(dot(b, b));
    std::vector<double> x(b.size(), 0.0), res = b, z = pb.precondition(res), d = z;
    double rz = dot(res, z);
    for (int k = 0; k < opts.max_cg_iters && std::sqrt(dot(res, res)) > tol * bnorm; ++k) {
      const std::vector<double> q = pb.apply_transpose(pb.apply(d));
      const double dq = dot(d, q);
      if (!(dq > 0)) break;
      const double alpha = rz / dq;
      for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] += alpha * d[i];
        res[i] -= alpha * q[i];
      }
      z = pb.precondition(res);
      const double rz1 = dot(res, z);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = z[i] + (rz1 / rz) * d[i];
      rz = rz1;
      ++rep.cg_iterations;
    }

    // Armijo backtracking on Φ; the slope is −bᵀx
    const double slope = -dot(b, x);
    const std::vector<double>& A = cfg.A().values();
    double step = 1;
    bool accepted = false, hit_guard = false;
    for (int bt = 0; bt <= opts.max_backtracks; ++bt, step *= opts.backtrack) {
      std::vector<double> At(A);
      for (std::size_t i = 0; i < At.size(); ++i) At[i] += step * x[i];
      try {
        GaugeConfig ct = GaugeConfig::from_grid(th, lat, std::move(At));
        Evaluation et = evaluate(ct, true);
        std::vector<double> rt = pb.residual(ct, et);
        const double pt = half_sq(rt, 1.0);
        if (pt <= phi + opts.armijo * step * slope || (pt < phi && bt == opts.max_backtracks)) {
          cfg = std::move(ct);
          ev = std::move(et);
          r = std::move(rt);
          phi = pt;
          accepted = true;
          break;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularY) throw;
        hit_guard = true;
      }
    }
    ++rep.iterations;
    rep.min_det_trajectory.push_back(ev.min_abs_det);
    if (!accepted) {
      rep.singular = hit_guard;
      rep.message = hit_guard ? "det(Y) guard tripped on every trial step" : "line search failed";
      rep.residual_trajectory.push_back(ev.max_abs_E());
      break;
    }
  }
  rep.final_residual = ev.max_abs_E();
  rep.converged = rep.final_residual <= opts.residual_tol;
  rep.objective = half_sq(r, lat.cell_volume());
  rep.action = integrate(lat, ev.L);
  double pen = 0;
  for (std::size_t p = 0; p < ev.P; ++p)
    for (int a = 0; a < th->n(); ++a) pen = std::max(pen, std::abs(r[p * pb.rows() + th->m() + a]));
  rep.penalty = opts.gauge_penalty > 0 ? pen / std::sqrt(opts.gauge_penalty) : 0;
  if (rep.converged) rep.message = "converged";
  return SolveResult{std::move(cfg), std::move(rep)};
}

ContinuationResult continuation_in_coupling(const GaugeConfig& cfg0, int steps, const SolveOptions& opts) {
  if (steps < 1) throw Error(ErrorCode::ConfigError, "continuation needs at least one step");
  opts.validate();
  const auto th = cfg0.theory_ptr();
  const AuxBracket aux = th->aux();
  ContinuationResult out;
  GaugeConfig cur = cfg0;
  for (int k = 0; k <= steps; ++k) {
    const double s = static_cast<double>(k) / steps;
    std::optional<GaugeConfig> start;
    try {
      start.emplace(cur.with_theory(th->with_aux(aux.scaled(s))));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularY) throw;
      SolveReport rep;
      rep.coupling = s;
      rep.singular = true;
      rep.message = std::string("det(Y) guard tripped entering the stage: ") + e.what();
      out.stages.push_back(rep);
      return out;
    }
    SolveResult res = gauss_newton_solve(*start, opts);
    res.report.coupling = s;
    const bool ok = res.report.converged;
    const bool singular = res.report.singular;
    out.stages.push_back(res.report);
    out.solutions.push_back(res.cfg);
    if (singular) return out;
    cur = std::move(res.cfg);
    if (!ok) return out;
  }
  out.completed = true;
  return out;
}

}  // namespace g3
