// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "g3/currents.hpp"
#include "g3/identities.hpp"
#include "g3/solver.hpp"
#include "g3/transforms.hpp"

using namespace g3;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

Vec unit_random(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = nd(rng);
  return v.normalized();
}

int levi(int a, int b, int c) { return (a - b) * (b - c) * (c - a) / 2; }

// Σ_j ad^j / (j + shift)!
Mat series(const Mat& ad, int shift) {
  Mat term = Mat::Identity(ad.rows(), ad.cols()), sum = Mat::Zero(ad.rows(), ad.cols());
  double fact = 1;
  for (int f = 2; f <= shift; ++f) fact *= f;
  for (int j = 0; j < 40; ++j) {
    sum += term / fact;
    term = term * ad;
    fact *= (j + 1 + shift);
  }
  return sum;
}

// [x, y]_B straight from the stored upper constants
Vec aux_bracket_oracle(const Tensor3& B, const Vec& x, const Vec& y) {
  const int n = B.dim();
  Vec r = Vec::Zero(n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a) r[a] += B(b, c, a) * x[b] * y[c];
  return r;
}

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

JetField along(const JetField& f, const Vec& dir) {
  JetField x(f.points(), static_cast<int>(dir.size()), 2);
  for (std::size_t p = 0; p < f.points(); ++p)
    for (int a = 0; a < dir.size(); ++a) {
      x.v(p, a) = f.v(p, 0) * dir[a];
      for (int s = 0; s < 3; ++s) x.d(p, a, s) = f.d(p, 0, s) * dir[a];
      for (int s = 0; s < 6; ++s) x.dd(p, a, s) = f.dd(p, 0, s) * dir[a];
    }
  return x;
}

void c1(Outcome& o) {
  const LieAlgebra su2 = builtin_algebra("su2");
  std::mt19937_64 rng(101);
  double h = 0, j = 0;
  for (int t = 0; t < 100; ++t) {
    const AuxBracket B = build_aux_su2(su2, unit_random(rng, 3));
    h = std::max(h, h_residual(su2, B));
    j = std::max(j, aux_jacobi_residual(B));
  }
  o.detail << "max H " << h << ", max Jacobi " << j << " over 100 v";
  o.require(h <= 1e-13 && j <= 1e-13, "residual above 1e-13");
}

void c2(Outcome& o) {
  const NullspaceReport su2 = solve_h_nullspace(builtin_algebra("su2"));
  const NullspaceReport ab = solve_h_nullspace(builtin_algebra("abelian(3)"));
  o.detail << "dim su2 " << su2.nullspace_dim << ", abelian(3) " << ab.nullspace_dim << "; containment";
  o.require(su2.nullspace_dim == 3, "su2 dimension");
  o.require(ab.nullspace_dim == 9, "abelian(3) dimension");
  for (const char* label : {"su2", "su3", "so4"}) {
    const double c = solve_h_nullspace(builtin_algebra(label)).containment;
    o.detail << " " << label << " " << c;
    o.require(c <= 1e-10, std::string(label) + " containment");
  }
}

void c3(Outcome& o) {
  std::mt19937_64 rng(303);
  double ok = 0, bad = 1e300, pr = 0;
  for (const char* label : {"su2", "so4"}) {
    const LieAlgebra alg = builtin_algebra(label);
    ok = std::max(ok, aux_jacobi_residual(build_aux_ccv(alg, unit_random(rng, alg.dim()))));
  }
  for (const char* label : {"su3", "su4", "so5", "so6"}) {
    const LieAlgebra alg = builtin_algebra(label);
    bad = std::min(bad, aux_jacobi_residual(build_aux_ccv(alg, unit_random(rng, alg.dim()))));
  }
  for (const char* label : {"su3", "su4", "so4", "so5", "so6", "su2+su3"}) {
    const LieAlgebra alg = builtin_algebra(label);
    for (AuxKind k : {AuxKind::Pair, AuxKind::Sum}) {
      const AuxBracket B = make_aux(alg, k, 0);
      pr = std::max({pr, aux_jacobi_residual(B), h_residual(alg, B)});
    }
  }
  o.detail << "ccv Jacobi su2/so4 max " << ok << ", su3/su4/so5/so6 min " << bad << ", pair/sum max " << pr;
  o.require(ok <= 1e-12, "ccv on su2/so4");
  o.require(bad > 1e-6, "ccv failure pattern");
  o.require(pr <= 1e-12, "pair/sum residuals");
}

void c4(Outcome& o) {
  const LieAlgebra su2 = builtin_algebra("su2");
  std::mt19937_64 rng(404);
  const Vec v = 1.3 * unit_random(rng, 3);
  const ClassificationReport a = classify_aux_structure(su2, v);
  // independent: w1, w2 spanning v⊥, brackets from the raw constants
  const AuxBracket B = build_aux_su2(su2, v);
  const Vec e = unit_random(rng, 3);
  const Vec w1 = (e - e.dot(v) / v.squaredNorm() * v).normalized();
  const Eigen::Vector3d v3 = v, w13 = w1;
  const Vec w2 = Vec(v3.cross(w13)).normalized();
  const double v2 = v.squaredNorm();
  double own = 0;
  for (const Vec& w : {w1, w2}) own = std::max(own, (aux_bracket_oracle(B.up(), w, v) - v2 * w).cwiseAbs().maxCoeff());
  own = std::max(own, aux_bracket_oracle(B.up(), w1, w2).cwiseAbs().maxCoeff());

  const LieAlgebra su3 = builtin_algebra("su3");
  const ClassificationReport b = classify_aux_structure(su3, make_commuting_pair(su3, Vec::Unit(8, 6), Vec::Unit(8, 7)));
  o.detail << "su2+v table " << a.max_residual() << " (" << a.entries.size() << " rows), own [w_i,v]_B check " << own
           << "; su3 Cartan pair table " << b.max_residual() << " (" << b.entries.size() << " rows)";
  o.require(a.max_residual() <= 1e-12 && own <= 1e-12, "su2 table");
  o.require(b.max_residual() <= 1e-12, "su3 table");
}

void c5(Outcome& o) {
  double worst = 0;
  std::string where;
  int runs = 0;
  for (const auto& c : fx::identity_cases())
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const GaugeConfig cfg = fx::config(c, seed);
      const JetField x1 = random_parameter(cfg.theory().alg(), cfg.lattice(), seed + 100, 0.7);
      const JetField x2 = random_parameter(cfg.theory().alg(), cfg.lattice(), seed + 200, 0.7);
      for (const ResidualReport& r : {k_relation_report(cfg, 1e-10), lagrangian_forms_report(cfg, 1e-10),
                                      bianchi_residual(cfg, 1e-10), k_variation_residual(cfg, x1, 1e-10),
                                      commutator_residual(cfg, x1, x2, 1e-10)}) {
        const double rel = r.residual / r.scale;
        if (rel > worst) {
          worst = rel;
          where = c.alg + " seed " + std::to_string(seed) + " " + r.name;
        }
        o.require(r.pass, c.alg + " seed " + std::to_string(seed) + " " + r.name);
        ++runs;
      }
    }
  o.detail << runs << " checks, worst relative residual " << worst << " (" << where << ")";
}

void c6(Outcome& o) {
  double noether = 0;
  for (const auto& c : fx::identity_cases())
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const GaugeConfig cfg = fx::config(c, seed);
      const ResidualReport r = noether_identity(cfg, random_parameter(cfg.theory().alg(), cfg.lattice(), seed + 7, 0.7));
      noether = std::max(noether, r.residual / r.scale);
      o.require(r.pass, "Noether " + c.alg);
    }
  double finite = 0;
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const GaugeConfig cfg = fx::config({"su2", AuxKind::V}, seed, 16, 0.5);
    const Vec vhat = cfg.theory().aux().sources()[0].normalized();
    const JetField f = random_lie_modes(1, seed + 40, 1, 1.5).sample(cfg.lattice(), 2);
    const double s0 = action(cfg), s1 = action(finite_gauge_su2(cfg, along(f, vhat)));
    finite = std::max(finite, std::abs(s1 - s0) / std::abs(s0));
  }
  o.detail << "|∫E·δA| / scale max " << noether << "; finite su2 (ξ = f v̂) |ΔS|/|S| max " << finite;
  o.require(noether <= 1e-8, "Noether");
  o.require(finite <= 1e-8, "finite transform");
}

void c7(Outcome& o) {
  const LieAlgebra su2 = builtin_algebra("su2");
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(-1, 1);
  double eR = 0, eRp = 0;
  for (double scale : {1e-4, 0.03, 0.09, 0.2, 1.0, 2.5})
    for (int rep = 0; rep < 5; ++rep) {
      Vec xi(3);
      for (int i = 0; i < 3; ++i) xi[i] = scale * u(rng);
      const RotationOps ops = rotation_ops(su2, xi);
      const Mat ad = ad_matrix(su2, xi);
      eR = std::max(eR, (ops.R - series(ad, 0)).cwiseAbs().maxCoeff());
      eRp = std::max(eRp, (ops.Rp - series(ad, 1)).cwiseAbs().maxCoeff());
    }
  double order = 1e300;
  for (int rep = 0; rep < 5; ++rep) {
    Vec x1(3), x2(3);
    for (int i = 0; i < 3; ++i) {
      x1[i] = 1.2 * u(rng);
      x2[i] = u(rng);
    }
    const CompositionReport c = composition_check(su2, x1, x2, 0.01, 4);
    order = std::min(order, c.order);
    o.require(c.report.pass, "composition order");
  }
  o.detail << "R vs exp series " << eR << ", R' vs dexp series " << eRp << ", composition order min " << order;
  o.require(eR <= 1e-12 && eRp <= 1e-12, "series oracles");
}

void c8(Outcome& o) {
  o.detail << "slopes:";
  for (const auto& c : fx::identity_cases()) {
    auto th = fx::theory(c, 2);
    const Lattice3 lat = make_lattice(16);
    const double amp = 0.6 * default_amplitude(*th);
    const ModeField A = random_gauge_modes(th->alg(), 2, 1, amp);
    const ModeField dA = random_gauge_modes(th->alg(), 77, 1, amp);
    const GaugeConfig cfg = GaugeConfig::from_modes(th, lat, A);
    const Evaluation ev = evaluate(cfg, true);
    const double exact = pairing(cfg, ev.E, dA.sample(lat, 0).values());
    const Linearization lin = linearize(cfg, ev, dA.sample(lat, 2));
    auto err = [&](double t) {
      const GaugeConfig p = GaugeConfig::from_modes(th, lat, mode_sum(A, t, dA));
      const GaugeConfig m = GaugeConfig::from_modes(th, lat, mode_sum(A, -t, dA));
      const double eS = std::abs((action(p) - action(m)) / (2 * t) - exact);
      const Evaluation ep = evaluate(p, true), em = evaluate(m, true);
      double eE = 0;
      for (std::size_t i = 0; i < ep.E.size(); ++i)
        eE = std::max(eE, std::abs((ep.E[i] - em.E[i]) / (2 * t) - lin.dE[i]));
      return std::pair{eS, eE};
    };
    const auto [s1, l1] = err(0.2);
    const auto [s2, l2] = err(0.1);
    const double se = std::log2(s1 / s2), sl = std::log2(l1 / l2);
    o.detail << " " << c.alg << " E " << se << " linearize " << sl << ";";
    o.require(std::abs(se - 2) <= 0.1, c.alg + " E slope");
    o.require(std::abs(sl - 2) <= 0.1, c.alg + " linearize slope");
  }
}

void c9(Outcome& o) {
  const LieAlgebra su2 = builtin_algebra("su2");
  auto th = make_theory(su2, make_aux(su2, AuxKind::V, 1));
  const GaugeConfig start = random_config(th, make_lattice(16), 1, 0.1);
  const auto t0 = std::chrono::steady_clock::now();
  const SolveResult r = gauss_newton_solve(start, SolveOptions{});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.detail << "GN " << r.report.iterations << " iterations, |E| " << r.report.initial_residual << " -> "
           << r.report.final_residual << " in " << secs << " s";
  o.require(r.report.converged && r.report.final_residual <= 1e-8, "convergence");
  o.require(r.report.iterations <= 50 && secs <= 300, "iteration or time budget");

  const ContinuationResult c = continuation_in_coupling(start, 8, SolveOptions{});
  bool singular = false;
  for (const auto& st : c.stages) singular = singular || st.singular;
  o.detail << "; continuation " << c.stages.size() - 1 << " stages" << (c.completed ? "" : " (incomplete)")
           << (singular ? " (det guard tripped)" : "");
  o.require(c.completed && c.stages.size() == 9 && !singular, "continuation");

  for (const GaugeConfig* s : {&r.cfg, &c.solutions.back()}) {
    const JetField x1 = random_parameter(su2, s->lattice(), 21, 0.5);
    const JetField x2 = random_parameter(su2, s->lattice(), 22, 0.5);
    Vec xc(3);
    xc << 0.2, -0.4, 0.3;
    std::vector<ResidualReport> reps{k_rotation_onshell(*s, x1), closure_onshell(*s, x1, x2),
                                     charge_covariance(*s, default_window(s->lattice()), xc)};
    for (const auto& rr : stress_tensor(*s, &x1).reports)
      if (rr.name == "stress-conservation") reps.push_back(rr);
    for (const auto& rr : reps) o.require(rr.pass, rr.name);
    if (s == &r.cfg)
      for (const auto& rr : reps) o.detail << "; " << rr.name << " " << rr.residual << "/" << rr.scale * rr.tolerance;
  }
}

void c10(Outcome& o) {
  for (const char* label : {"su2", "su3"}) {
    const LieAlgebra alg = builtin_algebra(label);
    auto th = make_theory(alg, make_aux(alg, AuxKind::None, 0));
    const Lattice3 lat = make_lattice(16);
    const GaugeConfig cfg = random_config(th, lat, 11, 0.3);
    const Evaluation ev = evaluate(cfg, true);
    const bool bitwise = ev.K == curvature(cfg).Fdual;
    // F from the Levi-Civita symbol, ∂F by FFT, E = 2ε(∂F + [A,F])
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
    double err = 0;
    const double scale = std::max(1.0, fx::sup(ev.E));
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
    o.detail << label << ": K == Fdual " << (bitwise ? "bitwise" : "NOT bitwise") << ", |E - E_YM| " << err << "; ";
    o.require(bitwise, std::string(label) + " bitwise");
    o.require(err <= 1e-13 * scale, std::string(label) + " YM residual");
  }
}

void c11(Outcome& o) {
  double stokes = 0, div = 0;
  for (const auto& c : fx::identity_cases())
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const GaugeConfig cfg = fx::config(c, seed);
      for (int axis = 0; axis < 3; ++axis) {
        const Charge q = charge(cfg, default_window(cfg.lattice(), axis));
        stokes = std::max(stokes, q.stokes.residual / q.stokes.scale);
        o.require(q.stokes.pass, "Stokes " + c.alg);
      }
      const NoetherCurrent J = noether_current(cfg);
      div = std::max(div, J.div.residual);
      o.require(J.div.pass, "div J " + c.alg);
    }
  o.detail << "Stokes relative max " << stokes << ", max |div J| " << div;
  o.require(stokes <= 1e-10 && div <= 1e-13, "bounds");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"algebraic gate (su2, 100 v)", c1},
      {"H-nullspace oracle", c2},
      {"ccv and pair Jacobi pattern", c3},
      {"classification tables", c4},
      {"exact field identities (3 cases x 20 seeds)", c5},
      {"gauge invariance", c6},
      {"rotation machinery", c7},
      {"Euler-Lagrange and linearization slopes", c8},
      {"solver regression", c9},
      {"Yang-Mills reduction", c10},
      {"charges and currents", c11},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2zu %s: %s | %s (%.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures ? 1 : 0;
}
