#include "g3/transforms.hpp"

#include <array>
#include <cmath>

#include "g3/error.hpp"
#include "g3/parallel.hpp"

namespace g3 {

namespace {

// value plus gradient along the three lattice axes
struct Dual3 {
  double v = 0;
  std::array<double, 3> d{};
};

Dual3 operator+(Dual3 a, const Dual3& b) {
  a.v += b.v;
  for (int i = 0; i < 3; ++i) a.d[i] += b.d[i];
  return a;
}
Dual3 operator-(Dual3 a, const Dual3& b) {
  a.v -= b.v;
  for (int i = 0; i < 3; ++i) a.d[i] -= b.d[i];
  return a;
}
Dual3 operator*(const Dual3& a, const Dual3& b) {
  Dual3 r;
  r.v = a.v * b.v;
  for (int i = 0; i < 3; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}
Dual3 operator*(double s, Dual3 a) {
  a.v *= s;
  for (double& x : a.d) x *= s;
  return a;
}
Dual3 operator/(const Dual3& a, const Dual3& b) {
  Dual3 r;
  r.v = a.v / b.v;
  for (int i = 0; i < 3; ++i) r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) / (b.v * b.v);
  return r;
}
Dual3 chain(const Dual3& a, double f, double df) {
  Dual3 r;
  r.v = f;
  for (int i = 0; i < 3; ++i) r.d[i] = df * a.d[i];
  return r;
}
Dual3 sin(const Dual3& a) { return chain(a, std::sin(a.v), std::cos(a.v)); }
Dual3 cos(const Dual3& a) { return chain(a, std::cos(a.v), -std::sin(a.v)); }
Dual3 sqrt(const Dual3& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s);
}

double value(double x) { return x; }
double value(const Dual3& x) { return x.v; }

template <class T>
T lift(double x) {
  if constexpr (std::is_same_v<T, double>)
    return x;
  else
    return T{x, {}};
}

// Coefficients as functions of s = θ²; series below s = 1e-2.
template <class T>
std::array<T, 3> coefficients(const T& s) {
  using std::cos, std::sin, std::sqrt;
  if (value(s) < 1e-2) {
    const T s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    const T a = lift<T>(1) + (-1.0 / 6) * s + (1.0 / 120) * s2 + (-1.0 / 5040) * s3 + (1.0 / 362880) * s4;
    const T b = lift<T>(0.5) + (-1.0 / 24) * s + (1.0 / 720) * s2 + (-1.0 / 40320) * s3 + (1.0 / 3628800) * s4;
    const T c = lift<T>(1.0 / 6) + (-1.0 / 120) * s + (1.0 / 5040) * s2 + (-1.0 / 362880) * s3 +
                (1.0 / 39916800) * s4;
    return {a, b, c};
  }
  const T th = sqrt(s);
  return {sin(th) / th, (lift<T>(1) - cos(th)) / s, (th - sin(th)) / (th * s)};
}

template <class T>
using V3 = std::array<T, 3>;

// [y, ξ] on su2 via the stored structure constants
template <class T>
V3<T> ad(const Tensor3& C, const V3<T>& xi, const V3<T>& y) {
  V3<T> r{lift<T>(0), lift<T>(0), lift<T>(0)};
  for (int b = 0; b < 3; ++b)
    for (int c = 0; c < 3; ++c)
      for (int a = 0; a < 3; ++a)
        if (C(b, c, a) != 0) r[a] = r[a] + C(b, c, a) * (y[b] * xi[c]);
  return r;
}

template <class T>
V3<T> combo(const T& c0, const V3<T>& y, const T& c1, const V3<T>& y1, const T& c2, const V3<T>& y2) {
  V3<T> r;
  for (int i = 0; i < 3; ++i) r[i] = c0 * y[i] + c1 * y1[i] + c2 * y2[i];
  return r;
}

template <class T>
T dot(const V3<T>& x, const V3<T>& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

// (R y, R′ y) for a single y
template <class T>
struct Rot {
  const Tensor3& C;
  V3<T> xi;
  std::array<T, 3> abc;
  V3<T> R(const V3<T>& y) const {
    const V3<T> y1 = ad(C, xi, y), y2 = ad(C, xi, y1);
    return combo(lift<T>(1), y, abc[0], y1, abc[1], y2);
  }
  V3<T> Rp(const V3<T>& y) const {
    const V3<T> y1 = ad(C, xi, y), y2 = ad(C, xi, y1);
    return combo(lift<T>(1), y, abc[1], y1, abc[2], y2);
  }
};

template <class T>
Rot<T> make_rot(const Tensor3& C, const V3<T>& xi) {
  return Rot<T>{C, xi, coefficients<T>(dot(xi, xi))};
}

}  // namespace

void require_su2(const LieAlgebra& alg) {
  if (alg.dim() != 3 || !alg.semisimple() || (alg.k() - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() > 1e-12)
    throw Error(ErrorCode::WrongAlgebra, "rotation formulas need su2 with unit Killing metric, got " + alg.label());
}

RotationOps rotation_ops(const LieAlgebra& alg, const Vec& xi) {
  require_su2(alg);
  check_dim(alg, xi);
  const Rot<double> rot = make_rot<double>(alg.C(), {xi[0], xi[1], xi[2]});
  RotationOps ops{Mat(3, 3), Mat(3, 3)};
  for (int j = 0; j < 3; ++j) {
    V3<double> e{0, 0, 0};
    e[j] = 1;
    const auto r = rot.R(e), rp = rot.Rp(e);
    for (int i = 0; i < 3; ++i) {
      ops.R(i, j) = r[i];
      ops.Rp(i, j) = rp[i];
    }
  }
  return ops;
}

GaugeConfig finite_gauge_su2(const GaugeConfig& cfg, const JetField& xi) {
  const Theory& th = cfg.theory();
  require_su2(th.alg());
  if (xi.comps() != 3 || xi.points() != cfg.lattice().points() || xi.order() < 2)
    throw Error(ErrorCode::DimensionMismatch, "gauge parameter must be an order-2 su2 jet on the lattice");
  const auto& src = th.aux().sources();
  V3<Dual3> v{};
  if (!src.empty())
    for (int i = 0; i < 3; ++i) v[i].v = src[0][i];
  const Evaluation ev = evaluate(cfg, true);
  const Tensor3& C = th.alg().C();
  const std::size_t P = ev.P;
  JetField out(P, 9, 1);
  parallel_for(P, [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      V3<Dual3> x;
      for (int a = 0; a < 3; ++a) {
        x[a].v = xi.v(p, a);
        for (int s = 0; s < 3; ++s) x[a].d[s] = xi.d(p, a, s);
      }
      const Rot<Dual3> rot = make_rot<Dual3>(C, x);
      const V3<Dual3> Rpv = rot.Rp(v);
      for (int mu = 0; mu < 3; ++mu) {
        V3<Dual3> A, K, g;
        for (int a = 0; a < 3; ++a) {
          const int c = a * 3 + mu;
          A[a].v = cfg.A().v(p, c);
          K[a].v = ev.K[p * 9 + c];
          g[a].v = xi.d(p, a, mu);
          for (int s = 0; s < 3; ++s) {
            A[a].d[s] = cfg.A().d(p, c, s);
            K[a].d[s] = ev.dK[(p * 9 + c) * 3 + s];
            g[a].d[s] = xi.dd(p, a, sym_index(mu, s));
          }
        }
        const V3<Dual3> RA = rot.R(A), Rg = rot.Rp(g);
        const Dual3 s1 = dot(rot.Rp(K), v), s2 = dot(K, x);
        for (int a = 0; a < 3; ++a) {
          const Dual3 r = RA[a] + Rg[a] + s1 * x[a] - s2 * Rpv[a];
          out.v(p, a * 3 + mu) = r.v;
          for (int s = 0; s < 3; ++s) out.d(p, a * 3 + mu, s) = r.d[s];
        }
      }
    }
  });
  return GaugeConfig(cfg.theory_ptr(), cfg.lattice(), std::move(out));
}

double composition_residual(const LieAlgebra& alg, const Vec& xi1, const Vec& xi2, double t, bool literal) {
  const RotationOps r1 = rotation_ops(alg, xi1);
  const RotationOps r2 = rotation_ops(alg, t * xi2);
  const Vec xi3 = xi1 + r1.Rp.fullPivLu().solve(t * xi2);
  const Mat lhs = literal ? Mat(r1.R * r2.R) : Mat(r2.R * r1.R);
  return (lhs - rotation_ops(alg, xi3).R).cwiseAbs().maxCoeff();
}

CompositionReport composition_check(const LieAlgebra& alg, const Vec& xi1, const Vec& xi2, double t0, int halvings) {
  CompositionReport rep;
  std::vector<double> lit;
  double t = t0;
  for (int i = 0; i <= halvings; ++i, t *= 0.5) {
    rep.t.push_back(t);
    rep.residual.push_back(composition_residual(alg, xi1, xi2, t));
    lit.push_back(composition_residual(alg, xi1, xi2, t, true));
  }
  auto order = [](const std::vector<double>& r) {
    double o = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < r.size(); ++i) {
      if (r[i] <= 1e-15 || r[i - 1] <= 1e-15) continue;  // exact at rounding level
      o = std::min(o, std::log2(r[i - 1] / r[i]));
    }
    return o;
  };
  rep.order = order(rep.residual);
  rep.literal_order = order(lit);
  const double shortfall = std::isinf(rep.order) ? 0.0 : std::max(0.0, 2.0 - rep.order);
  rep.report = ResidualReport::check("composition-order", shortfall, 1.0, 0.05);
  rep.report.algebra = alg.label();
  return rep;
}

}  // namespace g3
