#include "g3/aux_bracket.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "g3/error.hpp"

namespace g3 {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Su2V: return "su2-v";
    case Provenance::Ccv: return "ccv";
    case Provenance::Pair: return "pair";
    case Provenance::PairSum: return "pair-sum";
    case Provenance::Raw: return "raw";
  }
  return "raw";
}

const char* to_string(ObstructionStatus s) {
  switch (s) {
    case ObstructionStatus::Vacuous: return "vacuous";
    case ObstructionStatus::InvariantSubalgebra: return "invariant-subalgebra";
    case ObstructionStatus::JacobiViolation: return "jacobi-violation";
    case ObstructionStatus::ClosureFailed: return "closure-failed";
  }
  return "";
}

namespace {

Tensor3 lower_last(const Tensor3& up, const Mat& k) {
  const int n = up.dim();
  Tensor3 low(n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a) {
        double s = 0;
        for (int e = 0; e < n; ++e) s += up(b, c, e) * k(e, a);
        low(b, c, a) = s;
      }
  return low;
}

double cyclic_residual(const Tensor3& B) {
  const int n = B.dim();
  std::vector<double> t(static_cast<std::size_t>(n) * n * n * n, 0.0);
  auto T = [&](int b, int c, int d, int a) -> double& { return t[((static_cast<std::size_t>(b) * n + c) * n + d) * n + a]; };
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int e = 0; e < n; ++e) {
        const double w = B(b, c, e);
        if (w == 0) continue;
        for (int d = 0; d < n; ++d)
          for (int a = 0; a < n; ++a) T(b, c, d, a) += w * B(d, e, a);
      }
  double m = 0;
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d)
        for (int a = 0; a < n; ++a)
          m = std::max(m, std::abs(T(b, c, d, a) + T(c, d, b, a) + T(d, b, c, a)) / 3.0);
  return m;
}

// Orthonormal basis of the nullspace of M via the symmetric eigenproblem of MᵀM.
Mat nullspace(const Mat& M, double rel_tol, int* rank = nullptr) {
  Mat G = M.transpose() * M;
  Eigen::SelfAdjointEigenSolver<Mat> es(G);
  const Vec& ev = es.eigenvalues();
  const double top = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<int> idx;
  for (int i = 0; i < ev.size(); ++i)
    if (ev[i] <= rel_tol * top) idx.push_back(i);
  if (rank) *rank = static_cast<int>(ev.size() - idx.size());
  Mat N(M.cols(), idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) N.col(j) = es.eigenvectors().col(idx[j]);
  return N;
}

int matrix_rank(const Mat& M, double rel_tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(M);
  const Vec& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > rel_tol * s[0]) ++r;
  return r;
}

// k-orthonormal complement of the columns of S.
Mat k_complement(const Mat& S, const Mat& k) {
  const int n = static_cast<int>(k.rows());
  if (S.cols() == 0) return Mat::Identity(n, n);
  return nullspace((S.transpose() * k), 1e-12);
}

}  // namespace

CommutingPair make_commuting_pair(const LieAlgebra& alg, const Vec& u, const Vec& v_in) {
  check_dim(alg, u);
  check_dim(alg, v_in);
  Vec v = v_in;
  const double uu = alg.inner(u, u);
  if (uu != 0) v -= (alg.inner(u, v) / uu) * u;
  const double comm = bracket(alg, u, v).cwiseAbs().maxCoeff();
  if (comm > 1e-10)
    throw Error(ErrorCode::CommutatorNonzero, "[u,v] = " + std::to_string(comm));
  return {u, v, alg.inner(u, u), alg.inner(v, v)};
}

AuxBracket::AuxBracket(const LieAlgebra& alg, Tensor3 B_up, Provenance prov, std::vector<Vec> sources)
    : up_(std::move(B_up)), prov_(prov), sources_(std::move(sources)) {
  if (up_.dim() != alg.dim()) throw Error(ErrorCode::DimensionMismatch, "aux bracket dimension");
  finish(alg);
}

AuxBracket AuxBracket::from_lowered(const LieAlgebra& alg, const Tensor3& low, Provenance prov,
                                    std::vector<Vec> sources) {
  if (low.dim() != alg.dim()) throw Error(ErrorCode::DimensionMismatch, "aux bracket dimension");
  AuxBracket out;
  out.prov_ = prov;
  out.sources_ = std::move(sources);
  if (low.max_abs() == 0) {
    out.up_ = Tensor3(alg.dim());
  } else {
    if (!alg.k_inv()) throw Error(ErrorCode::WrongAlgebra, "raising needs an invertible Killing metric");
    out.up_ = lower_last(low, *alg.k_inv());
  }
  out.finish(alg);
  return out;
}

void AuxBracket::finish(const LieAlgebra& alg) {
  const int n = up_.dim();
  for (int b = 0; b < n; ++b)
    for (int c = b; c < n; ++c)
      for (int a = 0; a < n; ++a) {
        const double w = b == c ? 0.0 : 0.5 * (up_(b, c, a) - up_(c, b, a));
        up_(b, c, a) = w;
        up_(c, b, a) = -w;
      }
  low_ = lower_last(up_, alg.k());
  du_ = Tensor3(n);
  if (alg.k_inv()) {
    const Mat& ki = *alg.k_inv();
    for (int d = 0; d < n; ++d)
      for (int b = 0; b < n; ++b)
        for (int e = 0; e < n; ++e) {
          double s = 0;
          for (int a = 0; a < n; ++a) s += ki(d, a) * low_(a, b, e);
          du_(d, b, e) = s;
        }
  }
}

AuxBracket AuxBracket::scaled(double s) const {
  AuxBracket out = *this;
  out.up_ *= s;
  out.low_ *= s;
  out.du_ *= s;
  if (prov_ == Provenance::Pair || prov_ == Provenance::PairSum) {
    for (std::size_t i = 1; i < out.sources_.size(); i += 2) out.sources_[i] *= s;
  } else {
    for (Vec& x : out.sources_) x *= s;
  }
  return out;
}

Vec AuxBracket::bracket(const Vec& x, const Vec& y) const {
  const int n = dim();
  if (x.size() != n || y.size() != n) throw Error(ErrorCode::DimensionMismatch, "aux bracket argument");
  Vec r = Vec::Zero(n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) {
      const double w = x[b] * y[c];
      if (w == 0) continue;
      for (int a = 0; a < n; ++a) r[a] += up_(b, c, a) * w;
    }
  return r;
}

AuxBracket build_aux_su2(const LieAlgebra& alg, const Vec& v) {
  if (alg.dim() != 3 || jacobi_residual(alg.C()) > 1e-12 || (alg.k() - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() > 1e-12 ||
      std::abs(alg.C()(0, 1, 2) - 1.0) > 1e-12)
    throw Error(ErrorCode::WrongAlgebra, "build_aux_su2 needs su2, got " + alg.label());
  check_dim(alg, v);
  Tensor3 B(3);
  for (int b = 0; b < 3; ++b)
    for (int c = 0; c < 3; ++c)
      for (int n = 0; n < 3; ++n) B(b, c, n) = (n == b ? v[c] : 0.0) - (n == c ? v[b] : 0.0);
  return AuxBracket(alg, B, Provenance::Su2V, {v});
}

AuxBracket build_aux_ccv(const LieAlgebra& alg, const Vec& v) {
  check_dim(alg, v);
  if (!alg.semisimple()) throw Error(ErrorCode::WrongAlgebra, "ccv construction needs a semisimple algebra");
  const int n = alg.dim();
  const Tensor3& C = alg.C();
  const Vec vl = alg.lower(v);
  Tensor3 low(n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a) {
        double s = 0;
        for (int e = 0; e < n; ++e) {
          const double cbce = C(b, c, e);
          if (cbce == 0) continue;
          for (int d = 0; d < n; ++d) s += cbce * C(a, e, d) * vl[d];
        }
        low(b, c, a) = s;
      }
  return AuxBracket::from_lowered(alg, low, Provenance::Ccv, {v});
}

Tensor3 pair_lowered_unchecked(const LieAlgebra& alg, const Vec& u, const Vec& v) {
  check_dim(alg, u);
  check_dim(alg, v);
  const int n = alg.dim();
  const Tensor3& C = alg.C();
  const Vec ul = alg.lower(u), vl = alg.lower(v);
  Mat Cu = Mat::Zero(n, n), Cv = Mat::Zero(n, n);  // C_{ca}^e u_e
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int e = 0; e < n; ++e) {
        Cu(c, a) += C(c, a, e) * ul[e];
        Cv(c, a) += C(c, a, e) * vl[e];
      }
  Tensor3 low(n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        low(b, c, a) = vl[b] * Cu(c, a) - vl[c] * Cu(b, a) - ul[b] * Cv(c, a) + ul[c] * Cv(b, a);
  return low;
}

AuxBracket build_aux_pair(const LieAlgebra& alg, const CommutingPair& pair) {
  const CommutingPair p = make_commuting_pair(alg, pair.u, pair.v);
  return AuxBracket::from_lowered(alg, pair_lowered_unchecked(alg, p.u, p.v), Provenance::Pair, {p.u, p.v});
}

AuxBracket build_aux_sum(const LieAlgebra& alg, const std::vector<CommutingPair>& pairs) {
  const int n = alg.dim();
  std::vector<Vec> all;
  Tensor3 low(n);
  for (const CommutingPair& raw : pairs) {
    const CommutingPair p = make_commuting_pair(alg, raw.u, raw.v);
    for (const Vec& w : all)
      for (const Vec* x : {&p.u, &p.v}) {
        const double c = bracket(alg, w, *x).cwiseAbs().maxCoeff();
        if (c > 1e-10) throw Error(ErrorCode::CommutatorNonzero, "cross-pair bracket " + std::to_string(c));
      }
    all.push_back(p.u);
    all.push_back(p.v);
    low += pair_lowered_unchecked(alg, p.u, p.v);
  }
  return AuxBracket::from_lowered(alg, low, Provenance::PairSum, all);
}

double h_residual_lowered(const Tensor3& C, const Tensor3& Bl) {
  const int n = C.dim();
  // P(a,b,c,d) = C_{ab}^e B_{ecd}
  std::vector<double> P(static_cast<std::size_t>(n) * n * n * n, 0.0);
  auto at = [&](int a, int b, int c, int d) -> double& { return P[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d]; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int e = 0; e < n; ++e) {
        const double w = C(a, b, e);
        if (w == 0) continue;
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) at(a, b, c, d) += w * Bl(e, c, d);
      }
  double m = 0;
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int d = 0; d < n; ++d) {
          double last = 0;
          for (int e = 0; e < n; ++e) last += C(a, d, e) * Bl(b, c, e);
          const double h = at(a, b, c, d) - at(a, c, b, d) - at(d, b, c, a) + at(d, c, b, a) + last;
          m = std::max(m, std::abs(h));
        }
  return m;
}

double h_residual(const LieAlgebra& alg, const AuxBracket& B) {
  if (B.dim() != alg.dim()) throw Error(ErrorCode::DimensionMismatch, "h_residual");
  return h_residual_lowered(alg.C(), B.low());
}

double aux_jacobi_residual(const AuxBracket& B) { return cyclic_residual(B.up()); }

Vec pack_lowered(const Tensor3& low) {
  const int n = low.dim();
  Vec p(n * n * (n - 1) / 2);
  int i = 0;
  for (int b = 0; b < n; ++b)
    for (int c = b + 1; c < n; ++c)
      for (int a = 0; a < n; ++a) p[i++] = low(b, c, a);
  return p;
}

Tensor3 unpack_lowered(int n, const Vec& p) {
  Tensor3 low(n);
  int i = 0;
  for (int b = 0; b < n; ++b)
    for (int c = b + 1; c < n; ++c)
      for (int a = 0; a < n; ++a) {
        low(b, c, a) = p[i];
        low(c, b, a) = -p[i];
        ++i;
      }
  return low;
}

Tensor3 vmap_lowered(const LieAlgebra& alg, const Mat& V) {
  const int n = alg.dim();
  const Tensor3& C = alg.C();
  Tensor3 low(n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d) {
        double s = 0;
        for (int e = 0; e < n; ++e) s += V(e, b) * C(c, d, e) - V(e, c) * C(b, d, e);
        low(b, c, d) = s;
      }
  return low;
}

NullspaceReport solve_h_nullspace(const LieAlgebra& alg) {
  const int n = alg.dim();
  if (n > 10) throw Error(ErrorCode::TooLarge, "dense nullspace limited to dim <= 10");
  const Tensor3& C = alg.C();
  const int unknowns = n * n * (n - 1) / 2;
  const std::size_t rows = static_cast<std::size_t>(n) * n * n * n;
  Mat M = Mat::Zero(static_cast<Eigen::Index>(rows), unknowns);
  // H is linear in B: assemble one column per packed unit component.
  int col = 0;
  for (int b0 = 0; b0 < n; ++b0)
    for (int c0 = b0 + 1; c0 < n; ++c0)
      for (int a0 = 0; a0 < n; ++a0, ++col) {
        auto B = [&](int x, int y, int z) -> double {
          if (z != a0) return 0.0;
          if (x == b0 && y == c0) return 1.0;
          if (x == c0 && y == b0) return -1.0;
          return 0.0;
        };
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            for (int a = 0; a < n; ++a)
              for (int d = 0; d < n; ++d) {
                double h = 0;
                for (int e = 0; e < n; ++e)
                  h += C(a, b, e) * B(e, c, d) - C(a, c, e) * B(e, b, d) - C(d, b, e) * B(e, c, a) +
                       C(d, c, e) * B(e, b, a) + C(a, d, e) * B(b, c, e);
                M(((b * n + c) * n + a) * n + d, col) = h;
              }
      }
  NullspaceReport rep;
  rep.unknowns = unknowns;
  rep.basis = nullspace(M, 1e-10);
  rep.nullspace_dim = static_cast<int>(rep.basis.cols());

  // V-map over the antisymmetric n×n matrices
  const int nv = n * (n - 1) / 2;
  Mat Vimg(unknowns, nv);
  int j = 0;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q, ++j) {
      Mat V = Mat::Zero(n, n);
      V(p, q) = 1;
      V(q, p) = -1;
      Vimg.col(j) = pack_lowered(vmap_lowered(alg, V));
    }
  rep.vmap_rank = matrix_rank(Vimg, 1e-10);
  double cont = 0;
  for (int c = 0; c < nv; ++c) {
    const Vec x = Vimg.col(c);
    const double nx = x.norm();
    if (nx == 0) continue;
    const Vec r = x - rep.basis * (rep.basis.transpose() * x);
    cont = std::max(cont, r.norm() / nx);
  }
  rep.containment = cont;
  if (alg.semisimple())
    for (int c = 0; c < rep.nullspace_dim; ++c)
      rep.brackets.push_back(AuxBracket::from_lowered(alg, unpack_lowered(n, rep.basis.col(c)), Provenance::Raw));
  return rep;
}

double ClassificationReport::max_residual() const {
  double m = 0;
  for (const auto& e : entries) m = std::max(m, e.residual);
  return m;
}

namespace {

double inf_norm(const Vec& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

ClassificationReport classify_aux_structure(const LieAlgebra& alg, const Vec& v) {
  const AuxBracket B = build_aux_su2(alg, v);
  if (v.norm() == 0) throw Error(ErrorCode::SubspaceSplitFailed, "v = 0 spans nothing");
  Mat S(3, 1);
  S.col(0) = v;
  const Mat W = k_complement(S, alg.k());
  ClassificationReport rep;
  rep.dim_span = 1;
  rep.dim_h = 0;
  rep.dim_hperp = static_cast<int>(W.cols());
  if (rep.dim_hperp != 2) throw Error(ErrorCode::SubspaceSplitFailed, "complement of v is not 2-dimensional");
  const double v2 = alg.inner(v, v);
  const Vec w1 = W.col(0), w2 = W.col(1);
  rep.entries.push_back({"[w1,w2]_B = 0", inf_norm(B.bracket(w1, w2))});
  rep.entries.push_back({"[w1,v]_B = |v|^2 w1", inf_norm(B.bracket(w1, v) - v2 * w1)});
  rep.entries.push_back({"[w2,v]_B = |v|^2 w2", inf_norm(B.bracket(w2, v) - v2 * w2)});
  rep.entries.push_back({"[v,v]_B = 0", inf_norm(B.bracket(v, v))});
  return rep;
}

ClassificationReport classify_aux_structure(const LieAlgebra& alg, const CommutingPair& raw) {
  const CommutingPair p = make_commuting_pair(alg, raw.u, raw.v);
  const AuxBracket B = build_aux_pair(alg, p);
  const int n = alg.dim();
  // H: k-orthogonal to u and v and commuting with both
  Mat cons(4 * n, n);
  cons.setZero();
  cons.row(0) = alg.lower(p.u).transpose();
  cons.row(1) = alg.lower(p.v).transpose();
  cons.block(n, 0, n, n) = ad_matrix(alg, p.u);
  cons.block(2 * n, 0, n, n) = ad_matrix(alg, p.v);
  const Mat Hb = nullspace(cons, 1e-12);
  Mat S(n, 2 + Hb.cols());
  S.col(0) = p.u;
  S.col(1) = p.v;
  S.rightCols(Hb.cols()) = Hb;
  const Mat X = k_complement(S, alg.k());
  ClassificationReport rep;
  rep.dim_span = matrix_rank(S.leftCols(2), 1e-12);
  rep.dim_h = static_cast<int>(Hb.cols());
  rep.dim_hperp = static_cast<int>(X.cols());
  if (rep.dim_span != 2 || rep.dim_span + rep.dim_h + rep.dim_hperp != n)
    throw Error(ErrorCode::SubspaceSplitFailed, "subspace dimensions do not add up");

  auto worst = [](double a, double b) { return std::max(a, b); };
  double uh = 0, hh = 0, ux = 0, vx = 0, xy = 0;
  for (int i = 0; i < Hb.cols(); ++i) {
    const Vec h = Hb.col(i);
    uh = worst(uh, worst(inf_norm(B.bracket(p.u, h)), inf_norm(B.bracket(p.v, h))));
    for (int j = 0; j < Hb.cols(); ++j) hh = worst(hh, inf_norm(B.bracket(h, Hb.col(j))));
  }
  for (int i = 0; i < X.cols(); ++i) {
    const Vec x = X.col(i);
    ux = worst(ux, inf_norm(B.bracket(p.u, x) + p.u2 * bracket(alg, p.v, x)));
    vx = worst(vx, inf_norm(B.bracket(p.v, x) - p.v2 * bracket(alg, p.u, x)));
    for (int j = 0; j < X.cols(); ++j) xy = worst(xy, inf_norm(B.bracket(x, X.col(j))));
  }
  rep.entries.push_back({"[u,h]_B = [v,h]_B = 0", uh});
  rep.entries.push_back({"[h,g]_B = 0", hh});
  rep.entries.push_back({"[u,x]_B = -|u|^2 [v,x]", ux});
  rep.entries.push_back({"[v,x]_B = |v|^2 [u,x]", vx});
  rep.entries.push_back({"[x,y]_B = 0", xy});
  rep.entries.push_back({"[u,v]_B = 0", inf_norm(B.bracket(p.u, p.v))});
  return rep;
}

ObstructionReport pair_obstruction(const LieAlgebra& alg, const Vec& u, const Vec& v) {
  ObstructionReport rep;
  rep.x = bracket(alg, u, v);
  rep.x_norm = rep.x.norm();
  if (rep.x_norm <= 1e-10) return rep;
  const Tensor3 low = pair_lowered_unchecked(alg, u, v);
  rep.jacobi = cyclic_residual(AuxBracket::from_lowered(alg, low, Provenance::Raw).up());
  if (rep.jacobi > 1e-10) {
    rep.status = ObstructionStatus::JacobiViolation;
    return rep;
  }
  const int n = alg.dim();
  Mat S(n, 3);
  S << u, v, rep.x;
  Eigen::ColPivHouseholderQR<Mat> qr(S);
  auto off_span = [&](const Vec& y) {
    const Vec c = qr.solve(y);
    return (S * c - y).cwiseAbs().maxCoeff();
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rep.closure = std::max(rep.closure, off_span(bracket(alg, S.col(i), S.col(j))));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < 3; ++i) rep.ideal = std::max(rep.ideal, off_span(bracket(alg, Vec::Unit(n, a), S.col(i))));
  rep.status = rep.closure <= 1e-10 && rep.ideal <= 1e-10 ? ObstructionStatus::InvariantSubalgebra
                                                          : ObstructionStatus::ClosureFailed;
  return rep;
}

}  // namespace g3

namespace g3 {

Vec vmap_apply(const LieAlgebra& alg, const AuxBracket& B, const Vec& phi) {
  Vec out = Vec::Zero(alg.dim());
  if (B.provenance() != Provenance::Pair && B.provenance() != Provenance::PairSum) return out;
  const auto& s = B.sources();
  for (std::size_t i = 0; i + 1 < s.size(); i += 2)
    out += alg.inner(s[i], phi) * s[i + 1] - alg.inner(s[i + 1], phi) * s[i];
  return out;
}

}  // namespace g3
