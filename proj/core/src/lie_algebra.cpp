#include "g3/lie_algebra.hpp"

#include <cctype>
#include <cmath>
#include <complex>
#include <random>

#include "g3/error.hpp"

namespace g3 {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RankTooLow: return "RankTooLow";
    case ErrorCode::WrongAlgebra: return "WrongAlgebra";
    case ErrorCode::CommutatorNonzero: return "CommutatorNonzero";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::SubspaceSplitFailed: return "SubspaceSplitFailed";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::SingularY: return "SingularY";
    case ErrorCode::SingularYEncountered: return "SingularYEncountered";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Error";
}

namespace {

Tensor3 antisymmetrized(const Tensor3& C) {
  const int n = C.dim();
  Tensor3 out(n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a) out(b, c, a) = 0.5 * (C(b, c, a) - C(c, b, a));
  return out;
}

// Generalized Gell-Mann basis e_a = -i λ_a / 2; C_{ab}^c = -2 Tr([e_a, e_b] e_c).
LieAlgebra make_su(int n) {
  using Cm = Eigen::MatrixXcd;
  const std::complex<double> I(0, 1);
  std::vector<Cm> lam;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Cm s = Cm::Zero(n, n);
      s(i, j) = s(j, i) = 1;
      lam.push_back(s);
      Cm t = Cm::Zero(n, n);
      t(i, j) = -I;
      t(j, i) = I;
      lam.push_back(t);
    }
  std::vector<int> diag;
  for (int l = 1; l < n; ++l) {
    Cm d = Cm::Zero(n, n);
    for (int i = 0; i < l; ++i) d(i, i) = 1;
    d(l, l) = -l;
    d *= std::sqrt(2.0 / (l * (l + 1)));
    diag.push_back(static_cast<int>(lam.size()));
    lam.push_back(d);
  }
  const int dim = static_cast<int>(lam.size());
  std::vector<Cm> e;
  for (auto& l : lam) e.push_back(-0.5 * I * l);
  Tensor3 C(dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      Cm cm = e[a] * e[b] - e[b] * e[a];
      for (int c = 0; c < dim; ++c) C(a, b, c) = (-2.0 * (cm * e[c]).trace()).real();
    }
  std::vector<Vec> hints;
  for (int d : diag) hints.push_back(Vec::Unit(dim, d));
  return LieAlgebra("su" + std::to_string(n), C, hints);
}

// Basis M_ij = E_ij - E_ji (i<j); C_ab^c = Tr(M_c^T [M_a, M_b]) / 2.
LieAlgebra make_so(int n) {
  std::vector<Mat> M;
  std::vector<std::pair<int, int>> ij;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Mat m = Mat::Zero(n, n);
      m(i, j) = 1;
      m(j, i) = -1;
      M.push_back(m);
      ij.emplace_back(i, j);
    }
  const int dim = static_cast<int>(M.size());
  Tensor3 C(dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      Mat cm = M[a] * M[b] - M[b] * M[a];
      for (int c = 0; c < dim; ++c) C(a, b, c) = 0.5 * (M[c].transpose() * cm).trace();
    }
  auto index_of = [&](int i, int j) {
    for (int a = 0; a < dim; ++a)
      if (ij[a] == std::make_pair(i, j)) return a;
    return -1;
  };
  std::vector<Vec> hints;
  if (n == 4) {
    // one generator from each commuting su2 factor
    Vec p = Vec::Unit(dim, index_of(0, 1)), q = Vec::Unit(dim, index_of(2, 3));
    hints.push_back(p + q);
    hints.push_back(p - q);
  } else {
    for (int i = 0; i + 1 < n; i += 2) hints.push_back(Vec::Unit(dim, index_of(i, i + 1)));
  }
  return LieAlgebra("so" + std::to_string(n), C, hints);
}

LieAlgebra make_su2() {
  Tensor3 C(3);
  C(0, 1, 2) = C(1, 2, 0) = C(2, 0, 1) = 1;
  C(1, 0, 2) = C(2, 1, 0) = C(0, 2, 1) = -1;
  return LieAlgebra("su2", C, {Vec::Unit(3, 2)});
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Position of the top-level separator, ignoring anything inside parentheses.
std::size_t top_level(std::string_view s, char sep) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') --depth;
    else if (s[i] == sep && depth == 0) return i;
  }
  return std::string_view::npos;
}

int parse_int(const std::string& s, std::string_view label) {
  if (s.empty() || s.size() > 3) throw Error(ErrorCode::UnknownLabel, std::string(label));
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) throw Error(ErrorCode::UnknownLabel, std::string(label));
  return std::stoi(s);
}

}  // namespace

LieAlgebra::LieAlgebra(std::string label, Tensor3 C, std::vector<Vec> cartan_hints)
    : label_(std::move(label)), C_(antisymmetrized(C)), hints_(std::move(cartan_hints)) {
  k_ = killing_from_structure(C_);
  const int n = dim();
  if (n > 0) {
    Eigen::FullPivLU<Mat> lu(k_);
    lu.setThreshold(1e-10);
    if (lu.rank() == n) k_inv_ = lu.inverse();
  }
  for (const Vec& h : hints_) check_dim(*this, h);
}

double LieAlgebra::inner(const Vec& x, const Vec& y) const {
  check_dim(*this, x);
  check_dim(*this, y);
  return x.dot(k_ * y);
}

Mat killing_from_structure(const Tensor3& C) {
  const int n = C.dim();
  Mat k = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 0;
      for (int d = 0; d < n; ++d)
        for (int e = 0; e < n; ++e) s += C(a, d, e) * C(b, e, d);
      k(a, b) = -0.5 * s;
    }
  return k;
}

double jacobi_residual(const Tensor3& C) {
  const int n = C.dim();
  // t(b,c,d,a) = C_bc^e C_de^a
  std::vector<double> t(static_cast<std::size_t>(n) * n * n * n, 0.0);
  auto T = [&](int b, int c, int d, int a) -> double& { return t[((static_cast<std::size_t>(b) * n + c) * n + d) * n + a]; };
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int e = 0; e < n; ++e) {
        const double cbce = C(b, c, e);
        if (cbce == 0) continue;
        for (int d = 0; d < n; ++d)
          for (int a = 0; a < n; ++a) T(b, c, d, a) += cbce * C(d, e, a);
      }
  double m = 0;
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d)
        for (int a = 0; a < n; ++a)
          m = std::max(m, std::abs(T(b, c, d, a) + T(c, d, b, a) + T(d, b, c, a)) / 3.0);
  return m;
}

LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b) {
  const int na = a.dim(), nb = b.dim();
  Tensor3 C(na + nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      for (int l = 0; l < na; ++l) C(i, j, l) = a.C()(i, j, l);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j)
      for (int l = 0; l < nb; ++l) C(na + i, na + j, na + l) = b.C()(i, j, l);
  std::vector<Vec> hints;
  for (const Vec& h : a.cartan_hints()) {
    Vec x = Vec::Zero(na + nb);
    x.head(na) = h;
    hints.push_back(x);
  }
  for (const Vec& h : b.cartan_hints()) {
    Vec x = Vec::Zero(na + nb);
    x.tail(nb) = h;
    hints.push_back(x);
  }
  return LieAlgebra("direct_sum(" + a.label() + "," + b.label() + ")", C, hints);
}

LieAlgebra builtin_algebra(std::string_view raw) {
  const std::string label = trim(raw);
  if (label.empty()) throw Error(ErrorCode::UnknownLabel, "empty algebra label");
  if (auto p = top_level(label, '+'); p != std::string::npos)
    return direct_sum(builtin_algebra(label.substr(0, p)), builtin_algebra(label.substr(p + 1)));
  if (label.rfind("direct_sum(", 0) == 0 && label.back() == ')') {
    std::string inner = label.substr(11, label.size() - 12);
    auto p = top_level(inner, ',');
    if (p == std::string::npos) throw Error(ErrorCode::UnknownLabel, label);
    return direct_sum(builtin_algebra(inner.substr(0, p)), builtin_algebra(inner.substr(p + 1)));
  }
  if (label.rfind("abelian(", 0) == 0 && label.back() == ')') {
    int n = parse_int(label.substr(8, label.size() - 9), label);
    if (n < 1 || n > 64) throw Error(ErrorCode::UnknownLabel, label);
    std::vector<Vec> hints;
    for (int i = 0; i < n; ++i) hints.push_back(Vec::Unit(n, i));
    return LieAlgebra(label, Tensor3(n), hints);
  }
  if (label == "su2") return make_su2();
  if (label.rfind("su", 0) == 0) {
    int n = parse_int(label.substr(2), label);
    if (n < 2 || n > 8) throw Error(ErrorCode::UnknownLabel, label);
    return make_su(n);
  }
  if (label.rfind("so", 0) == 0) {
    int n = parse_int(label.substr(2), label);
    if (n < 3 || n > 10) throw Error(ErrorCode::UnknownLabel, label);
    return make_so(n);
  }
  throw Error(ErrorCode::UnknownLabel, label);
}

void check_dim(const LieAlgebra& alg, const Vec& x) {
  if (x.size() != alg.dim())
    throw Error(ErrorCode::DimensionMismatch,
                "vector of length " + std::to_string(x.size()) + " for algebra " + alg.label());
}

Vec bracket(const LieAlgebra& alg, const Vec& x, const Vec& y) {
  check_dim(alg, x);
  check_dim(alg, y);
  const int n = alg.dim();
  const Tensor3& C = alg.C();
  Vec r = Vec::Zero(n);
  for (int b = 0; b < n; ++b) {
    if (x[b] == 0) continue;
    for (int c = 0; c < n; ++c) {
      const double w = x[b] * y[c];
      if (w == 0) continue;
      for (int a = 0; a < n; ++a) r[a] += C(b, c, a) * w;
    }
  }
  return r;
}

Mat ad_matrix(const LieAlgebra& alg, const Vec& x) {
  check_dim(alg, x);
  const int n = alg.dim();
  Mat m = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      double s = 0;
      for (int b = 0; b < n; ++b) s += alg.C()(c, b, a) * x[b];
      m(a, c) = s;
    }
  return m;
}

std::pair<Vec, Vec> commuting_pair(const LieAlgebra& alg) {
  std::vector<Vec> hints = alg.cartan_hints();
  if (hints.empty()) {
    // centralizer of a generic element
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> nd;
    Vec x(alg.dim());
    for (int i = 0; i < alg.dim(); ++i) x[i] = nd(rng);
    Eigen::FullPivLU<Mat> lu(ad_matrix(alg, x));
    lu.setThreshold(1e-9);
    Mat ker = lu.kernel();
    if (lu.rank() < alg.dim())
      for (int j = 0; j < ker.cols(); ++j) hints.push_back(ker.col(j));
  }
  if (hints.size() < 2)
    throw Error(ErrorCode::RankTooLow, alg.label() + " has no two independent commuting elements");
  Vec u = hints[0].normalized();
  Vec v = hints[1];
  const double uu = alg.inner(u, u);
  if (uu != 0) v -= (alg.inner(u, v) / uu) * u;
  if (v.norm() < 1e-12) throw Error(ErrorCode::RankTooLow, alg.label());
  v.normalize();
  return {u, v};
}

}  // namespace g3
