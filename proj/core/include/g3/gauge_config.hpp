#pragma once

#include <memory>
#include <vector>

#include "g3/aux_bracket.hpp"
#include "g3/geometry.hpp"
#include "g3/lie_algebra.hpp"

namespace g3 {

// Per-point component index c = a*3 + μ throughout.
struct TEntry {
  int i, j, l;
  double w;
};

// Algebraic data of one theory on a fixed metric. Pointwise kernels take jets with
// layouts val[c], d1[c*3 + σ], d2[c*6 + sym_index(σ,ρ)].
class Theory {
 public:
  Theory(LieAlgebra alg, AuxBracket aux, Metric3 metric);

  const LieAlgebra& alg() const { return alg_; }
  const AuxBracket& aux() const { return aux_; }
  const Metric3& metric() const { return metric_; }
  int n() const { return n_; }
  int m() const { return 3 * n_; }
  std::shared_ptr<const Theory> with_aux(AuxBracket aux) const;

  // out^l_μ += w T(i,j,l) ε_μ^{στ} P^i_σ Q^j_τ
  void eps_bilinear(const std::vector<TEntry>& T, const double* P, const double* Q, double w, double* out) const;
  // out^l_μ += w T(i,j,l) P^i_μ ξ^j  (no ε)
  void plain_bilinear(const std::vector<TEntry>& T, const double* P, const double* xi, double w, double* out) const;
  const std::vector<TEntry>& C_entries() const { return C_; }
  const std::vector<TEntry>& B_entries() const { return B_; }
  // duB(p,q)^a = duB^a_{dc} p^d q^c as entries (d, c, a)
  const std::vector<TEntry>& duB_entries() const { return duB_; }

  void fdual(const double* A, const double* dA, double* F) const;
  // dF[c*3 + ρ]
  void dfdual(const double* A, const double* dA, const double* ddA, double* dF) const;
  // X(W)[(d,μ),(a,σ)] = ε_μ^{στ} duB^d_{am} W^m_τ, so Y = 1 - X(A)
  void xmap(const double* W, Mat& X) const;
  void xmap_apply(const double* W, const double* K, double* out) const;  // out += X(W) K
  void field_eq(const double* A, const double* K, const double* dK, double* E) const;
  double lagrangian(const double* K, const double* F) const;

  // Amplitude below which ‖X(A)‖₂ <= 1/2 whenever sup|A^a_μ| <= amplitude. Exact box maximum for
  // 3n <= 12, triangle-inequality bound otherwise.
  double guard_amplitude() const;
  // max_b Σ_{c,e} |duB^b_{ce}|
  double dub_row_norm() const;
  // n · max row sum of |k|
  double killing_norm() const;

 private:
  LieAlgebra alg_;
  AuxBracket aux_;
  Metric3 metric_;
  int n_;
  std::vector<TEntry> C_, B_, duB_;
};

std::shared_ptr<const Theory> make_theory(const LieAlgebra& alg, const AuxBracket& aux,
                                          Signature sig = Signature::Euclidean);

inline constexpr double kDetGuard = 1e-8;

class GaugeConfig {
 public:
  // A needs order >= 1; order 2 is needed for the field equations in spectral mode.
  // Throws SingularY when min|det Y| < 1e-8.
  GaugeConfig(std::shared_ptr<const Theory> theory, Lattice3 lattice, JetField A);
  static GaugeConfig from_modes(std::shared_ptr<const Theory> theory, const Lattice3& lattice, const ModeField& A);
  static GaugeConfig from_grid(std::shared_ptr<const Theory> theory, const Lattice3& lattice, std::vector<double> A);

  const Theory& theory() const { return *theory_; }
  std::shared_ptr<const Theory> theory_ptr() const { return theory_; }
  const Lattice3& lattice() const { return lattice_; }
  const JetField& A() const { return A_; }
  double min_det_y() const { return min_det_; }
  GaugeConfig with_theory(std::shared_ptr<const Theory> theory) const;

 private:
  std::shared_ptr<const Theory> theory_;
  Lattice3 lattice_;
  JetField A_;
  double min_det_ = 1;
};

struct Curvature {
  std::vector<double> F2;     // P × n × 3 × 3, F^a_{μν}
  std::vector<double> Fdual;  // P × m
};
Curvature curvature(const GaugeConfig& cfg);

struct YOperator {
  int m = 0;
  std::vector<double> Y;    // P × m × m
  std::vector<double> det;  // P
  double min_abs_det = 0;
};
YOperator assemble_y(const GaugeConfig& cfg);

// Everything derived pointwise from A. dK is chain-rule in spectral mode and a grid
// derivative of K otherwise.
struct Evaluation {
  std::size_t P = 0;
  int m = 0;
  bool full = false;
  std::vector<double> F, K, L, det;  // F, K: P × m
  std::vector<double> Yinv;          // P × m × m
  std::vector<double> dK, E;         // P × m × 3, P × m (full only)
  double min_abs_det = 0;
  double max_abs_E() const;
};
Evaluation evaluate(const GaugeConfig& cfg, bool full = true);

struct KStrength {
  std::vector<double> K;
  double relation_residual = 0;  // covariant K relation, relative
};
KStrength compute_k(const GaugeConfig& cfg);

struct Lagrangian {
  std::vector<double> density;
  double action = 0;
};
Lagrangian lagrangian(const GaugeConfig& cfg);
double action(const GaugeConfig& cfg);
std::vector<double> field_equations(const GaugeConfig& cfg);

struct Linearization {
  std::vector<double> dF, dK, dE;  // dE empty when δA has order < 2
};
// δA jets with the same layout as A.
Linearization linearize(const GaugeConfig& cfg, const Evaluation& ev, const JetField& dA);
Linearization linearize(const GaugeConfig& cfg, const JetField& dA);

// Per-point linearization kernel used by the solver and the identity checks.
struct PointView {
  const double* A;
  const double* dA;
  const double* K;
  const double* dK;  // may be null when only δK is needed
  const double* Yinv;
};
void linearize_point(const Theory& th, const PointView& pv, const double* dA0, const double* dA1, const double* dA2,
                     double* dF, double* dK, double* ddK, double* dE);

// k(x, y) contracted with η over μ: Σ η^{μν} k_ab x^a_μ y^b_ν over the grid, times h^3.
double pairing(const GaugeConfig& cfg, const std::vector<double>& x, const std::vector<double>& y);

}  // namespace g3
