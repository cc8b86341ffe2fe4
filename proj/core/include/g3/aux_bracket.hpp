#pragma once

#include <string>
#include <vector>

#include "g3/lie_algebra.hpp"

namespace g3 {

enum class Provenance { Su2V, Ccv, Pair, PairSum, Raw };
const char* to_string(Provenance p);

struct CommutingPair {
  Vec u, v;
  double u2 = 0, v2 = 0;  // Killing norms squared
};

// Projects v to be k-orthogonal to u and checks [u,v] = 0 (CommutatorNonzero above 1e-10).
CommutingPair make_commuting_pair(const LieAlgebra& alg, const Vec& u, const Vec& v);

// B(b, c, a) = B_{bc}^a, low(b, c, a) = B_{bca} = B_{bc}^e k_{ea},
// du(d, b, e) = k^{da} B_{abe}; du is only available when k is invertible.
class AuxBracket {
 public:
  AuxBracket(const LieAlgebra& alg, Tensor3 B_up, Provenance prov, std::vector<Vec> sources = {});
  // Builds from the lowered form; requires k invertible unless low is zero.
  static AuxBracket from_lowered(const LieAlgebra& alg, const Tensor3& low, Provenance prov,
                                 std::vector<Vec> sources = {});

  int dim() const { return up_.dim(); }
  const Tensor3& up() const { return up_; }
  const Tensor3& low() const { return low_; }
  const Tensor3& du() const { return du_; }
  Provenance provenance() const { return prov_; }
  const std::vector<Vec>& sources() const { return sources_; }
  bool is_zero() const { return up_.max_abs() == 0; }

  // B scaled by s; the sources record the scaled aux vector (v, or v of each pair).
  AuxBracket scaled(double s) const;
  // [x, y]_B
  Vec bracket(const Vec& x, const Vec& y) const;

 private:
  AuxBracket() = default;
  void finish(const LieAlgebra& alg);

  Tensor3 up_, low_, du_;
  Provenance prov_ = Provenance::Raw;
  std::vector<Vec> sources_;
};

AuxBracket build_aux_su2(const LieAlgebra& alg, const Vec& v);
AuxBracket build_aux_ccv(const LieAlgebra& alg, const Vec& v);
AuxBracket build_aux_pair(const LieAlgebra& alg, const CommutingPair& pair);
AuxBracket build_aux_sum(const LieAlgebra& alg, const std::vector<CommutingPair>& pairs);
// Pair formula without the commuting or orthogonality preconditions.
Tensor3 pair_lowered_unchecked(const LieAlgebra& alg, const Vec& u, const Vec& v);

// H_{bcad} from the lowered auxiliary constants.
double h_residual_lowered(const Tensor3& C, const Tensor3& low);
double h_residual(const LieAlgebra& alg, const AuxBracket& B);
double aux_jacobi_residual(const AuxBracket& B);

struct NullspaceReport {
  int unknowns = 0;        // n^2 (n-1) / 2, packed as (b<c, a)
  int nullspace_dim = 0;
  int vmap_rank = 0;
  double containment = 0;  // max distance of a V-map image column from the nullspace
  Mat basis;               // orthonormal nullspace basis, packed lowered components
  std::vector<AuxBracket> brackets;  // filled when k is invertible
};
NullspaceReport solve_h_nullspace(const LieAlgebra& alg);
Tensor3 unpack_lowered(int n, const Vec& packed);
Vec pack_lowered(const Tensor3& low);
// Lowered B_{bcd} = V_{eb} C_{cd}^e - V_{ec} C_{bd}^e for antisymmetric V.
Tensor3 vmap_lowered(const LieAlgebra& alg, const Mat& V);

struct TableEntry {
  std::string name;
  double residual = 0;
};
struct ClassificationReport {
  int dim_span = 0, dim_h = 0, dim_hperp = 0;
  std::vector<TableEntry> entries;
  double max_residual() const;
};
// su2 with aux vector v
ClassificationReport classify_aux_structure(const LieAlgebra& alg, const Vec& v);
ClassificationReport classify_aux_structure(const LieAlgebra& alg, const CommutingPair& pair);

enum class ObstructionStatus { Vacuous, InvariantSubalgebra, JacobiViolation, ClosureFailed };
const char* to_string(ObstructionStatus s);
struct ObstructionReport {
  Vec x;
  double x_norm = 0;
  double jacobi = 0;
  double closure = 0;  // brackets among {u, v, x} leaving their span
  double ideal = 0;    // brackets with the whole algebra leaving the span
  ObstructionStatus status = ObstructionStatus::Vacuous;
};
ObstructionReport pair_obstruction(const LieAlgebra& alg, const Vec& u, const Vec& v);

}  // namespace g3

namespace g3 {
// V(φ) = Σ over recorded pairs of (u,φ)v − (v,φ)u; zero unless the provenance is pair or pair-sum.
Vec vmap_apply(const LieAlgebra& alg, const AuxBracket& B, const Vec& phi);
}  // namespace g3
