#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "g3/tensor.hpp"

namespace g3 {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Structure constants are stored as C(b, c, a) = C_{bc}^a.
class LieAlgebra {
 public:
  // C is antisymmetrized in its first two slots on construction. The hints
  // are mutually commuting elements used by commuting_pair.
  LieAlgebra(std::string label, Tensor3 C, std::vector<Vec> cartan_hints = {});

  int dim() const { return C_.dim(); }
  const std::string& label() const { return label_; }
  const Tensor3& C() const { return C_; }
  const Mat& k() const { return k_; }
  const std::optional<Mat>& k_inv() const { return k_inv_; }
  bool semisimple() const { return k_inv_.has_value(); }
  const std::vector<Vec>& cartan_hints() const { return hints_; }

  // k(x, y)
  double inner(const Vec& x, const Vec& y) const;
  Vec lower(const Vec& x) const { return k_ * x; }

 private:
  std::string label_;
  Tensor3 C_;
  Mat k_;
  std::optional<Mat> k_inv_;
  std::vector<Vec> hints_;
};

Mat killing_from_structure(const Tensor3& C);
// max |C_{[bc}^e C_{d]e}^a| with the weight-1/2 antisymmetrizer.
double jacobi_residual(const Tensor3& C);

// su2, so3, suN, soN, abelian(n), direct_sum(a,b) and the shorthand a+b.
LieAlgebra builtin_algebra(std::string_view label);
LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b);

void check_dim(const LieAlgebra& alg, const Vec& x);
Vec bracket(const LieAlgebra& alg, const Vec& x, const Vec& y);
// ad_x(y) = [y, x]
Mat ad_matrix(const LieAlgebra& alg, const Vec& x);
std::pair<Vec, Vec> commuting_pair(const LieAlgebra& alg);

}  // namespace g3
