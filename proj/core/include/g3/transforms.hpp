#pragma once

#include <vector>

#include "g3/gauge_config.hpp"
#include "g3/report.hpp"

namespace g3 {

// R = exp(ad_ξ) and R′ = (exp(ad_ξ) − 1)/ad_ξ on su2, in closed form
//   R  = 1 + a ad + b ad²,  R′ = 1 + b ad + c ad²
//   a = sin θ/θ, b = (1 − cos θ)/θ², c = (θ − sin θ)/θ³, θ² = k(ξ,ξ).
// ad_ξ(y) = [y, ξ], matching δA = ∂ξ + [A, ξ] + ...
struct RotationOps {
  Mat R, Rp;
};
RotationOps rotation_ops(const LieAlgebra& alg, const Vec& xi);

// Throws WrongAlgebra unless alg is su2 with the unit Killing metric.
void require_su2(const LieAlgebra& alg);

// A′ = R A + R′ ∂ξ + (R′K, v) ξ − (K, ξ) R′ v pointwise. First derivatives of A′ are exact
// (forward-mode jets), so the result is an order-1 config. xi needs order 2.
GaugeConfig finite_gauge_su2(const GaugeConfig& cfg, const JetField& xi);

// ‖R_{tξ2} R_{ξ1} − R_{ξ3}‖ with ξ3 = ξ1 + R′⁻¹_{ξ1}(t ξ2). literal = true uses R_{ξ1} R_{tξ2}.
double composition_residual(const LieAlgebra& alg, const Vec& xi1, const Vec& xi2, double t, bool literal = false);

struct CompositionReport {
  ResidualReport report;  // order ≥ 2 check: residual = 2 − measured order (pass when ≤ 0)
  std::vector<double> t, residual;
  double order = 0;          // min successive log2 ratio under t halving
  double literal_order = 0;  // same for the literal product order
};
CompositionReport composition_check(const LieAlgebra& alg, const Vec& xi1, const Vec& xi2, double t0 = 0.1,
                                    int halvings = 4);

}  // namespace g3
