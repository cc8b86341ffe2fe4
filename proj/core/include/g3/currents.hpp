#pragma once

#include <array>
#include <vector>

#include "g3/gauge_config.hpp"
#include "g3/report.hpp"

namespace g3 {

// J^a_μ = ε_μ^{σν} ∂_σ K^a_ν with ∂ from the grid derivative of K.
struct NoetherCurrent {
  std::vector<double> J;    // P × m
  ResidualReport div;       // max |∂^μ J_μ|, absolute
  ResidualReport onshell;   // max |J + ε(C A K + ½ B K K)| against ‖E‖∞ + 1e-9
};
NoetherCurrent noether_current(const GaugeConfig& cfg);

// Rectangular window [u0, u1) × [w0, w1) of cells in the lattice plane x_axis = index; the
// in-plane axes (u, w) follow (axis, u, w) cyclically.
struct ChargeWindow {
  int axis = 2, index = 0;
  int u0 = 0, u1 = 0, w0 = 0, w1 = 0;
};
ChargeWindow default_window(const Lattice3& lat, int axis = 2);

struct Charge {
  std::vector<double> surface, loop, flux;  // per generator
  ResidualReport stokes;                    // |surface − loop| ≤ 1e-10·scale
};
// K as the line density; surface = Σ of trapezoid face circulations, flux = Σ h²(∂_uK_w − ∂_wK_u).
Charge charge(const GaugeConfig& cfg, const ChargeWindow& win);
Charge charge_of(const GaugeConfig& cfg, const std::vector<double>& K, const std::vector<double>& dK,
                 const ChargeWindow& win);

// Under constant ξ, δQ = C(Q, ξ) up to the E-proportional K variation.
ResidualReport charge_covariance(const GaugeConfig& cfg, const ChargeWindow& win, const Vec& xi,
                                 double factor = 10);

struct StressTensor {
  std::vector<double> T;  // P × 3 × 3
  std::vector<ResidualReport> reports;
};
// Reports: symmetry, trace, conservation (against ‖E‖∞), off-shell divergence identity,
// gauge variation along xi (against ‖E‖∞), translation flux variation across slices.
StressTensor stress_tensor(const GaugeConfig& cfg, const JetField* xi = nullptr, double factor = 10);

// Abelian field theory with rigid parameters: δA = (C A + duB F) ξ, F = curl A.
// A order 1 (grid data is differentiated spectrally for the commutator).
std::vector<ResidualReport> rigid_symmetry_abelian(const Lattice3& lat, const LieAlgebra& alg, const AuxBracket& aux,
                                                   const JetField& A, const Vec& xi1, const Vec& xi2);

}  // namespace g3
