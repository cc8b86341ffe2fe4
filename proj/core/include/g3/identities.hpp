#pragma once

#include <vector>

#include "g3/gauge_config.hpp"
#include "g3/report.hpp"

namespace g3 {

// Gauge parameters ξ^a are JetFields with n components (order 2 unless noted).

// max over points of the row-sum norm of Y⁻¹
double yinv_row_norm(const Evaluation& ev);

// δA = ∂ξ + (C A + duB K) ξ with first derivatives by the chain rule.
JetField gauge_variation_jet(const GaugeConfig& cfg, const Evaluation& ev, const JetField& xi);
std::vector<double> gauge_variation(const GaugeConfig& cfg, const JetField& xi);

// Relative residuals (scale = largest term magnitude), tolerance given by the caller.
ResidualReport k_relation_report(const GaugeConfig& cfg, double tol = 1e-12);
ResidualReport lagrangian_forms_report(const GaugeConfig& cfg, double tol = 1e-12);
ResidualReport bianchi_residual(const GaugeConfig& cfg, double tol = 1e-10);
ResidualReport k_variation_residual(const GaugeConfig& cfg, const JetField& xi, double tol = 1e-10);
ResidualReport commutator_residual(const GaugeConfig& cfg, const JetField& xi1, const JetField& xi2, double tol = 1e-10);

// On-shell forms: δK − [K,ξ] and [δ1,δ2]A − δ3A measured against c·‖E‖∞ bounds.
ResidualReport k_rotation_onshell(const GaugeConfig& cfg, const JetField& xi, double factor = 10);
ResidualReport closure_onshell(const GaugeConfig& cfg, const JetField& xi1, const JetField& xi2, double factor = 10);

// |∫ k η E·δA_ξ| against n·max|k|·‖E‖₂‖δA‖₂.
ResidualReport noether_identity(const GaugeConfig& cfg, const JetField& xi, double tol = 1e-8);

// Pair-built aux brackets only: V vs duB, covariant E, covariant differential identity, V antisymmetry.
std::vector<ResidualReport> covariant_general_residuals(const GaugeConfig& cfg, double tol = 1e-12);

// Pointwise Bianchi-type left-hand side without the E term, per point and generator (P × n).
std::vector<double> bianchi_lhs(const GaugeConfig& cfg, const Evaluation& ev);

}  // namespace g3
