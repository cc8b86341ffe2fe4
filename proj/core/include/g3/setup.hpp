#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "g3/gauge_config.hpp"

namespace g3 {

// Named aux-bracket recipes shared by the CLI, tests and benchmarks.
//   none  zero bracket (plain YM)
//   v     su2 with a seeded random unit v
//   ccv   C·C·v with a seeded random unit v
//   pair  first commuting pair of the algebra
//   pair-sum (or sum)  disjoint consecutive pairs of the Cartan hints
enum class AuxKind { None, V, Ccv, Pair, Sum };
AuxKind parse_aux_kind(std::string_view s);
const char* to_string(AuxKind k);

// scale multiplies v (or the v of every pair), so B is linear in it.
AuxBracket make_aux(const LieAlgebra& alg, AuxKind kind, std::uint64_t seed, double scale = 1.0);

// Guarded amplitude: min(guard_amplitude, cap).
double default_amplitude(const Theory& th, double cap = 0.5);

// Random band-limited configuration, |k_i| <= cutoff. Throws SingularY when amp exceeds the guard amplitude.
GaugeConfig random_config(std::shared_ptr<const Theory> th, const Lattice3& lat, std::uint64_t seed, double amp,
                          int cutoff = 1);

// Random Lie-valued gauge parameter with second-order jets.
JetField random_parameter(const LieAlgebra& alg, const Lattice3& lat, std::uint64_t seed, double amp, int cutoff = 1);

}  // namespace g3
