#include "g3/setup.hpp"

#include <random>

#include "g3/error.hpp"

namespace g3 {

AuxKind parse_aux_kind(std::string_view s) {
  if (s == "none") return AuxKind::None;
  if (s == "v") return AuxKind::V;
  if (s == "ccv") return AuxKind::Ccv;
  if (s == "pair") return AuxKind::Pair;
  if (s == "sum" || s == "pair-sum") return AuxKind::Sum;
  throw Error(ErrorCode::ConfigError, "unknown aux kind '" + std::string(s) + "'");
}

const char* to_string(AuxKind k) {
  switch (k) {
    case AuxKind::None: return "none";
    case AuxKind::V: return "v";
    case AuxKind::Ccv: return "ccv";
    case AuxKind::Pair: return "pair";
    case AuxKind::Sum: return "pair-sum";
  }
  return "?";
}

namespace {

Vec random_unit(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5eedULL);
  std::normal_distribution<double> nd;
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = nd(rng);
  return v.normalized();
}

}  // namespace

AuxBracket make_aux(const LieAlgebra& alg, AuxKind kind, std::uint64_t seed, double scale) {
  const int n = alg.dim();
  switch (kind) {
    case AuxKind::None:
      return AuxBracket(alg, Tensor3(n), Provenance::Raw);
    case AuxKind::V:
      return build_aux_su2(alg, scale * random_unit(n, seed));
    case AuxKind::Ccv:
      return build_aux_ccv(alg, scale * random_unit(n, seed));
    case AuxKind::Pair: {
      auto [u, v] = commuting_pair(alg);
      return build_aux_pair(alg, make_commuting_pair(alg, u, scale * v));
    }
    case AuxKind::Sum: {
      const auto& h = alg.cartan_hints();
      if (h.size() < 2) throw Error(ErrorCode::RankTooLow, alg.label() + " has fewer than two Cartan hints");
      std::vector<CommutingPair> pairs;
      for (std::size_t i = 0; i + 1 < h.size(); i += 2)
        pairs.push_back(make_commuting_pair(alg, h[i].normalized(), scale * h[i + 1].normalized()));
      return build_aux_sum(alg, pairs);
    }
  }
  throw Error(ErrorCode::ConfigError, "bad aux kind");
}

double default_amplitude(const Theory& th, double cap) { return std::min(th.guard_amplitude(), cap); }

GaugeConfig random_config(std::shared_ptr<const Theory> th, const Lattice3& lat, std::uint64_t seed, double amp,
                          int cutoff) {
  if (amp > th->guard_amplitude())
    throw Error(ErrorCode::SingularY, "amplitude " + std::to_string(amp) + " exceeds the guard amplitude " +
                                          std::to_string(th->guard_amplitude()));
  const ModeField modes = random_gauge_modes(th->alg(), seed, cutoff, amp);
  return GaugeConfig::from_modes(std::move(th), lat, modes);
}

JetField random_parameter(const LieAlgebra& alg, const Lattice3& lat, std::uint64_t seed, double amp, int cutoff) {
  return random_lie_modes(alg.dim(), seed, cutoff, amp).sample(lat, 2);
}

}  // namespace g3
