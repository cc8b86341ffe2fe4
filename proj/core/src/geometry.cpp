#include "g3/geometry.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <random>

#include "g3/error.hpp"
#include "g3/lie_algebra.hpp"

namespace g3 {

const char* to_string(Signature s) { return s == Signature::Euclidean ? "euclid" : "lorentz"; }

const char* to_string(DerivMode m) {
  switch (m) {
    case DerivMode::Spectral: return "spectral";
    case DerivMode::Central2: return "central-2";
    case DerivMode::Central4: return "central-4";
  }
  return "spectral";
}

Signature parse_signature(const std::string& s) {
  if (s == "euclid" || s == "euclidean") return Signature::Euclidean;
  if (s == "lorentz" || s == "lorentzian") return Signature::Lorentzian;
  throw Error(ErrorCode::ConfigError, "unknown signature '" + s + "'");
}

DerivMode parse_deriv_mode(const std::string& s) {
  if (s == "spectral") return DerivMode::Spectral;
  if (s == "central-2") return DerivMode::Central2;
  if (s == "central-4") return DerivMode::Central4;
  throw Error(ErrorCode::ConfigError, "unknown derivative mode '" + s + "'");
}

Metric3 Metric3::make(Signature s) {
  Metric3 m;
  m.signature = s;
  m.eta = Eigen::Matrix3d::Identity();
  if (s == Signature::Lorentzian) m.eta(0, 0) = -1;
  m.eta_inv = m.eta.inverse();
  const double vol = std::sqrt(std::abs(m.eta.determinant()));
  const int perm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
  for (int p = 0; p < 6; ++p) m.eps_low[perm[p][0]][perm[p][1]][perm[p][2]] = (p < 3 ? 1.0 : -1.0) * vol;
  for (int s3 = 0; s3 < 3; ++s3)
    for (int mu = 0; mu < 3; ++mu)
      for (int nu = 0; nu < 3; ++nu) {
        double acc = 0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) acc += m.eps_low[s3][a][b] * m.eta_inv(mu, a) * m.eta_inv(nu, b);
        m.cross[s3][mu][nu] = acc;
      }
  return m;
}

Lattice3::Lattice3(int N, Signature sig, DerivMode mode)
    : N_(N), h_(2 * std::numbers::pi / N), metric_(Metric3::make(sig)), mode_(mode) {
  if (N < 8) throw Error(ErrorCode::TooSmall, "N = " + std::to_string(N) + " < 8");
}

std::array<double, 3> Lattice3::coord(std::size_t p) const {
  const std::size_t n = N_;
  return {h_ * static_cast<double>(p / (n * n)), h_ * static_cast<double>((p / n) % n), h_ * static_cast<double>(p % n)};
}

Lattice3 make_lattice(int N, Signature sig, DerivMode mode) { return Lattice3(N, sig, mode); }

double neumaier_sum(std::span<const double> f) {
  double sum = 0, comp = 0;
  for (double x : f) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) comp += (sum - t) + x;
    else comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double integrate(const Lattice3& lat, std::span<const double> f) { return neumaier_sum(f) * lat.cell_volume(); }

int ModeField::max_wavevector() const {
  int m = 0;
  for (const auto& s : series_)
    for (const Mode& md : s)
      for (int k : md.k) m = std::max(m, std::abs(k));
  return m;
}

double ModeField::value(int c, const std::array<double, 3>& x) const {
  double r = 0;
  for (const Mode& md : series_[c]) {
    const double t = md.k[0] * x[0] + md.k[1] * x[1] + md.k[2] * x[2];
    r += md.c * std::cos(t) + md.s * std::sin(t);
  }
  return r;
}

ModeField ModeField::scaled(double s) const {
  ModeField out = *this;
  for (auto& ser : out.series_)
    for (Mode& md : ser) {
      md.c *= s;
      md.s *= s;
    }
  return out;
}

JetField ModeField::sample(const Lattice3& lat, int order) const {
  if (3 * max_wavevector() > lat.N())
    throw Error(ErrorCode::TooSmall, "wavevector above N/3 for N = " + std::to_string(lat.N()));
  const std::size_t P = lat.points();
  JetField out(P, comps(), order);
  for (std::size_t p = 0; p < P; ++p) {
    const auto x = lat.coord(p);
    for (int c = 0; c < comps(); ++c)
      for (const Mode& md : series_[c]) {
        const double t = md.k[0] * x[0] + md.k[1] * x[1] + md.k[2] * x[2];
        const double cs = std::cos(t), sn = std::sin(t);
        const double f = md.c * cs + md.s * sn;
        const double g = -md.c * sn + md.s * cs;
        out.v(p, c) += f;
        if (order >= 1)
          for (int s = 0; s < 3; ++s) out.d(p, c, s) += md.k[s] * g;
        if (order >= 2)
          for (int s = 0; s < 3; ++s)
            for (int r = s; r < 3; ++r) out.dd(p, c, sym_index(s, r)) -= md.k[s] * md.k[r] * f;
      }
  }
  return out;
}

namespace {

std::vector<std::array<int, 3>> half_space_modes(int cutoff) {
  std::vector<std::array<int, 3>> ks;
  for (int a = -cutoff; a <= cutoff; ++a)
    for (int b = -cutoff; b <= cutoff; ++b)
      for (int c = -cutoff; c <= cutoff; ++c) {
        const bool positive = a > 0 || (a == 0 && (b > 0 || (b == 0 && c >= 0)));
        if (positive) ks.push_back({a, b, c});
      }
  return ks;
}

}  // namespace

ModeField random_lie_modes(int comps, std::uint64_t seed, int cutoff, double amplitude) {
  if (cutoff < 0) throw Error(ErrorCode::ConfigError, "negative mode cutoff");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  const auto ks = half_space_modes(cutoff);
  ModeField f(comps);
  for (int c = 0; c < comps; ++c) {
    double norm = 0;
    for (const auto& k : ks) {
      Mode md{k, ud(rng), ud(rng)};
      if (k == std::array<int, 3>{0, 0, 0}) md.s = 0;
      norm += std::hypot(md.c, md.s);
      f.modes(c).push_back(md);
    }
    const double scale = norm > 0 ? amplitude / norm : 0.0;
    for (Mode& md : f.modes(c)) {
      md.c *= scale;
      md.s *= scale;
    }
  }
  return f;
}

ModeField random_gauge_modes(const LieAlgebra& alg, std::uint64_t seed, int cutoff, double amplitude) {
  return random_lie_modes(3 * alg.dim(), seed, cutoff, amplitude);
}

struct GridDerivative::Plans {
  int comps = 0;
  fftw_plan fwd = nullptr, bwd = nullptr;
  ~Plans() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

namespace {
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

GridDerivative::GridDerivative(const Lattice3& lat) : lat_(lat) {}
GridDerivative::~GridDerivative() {
  std::lock_guard<std::mutex> g(fftw_planner_mutex());
  plans_.clear();
}

GridDerivative::Plans& GridDerivative::plans(int comps) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = plans_.find(comps);
  if (it != plans_.end()) return *it->second;
  std::lock_guard<std::mutex> g(fftw_planner_mutex());
  auto pl = std::make_unique<Plans>();
  pl->comps = comps;
  const int N = lat_.N();
  int dims[3] = {N, N, N};
  std::vector<double> r(lat_.points() * comps);
  std::vector<std::complex<double>> s(spectrum_points() * comps);
  auto* sc = reinterpret_cast<fftw_complex*>(s.data());
  pl->fwd = fftw_plan_many_dft_r2c(3, dims, comps, r.data(), nullptr, comps, 1, sc, nullptr, comps, 1,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  pl->bwd = fftw_plan_many_dft_c2r(3, dims, comps, sc, nullptr, comps, 1, r.data(), nullptr, comps, 1,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  auto& ref = *pl;
  plans_.emplace(comps, std::move(pl));
  return ref;
}

Spectrum GridDerivative::forward(const double* f, int comps) const {
  Plans& pl = plans(comps);
  std::vector<double> in(f, f + lat_.points() * comps);
  Spectrum out(spectrum_points() * comps);
  fftw_execute_dft_r2c(pl.fwd, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> GridDerivative::inverse(const Spectrum& s, int comps) const {
  Plans& pl = plans(comps);
  Spectrum in = s;
  std::vector<double> out(lat_.points() * comps);
  fftw_execute_dft_c2r(pl.bwd, reinterpret_cast<fftw_complex*>(in.data()), out.data());
  const double inv = 1.0 / static_cast<double>(lat_.points());
  for (double& x : out) x *= inv;
  return out;
}

std::array<double, 3> GridDerivative::wavenumber(std::size_t q) const {
  const int N = lat_.N(), H = N / 2 + 1;
  const int k = static_cast<int>(q % H);
  const int j = static_cast<int>((q / H) % N);
  const int i = static_cast<int>(q / (static_cast<std::size_t>(H) * N));
  auto w = [N](int x) -> double {
    if (2 * x == N) return 0.0;
    return x < N / 2 + (N % 2) ? x : x - N;
  };
  return {w(i), w(j), w(k)};
}

double GridDerivative::wavenumber_sq_raw(std::size_t q) const {
  const int N = lat_.N(), H = N / 2 + 1;
  const int k = static_cast<int>(q % H);
  const int j = static_cast<int>((q / H) % N);
  const int i = static_cast<int>(q / (static_cast<std::size_t>(H) * N));
  auto w = [N](int x) -> double { return 2 * x <= N ? x : x - N; };
  return w(i) * w(i) + w(j) * w(j) + w(k) * w(k);
}

void GridDerivative::stencil(const double* f, int comps, int axis, double* out) const {
  const int N = lat_.N();
  const double h = lat_.h();
  const bool four = lat_.deriv_mode() == DerivMode::Central4;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        int o[3] = {0, 0, 0};
        auto at = [&](int shift) {
          o[axis] = shift;
          return lat_.index(i + o[0], j + o[1], k + o[2]);
        };
        const std::size_t p = lat_.index(i, j, k);
        const std::size_t p1 = at(1), m1 = at(-1);
        if (four) {
          const std::size_t p2 = at(2), m2 = at(-2);
          for (int c = 0; c < comps; ++c)
            out[p * comps + c] = (-f[p2 * comps + c] + 8 * f[p1 * comps + c] - 8 * f[m1 * comps + c] + f[m2 * comps + c]) /
                                 (12 * h);
        } else {
          for (int c = 0; c < comps; ++c) out[p * comps + c] = (f[p1 * comps + c] - f[m1 * comps + c]) / (2 * h);
        }
      }
}

void GridDerivative::derivative(const double* f, int comps, int axis, double* out) const {
  if (lat_.deriv_mode() != DerivMode::Spectral) {
    stencil(f, comps, axis, out);
    return;
  }
  Spectrum s = forward(f, comps);
  const std::size_t Q = spectrum_points();
  for (std::size_t q = 0; q < Q; ++q) {
    const double k = wavenumber(q)[axis];
    for (int c = 0; c < comps; ++c) s[q * comps + c] *= std::complex<double>(0, k);
  }
  const auto r = inverse(s, comps);
  std::copy(r.begin(), r.end(), out);
}

std::vector<double> GridDerivative::derivative(const std::vector<double>& f, int comps, int axis) const {
  std::vector<double> out(f.size());
  derivative(f.data(), comps, axis, out.data());
  return out;
}

JetField GridDerivative::jets(const std::vector<double>& f, int comps, int order) const {
  const std::size_t P = lat_.points();
  if (f.size() != P * comps) throw Error(ErrorCode::DimensionMismatch, "grid field size");
  JetField out(P, comps, order);
  out.values() = f;
  if (order == 0) return out;
  std::vector<std::vector<double>> d1(3);
  if (lat_.deriv_mode() == DerivMode::Spectral) {
    const Spectrum s = forward(f.data(), comps);
    const std::size_t Q = spectrum_points();
    Spectrum t(s.size());
    for (int a = 0; a < 3; ++a) {
      for (std::size_t q = 0; q < Q; ++q) {
        const std::complex<double> m(0, wavenumber(q)[a]);
        for (int c = 0; c < comps; ++c) t[q * comps + c] = s[q * comps + c] * m;
      }
      d1[a] = inverse(t, comps);
    }
    if (order >= 2)
      for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) {
          for (std::size_t q = 0; q < Q; ++q) {
            const auto k = wavenumber(q);
            const double m = -k[a] * k[b];
            for (int c = 0; c < comps; ++c) t[q * comps + c] = s[q * comps + c] * m;
          }
          const auto r = inverse(t, comps);
          for (std::size_t p = 0; p < P; ++p)
            for (int c = 0; c < comps; ++c) out.dd(p, c, sym_index(a, b)) = r[p * comps + c];
        }
  } else {
    for (int a = 0; a < 3; ++a) d1[a] = derivative(f, comps, a);
    if (order >= 2)
      for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) {
          const auto r = derivative(d1[b], comps, a);
          for (std::size_t p = 0; p < P; ++p)
            for (int c = 0; c < comps; ++c) out.dd(p, c, sym_index(a, b)) = r[p * comps + c];
        }
  }
  for (int a = 0; a < 3; ++a)
    for (std::size_t p = 0; p < P; ++p)
      for (int c = 0; c < comps; ++c) out.d(p, c, a) = d1[a][p * comps + c];
  return out;
}

}  // namespace g3
