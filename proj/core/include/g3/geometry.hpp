#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace g3 {

class LieAlgebra;

enum class Signature { Euclidean, Lorentzian };
enum class DerivMode { Spectral, Central2, Central4 };

const char* to_string(Signature s);
const char* to_string(DerivMode m);
Signature parse_signature(const std::string& s);
DerivMode parse_deriv_mode(const std::string& s);

struct Metric3 {
  Signature signature = Signature::Euclidean;
  Eigen::Matrix3d eta = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d eta_inv = Eigen::Matrix3d::Identity();
  double eps_low[3][3][3] = {};  // ε_{μνσ}, ε_{123} = +sqrt|det η|
  double cross[3][3][3] = {};    // ε_σ^{μν} = ε_{σαβ} η^{μα} η^{νβ}, stored cross[σ][μ][ν]

  static Metric3 make(Signature s);
};

// Symmetric second-derivative slots: 00 01 02 11 12 22.
inline constexpr int sym_index(int s, int r) {
  if (s > r) std::swap(s, r);
  return s == 0 ? r : (s == 1 ? 2 + r : 5);
}

class Lattice3 {
 public:
  Lattice3(int N, Signature sig, DerivMode mode);

  int N() const { return N_; }
  double h() const { return h_; }
  const Metric3& metric() const { return metric_; }
  DerivMode deriv_mode() const { return mode_; }
  std::size_t points() const { return static_cast<std::size_t>(N_) * N_ * N_; }
  std::size_t index(int i, int j, int k) const {
    auto w = [this](int x) { return ((x % N_) + N_) % N_; };
    return (static_cast<std::size_t>(w(i)) * N_ + w(j)) * N_ + w(k);
  }
  std::array<double, 3> coord(std::size_t p) const;
  double cell_volume() const { return h_ * h_ * h_; }
  double volume() const { return cell_volume() * static_cast<double>(points()); }
  Lattice3 with_mode(DerivMode m) const { return Lattice3(N_, metric_.signature, m); }

 private:
  int N_;
  double h_;
  Metric3 metric_;
  DerivMode mode_;
};

// TooSmall when N < 8.
Lattice3 make_lattice(int N, Signature sig = Signature::Euclidean, DerivMode mode = DerivMode::Spectral);

// Compensated sum times h^3.
double integrate(const Lattice3& lat, std::span<const double> f);
double neumaier_sum(std::span<const double> f);

// Values and derivatives of `comps` real fields, point-major then component.
class JetField {
 public:
  JetField() = default;
  JetField(std::size_t points, int comps, int order)
      : points_(points), comps_(comps), order_(order),
        val_(points * comps, 0.0), d1_(order >= 1 ? points * comps * 3 : 0, 0.0),
        d2_(order >= 2 ? points * comps * 6 : 0, 0.0) {}

  std::size_t points() const { return points_; }
  int comps() const { return comps_; }
  int order() const { return order_; }

  double& v(std::size_t p, int c) { return val_[p * comps_ + c]; }
  double v(std::size_t p, int c) const { return val_[p * comps_ + c]; }
  double& d(std::size_t p, int c, int s) { return d1_[(p * comps_ + c) * 3 + s]; }
  double d(std::size_t p, int c, int s) const { return d1_[(p * comps_ + c) * 3 + s]; }
  double& dd(std::size_t p, int c, int slot) { return d2_[(p * comps_ + c) * 6 + slot]; }
  double dd(std::size_t p, int c, int slot) const { return d2_[(p * comps_ + c) * 6 + slot]; }

  const double* val_at(std::size_t p) const { return val_.data() + p * comps_; }
  const double* d1_at(std::size_t p) const { return d1_.data() + p * comps_ * 3; }
  const double* d2_at(std::size_t p) const { return d2_.data() + p * comps_ * 6; }
  double* val_at(std::size_t p) { return val_.data() + p * comps_; }
  double* d1_at(std::size_t p) { return d1_.data() + p * comps_ * 3; }
  double* d2_at(std::size_t p) { return d2_.data() + p * comps_ * 6; }

  std::vector<double>& values() { return val_; }
  const std::vector<double>& values() const { return val_; }
  std::vector<double>& first() { return d1_; }
  const std::vector<double>& first() const { return d1_; }
  std::vector<double>& second() { return d2_; }
  const std::vector<double>& second() const { return d2_; }

 private:
  std::size_t points_ = 0;
  int comps_ = 0;
  int order_ = 0;
  std::vector<double> val_, d1_, d2_;
};

struct Mode {
  std::array<int, 3> k{};
  double c = 0, s = 0;  // c cos(k·x) + s sin(k·x)
};

// Trigonometric polynomials with analytic derivatives, one mode list per component.
class ModeField {
 public:
  explicit ModeField(int comps = 0) : series_(comps) {}

  int comps() const { return static_cast<int>(series_.size()); }
  std::vector<Mode>& modes(int c) { return series_[c]; }
  const std::vector<Mode>& modes(int c) const { return series_[c]; }
  int max_wavevector() const;

  double value(int c, const std::array<double, 3>& x) const;
  ModeField scaled(double s) const;
  // Exact jets at the grid points; TooSmall when a wavevector exceeds N/3.
  JetField sample(const Lattice3& lat, int order) const;

 private:
  std::vector<std::vector<Mode>> series_;
};

// Gauge potential modes with wavevectors |k_i| <= cutoff and sup|A^a_μ| <= amplitude.
// Component index is a*3 + μ.
ModeField random_gauge_modes(const LieAlgebra& alg, std::uint64_t seed, int cutoff, double amplitude);
// Scalar-per-generator modes (component a), same normalization.
ModeField random_lie_modes(int n, std::uint64_t seed, int cutoff, double amplitude);

using Spectrum = std::vector<std::complex<double>>;

// Periodic derivatives on the lattice. Spectral mode differentiates the trigonometric
// interpolant with the Nyquist mode dropped; FD modes use central stencils.
class GridDerivative {
 public:
  explicit GridDerivative(const Lattice3& lat);
  ~GridDerivative();
  GridDerivative(const GridDerivative&) = delete;
  GridDerivative& operator=(const GridDerivative&) = delete;

  const Lattice3& lattice() const { return lat_; }
  void derivative(const double* f, int comps, int axis, double* out) const;
  std::vector<double> derivative(const std::vector<double>& f, int comps, int axis) const;
  JetField jets(const std::vector<double>& f, int comps, int order) const;

  // r2c layout: ((i*N + j)*(N/2+1) + k)*comps + c
  std::size_t spectrum_points() const { return static_cast<std::size_t>(lat_.N()) * lat_.N() * (lat_.N() / 2 + 1); }
  Spectrum forward(const double* f, int comps) const;
  std::vector<double> inverse(const Spectrum& s, int comps) const;  // includes 1/N^3
  // Wavenumber used by the spectral derivative for spectrum point q (Nyquist -> 0).
  std::array<double, 3> wavenumber(std::size_t q) const;
  // True wavenumber magnitude squared, ignoring the Nyquist convention.
  double wavenumber_sq_raw(std::size_t q) const;

 private:
  struct Plans;
  Plans& plans(int comps) const;
  void stencil(const double* f, int comps, int axis, double* out) const;

  Lattice3 lat_;
  mutable std::mutex mu_;
  mutable std::map<int, std::unique_ptr<Plans>> plans_;
};

}  // namespace g3
