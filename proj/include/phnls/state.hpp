#pragma once

// Discrete fields on a periodic y-box [-L/2, L/2)^2 times a Hermite
// truncation in x, together with the norms and conserved functionals
// evaluated on them.
//
// Coefficient convention: u(y, x) = sum_{k, n} c[k, n] e^{i k.y} / L h_n(x),
// so that the mass is exactly sum |c|^2. Coefficients are stored slice-major
// (Hermite index slowest, then the two FFT indices).

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "phnls/hermite.hpp"

namespace phnls {

namespace detail {
class Fft2D;
}

class Grid {
 public:
  /// quad_count = 0 selects the default 4 * n_h.
  static std::shared_ptr<const Grid> create(int n_y, double box_len, int n_h, int quad_count = 0);

  int n_y() const { return n_y_; }
  double box_len() const { return box_len_; }
  int n_h() const { return n_h_; }
  int quad_count() const { return rule_->count; }
  std::size_t points() const { return static_cast<std::size_t>(n_y_) * n_y_; }
  std::size_t size() const { return points() * n_h_; }

  /// exp(-x^2) rule: sampling, analysis, quadratic integrals.
  const HermiteRule& rule() const { return *rule_; }
  /// exp(-2x^2) rule on the same count: quartic integrals and nonlinear terms.
  const HermiteRule& product_rule() const { return *product_rule_; }

  /// Signed Fourier mode for an FFT index.
  int signed_mode(int index) const { return index < (n_y_ + 1) / 2 ? index : index - n_y_; }
  double wavenumber(int index) const;
  double k_squared(std::size_t flat) const { return k_squared_[flat]; }
  double k_component(std::size_t flat, int axis) const;
  bool in_mask(std::size_t flat) const { return mask_[flat] != 0; }
  const std::vector<unsigned char>& dealias_mask() const { return mask_; }

  double spacing() const { return box_len_ / n_y_; }
  double cell_area() const { return spacing() * spacing(); }
  double y_coord(int j) const { return (j - n_y_ / 2) * spacing(); }

  /// Same discretization on a box of a different side length.
  std::shared_ptr<const Grid> with_box_len(double box_len) const;
  bool same_shape(const Grid& other) const;

  /// Coefficient slices -> values c_n(y_j), in place.
  void to_y_physical(std::span<cplx> data) const;
  /// Values -> coefficient slices, in place; optionally zeroes modes outside the mask.
  void to_y_spectral(std::span<cplx> data, bool apply_mask) const;

  const detail::Fft2D& fft() const { return *fft_; }

 private:
  Grid() = default;

  int n_y_ = 0;
  double box_len_ = 0.0;
  int n_h_ = 0;
  std::shared_ptr<const HermiteRule> rule_;
  std::shared_ptr<const HermiteRule> product_rule_;
  std::shared_ptr<const detail::Fft2D> fft_;
  std::vector<double> k_squared_;
  std::vector<double> sign_;
  std::vector<unsigned char> mask_;
};

using GridPtr = std::shared_ptr<const Grid>;

class Field {
 public:
  explicit Field(GridPtr grid, double time = 0.0);
  Field(GridPtr grid, std::vector<cplx> coeffs, double time);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  std::vector<cplx>& coeffs() { return coeffs_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }

  std::size_t index(int k1, int k2, int n) const {
    return (static_cast<std::size_t>(n) * grid_->n_y() + k1) * grid_->n_y() + k2;
  }
  cplx& at(int k1, int k2, int n) { return coeffs_[index(k1, k2, n)]; }
  cplx at(int k1, int k2, int n) const { return coeffs_[index(k1, k2, n)]; }

  /// Slice n occupies [n * points, (n + 1) * points).
  std::span<cplx> slice(int n) { return {coeffs_.data() + n * grid_->points(), grid_->points()}; }
  std::span<const cplx> slice(int n) const { return {coeffs_.data() + n * grid_->points(), grid_->points()}; }

  bool all_finite() const;

 private:
  GridPtr grid_;
  std::vector<cplx> coeffs_;
  double time_ = 0.0;
};

using Sampler = std::function<cplx(double y1, double y2, double x)>;

/// Samples f on the y-grid times the nodes of grid.rule(), then transforms.
Field from_sampler(GridPtr grid, const Sampler& f);

/// Values at (x_m, y_j), stored [m][j1][j2], for the given rule of the grid.
std::vector<cplx> to_physical(const Field& field, const HermiteRule& rule);
Field from_physical(std::span<const cplx> values, GridPtr grid, const HermiteRule& rule);

/// Hermite slices c_n(y_j), stored [n][j1][j2].
std::vector<cplx> hermite_slices(const Field& field);
Field from_hermite_slices(std::vector<cplx> slices, GridPtr grid, bool apply_mask);

void apply_dealias(Field& field);

/// sum |c|^2.
double mass(const Field& field);
/// Integral of |u|^2 by quadrature on the physical grid.
double physical_mass(const Field& field);
/// Integral of |u|^4 on the product rule.
double quartic_integral(const Field& field);

/// 1/2 sum (|k|^2 + 2n + 1)|c|^2 + nonlinearity/4 * integral |u|^4.
double energy_pnls(const Field& field, double nonlinearity = 1.0);

double l2h1_norm(const Field& field);
double kinetic_e0(const Field& field);
/// Equivalent spectral form: weights |k|^2 + (2n + 1) + 1.
double sigma_norm(const Field& field);
double hs_mixed_norm(const Field& field, double s);
/// Integral over y of (sum_n |c_n(y)|^2)^2.
double l4_y_integrand(const Field& field);

double l2h1_distance(const Field& a, const Field& b);
double sigma_distance(const Field& a, const Field& b);

struct NormReport {
  double mass = 0.0;
  double energy = 0.0;
  double sigma = 0.0;
  double l2h1 = 0.0;
  double kinetic_e0 = 0.0;
  double l4_integrand = 0.0;
  double eps0 = 0.25;
  double h1_minus_eps0 = 0.0;
};

NormReport norm_report(const Field& field, double eps0 = 0.25);

// Binary snapshot: "PHN1" | u32 version | u32 n_y | u32 n_h | f64 L | f64 t |
// coefficients as (re, im) f64 pairs, k1 slowest, then k2, then n fastest.
// All little-endian.
inline constexpr std::uint32_t kSnapshotVersion = 1;

std::vector<unsigned char> encode_snapshot(const Field& field);
/// quad_count = 0 selects the grid default.
Field decode_snapshot(std::span<const unsigned char> bytes, int quad_count = 0);
void write_snapshot(const Field& field, const std::string& path);
Field read_snapshot(const std::string& path, int quad_count = 0);

}  // namespace phnls
