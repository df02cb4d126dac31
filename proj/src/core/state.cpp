#include "phnls/state.hpp"

#include <Eigen/Core>
#include <cmath>
#include <string>

#include "fft.hpp"

namespace phnls {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// values (M x 2P, real view) = basis (M x n_h) * slices (n_h x 2P, real view).
void synthesize_slices(const HermiteRule& rule, std::size_t points, const cplx* slices, cplx* values) {
  Eigen::Map<const RowMat> basis(rule.basis.data(), rule.count, rule.n_h);
  Eigen::Map<const RowMat> s(reinterpret_cast<const double*>(slices), rule.n_h, 2 * points);
  Eigen::Map<RowMat> v(reinterpret_cast<double*>(values), rule.count, 2 * points);
  v.noalias() = basis * s;
}

void analyze_values(const HermiteRule& rule, std::size_t points, const cplx* values, cplx* slices) {
  RowMat weighted(rule.n_h, rule.count);
  for (int n = 0; n < rule.n_h; ++n)
    for (int m = 0; m < rule.count; ++m) weighted(n, m) = rule.transform_weights[m] * rule.basis_at(m, n);
  Eigen::Map<const RowMat> v(reinterpret_cast<const double*>(values), rule.count, 2 * points);
  Eigen::Map<RowMat> s(reinterpret_cast<double*>(slices), rule.n_h, 2 * points);
  s.noalias() = weighted * v;
}

void check_rule(const Grid& grid, const HermiteRule& rule) {
  if (rule.n_h != grid.n_h())
    fail(ErrorCode::invalid_argument, "rule truncation " + std::to_string(rule.n_h) +
                                          " does not match grid n_h " + std::to_string(grid.n_h()));
}

}  // namespace

std::shared_ptr<const Grid> Grid::create(int n_y, double box_len, int n_h, int quad_count) {
  if (!is_power_of_two(n_y)) fail(ErrorCode::invalid_argument, "n_y must be a power of two");
  if (!(box_len > 0.0) || !std::isfinite(box_len))
    fail(ErrorCode::invalid_argument, "box_len must be positive and finite");
  if (n_h < 1) fail(ErrorCode::invalid_argument, "n_h must be positive");
  if (quad_count == 0) quad_count = 4 * n_h;
  if (quad_count < 2 * n_h)
    fail(ErrorCode::invalid_argument, "quad_count " + std::to_string(quad_count) +
                                          " too small: n_h = " + std::to_string(n_h) +
                                          " requires at least " + std::to_string(2 * n_h));

  std::shared_ptr<Grid> g(new Grid());
  g->n_y_ = n_y;
  g->box_len_ = box_len;
  g->n_h_ = n_h;
  g->rule_ = std::make_shared<const HermiteRule>(build_quadrature(quad_count, n_h));
  g->product_rule_ = std::make_shared<const HermiteRule>(build_product_quadrature(quad_count, n_h));
  g->fft_ = std::make_shared<const detail::Fft2D>(n_y);

  const std::size_t p = g->points();
  g->k_squared_.resize(p);
  g->sign_.resize(p);
  g->mask_.resize(p);
  for (int a = 0; a < n_y; ++a) {
    for (int b = 0; b < n_y; ++b) {
      const std::size_t flat = static_cast<std::size_t>(a) * n_y + b;
      const double ka = g->wavenumber(a), kb = g->wavenumber(b);
      g->k_squared_[flat] = ka * ka + kb * kb;
      g->sign_[flat] = ((a + b) % 2 == 0) ? 1.0 : -1.0;
      const int ma = std::abs(g->signed_mode(a)), mb = std::abs(g->signed_mode(b));
      g->mask_[flat] = (3 * ma <= n_y && 3 * mb <= n_y) ? 1 : 0;
    }
  }
  return g;
}

double Grid::wavenumber(int index) const { return 2.0 * kPi * signed_mode(index) / box_len_; }

double Grid::k_component(std::size_t flat, int axis) const {
  const int idx = axis == 0 ? static_cast<int>(flat / n_y_) : static_cast<int>(flat % n_y_);
  return wavenumber(idx);
}

std::shared_ptr<const Grid> Grid::with_box_len(double box_len) const {
  if (!(box_len > 0.0) || !std::isfinite(box_len))
    fail(ErrorCode::invalid_argument, "box_len must be positive and finite");
  std::shared_ptr<Grid> g(new Grid(*this));
  g->box_len_ = box_len;
  for (int a = 0; a < n_y_; ++a)
    for (int b = 0; b < n_y_; ++b) {
      const double ka = g->wavenumber(a), kb = g->wavenumber(b);
      g->k_squared_[static_cast<std::size_t>(a) * n_y_ + b] = ka * ka + kb * kb;
    }
  return g;
}

bool Grid::same_shape(const Grid& other) const {
  return n_y_ == other.n_y_ && n_h_ == other.n_h_ && quad_count() == other.quad_count();
}

void Grid::to_y_physical(std::span<cplx> data) const {
  const std::size_t p = points();
  const int slices = static_cast<int>(data.size() / p);
  for (int s = 0; s < slices; ++s)
    for (std::size_t i = 0; i < p; ++i) data[s * p + i] *= sign_[i];
  fft_->inverse(data.data(), slices);
  const double scale = 1.0 / box_len_;
  for (auto& v : data) v *= scale;
}

void Grid::to_y_spectral(std::span<cplx> data, bool apply_mask) const {
  const std::size_t p = points();
  const int slices = static_cast<int>(data.size() / p);
  fft_->forward(data.data(), slices);
  const double scale = box_len_ / static_cast<double>(p);
  for (int s = 0; s < slices; ++s)
    for (std::size_t i = 0; i < p; ++i) {
      cplx& v = data[s * p + i];
      v = (apply_mask && !mask_[i]) ? cplx(0.0) : v * (sign_[i] * scale);
    }
}

Field::Field(GridPtr grid, double time) : grid_(std::move(grid)), time_(time) {
  require(grid_ != nullptr, "Field requires a grid");
  coeffs_.assign(grid_->size(), cplx(0.0));
}

Field::Field(GridPtr grid, std::vector<cplx> coeffs, double time)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)), time_(time) {
  require(grid_ != nullptr, "Field requires a grid");
  if (coeffs_.size() != grid_->size())
    fail(ErrorCode::invalid_argument, "coefficient array has " + std::to_string(coeffs_.size()) +
                                          " entries, grid expects " + std::to_string(grid_->size()));
}

bool Field::all_finite() const {
  for (const auto& c : coeffs_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

Field from_sampler(GridPtr grid, const Sampler& f) {
  const HermiteRule& rule = grid->rule();
  const int n = grid->n_y();
  const std::size_t p = grid->points();
  std::vector<cplx> values(static_cast<std::size_t>(rule.count) * p);
  for (int m = 0; m < rule.count; ++m) {
    const double x = rule.nodes[m];
    for (int a = 0; a < n; ++a) {
      const double y1 = grid->y_coord(a);
      for (int b = 0; b < n; ++b) {
        const double y2 = grid->y_coord(b);
        const cplx v = f(y1, y2, x);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          fail(ErrorCode::invalid_argument, "non-finite sample at y = (" + std::to_string(y1) + ", " +
                                                std::to_string(y2) + "), x = " + std::to_string(x));
        values[m * p + static_cast<std::size_t>(a) * n + b] = v;
      }
    }
  }
  return from_physical(values, grid, rule);
}

std::vector<cplx> hermite_slices(const Field& field) {
  std::vector<cplx> slices = field.coeffs();
  field.grid().to_y_physical(slices);
  return slices;
}

Field from_hermite_slices(std::vector<cplx> slices, GridPtr grid, bool apply_mask) {
  grid->to_y_spectral(slices, apply_mask);
  return Field(std::move(grid), std::move(slices), 0.0);
}

std::vector<cplx> to_physical(const Field& field, const HermiteRule& rule) {
  check_rule(field.grid(), rule);
  const std::size_t p = field.grid().points();
  std::vector<cplx> slices = hermite_slices(field);
  std::vector<cplx> values(static_cast<std::size_t>(rule.count) * p);
  synthesize_slices(rule, p, slices.data(), values.data());
  return values;
}

Field from_physical(std::span<const cplx> values, GridPtr grid, const HermiteRule& rule) {
  check_rule(*grid, rule);
  const std::size_t p = grid->points();
  if (values.size() != static_cast<std::size_t>(rule.count) * p)
    fail(ErrorCode::invalid_argument, "physical array size does not match grid and rule");
  std::vector<cplx> slices(static_cast<std::size_t>(rule.n_h) * p);
  analyze_values(rule, p, values.data(), slices.data());
  return from_hermite_slices(std::move(slices), std::move(grid), false);
}

void apply_dealias(Field& field) {
  const Grid& g = field.grid();
  const std::size_t p = g.points();
  for (int n = 0; n < g.n_h(); ++n)
    for (std::size_t i = 0; i < p; ++i)
      if (!g.in_mask(i)) field.coeffs()[n * p + i] = cplx(0.0);
}

double mass(const Field& field) {
  double s = 0.0;
  for (const auto& c : field.coeffs()) s += std::norm(c);
  return s;
}

double physical_mass(const Field& field) {
  const HermiteRule& rule = field.grid().rule();
  const std::size_t p = field.grid().points();
  const std::vector<cplx> values = to_physical(field, rule);
  double s = 0.0;
  for (int m = 0; m < rule.count; ++m) {
    double row = 0.0;
    for (std::size_t j = 0; j < p; ++j) row += std::norm(values[m * p + j]);
    s += rule.transform_weights[m] * row;
  }
  return s * field.grid().cell_area();
}

double quartic_integral(const Field& field) {
  const HermiteRule& rule = field.grid().product_rule();
  const std::size_t p = field.grid().points();
  const std::vector<cplx> values = to_physical(field, rule);
  double s = 0.0;
  for (int m = 0; m < rule.count; ++m) {
    double row = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      const double a = std::norm(values[m * p + j]);
      row += a * a;
    }
    s += rule.transform_weights[m] * row;
  }
  return s * field.grid().cell_area();
}

namespace {
template <class Weight>
double weighted_sum(const Field& field, Weight w) {
  const Grid& g = field.grid();
  const std::size_t p = g.points();
  double s = 0.0;
  for (int n = 0; n < g.n_h(); ++n)
    for (std::size_t i = 0; i < p; ++i) s += w(i, n) * std::norm(field.coeffs()[n * p + i]);
  return s;
}

template <class Weight>
double weighted_distance(const Field& a, const Field& b, Weight w) {
  if (!a.grid().same_shape(b.grid()) || a.grid().box_len() != b.grid().box_len())
    fail(ErrorCode::invalid_argument, "distance between fields on different grids");
  const std::size_t p = a.grid().points();
  double s = 0.0;
  for (int n = 0; n < a.grid().n_h(); ++n)
    for (std::size_t i = 0; i < p; ++i)
      s += w(i, n) * std::norm(a.coeffs()[n * p + i] - b.coeffs()[n * p + i]);
  return std::sqrt(s);
}
}  // namespace

double energy_pnls(const Field& field, double nonlinearity) {
  const Grid& g = field.grid();
  const double quadratic =
      0.5 * weighted_sum(field, [&](std::size_t i, int n) { return g.k_squared(i) + 2.0 * n + 1.0; });
  if (nonlinearity == 0.0) return quadratic;
  return quadratic + 0.25 * nonlinearity * quartic_integral(field);
}

double l2h1_norm(const Field& field) {
  return std::sqrt(weighted_sum(field, [](std::size_t, int n) { return 2.0 * n + 1.0; }));
}

double kinetic_e0(const Field& field) {
  return weighted_sum(field, [](std::size_t, int n) { return 2.0 * n + 1.0; });
}

double sigma_norm(const Field& field) {
  const Grid& g = field.grid();
  return std::sqrt(weighted_sum(field, [&](std::size_t i, int n) { return g.k_squared(i) + 2.0 * n + 2.0; }));
}

double hs_mixed_norm(const Field& field, double s) {
  return std::sqrt(weighted_sum(field, [s](std::size_t, int n) { return std::pow(2.0 * n + 1.0, s); }));
}

double l4_y_integrand(const Field& field) {
  const Grid& g = field.grid();
  const std::size_t p = g.points();
  const std::vector<cplx> slices = hermite_slices(field);
  double s = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    double rho = 0.0;
    for (int n = 0; n < g.n_h(); ++n) rho += std::norm(slices[n * p + j]);
    s += rho * rho;
  }
  return s * g.cell_area();
}

double l2h1_distance(const Field& a, const Field& b) {
  return weighted_distance(a, b, [](std::size_t, int n) { return 2.0 * n + 1.0; });
}

double sigma_distance(const Field& a, const Field& b) {
  const Grid& g = a.grid();
  return weighted_distance(a, b, [&](std::size_t i, int n) { return g.k_squared(i) + 2.0 * n + 2.0; });
}

NormReport norm_report(const Field& field, double eps0) {
  if (!(eps0 > 0.0 && eps0 < 0.5)) fail(ErrorCode::invalid_argument, "eps0 must lie in (0, 1/2)");
  NormReport r;
  r.mass = mass(field);
  r.energy = energy_pnls(field);
  r.sigma = sigma_norm(field);
  r.l2h1 = l2h1_norm(field);
  r.kinetic_e0 = r.l2h1 * r.l2h1;
  r.l4_integrand = l4_y_integrand(field);
  r.eps0 = eps0;
  r.h1_minus_eps0 = hs_mixed_norm(field, 1.0 - eps0);
  return r;
}

}  // namespace phnls
