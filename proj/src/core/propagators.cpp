#include "phnls/propagators.hpp"

#include <cmath>
#include <string>

namespace phnls {
namespace {

constexpr double kSingularMargin = 1e-3;

int lattice_shift(double xi, const Grid& g) {
  const double s = xi * g.box_len() / (2.0 * kPi);
  const double r = std::round(s);
  if (!std::isfinite(s) || std::abs(s - r) > 1e-9 * std::max(1.0, std::abs(s)))
    fail(ErrorCode::invalid_argument, "boost component " + std::to_string(xi) +
                                          " is not a multiple of 2 pi / L");
  return static_cast<int>(r);
}

}  // namespace

void apply_free_y_phase(Field& field, double dt) {
  const Grid& g = field.grid();
  const std::size_t p = g.points();
  for (std::size_t i = 0; i < p; ++i) {
    const cplx ph = std::polar(1.0, -g.k_squared(i) * dt);
    for (int n = 0; n < g.n_h(); ++n) field.coeffs()[n * p + i] *= ph;
  }
}

void apply_linear_phase(Field& field, double dt) {
  const Grid& g = field.grid();
  const std::size_t p = g.points();
  for (int n = 0; n < g.n_h(); ++n) {
    cplx* s = field.coeffs().data() + n * p;
    for (std::size_t i = 0; i < p; ++i) s[i] *= std::polar(1.0, -(g.k_squared(i) + 2.0 * n + 1.0) * dt);
  }
}

Field free_y_flow(const Field& field, double dt) {
  Field out = field;
  apply_free_y_phase(out, dt);
  return out;
}

Field oscillator_flow(const Field& field, double dt) {
  Field out = field;
  const std::size_t p = out.grid().points();
  for (int n = 0; n < out.grid().n_h(); ++n) {
    const cplx ph = std::polar(1.0, -(2.0 * n + 1.0) * dt);
    for (std::size_t i = 0; i < p; ++i) out.coeffs()[n * p + i] *= ph;
  }
  return out;
}

Field linear_flow(const Field& field, double dt) {
  Field out = field;
  apply_linear_phase(out, dt);
  return out;
}

cplx mehler_kernel(double x, double x_src, double t) {
  const double s = std::sin(2.0 * t);
  const double c = std::cos(2.0 * t);
  const cplx pre = 1.0 / std::sqrt(cplx(0.0, 2.0 * kPi * s));
  return pre * std::polar(1.0, ((x * x + x_src * x_src) * 0.5 * c - x * x_src) / s);
}

namespace {
void check_singular(double t) {
  const double q = t / (0.5 * kPi);
  if (std::abs(q - std::round(q)) * 0.5 * kPi < kSingularMargin)
    fail(ErrorCode::domain, "t = " + std::to_string(t) + " is within 1e-3 of the Mehler singular set (pi/2)Z");
}
}  // namespace

SpectralProfile mehler_apply(const SpectralProfile& profile, double t, const HermiteRule& rule) {
  check_singular(t);
  require(rule.exponent == 1.0, "mehler_apply expects an exp(-x^2) rule");
  const HermiteRule inner = build_quadrature(2 * rule.count, rule.n_h);
  const std::vector<cplx> src = synthesize(profile, inner);
  std::vector<cplx> image(rule.count);
  parallel_for(rule.count, [&](std::size_t m) {
    cplx acc = 0.0;
    for (int j = 0; j < inner.count; ++j)
      acc += inner.transform_weights[j] * mehler_kernel(rule.nodes[m], inner.nodes[j], t) * src[j];
    image[m] = acc;
  });
  return analyze(image, rule);
}

std::vector<cplx> mehler_apply_samples(std::span<const double> x_src, std::span<const cplx> f_src,
                                       std::span<const double> x_out, double t) {
  check_singular(t);
  require(x_src.size() == f_src.size() && x_src.size() >= 2, "source grid and samples must match");
  const double h = x_src[1] - x_src[0];
  std::vector<cplx> out(x_out.size());
  for (std::size_t m = 0; m < x_out.size(); ++m) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < x_src.size(); ++j) {
      const double w = (j == 0 || j + 1 == x_src.size()) ? 0.5 : 1.0;
      acc += w * mehler_kernel(x_out[m], x_src[j], t) * f_src[j];
    }
    out[m] = acc * h;
  }
  return out;
}

Field galilean_boost(const Field& field, std::array<double, 2> xi, double t) {
  const Grid& g = field.grid();
  const int n = g.n_y();
  const int s1 = lattice_shift(xi[0], g), s2 = lattice_shift(xi[1], g);
  Field out(field.grid_ptr(), field.time());
  const cplx global = std::polar(1.0, -t * (xi[0] * xi[0] + xi[1] * xi[1]));
  const std::size_t p = g.points();
  for (int a = 0; a < n; ++a) {
    const int ta = ((a + s1) % n + n) % n;
    for (int b = 0; b < n; ++b) {
      const int tb = ((b + s2) % n + n) % n;
      const std::size_t src = static_cast<std::size_t>(a) * n + b;
      const std::size_t dst = static_cast<std::size_t>(ta) * n + tb;
      const double kdot = g.wavenumber(a) * xi[0] + g.wavenumber(b) * xi[1];
      const cplx ph = global * std::polar(1.0, -2.0 * t * kdot);
      for (int m = 0; m < g.n_h(); ++m) out.coeffs()[m * p + dst] = ph * field.coeffs()[m * p + src];
    }
  }
  return out;
}

Field rescale(const Field& field, double lam) {
  if (!(lam > 0.0) || !std::isfinite(lam))
    fail(ErrorCode::invalid_argument, "rescale factor must be positive");
  int e = 0;
  const double mant = std::frexp(lam, &e);
  if (mant != 0.5) fail(ErrorCode::invalid_argument, "rescale factor must be a power of two, got " + std::to_string(lam));
  if (lam == 1.0) return field;
  return Field(field.grid().with_box_len(lam * field.grid().box_len()), field.coeffs(), field.time());
}

}  // namespace phnls
