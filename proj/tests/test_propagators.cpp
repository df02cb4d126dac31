#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "phnls/propagators.hpp"

using namespace phnls;

namespace {

Field random_masked(GridPtr g, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> u;
  Field f(g);
  for (int n = 0; n < g->n_h(); ++n)
    for (std::size_t i = 0; i < g->points(); ++i)
      if (g->in_mask(i)) f.coeffs()[n * g->points() + i] = cplx(u(gen), u(gen));
  return f;
}

double max_diff(const Field& a, const Field& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) worst = std::max(worst, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return worst;
}

double max_diff(const SpectralProfile& a, const SpectralProfile& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) worst = std::max(worst, std::abs(a.coeffs[i] - b.coeffs[i]));
  return worst;
}

SpectralProfile unit(int n, int n_h) {
  SpectralProfile p;
  p.coeffs.assign(n_h, cplx(0.0));
  p.coeffs[n] = 1.0;
  return p;
}

}  // namespace

TEST_CASE("free_y_flow") {
  auto g = Grid::create(16, 10.0, 4);
  const Field f = random_masked(g, 1);
  CHECK(max_diff(free_y_flow(f, 0.0), f) == 0.0);
  const Field half = free_y_flow(free_y_flow(f, 0.35), 0.35);
  CHECK(max_diff(half, free_y_flow(f, 0.7)) < 1e-14 * 4);
  const Field g1 = free_y_flow(f, 12.3);
  for (int n = 0; n < 4; ++n) CHECK(g1.at(0, 0, n) == f.at(0, 0, n));
  CHECK(std::abs(mass(g1) - mass(f)) < 1e-13 * mass(f));
}

TEST_CASE("oscillator_flow") {
  auto g = Grid::create(8, 10.0, 9);
  const Field f = random_masked(g, 2);
  const Field pi = oscillator_flow(f, kPi);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) worst = std::max(worst, std::abs(pi.coeffs()[i] + f.coeffs()[i]));
  CHECK(worst < 1e-14 * 8);
  CHECK(max_diff(oscillator_flow(f, 2 * kPi), f) < 1e-13);
  CHECK(max_diff(oscillator_flow(oscillator_flow(f, 0.4), 0.9), oscillator_flow(f, 1.3)) < 1e-14 * 8);
  CHECK(std::abs(mass(oscillator_flow(f, 0.77)) - mass(f)) < 1e-13 * mass(f));
}

TEST_CASE("linear flows commute and combine") {
  auto g = Grid::create(16, 12.0, 5);
  const Field f = random_masked(g, 3);
  const double t = 0.613;
  const Field a = oscillator_flow(free_y_flow(f, t), t);
  const Field b = free_y_flow(oscillator_flow(f, t), t);
  CHECK(max_diff(a, b) < 1e-14 * 8);
  CHECK(max_diff(linear_flow(f, t), a) < 1e-13);
  Field c = f;
  apply_linear_phase(c, t);
  CHECK(max_diff(c, linear_flow(f, t)) == 0.0);
  CHECK(std::abs(mass(linear_flow(f, t)) - mass(f)) < 1e-13 * mass(f));
}

TEST_CASE("Mehler kernel against the diagonal flow") {
  const HermiteRule rule = build_quadrature(32, 8);
  for (auto [n, t] : {std::pair{0, 0.3}, {5, 0.7}}) {
    const SpectralProfile out = mehler_apply(unit(n, 8), t, rule);
    const cplx expected = std::polar(1.0, -(2.0 * n + 1.0) * t);
    for (int j = 0; j < 8; ++j) CHECK(std::abs(out.coeffs[j] - (j == n ? expected : cplx(0.0))) < 1e-8);
    CHECK(std::abs(std::abs(out.coeffs[n]) - 1.0) < 1e-8);
  }
}

TEST_CASE("Mehler kernel on a random profile") {
  const int n_h = 24;
  const HermiteRule rule = build_quadrature(96, n_h);
  std::mt19937_64 gen(7);
  std::normal_distribution<double> d;
  SpectralProfile p;
  for (int n = 0; n < n_h; ++n) p.coeffs.push_back(cplx(d(gen), d(gen)) / std::sqrt(double(n_h)));
  for (double t : {0.3, 0.7, 1.1}) {
    SpectralProfile ref = p;
    for (int n = 0; n < n_h; ++n) ref.coeffs[n] *= std::polar(1.0, -(2.0 * n + 1.0) * t);
    CHECK(max_diff(mehler_apply(p, t, rule), ref) < 1e-7);
  }
  // Negative times run the flow backwards.
  SpectralProfile back = p;
  for (int n = 0; n < n_h; ++n) back.coeffs[n] *= std::polar(1.0, (2.0 * n + 1.0) * 0.4);
  CHECK(max_diff(mehler_apply(p, -0.4, rule), back) < 1e-7);
}

TEST_CASE("Mehler singular set") {
  const HermiteRule rule = build_quadrature(16, 4);
  for (double t : {0.0, kPi / 2, kPi, -kPi / 2, kPi / 2 + 5e-4, 3 * kPi / 2 - 9e-4}) {
    try {
      mehler_apply(unit(0, 4), t, rule);
      FAIL("expected a domain error at t = " << t);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::domain);
    }
  }
  CHECK_NOTHROW(mehler_apply(unit(0, 4), kPi / 2 + 2e-3, rule));
  CHECK_THROWS_AS(mehler_apply(unit(0, 4), 0.3, build_product_quadrature(16, 4)), Error);
}

TEST_CASE("Mehler dispersive scan near the singular time") {
  const double eps = 0.02;
  std::vector<double> xs;
  std::vector<cplx> fs;
  for (double x = -0.3; x <= 0.3 + 1e-12; x += eps / 20) {
    xs.push_back(x);
    fs.push_back(std::exp(-x * x / (eps * eps)));
  }
  const double l1 = eps * std::sqrt(kPi);
  std::vector<double> out;
  for (double x = -1.0; x <= 1.0 + 1e-12; x += 0.01) out.push_back(x);
  for (double t : {0.2, 0.5, 0.9, 1.2, 1.4, 1.5, kPi / 2 - 1e-2}) {
    const auto img = mehler_apply_samples(xs, fs, out, t);
    double sup = 0.0;
    for (const auto& v : img) sup = std::max(sup, std::abs(v));
    const double ratio = sup * std::sqrt(2 * kPi * std::abs(std::sin(2 * t))) / l1;
    CHECK(ratio > 0.5);
    CHECK(ratio < 2.0);
  }
}

TEST_CASE("Mehler kernel symmetry") {
  for (double t : {0.2, 1.0, 2.5})
    for (double x : {-1.3, 0.0, 0.7})
      for (double y : {-0.4, 2.0}) CHECK(std::abs(mehler_kernel(x, y, t) - mehler_kernel(y, x, t)) < 1e-15);
  CHECK(std::abs(std::abs(mehler_kernel(0.3, -0.2, 0.4)) - 1.0 / std::sqrt(2 * kPi * std::sin(0.8))) < 1e-14);
}

TEST_CASE("galilean boost") {
  auto g = Grid::create(32, 16.0, 4);
  const double dk = 2 * kPi / g->box_len();
  Field f = from_sampler(g, [](double y1, double y2, double x) {
    return std::exp(-(y1 * y1 + 2 * y2 * y2) / 2.0) * eval_hermite(1, x) * cplx(1.0, 0.3 * y1);
  });
  apply_dealias(f);
  CHECK(max_diff(galilean_boost(f, {0.0, 0.0}, 0.0), f) == 0.0);
  const Field b = galilean_boost(f, {2 * dk, -dk}, 0.37);
  CHECK(std::abs(mass(b) - mass(f)) < 1e-14 * mass(f));

  try {
    galilean_boost(f, {0.5 * dk, 0.0}, 0.0);
    FAIL("off-lattice boost accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }

  // At t = 0 the boost is multiplication by e^{i y.xi}.
  const std::array<double, 2> xi{3 * dk, 2 * dk};
  const Field direct = from_sampler(g, [&](double y1, double y2, double x) {
    return std::exp(-(y1 * y1 + 2 * y2 * y2) / 2.0) * eval_hermite(1, x) * cplx(1.0, 0.3 * y1) *
           std::polar(1.0, xi[0] * y1 + xi[1] * y2);
  });
  const Field shifted = galilean_boost(from_sampler(g, [](double y1, double y2, double x) {
    return std::exp(-(y1 * y1 + 2 * y2 * y2) / 2.0) * eval_hermite(1, x) * cplx(1.0, 0.3 * y1);
  }), xi, 0.0);
  CHECK(max_diff(direct, shifted) < 1e-9);
}

TEST_CASE("boost intertwines the linear flow") {
  auto g = Grid::create(16, 12.0, 5);
  const double dk = 2 * kPi / g->box_len();
  Field f(g);
  std::mt19937_64 gen(11);
  std::normal_distribution<double> d;
  // Keep the support well inside the box so the cyclic shift never wraps.
  for (int a = 0; a < 16; ++a)
    for (int b = 0; b < 16; ++b)
      if (std::abs(g->signed_mode(a)) <= 3 && std::abs(g->signed_mode(b)) <= 3)
        for (int n = 0; n < 5; ++n) f.at(a, b, n) = cplx(d(gen), d(gen));
  const std::array<double, 2> xi{dk, -2 * dk};
  for (double t : {0.1, 0.9, 2.0}) {
    const Field lhs = linear_flow(galilean_boost(f, xi, 0.0), t);
    const Field rhs = galilean_boost(linear_flow(f, t), xi, t);
    CHECK(max_diff(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("rescale") {
  auto g = Grid::create(32, 8.0, 3);
  const Field f = from_sampler(g, [](double y1, double y2, double x) {
    return std::exp(-(y1 * y1 + y2 * y2)) * (eval_hermite(0, x) + 0.5 * eval_hermite(2, x));
  });
  CHECK(max_diff(rescale(f, 1.0), f) == 0.0);
  CHECK_THROWS_AS(rescale(f, 3.0), Error);
  CHECK_THROWS_AS(rescale(f, 0.0), Error);
  CHECK_THROWS_AS(rescale(f, -2.0), Error);
  for (double lam : {2.0, 4.0, 0.5}) {
    const Field r = rescale(f, lam);
    CHECK(r.grid().box_len() == lam * 8.0);
    CHECK(r.grid().n_y() == 32);
    CHECK(mass(r) == doctest::Approx(mass(f)).epsilon(1e-12));
    CHECK(l2h1_norm(r) == doctest::Approx(l2h1_norm(f)).epsilon(1e-12));
  }
  // Sampled check: (1/lam) f(y/lam, x) on the larger box.
  const Field r = rescale(f, 2.0);
  const Field sampled = from_sampler(r.grid_ptr(), [](double y1, double y2, double x) {
    return 0.5 * std::exp(-(y1 * y1 + y2 * y2) / 4.0) * (eval_hermite(0, x) + 0.5 * eval_hermite(2, x));
  });
  CHECK(max_diff(r, sampled) < 1e-9);
}
