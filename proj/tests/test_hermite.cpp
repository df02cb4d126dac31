#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "phnls/hermite.hpp"

using namespace phnls;

namespace {
const double kQuarterPi = std::pow(kPi, -0.25);

double max_orthonormality_residual(const HermiteRule& rule) {
  double worst = 0.0;
  for (int a = 0; a < rule.n_h; ++a)
    for (int b = 0; b < rule.n_h; ++b) {
      double s = 0.0;
      for (int m = 0; m < rule.count; ++m) s += rule.weights[m] * std::exp(rule.nodes[m] * rule.nodes[m]) * rule.basis_at(m, a) * rule.basis_at(m, b);
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

double transform_residual(const HermiteRule& rule) {
  double worst = 0.0;
  for (int a = 0; a < rule.n_h; ++a)
    for (int b = 0; b < rule.n_h; ++b) {
      double s = 0.0;
      for (int m = 0; m < rule.count; ++m) s += rule.transform_weights[m] * rule.basis_at(m, a) * rule.basis_at(m, b);
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

// max |(-D2 + x^2 - (2n+1)) h_n| / max |h_n| with 4th-order differences.
double eigen_residual(int n, double h) {
  const double L = 10.0;
  const int count = static_cast<int>(std::round(2 * L / h));
  std::vector<double> f(count + 1);
  for (int i = 0; i <= count; ++i) f[i] = eval_hermite(n, -L + i * h);
  double res = 0.0, top = 0.0;
  for (int i = 2; i + 2 <= count; ++i) {
    const double x = -L + i * h;
    const double d2 = (-f[i - 2] + 16 * f[i - 1] - 30 * f[i] + 16 * f[i + 1] - f[i + 2]) / (12 * h * h);
    res = std::max(res, std::abs(-d2 + x * x * f[i] - (2.0 * n + 1.0) * f[i]));
    top = std::max(top, std::abs(f[i]));
  }
  return res / top;
}
}  // namespace

TEST_CASE("eval_hermite at the origin") {
  CHECK(eval_hermite(0, 0.0) == doctest::Approx(0.751125544464943).epsilon(1e-14));
  CHECK(eval_hermite(0, 0.0) == doctest::Approx(kQuarterPi).epsilon(1e-15));
  CHECK(eval_hermite(1, 0.0) == 0.0);
  CHECK(eval_hermite(2, 0.0) == doctest::Approx(-1.0 / (std::sqrt(2.0) * std::pow(kPi, 0.25))).epsilon(1e-14));
  CHECK(eval_hermite(2, 0.0) == doctest::Approx(-0.531125966013598).epsilon(1e-13));
}

TEST_CASE("eval_hermite closed forms away from the origin") {
  for (double x : {-2.5, -0.3, 0.7, 1.9}) {
    const double g = kQuarterPi * std::exp(-0.5 * x * x);
    CHECK(eval_hermite(1, x) == doctest::Approx(std::sqrt(2.0) * x * g).epsilon(1e-14));
    CHECK(eval_hermite(2, x) == doctest::Approx((2 * x * x - 1) / std::sqrt(2.0) * g).epsilon(1e-13));
    CHECK(eval_hermite(3, x) == doctest::Approx((2 * x * x * x - 3 * x) / std::sqrt(3.0) * g).epsilon(1e-13));
  }
}

TEST_CASE("eval_hermite index cap") {
  CHECK_NOTHROW(eval_hermite(kMaxHermiteIndex, 0.5));
  CHECK_THROWS_AS(eval_hermite(kMaxHermiteIndex + 1, 0.5), Error);
  CHECK_THROWS_AS(eval_hermite(-1, 0.5), Error);
  try {
    eval_hermite(5000, 0.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
}

TEST_CASE("eval_hermite stays finite for large index and argument") {
  const double v = eval_hermite(4000, 80.0);
  CHECK(std::isfinite(v));
  CHECK(std::abs(v) < 1.0);
  CHECK(eval_hermite(10, 60.0) == 0.0);
}

TEST_CASE("parity of evaluated basis") {
  const HermiteRule rule = build_quadrature(41, 30);
  for (int m = 0; m < rule.count; ++m)
    for (int n = 0; n < 30; ++n) {
      const double a = eval_hermite(n, rule.nodes[m]);
      const double b = eval_hermite(n, -rule.nodes[m]);
      CHECK(b == (n % 2 ? -a : a));
    }
}

TEST_CASE("hermite_center_value") {
  CHECK(hermite_center_value(1) == 0.0);
  CHECK(hermite_center_value(0) == doctest::Approx(kQuarterPi).epsilon(1e-15));
  CHECK(hermite_center_value(40) == doctest::Approx(eval_hermite(40, 0.0)).epsilon(1e-12));
  double worst = 0.0;
  for (int n = 0; n <= 200; ++n) {
    const double a = hermite_center_value(n), b = eval_hermite(n, 0.0);
    if (n % 2) {
      CHECK(a == 0.0);
      CHECK(b == 0.0);
    } else {
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
  }
  CHECK(worst < 1e-12);
  CHECK(std::isfinite(hermite_center_value(4096)));
}

TEST_CASE("delta_hminus1_partial") {
  CHECK(delta_hminus1_partial(0) == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-15));
  CHECK(delta_hminus1_partial(0) == doctest::Approx(0.564189583548).epsilon(1e-11));
  CHECK(delta_hminus1_partial(1) == delta_hminus1_partial(0));
  // Reference computed independently in 40-digit arithmetic.
  CHECK(delta_hminus1_partial(4096) == doctest::Approx(0.73615256299556414).epsilon(1e-13));
  double prev = 0.0;
  for (int N = 0; N <= 400; ++N) {
    const double s = delta_hminus1_partial(N);
    CHECK(s >= prev);
    prev = s;
  }
}

TEST_CASE("delta_hminus1_partial increments decay like n^{-3/2}") {
  auto inc = [](int n) { return delta_hminus1_partial(n) - delta_hminus1_partial(n - 2); };
  for (int n : {20, 200}) {
    const double ratio = inc(10 * n) / inc(n);
    const double expected = std::pow(10.0, -1.5);
    CHECK(std::abs(ratio / expected - 1.0) < 0.2);
  }
  // Tail beyond N is a N^{-1/2} + b N^{-3/2} + ...; two Richardson levels.
  const double s0 = delta_hminus1_partial(256), s1 = delta_hminus1_partial(1024),
               s2 = delta_hminus1_partial(4096);
  const double r1 = 2 * s1 - s0, r2 = 2 * s2 - s1;
  const double limit = (8 * r2 - r1) / 7;
  // integral_0^inf (2 pi sinh 2t)^{-1/2} dt, the Mehler kernel at the origin.
  const double exact = 0.73966877979715972;
  CHECK(std::abs(limit - exact) < 1e-7);
  CHECK(s2 < exact);
}

TEST_CASE("build_quadrature small rules") {
  const HermiteRule one = build_quadrature(1, 1);
  REQUIRE(one.count == 1);
  CHECK(one.nodes[0] == 0.0);
  CHECK(one.weights[0] == doctest::Approx(std::sqrt(kPi)).epsilon(1e-15));

  const HermiteRule two = build_quadrature(2, 2);
  CHECK(two.nodes[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(two.nodes[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(two.weights[0] == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-14));
  CHECK(two.weights[1] == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-14));
}

TEST_CASE("build_quadrature structure and exactness") {
  for (auto [m, n] : {std::pair{16, 16}, {64, 32}, {33, 20}, {256, 64}}) {
    const HermiteRule rule = build_quadrature(m, n);
    for (int i = 0; i + 1 < m; ++i) CHECK(rule.nodes[i] < rule.nodes[i + 1]);
    for (int i = 0; i < m; ++i) {
      CHECK(rule.nodes[i] == -rule.nodes[m - 1 - i]);
      CHECK(rule.weights[i] > 0.0);
      CHECK(rule.transform_weights[i] > 0.0);
    }
    CHECK(transform_residual(rule) < 1e-10);
    CHECK(max_orthonormality_residual(rule) < 1e-10);
  }
}

TEST_CASE("build_quadrature rejects too few nodes") {
  CHECK_THROWS_AS(build_quadrature(3, 4), Error);
  CHECK_THROWS_AS(build_quadrature(0, 1), Error);
}

TEST_CASE("product rule integrates quartic products exactly") {
  const int n_h = 10;
  const HermiteRule rule = build_product_quadrature(2 * n_h, n_h);
  CHECK(rule.exponent == 2.0);
  double s = 0.0;
  for (int m = 0; m < rule.count; ++m) s += rule.transform_weights[m] * std::pow(rule.basis_at(m, 0), 4);
  CHECK(s == doctest::Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-13));
  double t = 0.0;
  for (int m = 0; m < rule.count; ++m)
    t += rule.transform_weights[m] * std::pow(rule.basis_at(m, 1) * rule.basis_at(m, 0), 2);
  CHECK(t == doctest::Approx(0.5 / std::sqrt(2.0 * kPi)).epsilon(1e-13));
}

TEST_CASE("analyze") {
  const HermiteRule rule = build_quadrature(32, 16);
  std::vector<cplx> samples(rule.count);
  for (int m = 0; m < rule.count; ++m) samples[m] = eval_hermite(3, rule.nodes[m]);
  SpectralProfile p = analyze(samples, rule);
  for (int n = 0; n < 16; ++n) CHECK(std::abs(p.coeffs[n] - (n == 3 ? 1.0 : 0.0)) < 1e-10);

  std::fill(samples.begin(), samples.end(), cplx(0.0));
  p = analyze(samples, rule);
  for (const auto& c : p.coeffs) CHECK(c == cplx(0.0));

  for (int m = 0; m < rule.count; ++m) samples[m] = rule.nodes[m] * eval_hermite(0, rule.nodes[m]);
  p = analyze(samples, rule);
  for (int n = 0; n < 16; ++n) CHECK(std::abs(p.coeffs[n] - (n == 1 ? 1.0 / std::sqrt(2.0) : 0.0)) < 1e-10);

  samples.pop_back();
  CHECK_THROWS_AS(analyze(samples, rule), Error);
}

TEST_CASE("synthesize") {
  const HermiteRule rule = build_quadrature(64, 32);
  SpectralProfile e0{std::vector<cplx>(32, 0.0)};
  e0.coeffs[0] = 1.0;
  const auto s0 = synthesize(e0, rule);
  for (int m = 0; m < rule.count; ++m)
    CHECK(std::abs(s0[m] - kQuarterPi * std::exp(-0.5 * rule.nodes[m] * rule.nodes[m])) < 1e-15);

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SpectralProfile r{std::vector<cplx>(32)};
  for (auto& c : r.coeffs) c = cplx(u(gen), u(gen));
  const SpectralProfile back = analyze(synthesize(r, rule), rule);
  double worst = 0.0;
  for (int n = 0; n < 32; ++n) worst = std::max(worst, std::abs(back.coeffs[n] - r.coeffs[n]));
  CHECK(worst < 1e-10);

  for (int n : {1, 5, 31}) {
    SpectralProfile e{std::vector<cplx>(32, 0.0)};
    e.coeffs[n] = 1.0;
    const auto s = synthesize(e, rule);
    for (int m = 0; m < rule.count; ++m) CHECK(s[m] == -s[rule.count - 1 - m]);
  }

  SpectralProfile too_long{std::vector<cplx>(33, 0.0)};
  CHECK_THROWS_AS(synthesize(too_long, rule), Error);
}

TEST_CASE("hs_norm") {
  SpectralProfile e{std::vector<cplx>(8, 0.0)};
  e.coeffs[0] = 1.0;
  CHECK(hs_norm(e, 1.0) == doctest::Approx(1.0));
  for (int n = 1; n < 8; ++n) {
    SpectralProfile f{std::vector<cplx>(8, 0.0)};
    f.coeffs[n] = 1.0;
    CHECK(hs_norm(f, 1.0) == doctest::Approx(std::sqrt(2.0 * n + 1.0)).epsilon(1e-15));
  }
  SpectralProfile e2{std::vector<cplx>(3, 0.0)};
  e2.coeffs[2] = 1.0;
  CHECK(hs_norm(e2, -1.0) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("eigen relation converges at fourth order") {
  for (int n = 0; n <= 12; ++n) {
    const double r1 = eigen_residual(n, 0.04);
    const double r2 = eigen_residual(n, 0.02);
    const double ratio = r1 / r2;
    CAPTURE(n);
    CHECK(ratio > 13.0);
    CHECK(ratio < 19.0);
  }
}
