#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "phnls/analysis.hpp"
#include "phnls/propagators.hpp"

using namespace phnls;

namespace {

Field gaussian_bubble(GridPtr g, double c1, double c2, int xi1, int xi2) {
  const double dk = 2 * kPi / g->box_len();
  return from_sampler(g, [=](double y1, double y2, double x) {
    const double r2 = (y1 - c1) * (y1 - c1) + (y2 - c2) * (y2 - c2);
    return std::exp(-r2 / 2.0) * eval_hermite(0, x) * std::polar(1.0, dk * (xi1 * y1 + xi2 * y2));
  });
}

Field add(const Field& a, const Field& b) {
  Field out = a;
  for (std::size_t i = 0; i < out.coeffs().size(); ++i) out.coeffs()[i] += b.coeffs()[i];
  return out;
}

Field random_masked(GridPtr g, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d;
  Field f(g);
  for (int n = 0; n < g->n_h(); ++n)
    for (std::size_t i = 0; i < g->points(); ++i)
      if (g->in_mask(i)) f.coeffs()[n * g->points() + i] = cplx(d(gen), d(gen)) / (1.0 + g->k_squared(i));
  return f;
}

}  // namespace

TEST_CASE("scattering monitor") {
  auto g = Grid::create(16, 12.0, 4);
  const Field f = random_masked(g, 1);
  std::vector<Field> lin;
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    Field u = linear_flow(f, t);
    u.set_time(t);
    lin.push_back(u);
  }
  for (double r : scattering_monitor(lin, System::pnls)) CHECK(r < 1e-12);
  std::vector<Field> free;
  for (double t : {0.5, 1.0, 2.0}) {
    Field u = free_y_flow(f, t);
    u.set_time(t);
    free.push_back(u);
  }
  for (double r : scattering_monitor(free, System::dcr)) CHECK(r < 1e-12);

  std::vector<Field> zeros;
  for (double t : {1.0, 2.0, 3.0}) zeros.emplace_back(g, t);
  for (double r : scattering_monitor(zeros, System::pnls)) CHECK(r == 0.0);
  CHECK(scattering_monitor({}, System::pnls).empty());

  std::vector<Field> bad{lin[1], lin[0]};
  CHECK_THROWS_AS(scattering_monitor(bad, System::pnls), Error);
  std::vector<Field> dup{lin[0], lin[0]};
  CHECK_THROWS_AS(scattering_monitor(dup, System::pnls), Error);
}

TEST_CASE("density and current of a plane-wave bubble") {
  auto g = Grid::create(64, 24.0, 2);
  const Field f = gaussian_bubble(g, 1.0, -2.0, 3, -1);
  const DensityCurrent dc = density_current(f, 2);
  CHECK(dc.n == 128);
  const double dk = 2 * kPi / 24.0;
  double worst = 0.0;
  for (int a = 0; a < dc.n; ++a)
    for (int b = 0; b < dc.n; ++b) {
      const double y1 = (a - dc.n / 2) * dc.spacing, y2 = (b - dc.n / 2) * dc.spacing;
      const double rho = std::exp(-((y1 - 1.0) * (y1 - 1.0) + (y2 + 2.0) * (y2 + 2.0)));
      const std::size_t i = static_cast<std::size_t>(a) * dc.n + b;
      worst = std::max({worst, std::abs(dc.rho[i] - rho), std::abs(dc.j1[i] - 3 * dk * rho),
                        std::abs(dc.j2[i] + dk * rho)});
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("Morawetz action vanishes by symmetry") {
  auto g = Grid::create(16, 12.0, 3);
  Field real = from_sampler(g, [](double y1, double y2, double x) {
    return std::exp(-(y1 * y1 + 0.5 * y2 * y2 + 0.3 * y1 * y2)) * (eval_hermite(0, x) + eval_hermite(2, x) * y1);
  });
  apply_dealias(real);
  CHECK(std::abs(morawetz_action(real)) < 1e-12);

  // u(-y) = conj(u(y)): even density and even current.
  auto h = Grid::create(64, 16.0, 3);
  Field sym = from_sampler(h, [](double y1, double y2, double x) {
    return std::exp(-(y1 * y1 + y2 * y2) / 2.0) * std::polar(1.0, 0.5 * y1 - 0.3 * y2 + 0.05 * y1 * y1 * y1) *
           eval_hermite(1, x);
  });
  apply_dealias(sym);
  CHECK(std::abs(morawetz_action(sym)) < 1e-12);
  CHECK(morawetz_action(Field(g)) == 0.0);
}

TEST_CASE("Morawetz fast path matches the pair sum") {
  auto g = Grid::create(16, 10.0, 3);
  for (unsigned seed : {1u, 2u}) {
    const Field f = random_masked(g, seed);
    const double a = morawetz_action(f), b = morawetz_action_direct(f);
    CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(b)));
  }
}

TEST_CASE("Morawetz action is unchanged by a lattice boost") {
  auto g = Grid::create(32, 16.0, 3);
  Field f = add(gaussian_bubble(g, -3.0, 0.0, 2, 0), gaussian_bubble(g, 3.0, 1.0, -1, 1));
  apply_dealias(f);
  const double dk = 2 * kPi / g->box_len();
  const double base = morawetz_action(f);
  const double boosted = morawetz_action(galilean_boost(f, {2 * dk, -dk}, 0.0));
  CHECK(std::abs(boosted - base) < 1e-10 * std::abs(base));
}

TEST_CASE("approaching bubbles against a closed-form pair sum") {
  auto g = Grid::create(64, 24.0, 2);
  const int q = 2;
  const double dk = 2 * kPi / g->box_len(), xi = q * dk;
  const double d = 6.0;
  const Field f = add(gaussian_bubble(g, -d, 0.0, q, 0), gaussian_bubble(g, d, 0.0, -q, 0));
  const double m = morawetz_action(f);

  // Independent pair sum on the same refined lattice from the analytic density and current.
  const int n = 2 * g->n_y();
  const double h = g->box_len() / n;
  std::vector<double> rho(n * n), j1(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double y1 = (a - n / 2) * h, y2 = (b - n / 2) * h;
      const double ra = std::exp(-((y1 + d) * (y1 + d) + y2 * y2)), rb = std::exp(-((y1 - d) * (y1 - d) + y2 * y2));
      rho[a * n + b] = ra + rb;
      j1[a * n + b] = xi * (ra - rb);
    }
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double jj = j1[a * n + b];
      if (std::abs(jj) < 1e-300) continue;
      for (int c = 0; c < n; ++c)
        for (int e = 0; e < n; ++e) {
          if (a == c && b == e) continue;
          s += rho[c * n + e] * jj * (a - c) / std::hypot(double(a - c), double(b - e));
        }
    }
  const double oracle = s * h * h * h * h;
  CHECK(std::abs(m - oracle) < 1e-6 * std::abs(oracle));
  // Far-separated limit: -2 xi m_A m_B with m = pi.
  const double far = -2.0 * xi * kPi * kPi;
  MESSAGE("two bubbles " << m << " vs " << far);
  CHECK(m < 0.0);
  CHECK(std::abs(m / far - 1.0) < 0.02);
}

TEST_CASE("half-derivative functional") {
  auto g = Grid::create(64, 16.0, 3);
  CHECK(morawetz_halfderiv(Field(g)) == 0.0);
  Field c(g);
  c.at(0, 0, 0) = 2.0;
  c.at(0, 0, 2) = cplx(0.0, 1.0);
  CHECK(std::abs(morawetz_halfderiv(c)) < 1e-14);

  const double w = 1.0;
  const Field f = from_sampler(g, [&](double y1, double y2, double x) {
    return std::exp(-(y1 * y1 + y2 * y2) / (w * w)) * eval_hermite(0, x);
  });
  // rho = e^{-2|y|^2/w^2}, rho^(k) = (pi w^2 / 2) e^{-|k|^2 w^2 / 8}; lattice sum of |k| |rho^|^2 / L^2.
  const double L = g->box_len(), dk = 2 * kPi / L;
  double oracle = 0.0;
  for (int a = -200; a <= 200; ++a)
    for (int b = -200; b <= 200; ++b) {
      const double k2 = dk * dk * (a * a + b * b);
      const double rh = 0.5 * kPi * w * w * std::exp(-k2 * w * w / 8.0);
      oracle += std::sqrt(k2) * rh * rh;
    }
  oracle /= L * L;
  const double value = morawetz_halfderiv(f);
  CHECK(std::abs(value - oracle) < 1e-6 * oracle);

  CHECK(morawetz_halfderiv(f, 1e6) == doctest::Approx(value).epsilon(1e-14));
  CHECK(std::abs(morawetz_halfderiv(f, 0.5 * dk)) < 1e-14);
  const double mid = morawetz_halfderiv(f, 3.0);
  CHECK(mid > 0.0);
  CHECK(mid != doctest::Approx(value));
  CHECK_THROWS_AS(morawetz_halfderiv(f, -1.0), Error);
}

TEST_CASE("profile comparison basics") {
  auto g = Grid::create(16, 12.0, 4);
  Field phi = from_sampler(g, [](double y1, double y2, double x) {
    return std::exp(-(y1 * y1 + y2 * y2)) * eval_hermite(0, x);
  });
  apply_dealias(phi);
  ProfileSettings s;
  s.t_rescaled_end = 0.2;
  s.outputs = 2;
  s.dt_dcr = 0.01;
  s.dt_pnls = 0.02;
  s.nonlinearity = 0.0;
  const ProfileReport lin = profile_compare(phi, {2.0, 4.0}, s);
  REQUIRE(lin.rows.size() == 6);
  for (const auto& r : lin.rows) {
    CHECK(r.err_l2h1 < 1e-8);
    CHECK(r.err_l4acc < 1e-8);
  }
  CHECK(lin.rows[0].t == 0.0);
  CHECK(lin.rows[2].t == doctest::Approx(0.8));
  CHECK(lin.rows[5].t == doctest::Approx(3.2));

  s.nonlinearity = 1.0;
  const ProfileReport nl = profile_compare(phi, {2.0}, s);
  CHECK(nl.rows[0].err_l2h1 == 0.0);
  CHECK(nl.rows[0].err_l4acc == 0.0);
  CHECK(nl.rows[0].mass_u == doctest::Approx(mass(phi)).epsilon(1e-12));
  CHECK(nl.err[0] > 0.0);

  CHECK_THROWS_AS(profile_compare(phi, {3.0}, s), Error);
  CHECK_THROWS_AS(profile_compare(phi, {}, s), Error);
}

TEST_CASE("diagnose") {
  auto g = Grid::create(16, 12.0, 4);
  const ResonantTensor tq = compute_tensor(4, g->rule(), true);
  for (System sys : {System::pnls, System::dcr}) {
    DiagnosticOptions o;
    o.system = sys;
    o.tensor = &tq;
    const DiagnosticRecord r = diagnose(Field(g, 2.5), 7, o);
    CHECK(r.step == 7);
    CHECK(r.t == 2.5);
    for (double v : {r.mass, r.energy, r.e0, r.l2h1, r.sigma, r.l4_integrand, r.morawetz, r.halfderiv}) CHECK(v == 0.0);
  }
  DiagnosticOptions no_q;
  no_q.system = System::dcr;
  CHECK(std::isnan(diagnose(Field(g), 0, no_q).energy));

  const Field f = random_masked(g, 4);
  const DiagnosticRecord r = diagnose(f, 0);
  CHECK(r.mass == mass(f));
  CHECK(r.energy == energy_pnls(f));
  CHECK(r.l2h1 == doctest::Approx(l2h1_norm(f)));
  CHECK(r.sigma == sigma_norm(f));
  CHECK(r.morawetz == morawetz_action(f));
}
