#include "phnls/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fft.hpp"
#include "phnls/propagators.hpp"

namespace phnls {
namespace {

// Spectral slice of the coarse grid -> values on the refined grid of size nf.
// Refined points are y'_j = (j - nf/2) L / nf, so e^{i k y'_j} carries (-1)^m.
void refine_slice(const Grid& g, const cplx* spec, int nf, const std::function<cplx(std::size_t)>& mult,
                  std::vector<cplx>& out) {
  const int n = g.n_y();
  out.assign(static_cast<std::size_t>(nf) * nf, cplx(0.0));
  for (int a = 0; a < n; ++a) {
    const int ma = g.signed_mode(a);
    const int ia = (ma % nf + nf) % nf;
    for (int b = 0; b < n; ++b) {
      const int mb = g.signed_mode(b);
      const int ib = (mb % nf + nf) % nf;
      const std::size_t flat = static_cast<std::size_t>(a) * n + b;
      const double sign = ((ma + mb) % 2 == 0) ? 1.0 : -1.0;
      out[static_cast<std::size_t>(ia) * nf + ib] = spec[flat] * mult(flat) * (sign / g.box_len());
    }
  }
  detail::shared_fft(nf).inverse(out.data(), 1);
}

}  // namespace

DensityCurrent density_current(const Field& field, int factor) {
  require(factor >= 1, "refinement factor must be positive");
  const Grid& g = field.grid();
  const int nf = g.n_y() * factor;
  const std::size_t pf = static_cast<std::size_t>(nf) * nf;
  const std::size_t p = g.points();
  DensityCurrent dc;
  dc.n = nf;
  dc.spacing = g.box_len() / nf;
  dc.rho.assign(pf, 0.0);
  dc.j1.assign(pf, 0.0);
  dc.j2.assign(pf, 0.0);
  std::vector<cplx> u, d1, d2;
  const cplx I(0.0, 1.0);
  for (int m = 0; m < g.n_h(); ++m) {
    const cplx* spec = field.coeffs().data() + m * p;
    refine_slice(g, spec, nf, [](std::size_t) { return cplx(1.0); }, u);
    refine_slice(g, spec, nf, [&](std::size_t f) { return I * g.k_component(f, 0); }, d1);
    refine_slice(g, spec, nf, [&](std::size_t f) { return I * g.k_component(f, 1); }, d2);
    for (std::size_t i = 0; i < pf; ++i) {
      dc.rho[i] += std::norm(u[i]);
      dc.j1[i] += (std::conj(u[i]) * d1[i]).imag();
      dc.j2[i] += (std::conj(u[i]) * d2[i]).imag();
    }
  }
  return dc;
}

double morawetz_action(const Field& field) {
  const DensityCurrent dc = density_current(field, 2);
  const int n = dc.n;
  const int nc = 2 * n;
  const std::size_t pc = static_cast<std::size_t>(nc) * nc;
  // Kernel components over differences d in (-n, n), stored cyclically.
  std::vector<cplx> k1(pc, cplx(0.0)), k2(pc, cplx(0.0)), r(pc, cplx(0.0));
  for (int a = -(n - 1); a <= n - 1; ++a)
    for (int b = -(n - 1); b <= n - 1; ++b) {
      if (a == 0 && b == 0) continue;
      const double len = std::hypot(static_cast<double>(a), static_cast<double>(b));
      const std::size_t idx = static_cast<std::size_t>((a + nc) % nc) * nc + (b + nc) % nc;
      k1[idx] = a / len;
      k2[idx] = b / len;
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) r[static_cast<std::size_t>(a) * nc + b] = dc.rho[static_cast<std::size_t>(a) * n + b];
  const detail::Fft2D& fft = detail::shared_fft(nc);
  fft.forward(k1.data(), 1);
  fft.forward(k2.data(), 1);
  fft.forward(r.data(), 1);
  for (std::size_t i = 0; i < pc; ++i) {
    k1[i] *= r[i];
    k2[i] *= r[i];
  }
  fft.inverse(k1.data(), 1);
  fft.inverse(k2.data(), 1);
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const std::size_t i = static_cast<std::size_t>(a) * n + b;
      const std::size_t c = static_cast<std::size_t>(a) * nc + b;
      s += dc.j1[i] * k1[c].real() + dc.j2[i] * k2[c].real();
    }
  const double cell = dc.spacing * dc.spacing;
  return s * cell * cell / static_cast<double>(pc);
}

double morawetz_action_direct(const Field& field) {
  const DensityCurrent dc = density_current(field, 2);
  const int n = dc.n;
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const std::size_t i = static_cast<std::size_t>(a) * n + b;
      double acc = 0.0;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          if (a == c && b == d) continue;
          const double da = a - c, db = b - d;
          const double len = std::hypot(da, db);
          acc += dc.rho[static_cast<std::size_t>(c) * n + d] * (da * dc.j1[i] + db * dc.j2[i]) / len;
        }
      s += acc;
    }
  const double cell = dc.spacing * dc.spacing;
  return s * cell * cell;
}

double morawetz_halfderiv(const Field& field, double cutoff) {
  require(cutoff >= 0.0, "cutoff must be nonnegative");
  const Grid& g = field.grid();
  Field v = field;
  if (cutoff > 0.0) {
    const std::size_t p = g.points();
    for (int m = 0; m < g.n_h(); ++m)
      for (std::size_t i = 0; i < p; ++i)
        if (g.k_squared(i) > cutoff * cutoff) v.coeffs()[m * p + i] = cplx(0.0);
  }
  const DensityCurrent dc = density_current(v, 2);
  const int n = dc.n;
  std::vector<cplx> rho(dc.rho.begin(), dc.rho.end());
  detail::shared_fft(n).forward(rho.data(), 1);
  double s = 0.0;
  const double dk = 2.0 * kPi / g.box_len();
  for (int a = 0; a < n; ++a) {
    const int ma = a < n / 2 ? a : a - n;
    for (int b = 0; b < n; ++b) {
      const int mb = b < n / 2 ? b : b - n;
      const double k = dk * std::hypot(static_cast<double>(ma), static_cast<double>(mb));
      s += k * std::norm(rho[static_cast<std::size_t>(a) * n + b]);
    }
  }
  const double cell = dc.spacing * dc.spacing;
  return s * cell * cell / (g.box_len() * g.box_len());
}

DiagnosticRecord diagnose(const Field& field, std::size_t step, const DiagnosticOptions& options) {
  DiagnosticRecord r;
  r.step = step;
  r.t = field.time();
  r.mass = mass(field);
  if (options.system == System::pnls) {
    r.energy = energy_pnls(field, options.nonlinearity);
  } else if (options.tensor && options.tensor->has_quad()) {
    r.energy = dcr_energy(field, *options.tensor, options.nonlinearity);
  } else {
    r.energy = std::numeric_limits<double>::quiet_NaN();
  }
  r.e0 = kinetic_e0(field);
  r.l2h1 = std::sqrt(r.e0);
  r.sigma = sigma_norm(field);
  r.l4_integrand = l4_y_integrand(field);
  if (options.morawetz) {
    r.morawetz = morawetz_action(field);
    r.halfderiv = morawetz_halfderiv(field, options.cutoff);
  }
  return r;
}

std::vector<double> scattering_monitor(const std::vector<Field>& snapshots, System system) {
  for (std::size_t j = 1; j < snapshots.size(); ++j)
    if (!(snapshots[j].time() > snapshots[j - 1].time()))
      fail(ErrorCode::invalid_argument, "snapshot times must be strictly increasing (index " + std::to_string(j) + ")");
  std::vector<Field> w;
  w.reserve(snapshots.size());
  for (const Field& u : snapshots)
    w.push_back(system == System::pnls ? linear_flow(u, -u.time()) : free_y_flow(u, -u.time()));
  std::vector<double> r;
  for (std::size_t j = 1; j < w.size(); ++j)
    r.push_back(system == System::pnls ? sigma_distance(w[j], w[j - 1]) : l2h1_distance(w[j], w[j - 1]));
  return r;
}

namespace {

// Advances in equal substeps no longer than dt_max so that `span` is hit exactly.
std::size_t substeps(double span, double dt_max) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / dt_max * (1.0 - 1e-12))));
}

}  // namespace

ProfileReport profile_compare(const Field& phi, const std::vector<double>& lambdas, const ProfileSettings& s) {
  require(!lambdas.empty(), "lambda list must not be empty");
  require(s.outputs >= 1, "outputs must be positive");
  require(s.t_rescaled_end >= 0.0, "t_rescaled_end must be nonnegative");
  for (double lam : lambdas) {
    int e = 0;
    if (!(lam > 0.0) || std::frexp(lam, &e) != 0.5)
      fail(ErrorCode::invalid_argument, "lambda values must be powers of two, got " + std::to_string(lam));
  }
  const Grid& g = phi.grid();
  const ResonantTensor tensor = compute_tensor(g.n_h(), g.rule());
  DcrParams dp;
  dp.nonlinearity = s.nonlinearity;
  PnlsParams pp;
  pp.nonlinearity = s.nonlinearity;
  pp.order = s.order;

  const double ds = s.t_rescaled_end / s.outputs;
  std::vector<Field> v{phi};
  v.front().set_time(0.0);
  for (int j = 1; j <= s.outputs; ++j) {
    Field next = v.back();
    if (ds > 0.0) {
      const std::size_t m = substeps(ds, s.dt_dcr);
      next = simulate_dcr(next, ds, ds / m, &tensor, dp);
    }
    next.set_time(j * ds);
    v.push_back(std::move(next));
  }

  ProfileReport report;
  for (double lam : lambdas) {
    const double l2 = lam * lam;
    Field u = rescale(phi, lam);
    u.set_time(0.0);
    double acc_u = 0.0, acc_w = 0.0, prev_u = 0.0, prev_w = 0.0;
    double worst = 0.0;
    for (int j = 0; j <= s.outputs; ++j) {
      const double t = l2 * j * ds;
      if (j > 0 && ds > 0.0) {
        const double span = l2 * ds;
        const std::size_t m = substeps(span, s.dt_pnls);
        u = simulate_pnls(u, span, span / m, pp);
      }
      u.set_time(t);
      Field w = oscillator_flow(rescale(v[j], lam), t);
      w.set_time(t);
      const double fu = l4_y_integrand(u), fw = l4_y_integrand(w);
      if (j > 0) {
        acc_u += 0.5 * l2 * ds * (prev_u + fu);
        acc_w += 0.5 * l2 * ds * (prev_w + fw);
      }
      prev_u = fu;
      prev_w = fw;
      ProfileRow row;
      row.lambda = lam;
      row.t = t;
      row.err_l2h1 = l2h1_distance(u, w);
      row.err_l4acc = std::abs(acc_u - acc_w);
      row.mass_u = mass(u);
      row.mass_w = mass(w);
      worst = std::max(worst, row.err_l2h1);
      report.rows.push_back(row);
    }
    report.lambdas.push_back(lam);
    report.err.push_back(worst);
  }
  return report;
}

}  // namespace phnls
