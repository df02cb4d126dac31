#pragma once

// Diagnostics on fields and trajectories: scattering residuals, interaction
// Morawetz quantities and the PNLS / DCR profile comparison.

#include <cstddef>
#include <vector>

#include "phnls/dcr.hpp"
#include "phnls/pnls.hpp"

namespace phnls {

enum class System { pnls, dcr };

struct DiagnosticRecord {
  std::size_t step = 0;
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double e0 = 0.0;
  double l2h1 = 0.0;
  double sigma = 0.0;
  double l4_integrand = 0.0;
  double morawetz = 0.0;
  double halfderiv = 0.0;
};

struct DiagnosticOptions {
  System system = System::pnls;
  double nonlinearity = 1.0;
  const ResonantTensor* tensor = nullptr;  // needs Q for the DCR energy
  double cutoff = 0.0;
  bool morawetz = true;
};

/// One row of diagnostics. The DCR energy is NaN when no Q table is given.
DiagnosticRecord diagnose(const Field& field, std::size_t step, const DiagnosticOptions& options = {});

/// r_j = |w(t_{j+1}) - w(t_j)| for the interaction-picture states
/// w = exp(-i t L) u, in the Sigma norm (pnls) or L2_y H1_x (dcr).
std::vector<double> scattering_monitor(const std::vector<Field>& snapshots, System system);

/// Density rho(y) = integral |u|^2 dx and current J(y) = integral Im(conj(u) grad_y u) dx
/// on the grid refined by `factor` (exact trigonometric interpolation).
struct DensityCurrent {
  int n = 0;
  double spacing = 0.0;
  std::vector<double> rho;
  std::vector<double> j1;
  std::vector<double> j2;
};
DensityCurrent density_current(const Field& field, int factor = 2);

/// Sum over pairs of rho(y~) (y - y~)/|y - y~| . J(y) on the refined grid,
/// with the kernel set to 0 at coincident points. Linear convolution by FFT.
double morawetz_action(const Field& field);
/// Same sum evaluated pair by pair.
double morawetz_action_direct(const Field& field);

/// integral | |grad_y|^{1/2} rho |^2 dy, after projecting to |k| <= cutoff when cutoff > 0.
double morawetz_halfderiv(const Field& field, double cutoff = 0.0);

struct ProfileSettings {
  double t_rescaled_end = 0.5;
  int outputs = 10;
  double dt_dcr = 1e-3;   // rescaled time
  double dt_pnls = 5e-3;  // physical time
  double nonlinearity = 1.0;
  int order = 2;
};

struct ProfileRow {
  double lambda = 0.0;
  double t = 0.0;
  double err_l2h1 = 0.0;
  double err_l4acc = 0.0;
  double mass_u = 0.0;
  double mass_w = 0.0;
};

struct ProfileReport {
  std::vector<ProfileRow> rows;
  std::vector<double> lambdas;
  std::vector<double> err;  // max over output times, per lambda
};

/// Runs PNLS from rescale(phi, lam) to lam^2 t_end and DCR from phi to t_end,
/// and compares u_lam with w_lam(t) = oscillator_flow(rescale(v(t / lam^2), lam), t).
ProfileReport profile_compare(const Field& phi, const std::vector<double>& lambdas, const ProfileSettings& settings);

}  // namespace phnls
