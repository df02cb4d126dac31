#pragma once

// Exact linear flows and symmetry maps acting on Fields.

#include <array>
#include <span>
#include <vector>

#include "phnls/state.hpp"

namespace phnls {

/// c[k, n] *= exp(-i |k|^2 dt).
Field free_y_flow(const Field& field, double dt);

/// Slice n *= exp(-i (2n+1) dt), i.e. exp(i dt (d_xx - x^2)).
Field oscillator_flow(const Field& field, double dt);

/// Both phases in one pass: exp(-i (|k|^2 + 2n + 1) dt).
Field linear_flow(const Field& field, double dt);

/// In-place variants used inside the integrators.
void apply_free_y_phase(Field& field, double dt);
void apply_linear_phase(Field& field, double dt);

/// Mehler kernel of exp(i t (d_xx - x^2)) for d = 1.
cplx mehler_kernel(double x, double x_src, double t);

/// Applies the Mehler kernel by quadrature. The source integral runs on a
/// rule with twice rule.count nodes; the image is analyzed on `rule`.
/// Throws a domain error when t lies within 1e-3 of (pi/2)Z.
SpectralProfile mehler_apply(const SpectralProfile& profile, double t, const HermiteRule& rule);

/// Kernel applied to samples on a uniform source grid by the trapezoid rule.
std::vector<cplx> mehler_apply_samples(std::span<const double> x_src, std::span<const cplx> f_src,
                                       std::span<const double> x_out, double t);

/// u -> exp(-i t |xi|^2) exp(i y.xi) u(t, y - 2 xi t, x). Each component of
/// xi must be a multiple of 2 pi / L.
Field galilean_boost(const Field& field, std::array<double, 2> xi, double t);

/// (1/lam) f(y / lam, x) on the box of side lam * L; lam must be 2^m.
Field rescale(const Field& field, double lam);

}  // namespace phnls
