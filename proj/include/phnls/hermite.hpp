#pragma once

// L2-orthonormal Hermite functions h_n(x), eigenfunctions of -d^2/dx^2 + x^2
// with eigenvalue 2n+1, plus Gauss-Hermite quadrature and the
// coefficient <-> sample transforms built on it.

#include <span>
#include <vector>

#include "phnls/common.hpp"

namespace phnls {

inline constexpr int kMaxHermiteIndex = 4096;

/// h_n(x) by the three-term recurrence with the Gaussian folded in.
/// Intermediate values are rescaled so large |x| does not underflow early.
double eval_hermite(int n, double x);

/// Fills out[j] = h_j(x) for j < out.size().
void eval_hermite_all(double x, std::span<double> out);

/// h_n(0) from its closed form (zero for odd n), evaluated through lgamma.
double hermite_center_value(int n);

/// Sum over n <= N of h_n(0)^2 / (2n+1): partial sums of the H^{-1} norm
/// of the Dirac mass at the origin.
double delta_hminus1_partial(int N);

/// Gauss-Hermite rule for the weight exp(-a x^2), with the Hermite basis
/// sampled at its nodes.
///
/// `transform_weights[m]` equals `weights[m] * exp(a x_m^2)`, so that
/// sum_m transform_weights[m] f(x_m) approximates the plain integral of f.
/// With a = 1 the rule integrates products of two basis functions exactly
/// (count >= n_h); with a = 2 it integrates products of four exactly
/// (count >= 2 n_h).
struct HermiteRule {
  int count = 0;
  int n_h = 0;
  double exponent = 1.0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> transform_weights;
  std::vector<double> basis;  // basis[m * n_h + n] = h_n(nodes[m])

  double basis_at(int m, int n) const { return basis[static_cast<std::size_t>(m) * n_h + n]; }
};

/// Golub-Welsch rule for exp(-x^2) with `count` nodes and `n_h` basis columns.
HermiteRule build_quadrature(int count, int n_h);

/// Rule for exp(-2 x^2): the exp(-x^2) nodes scaled by 1/sqrt(2).
HermiteRule build_product_quadrature(int count, int n_h);

/// Hermite coefficients f_n = <f, h_n> of a function of x alone.
struct SpectralProfile {
  std::vector<cplx> coeffs;
};

/// f_n = sum_m transform_weights[m] * samples[m] * h_n(x_m).
SpectralProfile analyze(std::span<const cplx> samples, const HermiteRule& rule);

/// samples[m] = sum_n f_n h_n(x_m). Profiles shorter than rule.n_h are
/// zero-extended; longer profiles are rejected.
std::vector<cplx> synthesize(const SpectralProfile& profile, const HermiteRule& rule);

/// (sum_n (2n+1)^s |f_n|^2)^{1/2}.
double hs_norm(const SpectralProfile& profile, double s);

}  // namespace phnls
