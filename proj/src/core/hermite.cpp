#include "phnls/hermite.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace phnls {
namespace {

constexpr double kRescaleThreshold = 0x1p500;
constexpr double kRescaleFactor = 0x1p-500;
const double kLogRescale = 500.0 * std::log(2.0);

void check_index(int n) {
  if (n < 0 || n > kMaxHermiteIndex)
    fail(ErrorCode::invalid_argument,
         "Hermite index " + std::to_string(n) + " outside [0, " +
             std::to_string(kMaxHermiteIndex) + "]");
}

// Runs the recurrence for h_0..h_{out.size()-1} at x. The Gaussian factor
// exp(-x^2/2) is carried as a separate log scale and applied on output.
void recurrence(double x, std::span<double> out) {
  if (out.empty()) return;
  const double quarter_pi = std::pow(kPi, -0.25);
  double log_scale = -0.5 * x * x;
  double prev = 0.0;
  double cur = quarter_pi;
  out[0] = cur * std::exp(log_scale);
  for (std::size_t n = 0; n + 1 < out.size(); ++n) {
    const double dn = static_cast<double>(n);
    const double next = std::sqrt(2.0 / (dn + 1.0)) * x * cur - std::sqrt(dn / (dn + 1.0)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleThreshold) {
      cur *= kRescaleFactor;
      prev *= kRescaleFactor;
      log_scale += kLogRescale;
    }
    out[n + 1] = cur * std::exp(log_scale);
  }
}

}  // namespace

double eval_hermite(int n, double x) {
  check_index(n);
  if (!std::isfinite(x)) fail(ErrorCode::invalid_argument, "eval_hermite: non-finite x");
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  recurrence(x, values);
  return values.back();
}

void eval_hermite_all(double x, std::span<double> out) {
  if (!out.empty()) check_index(static_cast<int>(out.size()) - 1);
  recurrence(x, out);
}

double hermite_center_value(int n) {
  check_index(n);
  if (n % 2 == 1) return 0.0;
  const double half = n / 2;
  const double log_mag = 0.5 * std::lgamma(n + 1.0) - half * std::log(2.0) -
                         std::lgamma(half + 1.0) - 0.25 * std::log(kPi);
  const double mag = std::exp(log_mag);
  return (n / 2) % 2 == 0 ? mag : -mag;
}

double delta_hminus1_partial(int N) {
  check_index(N);
  double sum = 0.0;
  for (int n = 0; n <= N; n += 2) {
    const double h = hermite_center_value(n);
    sum += h * h / (2.0 * n + 1.0);
  }
  return sum;
}

HermiteRule build_quadrature(int count, int n_h) {
  require(count >= 1, "quadrature count must be positive");
  require(n_h >= 1, "Hermite truncation must be positive");
  require(count >= n_h, "quadrature count " + std::to_string(count) +
                            " smaller than Hermite truncation " + std::to_string(n_h));
  check_index(count);

  HermiteRule rule;
  rule.count = count;
  rule.n_h = n_h;
  rule.exponent = 1.0;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  rule.transform_weights.resize(count);

  if (count == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = std::sqrt(kPi);
  } else {
    // Jacobi matrix of the monic Hermite recurrence for exp(-x^2).
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(count);
    Eigen::VectorXd sub(count - 1);
    for (int k = 1; k < count; ++k) sub[k - 1] = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
      fail(ErrorCode::internal,
           "Golub-Welsch eigensolver did not converge for M = " + std::to_string(count));
    const Eigen::VectorXd& vals = solver.eigenvalues();
    const Eigen::MatrixXd& vecs = solver.eigenvectors();
    for (int m = 0; m < count; ++m) {
      // Symmetrize: the exact node set is closed under negation.
      rule.nodes[m] = 0.5 * (vals[m] - vals[count - 1 - m]);
      const double v0 = vecs(0, m);
      const double v1 = vecs(0, count - 1 - m);
      rule.weights[m] = std::sqrt(kPi) * 0.5 * (v0 * v0 + v1 * v1);
    }
    if (count % 2 == 1) rule.nodes[count / 2] = 0.0;
  }

  // Christoffel numbers from the Hermite functions themselves:
  // w_m exp(x_m^2) = 1 / sum_{j<M} h_j(x_m)^2. The eigenvector weights lose
  // relative accuracy at the outer nodes, so both are rebuilt from this.
  std::vector<double> h(count);
  rule.basis.resize(static_cast<std::size_t>(count) * n_h);
  for (int m = 0; m < count; ++m) {
    recurrence(rule.nodes[m], h);
    double s = 0.0;
    for (int j = 0; j < count; ++j) s += h[j] * h[j];
    rule.transform_weights[m] = 1.0 / s;
    if (count > 1) rule.weights[m] = rule.transform_weights[m] * std::exp(-rule.nodes[m] * rule.nodes[m]);
    for (int n = 0; n < n_h; ++n) rule.basis[static_cast<std::size_t>(m) * n_h + n] = h[n];
  }
  return rule;
}

HermiteRule build_product_quadrature(int count, int n_h) {
  HermiteRule rule = build_quadrature(count, n_h);
  const double s = std::sqrt(2.0);
  rule.exponent = 2.0;
  std::vector<double> h(n_h);
  for (int m = 0; m < count; ++m) {
    rule.nodes[m] /= s;
    rule.weights[m] /= s;
    rule.transform_weights[m] /= s;
    recurrence(rule.nodes[m], h);
    for (int n = 0; n < n_h; ++n) rule.basis[static_cast<std::size_t>(m) * n_h + n] = h[n];
  }
  return rule;
}

SpectralProfile analyze(std::span<const cplx> samples, const HermiteRule& rule) {
  if (static_cast<int>(samples.size()) != rule.count)
    fail(ErrorCode::invalid_argument, "analyze: expected " + std::to_string(rule.count) +
                                          " samples, got " + std::to_string(samples.size()));
  SpectralProfile out;
  out.coeffs.assign(rule.n_h, cplx(0.0));
  for (int m = 0; m < rule.count; ++m) {
    const cplx wf = rule.transform_weights[m] * samples[m];
    for (int n = 0; n < rule.n_h; ++n) out.coeffs[n] += wf * rule.basis_at(m, n);
  }
  return out;
}

std::vector<cplx> synthesize(const SpectralProfile& profile, const HermiteRule& rule) {
  if (static_cast<int>(profile.coeffs.size()) > rule.n_h)
    fail(ErrorCode::invalid_argument,
         "synthesize: profile has " + std::to_string(profile.coeffs.size()) +
             " coefficients, rule supports " + std::to_string(rule.n_h));
  std::vector<cplx> out(rule.count, cplx(0.0));
  const int n_coeffs = static_cast<int>(profile.coeffs.size());
  for (int m = 0; m < rule.count; ++m) {
    cplx acc(0.0);
    for (int n = 0; n < n_coeffs; ++n) acc += profile.coeffs[n] * rule.basis_at(m, n);
    out[m] = acc;
  }
  return out;
}

double hs_norm(const SpectralProfile& profile, double s) {
  double sum = 0.0;
  for (std::size_t n = 0; n < profile.coeffs.size(); ++n)
    sum += std::pow(2.0 * static_cast<double>(n) + 1.0, s) * std::norm(profile.coeffs[n]);
  return std::sqrt(sum);
}

}  // namespace phnls
