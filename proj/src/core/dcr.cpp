#include "phnls/dcr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phnls/propagators.hpp"

namespace phnls {
namespace {

void check_tensor(const Field& field, const ResonantTensor& tensor) {
  if (tensor.n_max() != field.grid().n_h())
    fail(ErrorCode::invalid_argument, "tensor n_max " + std::to_string(tensor.n_max()) +
                                          " does not match field n_h " + std::to_string(field.grid().n_h()));
}

// F_n(y_j) at every y-point from the slices c_n(y_j).
// coeff is dense over (n1, n2, n3).
std::vector<cplx> pointwise_F(const std::vector<cplx>& slices, std::size_t p, int nh, const double* coeff) {
  std::vector<cplx> out(slices.size(), cplx(0.0));
  parallel_for(p, [&](std::size_t j) {
    std::vector<cplx> buf(nh);
    cplx* cv = buf.data();
    for (int n = 0; n < nh; ++n) cv[n] = slices[n * p + j];
    for (int n1 = 0; n1 < nh; ++n1) {
      if (cv[n1] == cplx(0.0)) continue;
      for (int n2 = 0; n2 < nh; ++n2) {
        const cplx a = cv[n1] * std::conj(cv[n2]);
        if (a == cplx(0.0)) continue;
        const int lo = std::max(0, n2 - n1);
        const int hi = std::min(nh - 1, nh - 1 + n2 - n1);
        for (int n3 = lo; n3 <= hi; ++n3) {
          const int n = n1 - n2 + n3;
          out[n * p + j] += coeff[(n1 * nh + n2) * nh + n3] * a * cv[n3];
        }
      }
    }
  });
  return out;
}

}  // namespace

Field evaluate_F_tensor(const Field& field, const ResonantTensor& tensor) {
  check_tensor(field, tensor);
  const std::size_t p = field.grid().points();
  const std::vector<cplx> slices = hermite_slices(field);
  std::vector<cplx> f = pointwise_F(slices, p, tensor.n_max(), tensor.values().data());
  Field out = from_hermite_slices(std::move(f), field.grid_ptr(), true);
  out.set_time(field.time());
  return out;
}

Field evaluate_F_average(const Field& field, int m_tau) {
  const Grid& g = field.grid();
  if (m_tau < 2 * g.n_h())
    fail(ErrorCode::invalid_argument, "m_tau = " + std::to_string(m_tau) + " too small: n_h = " +
                                          std::to_string(g.n_h()) + " requires at least " +
                                          std::to_string(2 * g.n_h()));
  const HermiteRule& rule = g.product_rule();
  std::vector<cplx> acc(field.coeffs().size(), cplx(0.0));
  for (int j = 0; j < m_tau; ++j) {
    const double tau = j * kPi / m_tau;
    const Field w = oscillator_flow(field, tau);
    std::vector<cplx> values = to_physical(w, rule);
    for (auto& u : values) u *= std::norm(u);
    const Field cubic = oscillator_flow(from_physical(values, field.grid_ptr(), rule), -tau);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += cubic.coeffs()[i];
  }
  Field out(field.grid_ptr(), std::move(acc), field.time());
  for (auto& c : out.coeffs()) c /= static_cast<double>(m_tau);
  apply_dealias(out);
  return out;
}

namespace {

Field evaluate_F(const Field& v, const ResonantTensor* tensor, const DcrParams& params) {
  if (params.strategy == FStrategy::tensor) {
    if (!tensor) fail(ErrorCode::invalid_argument, "tensor strategy requires a resonant tensor");
    return evaluate_F_tensor(v, *tensor);
  }
  return evaluate_F_average(v, params.m_tau == 0 ? 2 * v.grid().n_h() : params.m_tau);
}

// k = -i mu F(v)
std::vector<cplx> rhs(const Field& v, const ResonantTensor* tensor, const DcrParams& params) {
  Field f = evaluate_F(v, tensor, params);
  const cplx factor(0.0, -params.nonlinearity);
  for (auto& c : f.coeffs()) c *= factor;
  return std::move(f.coeffs());
}

Field axpy(const Field& base, double h, const std::vector<cplx>& k) {
  Field out = base;
  for (std::size_t i = 0; i < k.size(); ++i) out.coeffs()[i] += h * k[i];
  return out;
}

Field rk4(const Field& v, double dt, const ResonantTensor* tensor, const DcrParams& params) {
  const std::vector<cplx> k1 = rhs(v, tensor, params);
  const std::vector<cplx> k2 = rhs(axpy(v, 0.5 * dt, k1), tensor, params);
  const std::vector<cplx> k3 = rhs(axpy(v, 0.5 * dt, k2), tensor, params);
  const std::vector<cplx> k4 = rhs(axpy(v, dt, k3), tensor, params);
  Field out = v;
  for (std::size_t i = 0; i < k1.size(); ++i)
    out.coeffs()[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

}  // namespace

Field dcr_step(const Field& field, double dt, const ResonantTensor* tensor, const DcrParams& params) {
  if (tensor) check_tensor(field, *tensor);
  Field v = free_y_flow(field, 0.5 * dt);
  if (params.nonlinearity != 0.0) v = rk4(v, dt, tensor, params);
  apply_free_y_phase(v, 0.5 * dt);
  v.set_time(field.time() + dt);
  return v;
}

Field simulate_dcr(const Field& init, double t_end, double dt, const ResonantTensor* tensor,
                   const DcrParams& params, const RunControl& control) {
  if (params.nonlinearity < 0.0) fail(ErrorCode::invalid_argument, "focusing nonlinearity is not supported");
  if (params.strategy == FStrategy::tensor && !tensor)
    fail(ErrorCode::invalid_argument, "tensor strategy requires a resonant tensor");
  if (tensor) check_tensor(init, *tensor);
  if (params.strategy == FStrategy::average && params.m_tau != 0 && params.m_tau < 2 * init.grid().n_h())
    fail(ErrorCode::invalid_argument, "m_tau too small: requires at least " + std::to_string(2 * init.grid().n_h()));
  const StepPlan plan = plan_steps(t_end, dt, kMaxPnlsStep);
  const double t0 = init.time();
  Field v = init;
  if (control.sink) control.sink(0, v);
  for (std::size_t s = 1; s <= plan.steps; ++s) {
    const double h = s == plan.steps ? plan.last_dt : dt;
    v = dcr_step(v, h, tensor, params);
    v.set_time(plan.time_at(s, t0));
    if (!v.all_finite()) fail(ErrorCode::numerical, "non-finite coefficients at step " + std::to_string(s));
    if (control.sink && ((control.every != 0 && s % control.every == 0) || s == plan.steps)) control.sink(s, v);
  }
  return v;
}

double dcr_energy(const Field& field, const ResonantTensor& tensor, double nonlinearity) {
  check_tensor(field, tensor);
  if (!tensor.has_quad()) fail(ErrorCode::invalid_argument, "dcr_energy requires quadruple overlaps");
  const Grid& g = field.grid();
  const std::size_t p = g.points();
  double kinetic = 0.0;
  for (int n = 0; n < g.n_h(); ++n)
    for (std::size_t i = 0; i < p; ++i) kinetic += g.k_squared(i) * std::norm(field.coeffs()[n * p + i]);
  kinetic *= 0.5;
  if (nonlinearity == 0.0) return kinetic;
  const std::vector<cplx> slices = hermite_slices(field);
  const int nh = tensor.n_max();
  std::vector<double> q(static_cast<std::size_t>(nh) * nh * nh, 0.0);
  for (int a = 0; a < nh; ++a)
    for (int b = 0; b < nh; ++b)
      for (int c = 0; c < nh; ++c)
        if (ResonantTensor::stored(nh, a, b, c)) q[(a * nh + b) * nh + c] = tensor.quad(a, b, c, a - b + c);
  const std::vector<cplx> f = pointwise_F(slices, p, nh, q.data());
  double quartic = 0.0;
  for (std::size_t i = 0; i < slices.size(); ++i) quartic += (std::conj(slices[i]) * f[i]).real();
  return kinetic + 0.25 * nonlinearity * quartic * g.cell_area();
}

double dcr_kinetic_e0(const Field& field) { return kinetic_e0(field); }

}  // namespace phnls
