#include "phnls/pnls.hpp"

#include <cmath>
#include <string>

#include "phnls/propagators.hpp"

namespace phnls {

Field nonlinear_substep(const Field& field, double dt, double nonlinearity) {
  if (nonlinearity == 0.0 || dt == 0.0) return field;
  const Grid& g = field.grid();
  const HermiteRule& rule = g.product_rule();
  std::vector<cplx> values = to_physical(field, rule);
  const double theta = nonlinearity * dt;
  for (auto& u : values) u *= std::polar(1.0, -theta * std::norm(u)) - 1.0;
  Field incr = from_physical(values, field.grid_ptr(), rule);
  apply_dealias(incr);
  Field out = field;
  for (std::size_t i = 0; i < out.coeffs().size(); ++i) out.coeffs()[i] += incr.coeffs()[i];
  return out;
}

Field strang_step(const Field& field, double dt, const PnlsParams& params) {
  Field u = linear_flow(field, 0.5 * dt);
  u = nonlinear_substep(u, dt, params.nonlinearity);
  apply_linear_phase(u, 0.5 * dt);
  u.set_time(field.time() + dt);
  return u;
}

Field yoshida_step(const Field& field, double dt, const PnlsParams& params) {
  const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
  const double w0 = 1.0 - 2.0 * w1;
  Field u = strang_step(field, w1 * dt, params);
  u = strang_step(u, w0 * dt, params);
  u = strang_step(u, w1 * dt, params);
  u.set_time(field.time() + dt);
  return u;
}

double StepPlan::time_at(std::size_t step, double t0) const {
  if (step == steps && steps > 0) return t0 + (steps - 1) * dt + last_dt;
  return t0 + step * dt;
}

StepPlan plan_steps(double t_end, double dt, double max_dt) {
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) fail(ErrorCode::invalid_argument, "t_end must be nonnegative");
  if (!(dt > 0.0)) fail(ErrorCode::invalid_argument, "dt must be positive");
  if (dt > max_dt)
    fail(ErrorCode::invalid_argument, "dt = " + std::to_string(dt) + " exceeds the maximum " + std::to_string(max_dt));
  StepPlan plan;
  plan.dt = dt;
  if (t_end == 0.0) return plan;
  plan.steps = static_cast<std::size_t>(std::ceil(t_end / dt * (1.0 - 1e-12)));
  if (plan.steps == 0) plan.steps = 1;
  plan.last_dt = t_end - (plan.steps - 1) * dt;
  return plan;
}

namespace {
void report(const RunControl& control, std::size_t step, std::size_t total, const Field& u) {
  if (!control.sink) return;
  const bool periodic = control.every != 0 && step % control.every == 0;
  if (periodic || step == total) control.sink(step, u);
}
}  // namespace

Field simulate_pnls(const Field& init, double t_end, double dt, const PnlsParams& params,
                    const RunControl& control) {
  if (params.nonlinearity < 0.0) fail(ErrorCode::invalid_argument, "focusing nonlinearity is not supported");
  if (params.order != 2 && params.order != 4) fail(ErrorCode::invalid_argument, "order must be 2 or 4");
  const StepPlan plan = plan_steps(t_end, dt, kMaxPnlsStep);
  const double t0 = init.time();
  Field u = init;
  report(control, 0, plan.steps, u);
  for (std::size_t s = 1; s <= plan.steps; ++s) {
    const double h = s == plan.steps ? plan.last_dt : dt;
    u = params.order == 4 ? yoshida_step(u, h, params) : strang_step(u, h, params);
    u.set_time(plan.time_at(s, t0));
    if (!u.all_finite()) fail(ErrorCode::numerical, "non-finite coefficients at step " + std::to_string(s));
    report(control, s, plan.steps, u);
  }
  return u;
}

}  // namespace phnls
