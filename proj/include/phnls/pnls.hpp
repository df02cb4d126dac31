#pragma once

// Split-step integrator for i u_t + (Laplacian - x^2) u = mu |u|^2 u.

#include <cstddef>
#include <functional>

#include "phnls/state.hpp"

namespace phnls {

inline constexpr double kMaxPnlsStep = 0.1;

struct PnlsParams {
  double nonlinearity = 1.0;  // 1 defocusing, 0 linear
  int order = 2;              // 2 Strang, 4 Yoshida
};

/// Called with the step index and the state after that step (step 0 is the
/// initial state).
using StepSink = std::function<void(std::size_t step, const Field& state)>;

struct RunControl {
  std::size_t every = 1;  // 0 disables periodic calls; the final state is always reported
  StepSink sink;
};

/// u -> u exp(-i mu dt |u|^2) on the product grid, projected back with the
/// y mask and the Hermite truncation. Only the increment is projected.
Field nonlinear_substep(const Field& field, double dt, double nonlinearity = 1.0);

Field strang_step(const Field& field, double dt, const PnlsParams& params = {});
Field yoshida_step(const Field& field, double dt, const PnlsParams& params = {});

/// Number of steps and the length of the final (possibly shortened) step.
struct StepPlan {
  std::size_t steps = 0;
  double dt = 0.0;
  double last_dt = 0.0;
  double time_at(std::size_t step, double t0) const;
};
StepPlan plan_steps(double t_end, double dt, double max_dt);

Field simulate_pnls(const Field& init, double t_end, double dt, const PnlsParams& params = {},
                    const RunControl& control = {});

}  // namespace phnls
