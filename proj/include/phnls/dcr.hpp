#pragma once

// The dispersive continuous resonant system i v_t + Laplacian_y v = F(v),
// F_n = sum_{n1 - n2 + n3 = n} D c_n1 conj(c_n2) c_n3.

#include "phnls/pnls.hpp"
#include "phnls/resonant_tensor.hpp"

namespace phnls {

enum class FStrategy { tensor, average };

struct DcrParams {
  double nonlinearity = 1.0;
  FStrategy strategy = FStrategy::tensor;
  int m_tau = 0;  // 0 selects 2 n_h
};

Field evaluate_F_tensor(const Field& field, const ResonantTensor& tensor);

/// Period average of the conjugated pointwise cubic over m_tau samples of
/// the oscillator flow on [0, pi). Requires m_tau >= 2 n_h.
Field evaluate_F_average(const Field& field, int m_tau);

/// Exact free_y half-steps around one RK4 step of c_t = -i mu F(c).
/// The tensor may be null for the average strategy.
Field dcr_step(const Field& field, double dt, const ResonantTensor* tensor, const DcrParams& params = {});

Field simulate_dcr(const Field& init, double t_end, double dt, const ResonantTensor* tensor,
                   const DcrParams& params = {}, const RunControl& control = {});

/// 1/2 sum |k|^2 |c|^2 + mu/4 sum_{n1+n3=n2+n4} Q integral c c* c c* dy.
double dcr_energy(const Field& field, const ResonantTensor& tensor_with_quad, double nonlinearity = 1.0);

double dcr_kinetic_e0(const Field& field);

}  // namespace phnls
