#include "phnls/phnls.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>

#include "phnls/analysis.hpp"
#include "phnls/config.hpp"

struct phnls_grid {
  phnls::GridPtr grid;
};
struct phnls_field {
  phnls::Field field;
};
struct phnls_tensor {
  phnls::ResonantTensor tensor;
};

namespace {

thread_local std::string g_last_error;

phnls_status to_status(phnls::ErrorCode code) {
  switch (code) {
    case phnls::ErrorCode::invalid_argument: return PHNLS_ERR_INVALID_ARGUMENT;
    case phnls::ErrorCode::domain: return PHNLS_ERR_DOMAIN;
    case phnls::ErrorCode::numerical: return PHNLS_ERR_NUMERICAL;
    case phnls::ErrorCode::io: return PHNLS_ERR_IO;
    case phnls::ErrorCode::parse: return PHNLS_ERR_PARSE;
    case phnls::ErrorCode::internal: return PHNLS_ERR_INTERNAL;
  }
  return PHNLS_ERR_INTERNAL;
}

template <class F>
phnls_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return PHNLS_OK;
  } catch (const phnls::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PHNLS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PHNLS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return PHNLS_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) phnls::fail(phnls::ErrorCode::invalid_argument, std::string(what) + " must not be null");
}

const char* kKinds[] = {"gaussian", "mode", "file"};

phnls::RunConfig from_c(const phnls_run_config& c) {
  phnls::RunConfig r;
  r.n_y = c.n_y;
  r.box_len = c.box_len;
  r.n_h = c.n_h;
  r.quad_count = c.quad_count;
  if (c.system != PHNLS_SYSTEM_PNLS && c.system != PHNLS_SYSTEM_DCR)
    phnls::fail(phnls::ErrorCode::invalid_argument, "unknown system");
  r.system = c.system == PHNLS_SYSTEM_DCR ? "dcr" : "pnls";
  r.dt = c.dt;
  r.t_end = c.t_end;
  r.mu = c.mu;
  r.order = c.order;
  r.f_strategy = c.f_average ? "average" : "tensor";
  r.m_tau = c.m_tau;
  if (c.lambda_count < 1 || c.lambda_count > PHNLS_MAX_LAMBDAS)
    phnls::fail(phnls::ErrorCode::invalid_argument, "lambda_count out of range");
  r.lambda_list.assign(c.lambda_list, c.lambda_list + c.lambda_count);
  r.t_rescaled_end = c.t_rescaled_end;
  r.dt_dcr = c.dt_dcr;
  r.outputs = c.outputs;
  r.seed = c.seed;
  if (c.initial_kind < 0 || c.initial_kind > 2) phnls::fail(phnls::ErrorCode::invalid_argument, "unknown initial kind");
  r.initial_kind = kKinds[c.initial_kind];
  r.amplitude = c.amplitude;
  r.width = c.width;
  r.center_y1 = c.center_y1;
  r.center_y2 = c.center_y2;
  r.xi1 = c.xi1;
  r.xi2 = c.xi2;
  r.mode_n = c.mode_n;
  r.mode_k1 = c.mode_k1;
  r.mode_k2 = c.mode_k2;
  r.noise = c.noise;
  r.initial_file.assign(c.initial_file, strnlen(c.initial_file, PHNLS_PATH_MAX));
  r.eps0 = c.eps0;
  r.diag_every = c.diag_every;
  r.snapshot_every = c.snapshot_every;
  r.cutoff = c.cutoff;
  r.morawetz = c.morawetz != 0;
  return r;
}

void to_c(const phnls::RunConfig& r, phnls_run_config& c) {
  std::memset(&c, 0, sizeof c);
  c.n_y = r.n_y;
  c.box_len = r.box_len;
  c.n_h = r.n_h;
  c.quad_count = r.quad_count;
  c.system = r.system == "dcr" ? PHNLS_SYSTEM_DCR : PHNLS_SYSTEM_PNLS;
  c.dt = r.dt;
  c.t_end = r.t_end;
  c.mu = r.mu;
  c.order = r.order;
  c.f_average = r.f_strategy == "average";
  c.m_tau = r.m_tau;
  if (r.lambda_list.size() > PHNLS_MAX_LAMBDAS) phnls::fail(phnls::ErrorCode::invalid_argument, "too many lambdas");
  c.lambda_count = static_cast<int>(r.lambda_list.size());
  for (std::size_t i = 0; i < r.lambda_list.size(); ++i) c.lambda_list[i] = r.lambda_list[i];
  c.t_rescaled_end = r.t_rescaled_end;
  c.dt_dcr = r.dt_dcr;
  c.outputs = r.outputs;
  c.seed = r.seed;
  c.initial_kind = r.initial_kind == "mode" ? 1 : r.initial_kind == "file" ? 2 : 0;
  c.amplitude = r.amplitude;
  c.width = r.width;
  c.center_y1 = r.center_y1;
  c.center_y2 = r.center_y2;
  c.xi1 = r.xi1;
  c.xi2 = r.xi2;
  c.mode_n = r.mode_n;
  c.mode_k1 = r.mode_k1;
  c.mode_k2 = r.mode_k2;
  c.noise = r.noise;
  if (r.initial_file.size() >= PHNLS_PATH_MAX) phnls::fail(phnls::ErrorCode::invalid_argument, "initial file path too long");
  std::memcpy(c.initial_file, r.initial_file.data(), r.initial_file.size());
  c.eps0 = r.eps0;
  c.diag_every = r.diag_every;
  c.snapshot_every = r.snapshot_every;
  c.cutoff = r.cutoff;
  c.morawetz = r.morawetz ? 1 : 0;
}

phnls_diagnostic to_c(const phnls::DiagnosticRecord& d) {
  return {d.step, d.t, d.mass, d.energy, d.e0, d.l2h1, d.sigma, d.l4_integrand, d.morawetz, d.halfderiv};
}

struct StopRequested {
  phnls::Field state;
};

// Composite Simpson on [-12, 12] with step 1e-3.
struct SimpsonTable {
  std::vector<double> w;
  std::vector<double> h;  // [i * n + k]
  int n = 0;
  explicit SimpsonTable(int n_max) : n(n_max) {
    const int cells = 24000;
    const double step = 24.0 / cells;
    w.resize(cells + 1);
    h.resize(static_cast<std::size_t>(cells + 1) * std::max(n, 1));
    std::vector<double> row(std::max(n, 1));
    for (int i = 0; i <= cells; ++i) {
      w[i] = step / 3.0 * ((i == 0 || i == cells) ? 1.0 : (i % 2 ? 4.0 : 2.0));
      phnls::eval_hermite_all(-12.0 + i * step, row);
      for (int k = 0; k < n; ++k) h[static_cast<std::size_t>(i) * n + k] = row[k];
    }
  }
  double overlap(int a, int b, int c, int d) const {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double* r = h.data() + i * n;
      s += w[i] * r[a] * r[b] * r[c] * r[d];
    }
    return s;
  }
};

phnls::ResonantTensor build_tensor(int n_max, int quad_count, bool with_quad) {
  if (n_max < 0 || n_max > 64) phnls::fail(phnls::ErrorCode::invalid_argument, "n_max must lie in [0, 64]");
  if (n_max == 0) return phnls::compute_tensor(0, phnls::HermiteRule{}, with_quad);
  const int count = quad_count == 0 ? 4 * n_max : quad_count;
  if (count < 2 * n_max)
    phnls::fail(phnls::ErrorCode::invalid_argument, "quad_count " + std::to_string(count) + " too small: n_max = " +
                                                        std::to_string(n_max) + " requires at least " +
                                                        std::to_string(2 * n_max));
  return phnls::compute_tensor(n_max, phnls::build_quadrature(count, n_max), with_quad);
}

}  // namespace

extern "C" {

const char* phnls_version(void) { return "1.0.0"; }

const char* phnls_last_error(void) { return g_last_error.c_str(); }

const char* phnls_status_string(phnls_status status) {
  switch (status) {
    case PHNLS_OK: return "ok";
    case PHNLS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PHNLS_ERR_DOMAIN: return "domain error";
    case PHNLS_ERR_NUMERICAL: return "numerical failure";
    case PHNLS_ERR_IO: return "i/o error";
    case PHNLS_ERR_PARSE: return "parse error";
    case PHNLS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

phnls_status phnls_config_default(phnls_run_config* out) {
  return guarded([&] {
    need(out, "out");
    to_c(phnls::RunConfig{}, *out);
  });
}

phnls_status phnls_config_parse_file(const char* path, phnls_run_config* out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    to_c(phnls::parse_config(path), *out);
  });
}

phnls_status phnls_config_parse_string(const char* text, phnls_run_config* out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    to_c(phnls::parse_config_text(text), *out);
  });
}

phnls_status phnls_config_set(phnls_run_config* config, const char* key, const char* value) {
  return guarded([&] {
    need(config, "config");
    need(key, "key");
    need(value, "value");
    phnls::RunConfig r = from_c(*config);
    std::string k = key, section;
    if (const auto dot = k.find('.'); dot != std::string::npos) {
      section = k.substr(0, dot);
      k = k.substr(dot + 1);
    }
    phnls::set_config_value(r, section, k, value);
    to_c(r, *config);
  });
}

phnls_status phnls_config_validate(const phnls_run_config* config) {
  return guarded([&] {
    need(config, "config");
    phnls::validate_config(from_c(*config));
  });
}

phnls_status phnls_grid_create(int n_y, double box_len, int n_h, int quad_count, phnls_grid** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    auto g = phnls::Grid::create(n_y, box_len, n_h, quad_count);
    *out = new phnls_grid{std::move(g)};
  });
}

phnls_status phnls_grid_from_config(const phnls_run_config* config, phnls_grid** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    *out = nullptr;
    const phnls::RunConfig r = from_c(*config);
    phnls::validate_config(r);
    *out = new phnls_grid{phnls::make_grid(r)};
  });
}

void phnls_grid_destroy(phnls_grid* grid) { delete grid; }

phnls_status phnls_grid_info(const phnls_grid* grid, int* n_y, double* box_len, int* n_h, int* quad_count) {
  return guarded([&] {
    need(grid, "grid");
    if (n_y) *n_y = grid->grid->n_y();
    if (box_len) *box_len = grid->grid->box_len();
    if (n_h) *n_h = grid->grid->n_h();
    if (quad_count) *quad_count = grid->grid->quad_count();
  });
}

phnls_status phnls_field_zero(const phnls_grid* grid, phnls_field** out) {
  return guarded([&] {
    need(grid, "grid");
    need(out, "out");
    *out = nullptr;
    *out = new phnls_field{phnls::Field(grid->grid)};
  });
}

phnls_status phnls_field_initial(const phnls_run_config* config, const phnls_grid* grid, phnls_field** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    *out = nullptr;
    const phnls::RunConfig r = from_c(*config);
    phnls::validate_config(r);
    phnls::GridPtr g = grid ? grid->grid : phnls::make_grid(r);
    *out = new phnls_field{phnls::make_initial(r, g)};
  });
}

phnls_status phnls_field_clone(const phnls_field* field, phnls_field** out) {
  return guarded([&] {
    need(field, "field");
    need(out, "out");
    *out = nullptr;
    *out = new phnls_field{field->field};
  });
}

void phnls_field_destroy(phnls_field* field) { delete field; }

phnls_status phnls_field_size(const phnls_field* field, size_t* count) {
  return guarded([&] {
    need(field, "field");
    need(count, "count");
    *count = field->field.coeffs().size();
  });
}

phnls_status phnls_field_info(const phnls_field* field, int* n_y, double* box_len, int* n_h, int* quad_count) {
  return guarded([&] {
    need(field, "field");
    const phnls::Grid& g = field->field.grid();
    if (n_y) *n_y = g.n_y();
    if (box_len) *box_len = g.box_len();
    if (n_h) *n_h = g.n_h();
    if (quad_count) *quad_count = g.quad_count();
  });
}

phnls_status phnls_field_time(const phnls_field* field, double* t) {
  return guarded([&] {
    need(field, "field");
    need(t, "t");
    *t = field->field.time();
  });
}

phnls_status phnls_field_get_coeffs(const phnls_field* field, double* interleaved, size_t count) {
  return guarded([&] {
    need(field, "field");
    need(interleaved, "interleaved");
    const auto& c = field->field.coeffs();
    if (count != c.size()) phnls::fail(phnls::ErrorCode::invalid_argument, "coefficient count mismatch");
    for (std::size_t i = 0; i < c.size(); ++i) {
      interleaved[2 * i] = c[i].real();
      interleaved[2 * i + 1] = c[i].imag();
    }
  });
}

phnls_status phnls_field_set_coeffs(phnls_field* field, const double* interleaved, size_t count) {
  return guarded([&] {
    need(field, "field");
    need(interleaved, "interleaved");
    auto& c = field->field.coeffs();
    if (count != c.size()) phnls::fail(phnls::ErrorCode::invalid_argument, "coefficient count mismatch");
    for (std::size_t i = 0; i < count; ++i)
      if (!std::isfinite(interleaved[2 * i]) || !std::isfinite(interleaved[2 * i + 1]))
        phnls::fail(phnls::ErrorCode::invalid_argument, "non-finite coefficient at index " + std::to_string(i));
    for (std::size_t i = 0; i < count; ++i) c[i] = phnls::cplx(interleaved[2 * i], interleaved[2 * i + 1]);
  });
}

phnls_status phnls_field_read_snapshot(const char* path, int quad_count, phnls_field** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new phnls_field{phnls::read_snapshot(path, quad_count)};
  });
}

phnls_status phnls_field_write_snapshot(const phnls_field* field, const char* path) {
  return guarded([&] {
    need(field, "field");
    need(path, "path");
    phnls::write_snapshot(field->field, path);
  });
}

phnls_status phnls_diagnose(const phnls_field* field, int system, double mu, const phnls_tensor* tensor,
                            double cutoff, uint64_t step, phnls_diagnostic* out) {
  return guarded([&] {
    need(field, "field");
    need(out, "out");
    if (system != PHNLS_SYSTEM_PNLS && system != PHNLS_SYSTEM_DCR)
      phnls::fail(phnls::ErrorCode::invalid_argument, "unknown system");
    phnls::DiagnosticOptions opt;
    opt.system = system == PHNLS_SYSTEM_DCR ? phnls::System::dcr : phnls::System::pnls;
    opt.nonlinearity = mu;
    opt.tensor = tensor ? &tensor->tensor : nullptr;
    opt.cutoff = cutoff;
    *out = to_c(phnls::diagnose(field->field, step, opt));
  });
}

phnls_status phnls_tensor_compute(int n_max, int quad_count, int with_quad, phnls_tensor** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    *out = new phnls_tensor{build_tensor(n_max, quad_count, with_quad != 0)};
  });
}

void phnls_tensor_destroy(phnls_tensor* tensor) { delete tensor; }

phnls_status phnls_tensor_value(const phnls_tensor* tensor, int n1, int n2, int n3, double* out) {
  return guarded([&] {
    need(tensor, "tensor");
    need(out, "out");
    const int n = tensor->tensor.n_max();
    if (n1 < 0 || n2 < 0 || n3 < 0 || n1 >= n || n2 >= n || n3 >= n || !tensor->tensor.stored(n1, n2, n3))
      phnls::fail(phnls::ErrorCode::invalid_argument, "index outside the resonant set");
    *out = tensor->tensor.value(n1, n2, n3);
  });
}

phnls_status phnls_tensor_checksum(const phnls_tensor* tensor, double* out) {
  return guarded([&] {
    need(tensor, "tensor");
    need(out, "out");
    *out = phnls::tensor_checksum(tensor->tensor);
  });
}

phnls_status phnls_tensor_dump_csv(const phnls_tensor* tensor, const char* path) {
  return guarded([&] {
    need(tensor, "tensor");
    need(path, "path");
    std::unique_ptr<FILE, int (*)(FILE*)> f(std::fopen(path, "wb"), &std::fclose);
    if (!f) phnls::fail(phnls::ErrorCode::io, std::string("cannot open ") + path);
    std::fprintf(f.get(), "n1,n2,n3,n,value\n");
    const int n = tensor->tensor.n_max();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (tensor->tensor.stored(a, b, c))
            std::fprintf(f.get(), "%d,%d,%d,%d,%.17g\n", a, b, c, a - b + c, tensor->tensor.value(a, b, c));
    if (std::ferror(f.get())) phnls::fail(phnls::ErrorCode::io, std::string("write failed: ") + path);
  });
}

phnls_status phnls_tensor_check(int n_max, phnls_tensor_report* out) {
  return guarded([&] {
    need(out, "out");
    if (n_max < 1 || n_max > 16) phnls::fail(phnls::ErrorCode::invalid_argument, "tensor check supports 1 <= n_max <= 16");
    const phnls::ResonantTensor t = build_tensor(n_max, 0, true);
    const SimpsonTable simpson(n_max);
    phnls_tensor_report r{};
    r.checksum = phnls::tensor_checksum(t);
    r.resonance_ok = 1;
    for (int a = 0; a < n_max; ++a)
      for (int b = 0; b < n_max; ++b)
        for (int c = 0; c < n_max; ++c) {
          if (!t.stored(a, b, c)) continue;
          const int n = a - b + c;
          ++r.entries;
          if ((2 * a + 1) - (2 * b + 1) + (2 * c + 1) - (2 * n + 1) != 0) r.resonance_ok = 0;
          r.max_oracle_error = std::max(r.max_oracle_error, std::abs(t.value(a, b, c) - simpson.overlap(a, b, c, n)));
          r.max_symmetry_error = std::max(r.max_symmetry_error, std::abs(t.value(a, b, c) - t.value(c, b, a)));
          r.max_symmetry_error = std::max(r.max_symmetry_error, std::abs(t.value(a, b, c) - t.quad(a, b, c, n)));
        }
    for (int a = 0; a < n_max; ++a)
      for (int b = 0; b < n_max; ++b)
        for (int c = 0; c < n_max; ++c)
          for (int d = 0; d < n_max; ++d) {
            const double q = t.quad(a, b, c, d);
            if ((a + b + c + d) % 2) {
              r.max_parity_error = std::max(r.max_parity_error, std::abs(q));
              continue;
            }
            for (double other : {t.quad(b, a, c, d), t.quad(a, c, b, d), t.quad(a, b, d, c), t.quad(d, c, b, a)})
              r.max_symmetry_error = std::max(r.max_symmetry_error, std::abs(q - other));
          }
    phnls::SplitMix64 rng(12345);
    for (int trial = 0; trial < 8; ++trial) {
      std::vector<phnls::cplx> c(n_max);
      for (auto& v : c) v = phnls::cplx(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
      phnls::cplx s = 0.0;
      double scale = 0.0;
      for (int a = 0; a < n_max; ++a)
        for (int b = 0; b < n_max; ++b)
          for (int d = 0; d < n_max; ++d) {
            if (!t.stored(a, b, d)) continue;
            const phnls::cplx term = t.value(a, b, d) * c[a] * std::conj(c[b]) * c[d] * std::conj(c[a - b + d]);
            s += term;
            scale += std::abs(term);
          }
      if (scale > 0.0) r.max_reality_error = std::max(r.max_reality_error, std::abs(s.imag()) / scale);
    }
    *out = r;
  });
}

phnls_status phnls_simulate(const phnls_run_config* config, const phnls_field* init, phnls_step_callback callback,
                            void* user, phnls_field** final_state) {
  return guarded([&] {
    need(config, "config");
    need(init, "init");
    if (final_state) *final_state = nullptr;
    const phnls::RunConfig r = from_c(*config);
    phnls::validate_config(r);
    const phnls::Field& u0 = init->field;
    const phnls::System system = phnls::parse_system(r.system);

    std::unique_ptr<phnls::ResonantTensor> tensor;
    if (system == phnls::System::dcr)
      tensor = std::make_unique<phnls::ResonantTensor>(
          phnls::compute_tensor(u0.grid().n_h(), u0.grid().rule(), true));

    phnls::DiagnosticOptions opt;
    opt.system = system;
    opt.nonlinearity = r.mu;
    opt.tensor = tensor.get();
    opt.cutoff = r.cutoff;
    opt.morawetz = r.morawetz;

    phnls::RunControl control;
    control.every = 1;
    std::size_t total = 0;
    if (r.t_end > 0.0) total = phnls::plan_steps(r.t_end, r.dt, phnls::kMaxPnlsStep).steps;
    if (callback) {
      control.sink = [&](std::size_t step, const phnls::Field& state) {
        const bool last = step == total;
        const bool diag_due = last || step == 0 || (r.diag_every > 0 && step % r.diag_every == 0);
        const bool snap_due = r.snapshot_every > 0 && (step % r.snapshot_every == 0 || last);
        if (!diag_due && !snap_due) return;
        const phnls_diagnostic d = to_c(phnls::diagnose(state, step, opt));
        phnls_field view{state};
        if (callback(&d, &view, diag_due ? 1 : 0, snap_due ? 1 : 0, user) != 0) throw StopRequested{state};
      };
    }

    phnls::Field result(u0.grid_ptr());
    try {
      if (system == phnls::System::pnls) {
        phnls::PnlsParams p;
        p.nonlinearity = r.mu;
        p.order = r.order;
        result = phnls::simulate_pnls(u0, r.t_end, r.dt, p, control);
      } else {
        phnls::DcrParams p;
        p.nonlinearity = r.mu;
        p.strategy = r.f_strategy == "average" ? phnls::FStrategy::average : phnls::FStrategy::tensor;
        p.m_tau = r.m_tau;
        result = phnls::simulate_dcr(u0, r.t_end, r.dt, tensor.get(), p, control);
      }
    } catch (StopRequested& stop) {
      result = std::move(stop.state);
    }
    if (final_state) *final_state = new phnls_field{std::move(result)};
  });
}

phnls_status phnls_compare_profiles(const phnls_run_config* config, phnls_profile_callback callback, void* user,
                                    double* err) {
  return guarded([&] {
    need(config, "config");
    const phnls::RunConfig r = from_c(*config);
    phnls::validate_config(r);
    const phnls::Field phi = phnls::make_initial(r, phnls::make_grid(r));
    phnls::ProfileSettings s;
    s.t_rescaled_end = r.t_rescaled_end;
    s.outputs = r.outputs;
    s.dt_dcr = r.dt_dcr;
    s.dt_pnls = r.dt;
    s.nonlinearity = r.mu;
    s.order = r.order;
    const phnls::ProfileReport rep = phnls::profile_compare(phi, r.lambda_list, s);
    if (callback)
      for (const auto& row : rep.rows) {
        const phnls_profile_row c{row.lambda, row.t, row.err_l2h1, row.err_l4acc, row.mass_u, row.mass_w};
        callback(&c, user);
      }
    if (err)
      for (std::size_t i = 0; i < rep.err.size(); ++i) err[i] = rep.err[i];
  });
}

}  // extern "C"
