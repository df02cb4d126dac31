// phnls command-line driver. Everything goes through the C interface.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phnls/phnls.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

const char* kCsvHeader = "step,t,mass,energy,e0,l2h1,sigma,l4_integrand,morawetz,halfderiv\n";

int exit_code(phnls_status s) {
  if (s == PHNLS_OK) return kExitOk;
  if (s == PHNLS_ERR_NUMERICAL || s == PHNLS_ERR_INTERNAL) return kExitNumerical;
  return kExitValidation;
}

struct Failure {
  int code;
};

void check(phnls_status s, const std::string& context) {
  if (s == PHNLS_OK) return;
  std::fprintf(stderr, "phnls: %s: %s\n", context.c_str(), phnls_last_error());
  throw Failure{exit_code(s)};
}

using FilePtr = std::unique_ptr<FILE, int (*)(FILE*)>;

FilePtr open_out(const std::string& path) {
  if (path == "-") return FilePtr(stdout, [](FILE*) { return 0; });
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) {
    std::fprintf(stderr, "phnls: cannot open %s for writing\n", path.c_str());
    throw Failure{kExitValidation};
  }
  return FilePtr(f, &std::fclose);
}

void write_row(FILE* f, const phnls_diagnostic& d) {
  std::fprintf(f, "%" PRIu64 ",%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", d.step, d.t, d.mass, d.energy,
               d.e0, d.l2h1, d.sigma, d.l4_integrand, d.morawetz, d.halfderiv);
}

// Flags that mirror config keys.
struct Override {
  const char* flag;
  const char* key;
  const char* help;
  const char* def;
  std::string value;
};

std::vector<Override> make_overrides() {
  return {
      {"--n-y", "grid.n_y", "Fourier modes per y axis (power of two)", "64", {}},
      {"--box-len", "grid.box_len", "side length L of the y box", "32", {}},
      {"--n-h", "grid.n_h", "Hermite truncation", "16", {}},
      {"--quad-count", "grid.quad_count", "quadrature nodes (0 = 4 n_h, at least 2 n_h)", "0", {}},
      {"--dt", "run.dt", "time step (<= 0.1)", "0.001", {}},
      {"--t-end", "run.t_end", "final time", "1", {}},
      {"--mu", "run.mu", "nonlinearity: 1 defocusing, 0 linear", "1", {}},
      {"--order", "run.order", "splitting order: 2 or 4", "2", {}},
      {"--f-strategy", "run.f_strategy", "DCR nonlinearity: tensor or average", "tensor", {}},
      {"--m-tau", "run.m_tau", "period-average samples (>= 2 n_h)", "0 (= 2 n_h)", {}},
      {"--lambdas", "run.lambda_list", "comma-separated powers of two", "2,4,8", {}},
      {"--t-rescaled-end", "run.t_rescaled_end", "profile comparison horizon (DCR time)", "0.5", {}},
      {"--dt-dcr", "run.dt_dcr", "DCR step in profile comparison", "0.001", {}},
      {"--outputs", "run.outputs", "profile comparison output count", "10", {}},
      {"--seed", "run.seed", "seed for initial noise", "0", {}},
      {"--initial", "initial.kind", "gaussian, mode or file", "gaussian", {}},
      {"--amplitude", "initial.amplitude", "initial amplitude", "1", {}},
      {"--width", "initial.width", "Gaussian width w in exp(-|y - c|^2 / w^2)", "1", {}},
      {"--center-y1", "initial.center_y1", "Gaussian center, first axis", "0", {}},
      {"--center-y2", "initial.center_y2", "Gaussian center, second axis", "0", {}},
      {"--xi1", "initial.xi1", "boost in lattice units, first axis", "0", {}},
      {"--xi2", "initial.xi2", "boost in lattice units, second axis", "0", {}},
      {"--mode-n", "initial.mode_n", "Hermite index of the initial profile", "0", {}},
      {"--mode-k1", "initial.mode_k1", "Fourier mode (kind = mode), first axis", "0", {}},
      {"--mode-k2", "initial.mode_k2", "Fourier mode (kind = mode), second axis", "0", {}},
      {"--noise", "initial.noise", "amplitude of seeded coefficient noise", "0", {}},
      {"--initial-file", "initial.file", "snapshot to start from (kind = file)", "", {}},
      {"--eps0", "diagnostics.eps0", "epsilon_0 in (0, 1/2)", "0.25", {}},
      {"--diag-every", "diagnostics.diag_every", "steps between CSV rows", "10", {}},
      {"--snapshot-every", "diagnostics.snapshot_every", "steps between snapshots (0 = final only)", "0", {}},
      {"--cutoff", "diagnostics.cutoff", "frequency cutoff for the half-derivative functional", "0", {}},
      {"--morawetz", "diagnostics.morawetz", "compute Morawetz columns (true/false)", "true", {}},
  };
}

struct RunOptions {
  std::string config;
  std::string out = ".";
  std::vector<Override> overrides = make_overrides();
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--config,-c", o.config, "configuration file");
  cmd->add_option("--out,-o", o.out, "output directory")->capture_default_str();
  for (auto& ov : o.overrides) {
    auto* opt = cmd->add_option(ov.flag, ov.value, ov.help);
    if (*ov.def) opt->default_str(ov.def);
  }
}

phnls_run_config load_config(const RunOptions& o, const char* system) {
  phnls_run_config c;
  if (o.config.empty()) check(phnls_config_default(&c), "defaults");
  else check(phnls_config_parse_file(o.config.c_str(), &c), o.config);
  if (system) check(phnls_config_set(&c, "run.system", system), "system");
  for (const auto& ov : o.overrides)
    if (!ov.value.empty()) check(phnls_config_set(&c, ov.key, ov.value.c_str()), ov.flag);
  check(phnls_config_validate(&c), "configuration");
  return c;
}

std::filesystem::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::fprintf(stderr, "phnls: cannot create %s: %s\n", dir.c_str(), ec.message().c_str());
    throw Failure{kExitValidation};
  }
  return dir;
}

struct SimulationSink {
  FILE* csv;
  std::filesystem::path dir;
};

int on_step(const phnls_diagnostic* d, const phnls_field* state, int diag_due, int snapshot_due, void* user) {
  auto* sink = static_cast<SimulationSink*>(user);
  if (diag_due) write_row(sink->csv, *d);
  if (snapshot_due) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%08" PRIu64 ".phn", d->step);
    const std::string path = (sink->dir / name).string();
    if (phnls_field_write_snapshot(state, path.c_str()) != PHNLS_OK) {
      std::fprintf(stderr, "phnls: %s: %s\n", path.c_str(), phnls_last_error());
      return 1;
    }
  }
  return 0;
}

int run_simulation(const RunOptions& o, const char* system) {
  const phnls_run_config c = load_config(o, system);
  const auto dir = ensure_dir(o.out);
  phnls_field* init = nullptr;
  check(phnls_field_initial(&c, nullptr, &init), "initial condition");
  std::unique_ptr<phnls_field, void (*)(phnls_field*)> init_owner(init, &phnls_field_destroy);
  const std::string csv_path = (dir / "diagnostics.csv").string();
  FilePtr csv = open_out(csv_path);
  std::fputs(kCsvHeader, csv.get());
  SimulationSink sink{csv.get(), dir};
  phnls_field* final_state = nullptr;
  const phnls_status s = phnls_simulate(&c, init, &on_step, &sink, &final_state);
  if (s != PHNLS_OK) {
    std::fprintf(stderr, "phnls: %s: %s\n", system, phnls_last_error());
    return exit_code(s);
  }
  std::unique_ptr<phnls_field, void (*)(phnls_field*)> final_owner(final_state, &phnls_field_destroy);
  const std::string final_path = (dir / "final.phn").string();
  check(phnls_field_write_snapshot(final_state, final_path.c_str()), final_path);
  return kExitOk;
}

void on_profile_row(const phnls_profile_row* r, void* user) {
  std::fprintf(static_cast<FILE*>(user), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r->lambda, r->t, r->err_l2h1,
               r->err_l4acc, r->mass_u, r->mass_w);
}

int run_profiles(const RunOptions& o) {
  const phnls_run_config c = load_config(o, nullptr);
  const auto dir = ensure_dir(o.out);
  FilePtr csv = open_out((dir / "profiles.csv").string());
  std::fputs("lambda,t,err_l2h1,err_l4acc,mass_u,mass_w\n", csv.get());
  std::vector<double> err(c.lambda_count);
  check(phnls_compare_profiles(&c, &on_profile_row, csv.get(), err.data()), "compare-profiles");
  for (int i = 0; i < c.lambda_count; ++i) std::printf("lambda=%g err=%.17g\n", c.lambda_list[i], err[i]);
  return kExitOk;
}

struct TensorOptions {
  int nmax = 8;
  int quad_count = 0;
  std::string out = "-";
};

int run_tensor(const std::string& action, const TensorOptions& o) {
  if (action == "check") {
    phnls_tensor_report r;
    check(phnls_tensor_check(o.nmax, &r), "tensor check");
    const bool ok = r.max_oracle_error < 1e-8 && r.max_symmetry_error < 1e-12 && r.max_parity_error < 1e-12 &&
                    r.max_reality_error < 1e-12 && r.resonance_ok;
    std::printf("entries=%zu\n", r.entries);
    std::printf("oracle_max_abs_error=%.3e\n", r.max_oracle_error);
    std::printf("symmetry_max_abs_error=%.3e\n", r.max_symmetry_error);
    std::printf("parity_max_abs_error=%.3e\n", r.max_parity_error);
    std::printf("reality_max_rel_error=%.3e\n", r.max_reality_error);
    std::printf("resonance=%s\n", r.resonance_ok ? "ok" : "violated");
    std::printf("checksum=%.17g\n", r.checksum);
    std::printf("%s\n", ok ? "tensor check passed" : "tensor check FAILED");
    return ok ? kExitOk : kExitNumerical;
  }
  phnls_tensor* t = nullptr;
  check(phnls_tensor_compute(o.nmax, o.quad_count, 0, &t), "tensor compute");
  std::unique_ptr<phnls_tensor, void (*)(phnls_tensor*)> owner(t, &phnls_tensor_destroy);
  if (action == "dump") {
    if (o.out == "-") check(phnls_tensor_dump_csv(t, "/dev/stdout"), "tensor dump");
    else check(phnls_tensor_dump_csv(t, o.out.c_str()), o.out);
    return kExitOk;
  }
  double sum = 0.0;
  check(phnls_tensor_checksum(t, &sum), "tensor checksum");
  std::printf("n_max=%d\nchecksum=%.17g\n", o.nmax, sum);
  return kExitOk;
}

struct DiagnoseOptions {
  std::vector<std::string> files;
  std::string system = "pnls";
  double mu = 1.0;
  double cutoff = 0.0;
  int quad_count = 0;
  std::string out = "-";
};

int run_diagnose(const DiagnoseOptions& o) {
  if (o.system != "pnls" && o.system != "dcr") {
    std::fprintf(stderr, "phnls: system must be pnls or dcr\n");
    return kExitValidation;
  }
  if (o.mu != 0.0 && o.mu != 1.0) {
    std::fprintf(stderr, "phnls: mu must be 1 (defocusing) or 0 (linear)\n");
    return kExitValidation;
  }
  const int system = o.system == "dcr" ? PHNLS_SYSTEM_DCR : PHNLS_SYSTEM_PNLS;
  FilePtr out = open_out(o.out);
  std::fputs(kCsvHeader, out.get());
  for (std::size_t i = 0; i < o.files.size(); ++i) {
    phnls_field* f = nullptr;
    check(phnls_field_read_snapshot(o.files[i].c_str(), o.quad_count, &f), o.files[i]);
    std::unique_ptr<phnls_field, void (*)(phnls_field*)> owner(f, &phnls_field_destroy);
    phnls_tensor* t = nullptr;
    if (system == PHNLS_SYSTEM_DCR) {
      int n_h = 0;
      check(phnls_field_info(f, nullptr, nullptr, &n_h, nullptr), o.files[i]);
      check(phnls_tensor_compute(n_h, o.quad_count, 1, &t), "tensor");
    }
    std::unique_ptr<phnls_tensor, void (*)(phnls_tensor*)> towner(t, &phnls_tensor_destroy);
    phnls_diagnostic d;
    check(phnls_diagnose(f, system, o.mu, t, o.cutoff, i, &d), o.files[i]);
    write_row(out.get(), d);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier-Hermite simulator for the NLS with partial harmonic potential and the DCR system"};
  app.require_subcommand(1);
  app.set_version_flag("--version", phnls_version());

  RunOptions pnls_opts, dcr_opts, profile_opts;
  auto* pnls = app.add_subcommand("simulate-pnls", "integrate the PNLS equation");
  add_run_options(pnls, pnls_opts);
  auto* dcr = app.add_subcommand("simulate-dcr", "integrate the DCR system");
  add_run_options(dcr, dcr_opts);
  auto* profiles = app.add_subcommand("compare-profiles", "compare rescaled PNLS runs with the DCR profile");
  add_run_options(profiles, profile_opts);

  TensorOptions tensor_opts;
  auto* tensor = app.add_subcommand("tensor", "resonant coupling tensor");
  tensor->require_subcommand(1);
  std::string tensor_action;
  for (const char* name : {"compute", "dump", "check"}) {
    auto* sub = tensor->add_subcommand(name, std::string(name) + " the tensor");
    sub->add_option("--nmax", tensor_opts.nmax, "Hermite truncation")->capture_default_str();
    if (std::string(name) != "check")
      sub->add_option("--quad-count", tensor_opts.quad_count, "quadrature nodes (0 = 4 nmax)");
    if (std::string(name) == "dump") sub->add_option("--out,-o", tensor_opts.out, "CSV path, - for stdout");
    sub->callback([&tensor_action, name] { tensor_action = name; });
  }

  DiagnoseOptions diag_opts;
  auto* diagnose = app.add_subcommand("diagnose", "diagnostics for snapshot files");
  diagnose->add_option("snapshots", diag_opts.files, "snapshot files")->required();
  diagnose->add_option("--system", diag_opts.system, "pnls or dcr")->capture_default_str();
  diagnose->add_option("--mu", diag_opts.mu, "nonlinearity: 1 or 0")->capture_default_str();
  diagnose->add_option("--cutoff", diag_opts.cutoff, "half-derivative cutoff")->capture_default_str();
  diagnose->add_option("--quad-count", diag_opts.quad_count, "quadrature nodes (0 = 4 n_h)");
  diagnose->add_option("--out,-o", diag_opts.out, "CSV path, - for stdout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*pnls) return run_simulation(pnls_opts, "pnls");
    if (*dcr) return run_simulation(dcr_opts, "dcr");
    if (*profiles) return run_profiles(profile_opts);
    if (*tensor) return run_tensor(tensor_action, tensor_opts);
    if (*diagnose) return run_diagnose(diag_opts);
  } catch (const Failure& f) {
    return f.code;
  }
  return kExitValidation;
}
