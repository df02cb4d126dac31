#include "phnls/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace phnls {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out))
    fail(ErrorCode::parse, "invalid number for " + key + ": '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) fail(ErrorCode::parse, "invalid integer for " + key + ": '" + v + "'");
  return out;
}

int to_int32(const std::string& key, const std::string& v) {
  const long long x = to_int(key, v);
  if (x < -2147483647LL || x > 2147483647LL) fail(ErrorCode::parse, key + " out of range");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(ErrorCode::parse, "invalid boolean for " + key + ": '" + v + "'");
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"grid", {"n_y", "box_len", "n_h", "quad_count"}},
      {"run", {"system", "dt", "t_end", "mu", "order", "f_strategy", "m_tau", "lambda_list", "t_rescaled_end",
               "dt_dcr", "outputs", "seed"}},
      {"initial", {"kind", "amplitude", "width", "center_y1", "center_y2", "xi1", "xi2", "mode_n", "mode_k1",
                   "mode_k2", "noise", "file"}},
      {"diagnostics", {"eps0", "diag_every", "snapshot_every", "cutoff", "morawetz"}},
  };
  return s;
}

std::string find_section(const std::string& key) {
  for (const auto& [section, keys] : schema())
    if (keys.count(key)) return section;
  return "";
}

}  // namespace

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

System parse_system(const std::string& name) {
  if (name == "pnls") return System::pnls;
  if (name == "dcr") return System::dcr;
  fail(ErrorCode::parse, "system must be pnls or dcr, got '" + name + "'");
}

std::vector<double> parse_lambda_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(ErrorCode::parse, "empty entry in lambda_list");
    out.push_back(to_double("lambda_list", item));
  }
  if (out.empty()) fail(ErrorCode::parse, "lambda_list is empty");
  return out;
}

void set_config_value(RunConfig& c, const std::string& section_in, const std::string& key, const std::string& raw) {
  const std::string section = section_in.empty() ? find_section(key) : section_in;
  if (section.empty()) fail(ErrorCode::parse, "unknown key '" + key + "'");
  const auto it = schema().find(section);
  if (it == schema().end()) fail(ErrorCode::parse, "unknown section [" + section_in + "]");
  if (!it->second.count(key)) fail(ErrorCode::parse, "unknown key '" + key + "' in [" + section + "]");
  const std::string v = trim(raw);
  if (section == "grid") {
    if (key == "n_y") c.n_y = to_int32(key, v);
    else if (key == "box_len") c.box_len = to_double(key, v);
    else if (key == "n_h") c.n_h = to_int32(key, v);
    else if (key == "quad_count") c.quad_count = to_int32(key, v);
  } else if (section == "run") {
    if (key == "system") {
      parse_system(v);
      c.system = v;
    } else if (key == "dt") c.dt = to_double(key, v);
    else if (key == "t_end") c.t_end = to_double(key, v);
    else if (key == "mu") {
      c.mu = to_double(key, v);
      if (c.mu < 0.0) fail(ErrorCode::parse, "focusing nonlinearity (mu < 0) is not supported");
      if (c.mu != 0.0 && c.mu != 1.0) fail(ErrorCode::parse, "mu must be 1 (defocusing) or 0 (linear)");
    } else if (key == "order") c.order = to_int32(key, v);
    else if (key == "f_strategy") {
      if (v != "tensor" && v != "average") fail(ErrorCode::parse, "f_strategy must be tensor or average");
      c.f_strategy = v;
    } else if (key == "m_tau") c.m_tau = to_int32(key, v);
    else if (key == "lambda_list") c.lambda_list = parse_lambda_list(v);
    else if (key == "t_rescaled_end") c.t_rescaled_end = to_double(key, v);
    else if (key == "dt_dcr") c.dt_dcr = to_double(key, v);
    else if (key == "outputs") c.outputs = to_int32(key, v);
    else if (key == "seed") {
      const long long s = to_int(key, v);
      if (s < 0) fail(ErrorCode::parse, "seed must be nonnegative");
      c.seed = static_cast<std::uint64_t>(s);
    }
  } else if (section == "initial") {
    if (key == "kind") {
      if (v != "gaussian" && v != "mode" && v != "file")
        fail(ErrorCode::parse, "initial kind must be gaussian, mode or file");
      c.initial_kind = v;
    } else if (key == "amplitude") c.amplitude = to_double(key, v);
    else if (key == "width") c.width = to_double(key, v);
    else if (key == "center_y1") c.center_y1 = to_double(key, v);
    else if (key == "center_y2") c.center_y2 = to_double(key, v);
    else if (key == "xi1") c.xi1 = to_int32(key, v);
    else if (key == "xi2") c.xi2 = to_int32(key, v);
    else if (key == "mode_n") c.mode_n = to_int32(key, v);
    else if (key == "mode_k1") c.mode_k1 = to_int32(key, v);
    else if (key == "mode_k2") c.mode_k2 = to_int32(key, v);
    else if (key == "noise") c.noise = to_double(key, v);
    else if (key == "file") c.initial_file = v;
  } else {
    if (key == "eps0") c.eps0 = to_double(key, v);
    else if (key == "diag_every") c.diag_every = to_int32(key, v);
    else if (key == "snapshot_every") c.snapshot_every = to_int32(key, v);
    else if (key == "cutoff") c.cutoff = to_double(key, v);
    else if (key == "morawetz") c.morawetz = to_bool(key, v);
  }
}

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') fail(ErrorCode::parse, where + "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section)) fail(ErrorCode::parse, where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorCode::parse, where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) fail(ErrorCode::parse, where + "key '" + key + "' outside of any section");
    if (value.empty()) fail(ErrorCode::parse, where + "missing value for '" + key + "'");
    if (!seen.insert(section + "." + key).second) fail(ErrorCode::parse, where + "duplicate key '" + key + "'");
    try {
      set_config_value(c, section, key, value);
    } catch (const Error& e) {
      fail(ErrorCode::parse, where + e.what());
    }
  }
  try {
    validate_config(c);
  } catch (const Error& e) {
    fail(e.code(), source + ": " + e.what());
  }
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

void validate_config(const RunConfig& c) {
  if (!is_power_of_two(c.n_y)) fail(ErrorCode::invalid_argument, "n_y must be a power of two");
  require(c.box_len > 0.0, "box_len must be positive");
  require(c.n_h >= 1 && c.n_h <= 256, "n_h must lie in [1, 256]");
  if (c.quad_count != 0 && c.quad_count < 2 * c.n_h)
    fail(ErrorCode::invalid_argument, "quad_count " + std::to_string(c.quad_count) +
                                          " too small: n_h = " + std::to_string(c.n_h) +
                                          " requires at least " + std::to_string(2 * c.n_h));
  parse_system(c.system);
  require(c.dt > 0.0 && c.dt <= kMaxPnlsStep, "dt must lie in (0, 0.1]");
  require(c.t_end >= 0.0, "t_end must be nonnegative");
  if (c.mu < 0.0) fail(ErrorCode::invalid_argument, "focusing nonlinearity (mu < 0) is not supported");
  require(c.mu == 0.0 || c.mu == 1.0, "mu must be 1 (defocusing) or 0 (linear)");
  require(c.order == 2 || c.order == 4, "order must be 2 or 4");
  require(c.f_strategy == "tensor" || c.f_strategy == "average", "f_strategy must be tensor or average");
  if (c.m_tau != 0 && c.m_tau < 2 * c.n_h)
    fail(ErrorCode::invalid_argument, "m_tau " + std::to_string(c.m_tau) + " too small: requires at least " +
                                          std::to_string(2 * c.n_h));
  for (double lam : c.lambda_list) {
    int e = 0;
    if (!(lam > 0.0) || std::frexp(lam, &e) != 0.5)
      fail(ErrorCode::invalid_argument, "lambda values must be powers of two");
  }
  require(!c.lambda_list.empty(), "lambda_list is empty");
  require(c.t_rescaled_end >= 0.0, "t_rescaled_end must be nonnegative");
  require(c.dt_dcr > 0.0 && c.dt_dcr <= kMaxPnlsStep, "dt_dcr must lie in (0, 0.1]");
  require(c.outputs >= 1, "outputs must be positive");
  require(c.width > 0.0, "width must be positive");
  require(c.mode_n >= 0 && c.mode_n < c.n_h, "mode_n must lie in [0, n_h)");
  require(c.noise >= 0.0, "noise must be nonnegative");
  if (c.initial_kind == "file") require(!c.initial_file.empty(), "initial kind 'file' needs a file");
  else require(c.initial_kind == "gaussian" || c.initial_kind == "mode", "unknown initial kind");
  if (!(c.eps0 > 0.0 && c.eps0 < 0.5)) fail(ErrorCode::invalid_argument, "eps0 must lie in (0, 1/2)");
  require(c.diag_every >= 0, "diag_every must be nonnegative");
  require(c.snapshot_every >= 0, "snapshot_every must be nonnegative");
  require(c.cutoff >= 0.0, "cutoff must be nonnegative");
  const int half = c.n_y / 2;
  require(std::abs(c.mode_k1) < half && std::abs(c.mode_k2) < half, "mode wavenumbers out of range");
  require(std::abs(c.xi1) < half && std::abs(c.xi2) < half, "boost out of range");
}

}  // namespace phnls
