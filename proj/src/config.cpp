#include "tumorsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

namespace tumorsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// Shortest %g form that reads back to the same double.
std::string format_real(double v) {
  char buf[32];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

double parse_real(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  return out;
}

long long parse_integer(std::string_view key, std::string_view v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument(std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument(std::string(key) + ": expected true|false, got '" + std::string(v) + "'");
}

struct Entry {
  std::string key;
  std::function<void(std::string_view)> set;
  std::function<std::string()> get;
};

std::vector<Entry> registry(RunConfig& c) {
  std::vector<Entry> r;
  auto real = [&r](std::string key, double& ref) {
    r.push_back({key, [&ref, key](std::string_view v) { ref = parse_real(key, v); }, [&ref] { return format_real(ref); }});
  };
  auto integer = [&r](std::string key, int& ref) {
    r.push_back({key, [&ref, key](std::string_view v) { ref = static_cast<int>(parse_integer(key, v)); },
                 [&ref] { return std::to_string(ref); }});
  };
  auto boolean = [&r](std::string key, bool& ref) {
    r.push_back({key, [&ref, key](std::string_view v) { ref = parse_bool(key, v); },
                 [&ref] { return std::string(ref ? "true" : "false"); }});
  };
  auto& m = c.model;
  real("model.eps_T", m.eps_T);
  real("model.chi_C", m.chi_C);
  real("model.chi_H", m.chi_H);
  real("model.delta_sigma", m.delta_sigma);
  real("model.delta_T", m.delta_T);
  real("model.lambda_T_pro", m.lambda_T_pro);
  real("model.lambda_T_apo", m.lambda_T_apo);
  real("model.lambda_N_deg", m.lambda_N_deg);
  real("model.lambda_VN", m.lambda_VN);
  real("model.lambda_sigma_sat", m.lambda_sigma_sat);
  real("model.lambda_M_dec", m.lambda_M_dec);
  real("model.lambda_M_pro", m.lambda_M_pro);
  real("model.lambda_theta_dec", m.lambda_theta_dec);
  real("model.lambda_theta_deg", m.lambda_theta_deg);
  real("model.E_bar", m.E_bar);
  real("model.sigma_H", m.sigma_H);
  real("model.sigma_VN", m.sigma_VN);
  real("model.M_T", m.M_T);
  real("model.D_sigma", m.D_sigma);
  real("model.D_M", m.D_M);
  real("model.eps_sigmoid", m.eps_sigmoid);
  real("model.kappa_m", m.kappa_m);
  r.push_back({"model.mobility",
               [&m](std::string_view v) {
                 if (v == "degenerate") m.mobility = MobilityMode::degenerate;
                 else if (v == "constant") m.mobility = MobilityMode::constant;
                 else throw std::invalid_argument("model.mobility: expected degenerate|constant");
               },
               [&m] { return std::string(m.mobility == MobilityMode::degenerate ? "degenerate" : "constant"); }});

  auto& s = c.scheme;
  real("scheme.dt", s.dt);
  real("scheme.tol", s.tol);
  integer("scheme.n_iter", s.n_iter);
  real("scheme.t_end", s.t_end);
  real("scheme.linear_tol", s.linear_tol);
  integer("scheme.linear_max_iter", s.linear_max_iter);
  r.push_back({"scheme.on_nonconverged", [&s](std::string_view v) { s.on_nonconverged = nonconverged_policy_from_string(v); },
               [&s] { return std::string(to_string(s.on_nonconverged)); }});
  boolean("scheme.nutrient_dirichlet", s.nutrient_dirichlet);

  integer("mesh.n_per_side", c.n_per_side);
  r.push_back({"haptotaxis.mode", [&c](std::string_view v) { c.haptotaxis = haptotaxis_mode_from_string(v); },
               [&c] { return std::string(to_string(c.haptotaxis)); }});
  real("kernel.eps", c.kernel_eps);
  r.push_back({"kernel.omega_mode", [&c](std::string_view v) { c.omega_mode = omega_mode_from_string(v); },
               [&c] { return std::string(to_string(c.omega_mode)); }});

  auto& ic = c.initial;
  r.push_back({"initial.tumor", [&ic](std::string_view v) { ic.tumor = tumor_shape_from_string(v); },
               [&ic] { return std::string(to_string(ic.tumor)); }});
  real("initial.tumor_center_x", ic.tumor_center_x);
  real("initial.tumor_center_y", ic.tumor_center_y);
  real("initial.tumor_radius", ic.tumor_radius);
  real("initial.tumor_value", ic.tumor_value);
  real("initial.tumor_amplitude", ic.tumor_amplitude);
  r.push_back({"initial.seed", [&ic](std::string_view v) { ic.seed = static_cast<std::uint64_t>(parse_integer("initial.seed", v)); },
               [&ic] { return std::to_string(ic.seed); }});
  real("initial.necrotic_value", ic.necrotic_value);
  real("initial.nutrient_value", ic.nutrient_value);
  real("initial.mde_value", ic.mde_value);
  r.push_back({"initial.ecm", [&ic](std::string_view v) { ic.ecm = ecm_shape_from_string(v); },
               [&ic] { return std::string(to_string(ic.ecm)); }});
  real("initial.ecm_upper", ic.ecm_upper);
  real("initial.ecm_lower", ic.ecm_lower);

  auto& o = c.output;
  r.push_back({"output.directory", [&o](std::string_view v) { o.directory = std::string(v); }, [&o] { return o.directory; }});
  integer("output.every", s.output_every);
  r.push_back({"output.formats",
               [&o](std::string_view v) {
                 o.vtk = o.csv = false;
                 std::string_view rest = v;
                 while (!rest.empty()) {
                   const auto comma = rest.find(',');
                   const auto item = trim(rest.substr(0, comma));
                   if (item == "vtk") o.vtk = true;
                   else if (item == "csv") o.csv = true;
                   else if (!item.empty()) throw std::invalid_argument("output.formats: unknown format '" + std::string(item) + "'");
                   rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
                 }
               },
               [&o] {
                 std::string f;
                 if (o.vtk) f = "vtk";
                 if (o.csv) f += f.empty() ? "csv" : ",csv";
                 return f;
               }});
  return r;
}

}  // namespace

void RunConfig::validate() const {
  try {
    model.validate();
    scheme.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (n_per_side < 1) throw ConfigError("mesh.n_per_side must be >= 1");
  if (kernel_eps < 0.0 || !std::isfinite(kernel_eps)) throw ConfigError("kernel.eps must be finite and >= 0");
  if (haptotaxis == HaptotaxisMode::nonlocal && !(kernel_eps > 0.0)) {
    throw ConfigError("kernel.eps must be > 0 when haptotaxis.mode = nonloc");
  }
  if (!(initial.tumor_radius > 0.0)) throw ConfigError("initial.tumor_radius must be > 0");
  if (output.directory.empty()) throw ConfigError("output.directory must not be empty");
}

std::optional<KernelSpec> RunConfig::kernel() const {
  if (!(kernel_eps > 0.0)) return std::nullopt;
  return KernelSpec::make(kernel_eps, omega_mode);
}

RunConfig parse_config_string(std::string_view text) {
  RunConfig cfg;
  auto entries = registry(cfg);
  std::set<std::string> seen;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw ConfigError("empty section name", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const auto raw_key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (raw_key.empty()) throw ConfigError("missing key", line_no);
    std::string key = raw_key.find('.') != std::string_view::npos || section.empty()
                          ? std::string(raw_key)
                          : section + "." + std::string(raw_key);
    auto it = std::find_if(entries.begin(), entries.end(), [&](const Entry& e) { return e.key == key; });
    if (it == entries.end()) throw ConfigError("unknown key '" + key + "'", line_no);
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line_no);
    try {
      it->set(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line_no);
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_string(ss.str());
}

std::string to_config_string(const RunConfig& cfg) {
  RunConfig copy = cfg;
  const auto entries = registry(copy);
  std::ostringstream out;
  out << "# resolved tumorsim configuration\n";
  std::string section;
  for (const auto& e : entries) {
    const auto dot = e.key.find('.');
    const auto sec = e.key.substr(0, dot);
    if (sec != section) {
      out << (section.empty() ? "" : "\n") << '[' << sec << "]\n";
      section = sec;
    }
    out << e.key.substr(dot + 1) << " = " << e.get() << '\n';
  }
  return out.str();
}

}  // namespace tumorsim
