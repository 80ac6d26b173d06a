#include "bi/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace bi {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in number '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + v + "'");
  }
}

int parse_int(const std::string& v, int line) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    fail(line, "expected an integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(line, "expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_ws(const std::string& v) {
  std::istringstream is(v);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_list(const std::string& v) {
  // commas or whitespace both separate
  std::string s = v;
  for (auto& c : s)
    if (c == ',') c = ' ';
  return split_ws(s);
}

std::array<double, 3> parse_vec3(const std::string& v, int line) {
  const auto parts = split_list(v);
  if (parts.size() != 3) fail(line, "expected three numbers, got '" + v + "'");
  return {parse_double(parts[0], line), parse_double(parts[1], line),
          parse_double(parts[2], line)};
}

void apply_grid_key(RunConfig& c, const std::string& key, const std::string& v,
                    int line) {
  if (key == "half_width") c.half_width = parse_double(v, line);
  else if (key == "cells") c.cells = parse_int(v, line);
  else fail(line, "unknown key '" + key + "' in [grid]");
}

void apply_density_key(DensityTerm& t, const std::string& key,
                       const std::string& v, int line) {
  if (key == "kind") {
    const auto k = kind_from_name(v);
    if (!k) fail(line, "unknown density kind '" + v + "'");
    t.kind = *k;
  } else if (key == "center") t.center = parse_vec3(v, line);
  else if (key == "weight") t.weight = parse_double(v, line);
  else if (key == "width") t.width = parse_double(v, line);
  else if (key == "exponent") t.exponent = parse_double(v, line);
  else fail(line, "unknown key '" + key + "' in a [density.N] section");
}

void apply_solver_key(SolverConfig& s, const std::string& key,
                      const std::string& v, int line) {
  if (key == "kind") {
    if (v == "minimize") s.kind = SolverKind::minimize;
    else if (v == "fixed_point") s.kind = SolverKind::fixed_point;
    else if (v == "continuation") s.kind = SolverKind::continuation;
    else if (v == "radial") s.kind = SolverKind::radial;
    else
      fail(line, "unknown solver '" + v +
                     "' (valid: minimize, fixed_point, continuation, radial)");
  } else if (key == "tolerance_factor") s.tolerance_factor = parse_double(v, line);
  else if (key == "verbose") s.verbose = parse_bool(v, line);
  else if (key == "safeguard_margin") s.safeguard_margin = parse_double(v, line);
  else if (key == "max_iterations") s.max_iterations = parse_int(v, line);
  else if (key == "theta") s.theta = parse_double(v, line);
  else if (key == "far_eps") s.far_eps = parse_double(v, line);
  else if (key == "far_radius") s.far_radius = parse_double(v, line);
  else if (key == "dv_tolerance") s.dv_tolerance = parse_double(v, line);
  else if (key == "linear_tolerance") s.linear_tolerance = parse_double(v, line);
  else if (key == "polish") s.polish = parse_bool(v, line);
  else if (key == "fp_max_iterations") s.fp_max_iterations = parse_int(v, line);
  else if (key == "schedule") {
    s.schedule.clear();
    for (const auto& p : split_list(v)) s.schedule.push_back(parse_double(p, line));
    if (s.schedule.empty()) fail(line, "schedule must not be empty");
  } else if (key == "radial_r_max") s.radial_r_max = parse_double(v, line);
  else if (key == "radial_samples") s.radial_samples = parse_int(v, line);
  else if (key == "sweep_cells") {
    s.sweep_cells.clear();
    for (const auto& p : split_list(v)) s.sweep_cells.push_back(parse_int(p, line));
    if (s.sweep_cells.empty()) fail(line, "sweep_cells must not be empty");
  } else if (key == "sweep_annulus_lo") s.sweep_annulus_lo = parse_double(v, line);
  else if (key == "sweep_annulus_hi") s.sweep_annulus_hi = parse_double(v, line);
  else fail(line, "unknown key '" + key + "' in [solver]");
}

void apply_audit_key(AuditConfig& a, const std::string& key, const std::string& v,
                     int line) {
  static const std::vector<std::string> known = {
      "l2_identity", "tail_bound", "caccioppoli", "sup_nu",
      "linearized",  "decay",      "holder"};
  if (key == "run") {
    a.run = split_list(v);
    for (const auto& name : a.run)
      if (std::find(known.begin(), known.end(), name) == known.end())
        fail(line, "unknown audit '" + name + "'");
  } else if (key == "tolerance") a.tolerance = parse_double(v, line);
  else if (key == "tail_k") a.tail_k = parse_double(v, line);
  else if (key == "tail_p") a.tail_p = parse_double(v, line);
  else if (key == "caccioppoli_q") a.caccioppoli_q = parse_double(v, line);
  else if (key == "caccioppoli_inner") a.caccioppoli_inner = parse_double(v, line);
  else if (key == "caccioppoli_outer") a.caccioppoli_outer = parse_double(v, line);
  else if (key == "sup_p") a.sup_p = parse_double(v, line);
  else if (key == "sup_radius") a.sup_radius = parse_double(v, line);
  else if (key == "decay_lo") a.decay_lo = parse_double(v, line);
  else if (key == "decay_hi") a.decay_hi = parse_double(v, line);
  else if (key == "holder_alpha") a.holder_alpha = parse_double(v, line);
  else if (key == "seed") a.seed = static_cast<std::uint64_t>(parse_int(v, line));
  else fail(line, "unknown key '" + key + "' in [audits]");
}

void apply_output_key(OutputConfig& o, const std::string& key,
                      const std::string& v, int line) {
  if (key == "directory") o.directory = v;
  else if (key == "write_field") o.write_field = parse_bool(v, line);
  else if (key == "write_slices") o.write_slices = parse_bool(v, line);
  else if (key == "input_field") o.input_field = v;
  else fail(line, "unknown key '" + key + "' in [output]");
}

// section is "grid", "solver", "audits", "output" or "density.N"
void apply_key(RunConfig& c, const std::string& section, const std::string& key,
               const std::string& value, int line) {
  if (section == "grid") return apply_grid_key(c, key, value, line);
  if (section == "solver") return apply_solver_key(c.solver, key, value, line);
  if (section == "audits") return apply_audit_key(c.audits, key, value, line);
  if (section == "output") return apply_output_key(c.output, key, value, line);
  if (section.rfind("density.", 0) == 0) {
    const std::string idx_s = section.substr(8);
    const int idx = parse_int(idx_s, line);
    if (idx < 1 || idx > static_cast<int>(c.density.terms.size()) + 1)
      fail(line, "density sections must be numbered consecutively from 1");
    if (idx == static_cast<int>(c.density.terms.size()) + 1)
      c.density.terms.emplace_back();
    return apply_density_key(c.density.terms[idx - 1], key, value, line);
  }
  fail(line, "unknown section [" + section + "]");
}

void validate(const RunConfig& c) {
  if (!(c.half_width > 0.0)) throw ConfigError("grid half_width must be positive");
  if (c.cells < 8) throw ConfigError("grid needs at least 8 cells");
  for (std::size_t i = 0; i < c.density.terms.size(); ++i) {
    const auto& t = c.density.terms[i];
    const std::string where = "[density." + std::to_string(i + 1) + "]: ";
    if (!(t.width > 0.0)) throw ConfigError(where + "width must be positive");
    if (t.kind == DensityTerm::Kind::radial_power_bump && t.exponent < 0.0)
      throw ConfigError(where + "exponent must be >= 0");
  }
}

}  // namespace

const char* solver_kind_name(SolverKind k) {
  switch (k) {
    case SolverKind::minimize: return "minimize";
    case SolverKind::fixed_point: return "fixed_point";
    case SolverKind::continuation: return "continuation";
    case SolverKind::radial: return "radial";
  }
  return "?";
}

bool operator==(const DensityTerm& a, const DensityTerm& b) {
  return a.kind == b.kind && a.center == b.center && a.weight == b.weight &&
         a.width == b.width && a.exponent == b.exponent;
}

bool RunConfig::operator==(const RunConfig& o) const {
  return half_width == o.half_width && cells == o.cells &&
         density.terms == o.density.terms && solver == o.solver &&
         audits == o.audits && output == o.output;
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  // (section, key) -> first line, for duplicate reporting
  std::map<std::pair<std::string, std::string>, int> seen;
  std::map<std::string, int> sections_seen;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find_first_of("#;");
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) fail(line, "empty section name");
      if (section != "grid" && section != "solver" && section != "audits" &&
          section != "output" && section.rfind("density.", 0) != 0)
        fail(line, "unknown section [" + section + "]");
      const auto it = sections_seen.find(section);
      if (it != sections_seen.end())
        fail(line, "section [" + section + "] already opened at line " +
                       std::to_string(it->second));
      sections_seen[section] = line;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (section.empty()) fail(line, "key '" + key + "' outside any section");
    const auto it = seen.find({section, key});
    if (it != seen.end())
      fail(line, "duplicate key '" + key + "' in [" + section + "] (lines " +
                     std::to_string(it->second) + " and " + std::to_string(line) + ")");
    seen[{section, key}] = line;
    apply_key(c, section, key, value, line);
  }
  validate(c);
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "[grid]\n";
  os << "half_width = " << c.half_width << "\n";
  os << "cells = " << c.cells << "\n";
  for (std::size_t i = 0; i < c.density.terms.size(); ++i) {
    const auto& t = c.density.terms[i];
    os << "\n[density." << i + 1 << "]\n";
    os << "kind = " << kind_name(t.kind) << "\n";
    os << "center = " << t.center[0] << ' ' << t.center[1] << ' ' << t.center[2]
       << "\n";
    os << "weight = " << t.weight << "\n";
    os << "width = " << t.width << "\n";
    os << "exponent = " << t.exponent << "\n";
  }
  const auto& s = c.solver;
  os << "\n[solver]\n";
  os << "kind = " << solver_kind_name(s.kind) << "\n";
  os << "tolerance_factor = " << s.tolerance_factor << "\n";
  os << "verbose = " << (s.verbose ? "true" : "false") << "\n";
  os << "safeguard_margin = " << s.safeguard_margin << "\n";
  os << "max_iterations = " << s.max_iterations << "\n";
  os << "theta = " << s.theta << "\n";
  os << "far_eps = " << s.far_eps << "\n";
  os << "far_radius = " << s.far_radius << "\n";
  os << "dv_tolerance = " << s.dv_tolerance << "\n";
  os << "linear_tolerance = " << s.linear_tolerance << "\n";
  os << "polish = " << (s.polish ? "true" : "false") << "\n";
  os << "fp_max_iterations = " << s.fp_max_iterations << "\n";
  os << "schedule =";
  for (double t : s.schedule) os << ' ' << t;
  os << "\n";
  os << "radial_r_max = " << s.radial_r_max << "\n";
  os << "radial_samples = " << s.radial_samples << "\n";
  os << "sweep_cells =";
  for (int m : s.sweep_cells) os << ' ' << m;
  os << "\n";
  os << "sweep_annulus_lo = " << s.sweep_annulus_lo << "\n";
  os << "sweep_annulus_hi = " << s.sweep_annulus_hi << "\n";
  const auto& a = c.audits;
  os << "\n[audits]\n";
  if (!a.run.empty()) {
    os << "run =";
    for (const auto& n : a.run) os << ' ' << n;
    os << "\n";
  }
  os << "tolerance = " << a.tolerance << "\n";
  os << "tail_k = " << a.tail_k << "\n";
  os << "tail_p = " << a.tail_p << "\n";
  os << "caccioppoli_q = " << a.caccioppoli_q << "\n";
  os << "caccioppoli_inner = " << a.caccioppoli_inner << "\n";
  os << "caccioppoli_outer = " << a.caccioppoli_outer << "\n";
  os << "sup_p = " << a.sup_p << "\n";
  os << "sup_radius = " << a.sup_radius << "\n";
  os << "decay_lo = " << a.decay_lo << "\n";
  os << "decay_hi = " << a.decay_hi << "\n";
  os << "holder_alpha = " << a.holder_alpha << "\n";
  os << "seed = " << a.seed << "\n";
  const auto& o = c.output;
  os << "\n[output]\n";
  os << "directory = " << o.directory << "\n";
  os << "write_field = " << (o.write_field ? "true" : "false") << "\n";
  os << "write_slices = " << (o.write_slices ? "true" : "false") << "\n";
  if (!o.input_field.empty()) os << "input_field = " << o.input_field << "\n";
  return os.str();
}

void apply_override(RunConfig& c, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must look like section.key=value: '" + spec + "'");
  const std::string path = trim(spec.substr(0, eq));
  const std::string value = trim(spec.substr(eq + 1));
  const auto dot = path.rfind('.');
  if (dot == std::string::npos)
    throw ConfigError("override must look like section.key=value: '" + spec + "'");
  const std::string section = path.substr(0, dot);
  const std::string key = path.substr(dot + 1);
  apply_key(c, section, key, value, 0);
  validate(c);
}

}  // namespace bi
