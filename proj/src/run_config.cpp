#include "volform/run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "volform/field_io.hpp"
#include "volform/operators.hpp"

namespace volform {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& s, const std::string& origin, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    fail(origin, line, "expected a number, got '" + s + "'");
  return v;
}

long to_long(const std::string& s, const std::string& origin, int line) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    fail(origin, line, "expected an integer, got '" + s + "'");
  return v;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

struct RawMode {
  std::string text;
  int line;
};

TrigMode parse_mode_tokens(const std::vector<std::string>& tok, int dim,
                           const std::string& origin, int line) {
  if (static_cast<int>(tok.size()) != dim + 2)
    fail(origin, line,
         "trig mode needs " + std::to_string(dim) + " wavenumbers, amplitude and phase (" +
             std::to_string(dim + 2) + " numbers), got " + std::to_string(tok.size()));
  TrigMode m;
  for (int a = 0; a < dim; ++a) m.k[a] = static_cast<int>(to_long(tok[a], origin, line));
  m.amplitude = to_double(tok[dim], origin, line);
  m.phase = to_double(tok[dim + 1], origin, line);
  return m;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0')
      throw ConfigError("expected a number in list, got '" + item + "'");
    out.push_back(v);
  }
  return out;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  cfg.source_text = text;

  std::vector<RawMode> phi0_raw, phi1_raw;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;

  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') fail(origin, line, "unterminated section header");
      section = s.substr(1, s.size() - 2);
      if (section != "grid" && section != "solver" && section != "boundary" &&
          section != "experiment")
        fail(origin, line, "unknown section [" + section + "]");
      continue;
    }

    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(origin, line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) fail(origin, line, "empty key");
    if (val.empty()) fail(origin, line, "empty value for '" + key + "'");
    if (section.empty()) fail(origin, line, "key '" + key + "' outside any section");

    if (section == "grid") {
      if (key == "dim") cfg.dim = static_cast<int>(to_long(val, origin, line));
      else if (key == "n") cfg.n = static_cast<int>(to_long(val, origin, line));
      else if (key == "nt") cfg.nt = static_cast<int>(to_long(val, origin, line));
      else fail(origin, line, "unknown key '" + key + "' in [grid]");
    } else if (section == "solver") {
      if (key == "epsilon") cfg.solver.epsilon = to_double(val, origin, line);
      else if (key == "s_steps") cfg.solver.s_steps = static_cast<int>(to_long(val, origin, line));
      else if (key == "newton_tol") cfg.solver.newton_tol = to_double(val, origin, line);
      else if (key == "newton_max_iters")
        cfg.solver.newton_max_iters = static_cast<int>(to_long(val, origin, line));
      else if (key == "linear_rel_tol") cfg.solver.linear_rel_tol = to_double(val, origin, line);
      else if (key == "ellipticity_guard")
        cfg.solver.ellipticity_guard = to_double(val, origin, line);
      else if (key == "backtrack_factor")
        cfg.solver.backtrack_factor = to_double(val, origin, line);
      else if (key == "eps_schedule") {
        try {
          cfg.solver.eps_schedule = parse_double_list(val);
        } catch (const ConfigError& e) {
          fail(origin, line, e.what());
        }
      } else
        fail(origin, line, "unknown key '" + key + "' in [solver]");
    } else if (section == "boundary") {
      if (key == "phi0") phi0_raw.push_back({val, line});
      else if (key == "phi1") phi1_raw.push_back({val, line});
      else if (key == "phi0_file") cfg.phi0.file = val;
      else if (key == "phi1_file") cfg.phi1.file = val;
      else fail(origin, line, "unknown key '" + key + "' in [boundary]");
    } else {  // experiment
      if (key == "seed") cfg.experiment.seed = static_cast<uint64_t>(to_long(val, origin, line));
      else if (key == "samples") cfg.experiment.samples = to_long(val, origin, line);
      else if (key == "c_slack") cfg.experiment.c_slack = to_double(val, origin, line);
      else if (key == "eps") cfg.experiment.eps = to_double(val, origin, line);
      else if (key == "lambdas") {
        try {
          cfg.experiment.lambdas = parse_double_list(val);
        } catch (const ConfigError& e) {
          fail(origin, line, e.what());
        }
      } else if (key == "suite") cfg.suite = val;
      else fail(origin, line, "unknown key '" + key + "' in [experiment]");
    }
  }

  if (cfg.dim < 1 || cfg.dim > 3) throw ConfigError(origin + ": dim must be 1, 2 or 3");

  for (const RawMode& rm : phi0_raw)
    cfg.phi0.modes.push_back(parse_mode_tokens(split_ws(rm.text), cfg.dim, origin, rm.line));
  for (const RawMode& rm : phi1_raw)
    cfg.phi1.modes.push_back(parse_mode_tokens(split_ws(rm.text), cfg.dim, origin, rm.line));

  for (const auto* spec : {&cfg.phi0, &cfg.phi1}) {
    if (!spec->modes.empty() && !spec->file.empty())
      throw ConfigError(origin + ": boundary endpoint given both trig modes and a file");
    if (!spec->modes.empty() && laplacian_sup_bound(spec->modes) >= 1.0)
      throw ConfigError(origin + ": trig boundary rejected, sup|lap phi| bound " +
                        std::to_string(laplacian_sup_bound(spec->modes)) + " >= 1");
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

SpatialField RunConfig::materialize(const BoundarySpec& spec, const TorusGrid& g) const {
  if (!spec.file.empty()) return read_spatial_field(spec.file, g);
  return make_trig_field(g, spec.modes);
}

BoundaryPair RunConfig::boundary(const TorusGrid& g) const {
  if (phi0.empty() || phi1.empty())
    throw ConfigError("missing boundary spec: [boundary] must define phi0 and phi1");
  return BoundaryPair{materialize(phi0, g), materialize(phi1, g)};
}

BoundarySpec parse_point_spec(const std::string& spec, int dim) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw ConfigError("point spec must be const:V, trig:... or file:PATH, got '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  BoundarySpec out;
  if (kind == "const") {
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str() || *end != '\0')
      throw ConfigError("const point spec needs a number, got '" + rest + "'");
    TrigMode m;  // k = 0 mode with phase 0 is the constant v
    m.amplitude = v;
    out.modes.push_back(m);
  } else if (kind == "file") {
    if (rest.empty()) throw ConfigError("file point spec needs a path");
    out.file = rest;
  } else if (kind == "trig") {
    std::stringstream is(rest);
    std::string part;
    int line = 0;
    while (std::getline(is, part, ',')) {
      part = trim(part);
      if (part.empty()) continue;
      out.modes.push_back(parse_mode_tokens(split_ws(part), dim, "<point spec>", ++line));
    }
    if (out.modes.empty()) throw ConfigError("trig point spec has no modes");
    if (laplacian_sup_bound(out.modes) >= 1.0)
      throw ConfigError("trig point spec rejected, sup|lap phi| bound >= 1");
  } else {
    throw ConfigError("unknown point spec kind '" + kind + "'");
  }
  return out;
}

}  // namespace volform
