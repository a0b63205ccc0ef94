#include "fsekit/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fsekit/errors.hpp"

namespace fsekit {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

Eigen::Matrix2cd parse_matrix2(const std::vector<double>& v, const std::string& key) {
  if (v.size() != 8)
    throw ConfigError(key + ": expected 8 numbers (row-major re im pairs)");
  Eigen::Matrix2cd M;
  M << cplx(v[0], v[1]), cplx(v[2], v[3]), cplx(v[4], v[5]), cplx(v[6], v[7]);
  return M;
}

} // namespace

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    c.kv_[section.empty() ? key : section + "." + key] = value;
  }
  return c;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError(origin_ + ": missing key '" + key + "'");
  return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double Config::number(const std::string& key) const {
  const std::string s = get(key);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ConfigError(origin_ + ": key '" + key + "' is not a number: " + s);
  return v;
}

double Config::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long Config::integer_or(const std::string& key, long fallback) const {
  return has(key) ? static_cast<long>(number(key)) : fallback;
}

bool Config::flag_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(origin_ + ": key '" + key + "' is not a boolean: " + s);
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::istringstream in(get(key));
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (out.empty()) throw ConfigError(origin_ + ": key '" + key + "' holds no numbers");
  return out;
}

namespace {

Potential potential_from(const Config& c) {
  const std::string kind = c.get_or("potential.kind", "zero");
  const double center = c.number_or("potential.center", 0.0);
  Potential p = Potential::zero();
  if (kind == "zero") {
    p = Potential::zero();
  } else if (kind == "square-well") {
    p = Potential::square_well(c.number("potential.depth"),
                               c.number("potential.half_width"), center);
  } else if (kind == "gaussian") {
    p = Potential::gaussian(c.number("potential.amplitude"),
                            c.number("potential.sigma"), center);
  } else if (kind == "poeschl-teller") {
    p = Potential::poeschl_teller(c.number("potential.strength"),
                                  c.number_or("potential.width", 1.0), center);
  } else if (kind == "table") {
    const std::string path = c.get("potential.table_csv");
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open table csv: " + path);
    std::vector<double> xs, vs;
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      for (char& ch : line)
        if (ch == ',') ch = ' ';
      std::istringstream ls(line);
      double x, v;
      if (!(ls >> x >> v)) throw ConfigError("bad table row in " + path + ": " + line);
      xs.push_back(x);
      vs.push_back(v);
    }
    p = Potential::table(std::move(xs), std::move(vs));
  } else {
    throw ConfigError("unknown potential kind: " + kind);
  }
  const double scale = c.number_or("potential.scale", 1.0);
  if (scale != 1.0) p = p.scaled(scale);
  return p;
}

BoundaryCondition bc_from(const Config& c) {
  const std::string preset = c.get_or("bc.preset", "dirichlet");
  if (preset == "robin")
    return BoundaryCondition::robin(c.number_or("bc.kappa_right", 1.0),
                                    c.number_or("bc.kappa_left", 1.0));
  if (preset == "general")
    return BoundaryCondition::general(parse_matrix2(c.numbers("bc.A"), "bc.A"),
                                      parse_matrix2(c.numbers("bc.B"), "bc.B"));
  return BoundaryCondition::preset(preset);
}

HalfLineBC halfline_from(const Config& c) {
  HalfLineBC h = HalfLineBC::dirichlet_dirichlet();
  auto pair = [&](const std::string& key, cplx fallback) {
    if (!c.has(key)) return fallback;
    const auto v = c.numbers(key);
    if (v.size() == 1) return cplx(v[0], 0.0);
    if (v.size() == 2) return cplx(v[0], v[1]);
    throw ConfigError(key + ": expected one or two numbers");
  };
  h.a = pair("halfline.a", h.a);
  h.b = pair("halfline.b", h.b);
  h.A = pair("halfline.A", h.A);
  h.B = pair("halfline.B", h.B);
  h.validate();
  return h;
}

WeightFunction weight_from(const Config& c) {
  const std::string name = c.get_or("run.f", "identity");
  if (name == "identity") return WeightFunction::identity();
  if (name.rfind("power:", 0) == 0)
    return WeightFunction::power(std::atoi(name.c_str() + 6));
  throw ConfigError("unknown weight preset: " + name);
}

} // namespace

RunConfig RunConfig::from_config(const Config& cfg) {
  RunConfig r;
  r.raw = cfg;
  r.potential = potential_from(cfg);
  r.bc = bc_from(cfg);
  r.bc.validate();
  r.halfline_bc = halfline_from(cfg);
  r.f = weight_from(cfg);
  r.nu = cfg.number_or("run.nu", 1.0);
  if (r.nu <= 0.0) throw ConfigError("run.nu must be positive");
  r.eta = cfg.number_or("run.eta", 0.0);
  r.contour_b = cfg.number_or("run.b", 0.0);
  r.tol = cfg.number_or("run.tol", 1e-6);
  if (const char* env = std::getenv("FSEKIT_TOL")) r.tol = std::atof(env);
  r.threads = static_cast<int>(cfg.integer_or("run.threads", 0));
  return r;
}

RunConfig RunConfig::load(const std::string& path) {
  return from_config(Config::parse_file(path));
}

} // namespace fsekit
