#include "biotdd/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace biot {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& why) {
  throw std::invalid_argument("config key '" + key + "' = '" + value + "': " + why);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    bad(key, v, "not a number");
  }
  if (used != v.size() || !std::isfinite(x)) bad(key, v, "not a number");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    bad(key, v, "not an integer");
  }
  if (used != v.size()) bad(key, v, "not an integer");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad(key, v, "expected true or false");
}

SideBc to_side(const std::string& key, const std::string& v) {
  const auto parts = split(v, ',');
  if (parts.size() != 2) bad(key, v, "expected '<displacement|traction>,<pressure|noflux>'");
  SideBc s;
  if (parts[0] == "displacement") s.mech = MechBc::displacement;
  else if (parts[0] == "traction") s.mech = MechBc::traction;
  else bad(key, v, "mechanics condition must be displacement or traction");
  if (parts[1] == "pressure") s.flow = FlowBc::pressure;
  else if (parts[1] == "noflux") s.flow = FlowBc::noflux;
  else bad(key, v, "flow condition must be pressure or noflux");
  return s;
}

std::string side_string(const SideBc& s) {
  return std::string(s.mech == MechBc::displacement ? "displacement" : "traction") + "," +
         (s.flow == FlowBc::pressure ? "pressure" : "noflux");
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
  return os.str();
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

const char* kSides[4] = {"bottom", "right", "top", "left"};

}  // namespace

ConfigMap read_ini(const std::string& path) {
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::ini_parser::read_ini(path, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw std::runtime_error("cannot read config " + path + ": " + e.message());
  }
  ConfigMap kv;
  for (const auto& [section, body] : pt) {
    if (body.empty()) {
      kv[section] = trim(body.data());
      continue;
    }
    for (const auto& [key, val] : body) kv[section + "." + key] = trim(val.data());
  }
  return kv;
}

RunConfig parse_config(const ConfigMap& kv) {
  RunConfig c;
  bool have_steps = false, have_T = false;
  double T = 0.0;
  for (const auto& [key, v] : kv) {
    if (key == "run.scheme" || key == "run.schemes") {
      c.schemes.clear();
      for (const auto& s : split(v, ',')) {
        try {
          c.schemes.push_back(scheme_from_string(s));
        } catch (const std::exception&) {
          bad(key, v, "schemes are monolithic, ds, fs");
        }
      }
    } else if (key == "run.case") {
      if (v == "manufactured") c.kind = CaseKind::manufactured;
      else if (v == "heterogeneous") c.kind = CaseKind::heterogeneous;
      else bad(key, v, "expected manufactured or heterogeneous");
    } else if (key == "run.n" || key == "run.levels") {
      c.levels.clear();
      for (const auto& s : split(v, ',')) c.levels.push_back(static_cast<int>(to_int(key, s)));
    } else if (key == "run.partitions") {
      c.partitions.clear();
      for (const auto& s : split(v, ',')) c.partitions.push_back(static_cast<int>(to_int(key, s)));
    } else if (key == "run.px") c.px = static_cast<int>(to_int(key, v));
    else if (key == "run.py") c.py = static_cast<int>(to_int(key, v));
    else if (key == "run.dt") c.dt = to_double(key, v);
    else if (key == "run.steps") c.steps = static_cast<int>(to_int(key, v)), have_steps = true;
    else if (key == "run.T") T = to_double(key, v), have_T = true;
    else if (key == "run.tol") c.tol = to_double(key, v);
    else if (key == "run.max_iter") c.max_iter = static_cast<int>(to_int(key, v));
    else if (key == "run.scaling") {
      try {
        c.scaling = scaling_from_string(v);
      } catch (const std::exception&) {
        bad(key, v, "expected rate, increment or balanced");
      }
    } else if (key == "run.precompute") c.precompute = to_bool(key, v);
    else if (key == "run.output_dir") c.output_dir = v;
    else if (key == "run.snapshot_every") c.snapshot_every = static_cast<int>(to_int(key, v));
    else if (key == "material.mu") c.mu = to_double(key, v);
    else if (key == "material.lambda") c.lambda = to_double(key, v);
    else if (key == "material.c0") c.c0 = to_double(key, v);
    else if (key == "material.alpha") c.alpha = to_double(key, v);
    else if (key == "material.K") c.K = to_double(key, v);
    else if (key == "material.nu") c.nu = to_double(key, v);
    else if (key == "material.porosity_file") c.porosity_file = v;
    else if (key == "material.permeability_file") c.permeability_file = v;
    else if (key == "material.field_seed") c.field_seed = static_cast<std::uint64_t>(to_int(key, v));
    else if (key == "material.span_decades") c.span_decades = to_double(key, v);
    else if (key == "mesh.perturb") c.perturb = to_double(key, v);
    else if (key == "mesh.seed") c.perturb_seed = static_cast<std::uint64_t>(to_int(key, v));
    else if (key == "mesh.block_grid") c.perturb_grid = static_cast<int>(to_int(key, v));
    else if (key == "mesh.coarse") c.perturb_coarse = static_cast<int>(to_int(key, v));
    else if (key == "mesh.blocks") {
      c.perturb_blocks.clear();
      for (const auto& s : split(v, ',')) c.perturb_blocks.push_back(static_cast<int>(to_int(key, s)));
    } else {
      bool side = false;
      for (int k = 0; k < 4; ++k)
        if (key == std::string("bc.") + kSides[k]) c.bc[k] = to_side(key, v), side = true;
      if (!side) throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  if (have_T) {
    if (!(c.dt > 0.0)) bad("run.dt", num(c.dt), "must be > 0");
    const double n = T / c.dt;
    const long long N = std::llround(n);
    if (have_steps) {
      if (std::abs(c.steps * c.dt - T) > 1e-12) bad("run.T", num(T), "steps * dt must equal T");
    } else {
      if (std::abs(N * c.dt - T) > 1e-12) bad("run.T", num(T), "T is not a whole number of time steps");
      c.steps = static_cast<int>(N);
    }
  }
  validate(c);
  return c;
}

void validate(const RunConfig& c) {
  if (c.schemes.empty()) bad("run.scheme", "", "at least one scheme required");
  if (c.levels.empty()) bad("run.n", "", "at least one mesh size required");
  for (int n : c.levels) {
    if (n < 1) bad("run.n", std::to_string(n), "must be >= 1");
    if (n % c.px) bad("run.px", std::to_string(c.px), "must divide n = " + std::to_string(n));
    if (n % c.py) bad("run.py", std::to_string(c.py), "must divide n = " + std::to_string(n));
  }
  for (int k : c.partitions) {
    if (k < 1) bad("run.partitions", std::to_string(k), "must be >= 1");
    for (int n : c.levels)
      if (n % k) bad("run.partitions", std::to_string(k), "must divide n = " + std::to_string(n));
  }
  if (c.px < 1) bad("run.px", std::to_string(c.px), "must be >= 1");
  if (c.py < 1) bad("run.py", std::to_string(c.py), "must be >= 1");
  if (!(c.dt > 0.0)) bad("run.dt", num(c.dt), "must be > 0");
  if (c.steps < 0) bad("run.steps", std::to_string(c.steps), "must be >= 0");
  if (!(c.tol > 0.0 && c.tol < 1.0)) bad("run.tol", num(c.tol), "must lie in (0, 1)");
  if (c.max_iter < 1) bad("run.max_iter", std::to_string(c.max_iter), "must be >= 1");
  if (c.snapshot_every < 0) bad("run.snapshot_every", std::to_string(c.snapshot_every), "must be >= 0");
  if (!(c.mu > 0.0)) bad("material.mu", num(c.mu), "must be > 0");
  if (!(c.lambda >= 0.0)) bad("material.lambda", num(c.lambda), "must be >= 0");
  if (!(c.c0 >= 0.0)) bad("material.c0", num(c.c0), "must be >= 0");
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) bad("material.alpha", num(c.alpha), "must lie in (0, 1]");
  if (!(c.K > 0.0)) bad("material.K", num(c.K), "must be > 0");
  if (!(c.nu >= 0.0 && c.nu < 0.5)) bad("material.nu", num(c.nu), "must lie in [0, 0.5)");
  if (!(c.span_decades >= 0.0)) bad("material.span_decades", num(c.span_decades), "must be >= 0");
  if (!(c.perturb >= 0.0 && c.perturb <= 0.3)) bad("mesh.perturb", num(c.perturb), "must lie in [0, 0.3]");
  if (c.perturb > 0.0) {
    if (c.perturb_coarse < 1) bad("mesh.coarse", std::to_string(c.perturb_coarse), "must be >= 1");
    if (c.perturb_grid < 1) bad("mesh.block_grid", std::to_string(c.perturb_grid), "must be >= 1");
    if (c.perturb_coarse % c.perturb_grid)
      bad("mesh.coarse", std::to_string(c.perturb_coarse), "must be a multiple of mesh.block_grid");
    for (int n : c.levels)
      if (n % c.perturb_coarse) bad("mesh.coarse", std::to_string(c.perturb_coarse), "must divide every n");
    for (int b : c.perturb_blocks)
      if (b < 0 || b >= c.perturb_grid * c.perturb_grid) bad("mesh.blocks", std::to_string(b), "block index out of range");
  }
  if (c.porosity_file.empty() != c.permeability_file.empty())
    bad("material.porosity_file", c.porosity_file, "porosity and permeability files go together");
}

ConfigMap to_map(const RunConfig& c) {
  ConfigMap kv;
  std::vector<std::string> s;
  for (Scheme x : c.schemes) s.emplace_back(to_string(x));
  kv["run.scheme"] = join(s);
  kv["run.case"] = c.kind == CaseKind::manufactured ? "manufactured" : "heterogeneous";
  kv["run.n"] = join(c.levels);
  if (!c.partitions.empty()) kv["run.partitions"] = join(c.partitions);
  kv["run.px"] = std::to_string(c.px);
  kv["run.py"] = std::to_string(c.py);
  kv["run.dt"] = num(c.dt);
  kv["run.steps"] = std::to_string(c.steps);
  kv["run.tol"] = num(c.tol);
  kv["run.max_iter"] = std::to_string(c.max_iter);
  kv["run.scaling"] = to_string(c.scaling);
  kv["run.precompute"] = c.precompute ? "true" : "false";
  kv["run.output_dir"] = c.output_dir;
  kv["run.snapshot_every"] = std::to_string(c.snapshot_every);
  kv["material.mu"] = num(c.mu);
  kv["material.lambda"] = num(c.lambda);
  kv["material.c0"] = num(c.c0);
  kv["material.alpha"] = num(c.alpha);
  kv["material.K"] = num(c.K);
  kv["material.nu"] = num(c.nu);
  if (!c.porosity_file.empty()) kv["material.porosity_file"] = c.porosity_file;
  if (!c.permeability_file.empty()) kv["material.permeability_file"] = c.permeability_file;
  kv["material.field_seed"] = std::to_string(c.field_seed);
  kv["material.span_decades"] = num(c.span_decades);
  kv["mesh.perturb"] = num(c.perturb);
  kv["mesh.seed"] = std::to_string(c.perturb_seed);
  kv["mesh.coarse"] = std::to_string(c.perturb_coarse);
  kv["mesh.block_grid"] = std::to_string(c.perturb_grid);
  if (!c.perturb_blocks.empty()) kv["mesh.blocks"] = join(c.perturb_blocks);
  for (int k = 0; k < 4; ++k) kv[std::string("bc.") + kSides[k]] = side_string(c.bc[k]);
  return kv;
}

}  // namespace biot
