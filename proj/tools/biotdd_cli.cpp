// biotdd: run, sweep or check a poroelastic domain decomposition experiment.
#include "biotdd/config.hpp"
#include "biotdd/experiment.hpp"
#include "biotdd/output.hpp"
#include "biotdd/parallel.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

struct Overrides {
  std::vector<std::string> sets;
  std::string scheme, n, dt, steps, T, tol, output_dir, scaling, partitions;
};

void add_overrides(CLI::App* sub, std::string& path, Overrides& o) {
  sub->add_option("config", path, "INI config file")->required();
  sub->add_option("--set", o.sets, "override any key, e.g. --set run.dt=1e-2 (repeatable)");
  sub->add_option("--scheme", o.scheme, "run.scheme (monolithic, ds, fs; comma list)");
  sub->add_option("-n,--n", o.n, "run.n, cells per direction (comma list)");
  sub->add_option("--dt", o.dt, "run.dt");
  sub->add_option("--steps", o.steps, "run.steps");
  sub->add_option("--T", o.T, "run.T");
  sub->add_option("--tol", o.tol, "run.tol");
  sub->add_option("--scaling", o.scaling, "run.scaling (rate, increment, balanced)");
  sub->add_option("--partitions", o.partitions, "run.partitions (comma list of k for k x k)");
  sub->add_option("-o,--output-dir", o.output_dir, "run.output_dir");
}

biot::RunConfig load(const std::string& path, const Overrides& o) {
  if (!std::filesystem::exists(path)) throw CLI::ValidationError("config", "config file not found: " + path);
  biot::ConfigMap kv = biot::read_ini(path);
  if (kv.empty()) throw CLI::ValidationError("config", "config file " + path + " is empty");
  auto put = [&](const char* key, const std::string& v) {
    if (!v.empty()) kv[key] = v;
  };
  put("run.scheme", o.scheme);
  put("run.n", o.n);
  put("run.dt", o.dt);
  put("run.steps", o.steps);
  put("run.T", o.T);
  put("run.tol", o.tol);
  put("run.scaling", o.scaling);
  put("run.partitions", o.partitions);
  put("run.output_dir", o.output_dir);
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--set", "expected section.key=value, got " + s);
    kv[s.substr(0, eq)] = s.substr(eq + 1);
  }
  // scheme and run.schemes are aliases; keep the later-applied spelling only
  if (!o.scheme.empty()) kv.erase("run.schemes");
  return biot::parse_config(kv);
}

void echo_config(const biot::RunConfig& c, std::ostream& out) {
  std::string section;
  for (const auto& [key, v] : biot::to_map(c)) {
    const auto dot = key.find('.');
    if (key.substr(0, dot) != section) {
      section = key.substr(0, dot);
      out << '[' << section << "]\n";
    }
    out << key.substr(dot + 1) << " = " << v << '\n';
  }
}

void print_rows(const std::vector<biot::LevelResult>& rows) {
  for (const auto& r : rows) {
    std::cout << biot::to_string(r.scheme) << " n=" << r.n << ' ' << r.px << 'x' << r.py;
    if (r.scheme == biot::Scheme::monolithic) std::cout << " gmres=" << biot::fmt(r.summary.avg_gmres);
    else
      std::cout << " cg_elasticity=" << biot::fmt(r.summary.avg_cg_elasticity)
                << " cg_darcy=" << biot::fmt(r.summary.avg_cg_darcy);
    if (r.has_errors)
      std::cout << " err_z=" << biot::fmt(r.errors.z) << " err_p=" << biot::fmt(r.errors.p)
                << " err_sigma=" << biot::fmt(r.errors.sigma) << " err_u=" << biot::fmt(r.errors.u);
    std::cout << '\n';
  }
}

int execute(const biot::RunConfig& c, bool single) {
  if (single && (c.levels.size() != 1 || c.partitions.size() > 1))
    throw std::runtime_error("run takes one mesh size and one partition; use sweep for lists");
  std::filesystem::create_directories(c.output_dir);
  {
    std::ofstream echo(c.output_dir + "/config.ini");
    echo_config(c, echo);
  }
  biot::RunConfig cc = c;
  // a single run always leaves its final fields behind
  if (single && cc.snapshot_every == 0) cc.snapshot_every = std::max(cc.steps, 1);
  const auto rows = biot::run_sweep(cc, [](const std::string& what) { std::cerr << "running " << what << std::endl; });
  biot::write_tables(c.output_dir, rows);
  print_rows(rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed finite element Biot solver with domain decomposition.\n"
               "BIOTDD_THREADS sets the worker count for subdomain work."};
  app.require_subcommand(1);
  std::string path;
  Overrides o;
  auto* run = app.add_subcommand("run", "one scheme set on one mesh; writes tables and final fields");
  auto* sweep = app.add_subcommand("sweep", "all schemes x partitions x mesh sizes of the config");
  auto* check = app.add_subcommand("validate-config", "parse, validate and print the effective config");
  for (auto* s : {run, sweep, check}) add_overrides(s, path, o);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    const biot::RunConfig c = load(path, o);
    if (check->parsed()) {
      echo_config(c, std::cout);
      std::cout << "threads = " << biot::thread_count() << '\n';
      return 0;
    }
    return execute(c, run->parsed());
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
