#include "biotdd/experiment.hpp"

#include "biotdd/output.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

namespace biot {

std::unique_ptr<Problem> build_problem(const RunConfig& c, int n, int px, int py) {
  auto P = std::make_unique<Problem>();
  Perturbation pt;
  pt.fraction = c.perturb;
  pt.seed = c.perturb_seed;
  if (c.perturb > 0.0) {
    pt.coarse_nx = pt.coarse_ny = c.perturb_coarse;
    pt.px = pt.py = c.perturb_grid;
    pt.blocks = c.perturb_blocks;
  }
  P->mesh = build_grid(n, n, pt);
  P->dec = partition(P->mesh, px, py, c.bc);

  if (c.kind == CaseKind::manufactured) {
    if (c.K != 1.0) throw std::invalid_argument("manufactured case requires material.K = 1");
    CellMaterial cm;
    cm.mu = c.mu;
    cm.lambda = c.lambda;
    cm.c0 = c.c0;
    cm.alpha = c.alpha;
    P->mat = uniform_material(P->mesh.n_cells(), cm);
    const ManufacturedCase mc(c.mu, c.lambda, c.c0, c.alpha);
    P->data = mc.data();
    P->exact = mc.exact();
    return P;
  }

  CellField phi, k;
  if (!c.permeability_file.empty()) {
    k = load_field(c.permeability_file, n, n);
    phi = load_field(c.porosity_file, n, n);
  } else {
    FieldSpec spec;
    spec.nx = spec.ny = n;
    spec.span_decades = c.span_decades;
    k = generate_permeability(c.field_seed, spec);
    phi = porosity_from_permeability(k, spec);
  }
  P->mat = heterogeneous_material(phi, k, c.nu, c.c0, c.alpha);
  // pressure driven flow from left to right, initial pressure 1 - x
  const double alpha = c.alpha;
  P->data.p0 = [](const Vec2& x, double) { return 1.0 - x.x(); };
  P->data.g_p = [](const Vec2& x, double) { return 1.0 - x.x(); };
  P->data.traction = [alpha](const Vec2& x, double, const Vec2& nrm) { return Vec2(-alpha * (1.0 - x.x()) * nrm); };
  return P;
}

LevelResult run_level(const RunConfig& c, Scheme s, int n, int px, int py, const std::string& snapshot_dir) {
  const auto P = build_problem(c, n, px, py);
  SchemeOptions o;
  o.scheme = s;
  o.dt = c.dt;
  o.steps = c.steps;
  o.tol = c.tol;
  o.max_iter = c.max_iter;
  o.precompute = c.precompute;
  o.scaling = c.scaling;
  Solver solver(P->mesh, P->dec, P->mat, P->data, o);
  std::optional<ErrorTracker> tracker;
  // error norms one order above the assembly rule
  if (P->exact) tracker.emplace(*P->exact, QuadOptions{}.cell_points + 1);
  const bool snap = c.snapshot_every > 0 && !snapshot_dir.empty();
  if (snap) std::filesystem::create_directories(snapshot_dir);
  LevelResult r;
  r.scheme = s;
  r.n = n;
  r.px = px;
  r.py = py;
  r.summary = solver.run([&](const State& st) {
    if (tracker && st.n > 0) tracker->add(solver, st);
    if (snap && (st.n % c.snapshot_every == 0 || st.n == c.steps)) {
      const std::string stem = snapshot_dir + "/" + to_string(s) + "_n" + std::to_string(n) + "_step" +
                               std::to_string(st.n);
      write_vtk(stem + ".vtk", solver, st);
      write_state_csv(stem + ".csv", st);
    }
  });
  if (tracker && tracker->samples() > 0) {
    r.has_errors = true;
    r.errors = tracker->relative();
  }
  return r;
}

std::vector<LevelResult> run_sweep(const RunConfig& c, const Progress& progress) {
  validate(c);
  std::vector<std::pair<int, int>> parts;
  if (c.partitions.empty()) parts.emplace_back(c.px, c.py);
  for (int k : c.partitions) parts.emplace_back(k, k);
  std::vector<LevelResult> out;
  for (Scheme s : c.schemes)
    for (const auto& [px, py] : parts)
      for (int n : c.levels) {
        if (progress)
          progress(std::string(to_string(s)) + " n=" + std::to_string(n) + " " + std::to_string(px) + "x" +
                   std::to_string(py));
        out.push_back(run_level(c, s, n, px, py, c.snapshot_every > 0 ? c.output_dir + "/fields" : ""));
      }
  return out;
}

namespace {

std::string rate_cell(const std::vector<double>& r, std::size_t k) {
  if (k == 0) return "";
  const double x = r[k - 1];
  return std::isfinite(x) ? fmt(x) : "";
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

void write_tables(const std::string& dir, const std::vector<LevelResult>& rows) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_csv(dir + "/iterations.csv");
    out << "scheme,px,py,h,gmres,cg_elasticity,cg_darcy\n";
    for (const auto& r : rows)
      out << to_string(r.scheme) << ',' << r.px << ',' << r.py << ',' << fmt(1.0 / r.n) << ','
          << fmt(r.summary.avg_gmres) << ',' << fmt(r.summary.avg_cg_elasticity) << ','
          << fmt(r.summary.avg_cg_darcy) << '\n';
  }
  {
    auto out = open_csv(dir + "/stability.csv");
    out << "scheme,px,py,h,sum_dp,max_energy,lhs,p0,z0,ratio_ds,ratio_fs\n";
    for (const auto& r : rows) {
      const auto& m = r.summary.monitor;
      out << to_string(r.scheme) << ',' << r.px << ',' << r.py << ',' << fmt(1.0 / r.n) << ',' << fmt(m.sum_dp)
          << ',' << fmt(m.max_energy) << ',' << fmt(m.lhs()) << ',' << fmt(m.p0) << ',' << fmt(m.z0) << ','
          << fmt(m.ratio_ds()) << ',' << fmt(m.ratio_fs()) << '\n';
    }
  }
  // group by (scheme, partition) keeping first-seen order
  std::vector<std::vector<const LevelResult*>> groups;
  std::map<std::tuple<int, int, int>, std::size_t> index;
  for (const auto& r : rows) {
    if (!r.has_errors) continue;
    const auto key = std::make_tuple(static_cast<int>(r.scheme), r.px, r.py);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, groups.size()).first;
      groups.emplace_back();
    }
    groups[it->second].push_back(&r);
  }
  for (const auto& g : groups) {
    const LevelResult& f = *g.front();
    std::string name = dir + "/convergence_" + to_string(f.scheme);
    if (f.px != 2 || f.py != 2) name += "_" + std::to_string(f.px) + "x" + std::to_string(f.py);
    auto out = open_csv(name + ".csv");
    std::vector<double> h, it1, it2, ez, ep, es, eu;
    for (const auto* r : g) {
      h.push_back(1.0 / r->n);
      it1.push_back(r->scheme == Scheme::monolithic ? r->summary.avg_gmres : r->summary.avg_cg_elasticity);
      it2.push_back(r->summary.avg_cg_darcy);
      ez.push_back(r->errors.z);
      ep.push_back(r->errors.p);
      es.push_back(r->errors.sigma);
      eu.push_back(r->errors.u);
    }
    const auto r1 = convergence_rates(h, it1), r2 = convergence_rates(h, it2), rz = convergence_rates(h, ez),
               rp = convergence_rates(h, ep), rs = convergence_rates(h, es), ru = convergence_rates(h, eu);
    const bool mono = f.scheme == Scheme::monolithic;
    out << "h," << (mono ? "gmres,rate" : "cg_elasticity,rate,cg_darcy,rate")
        << ",z_hdiv,rate,p_l2,rate,sigma_hdiv,rate,u_l2,rate\n";
    for (std::size_t k = 0; k < g.size(); ++k) {
      out << "1/" << g[k]->n << ',' << fmt(it1[k]) << ',' << rate_cell(r1, k);
      if (!mono) out << ',' << fmt(it2[k]) << ',' << rate_cell(r2, k);
      out << ',' << fmt(ez[k]) << ',' << rate_cell(rz, k) << ',' << fmt(ep[k]) << ',' << rate_cell(rp, k) << ','
          << fmt(es[k]) << ',' << rate_cell(rs, k) << ',' << fmt(eu[k]) << ',' << rate_cell(ru, k) << '\n';
    }
  }
}

}  // namespace biot
