#include "biotdd/output.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace biot {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

void write_vtk(const std::string& path, const Solver& solver, const State& state) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk: cannot write " + path);
  const Mesh& mesh = solver.mesh();
  const int nc = mesh.n_cells();
  out.precision(12);
  out << "# vtk DataFile Version 3.0\nporoelastic state n=" << state.n << " t=" << state.t << "\nASCII\n"
      << "DATASET UNSTRUCTURED_GRID\nPOINTS " << mesh.vertices.size() << " double\n";
  for (const Vec2& v : mesh.vertices) out << v.x() << ' ' << v.y() << " 0\n";
  out << "CELLS " << nc << ' ' << 5 * nc << '\n';
  for (int c = 0; c < nc; ++c) {
    const auto& q = mesh.cells[c];
    out << "4 " << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
  }
  out << "CELL_TYPES " << nc << '\n';
  for (int c = 0; c < nc; ++c) out << "9\n";

  std::vector<double> p(nc), g(nc), sub(nc);
  std::vector<Vec2> u(nc), z(nc), s0(nc), s1(nc);
  const Rule2d rule = gauss_square(2);
  for (const Subdomain& sd : solver.subdomains()) {
    const SubdomainDofs& d = sd.dofs();
    const Fields& f = state.fields[sd.id()];
    for (int lc = 0; lc < d.n_cells(); ++lc) {
      const int c = d.cells[lc];
      p[c] = f.p(lc);
      g[c] = f.gamma(lc);
      sub[c] = sd.id();
      u[c] = Vec2(f.u(lc), f.u(d.n_cells() + lc));
      const auto az = cell_coefficients(d, lc, f.z, 0);
      const auto a0 = cell_coefficients(d, lc, f.sigma, 0);
      const auto a1 = cell_coefficients(d, lc, f.sigma, d.n_z());
      const CellMap<double> map = cell_map(mesh, c);
      Vec2 zs = Vec2::Zero(), r0 = Vec2::Zero(), r1 = Vec2::Zero();
      double area = 0.0;
      for (int q = 0; q < rule.size(); ++q) {
        const HdivPoint hp = map_hdiv_basis(map, rule.x[q], c);
        const double w = rule.w[q] * hp.det;
        zs += w * (hp.phi * az);
        r0 += w * (hp.phi * a0);
        r1 += w * (hp.phi * a1);
        area += w;
      }
      z[c] = zs / area;
      s0[c] = r0 / area;
      s1[c] = r1 / area;
    }
  }
  out << "CELL_DATA " << nc << '\n';
  auto scalar = [&](const char* name, const std::vector<double>& v) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double x : v) out << x << '\n';
  };
  auto vector = [&](const char* name, const std::vector<Vec2>& v) {
    out << "VECTORS " << name << " double\n";
    for (const Vec2& x : v) out << x.x() << ' ' << x.y() << " 0\n";
  };
  scalar("pressure", p);
  scalar("rotation", g);
  scalar("subdomain", sub);
  vector("displacement", u);
  vector("velocity", z);
  vector("stress_x", s0);
  vector("stress_y", s1);
  if (!out) throw std::runtime_error("write_vtk: write failed for " + path);
}

namespace {
const char* kFields[5] = {"sigma", "u", "gamma", "z", "p"};

Vec& field_ref(Fields& f, int k) {
  switch (k) {
    case 0: return f.sigma;
    case 1: return f.u;
    case 2: return f.gamma;
    case 3: return f.z;
    default: return f.p;
  }
}
}  // namespace

void write_state_csv(const std::string& path, const State& st) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_state_csv: cannot write " + path);
  out.precision(std::numeric_limits<double>::max_digits10);
  out << "kind,subdomain,field,index,value\n";
  out << "meta,-1,n,0," << st.n << "\nmeta,-1,t,0," << st.t << '\n';
  for (std::size_t s = 0; s < st.fields.size(); ++s) {
    Fields f = st.fields[s];
    for (int k = 0; k < 5; ++k) {
      const Vec& v = field_ref(f, k);
      for (int i = 0; i < v.size(); ++i) out << "dof," << s << ',' << kFields[k] << ',' << i << ',' << v(i) << '\n';
    }
  }
  for (int i = 0; i < st.lambda_u.size(); ++i) out << "lambda,-1,lambda_u," << i << ',' << st.lambda_u(i) << '\n';
  for (std::size_t s = 0; s < st.sigma_prev.size(); ++s)
    for (int i = 0; i < st.sigma_prev[s].size(); ++i)
      out << "prev," << s << ",sigma," << i << ',' << st.sigma_prev[s](i) << '\n';
  if (!out) throw std::runtime_error("write_state_csv: write failed for " + path);
}

State read_state_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_state_csv: cannot open " + path);
  std::string line;
  std::getline(in, line);
  std::map<int, std::array<std::vector<double>, 5>> dofs;
  std::map<int, std::vector<double>> prev;
  std::vector<double> lam;
  State st;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::stringstream ss(line);
    std::string kind, sub, field, idx, val;
    if (!std::getline(ss, kind, ',') || !std::getline(ss, sub, ',') || !std::getline(ss, field, ',') ||
        !std::getline(ss, idx, ',') || !std::getline(ss, val))
      throw std::runtime_error(path + ": malformed line " + std::to_string(lineno));
    const double x = std::stod(val);
    const int s = std::stoi(sub);
    const std::size_t i = static_cast<std::size_t>(std::stoll(idx));
    auto put = [&](std::vector<double>& v) {
      if (v.size() != i) throw std::runtime_error(path + ": out-of-order index on line " + std::to_string(lineno));
      v.push_back(x);
    };
    if (kind == "meta") {
      if (field == "n") st.n = static_cast<int>(x);
      else st.t = x;
    } else if (kind == "dof") {
      int k = 0;
      while (k < 5 && field != kFields[k]) ++k;
      if (k == 5) throw std::runtime_error(path + ": unknown field on line " + std::to_string(lineno));
      put(dofs[s][k]);
    } else if (kind == "lambda") {
      put(lam);
    } else if (kind == "prev") {
      put(prev[s]);
    } else {
      throw std::runtime_error(path + ": unknown record kind on line " + std::to_string(lineno));
    }
  }
  auto to_vec = [](const std::vector<double>& v) { return Vec(Eigen::Map<const Vec>(v.data(), static_cast<int>(v.size()))); };
  for (auto& [s, arr] : dofs) {
    if (s != static_cast<int>(st.fields.size())) throw std::runtime_error(path + ": subdomains out of order");
    Fields f;
    for (int k = 0; k < 5; ++k) field_ref(f, k) = to_vec(arr[k]);
    st.fields.push_back(f);
  }
  st.lambda_u = to_vec(lam);
  for (auto& [s, v] : prev) st.sigma_prev.push_back(to_vec(v));
  return st;
}

}  // namespace biot
