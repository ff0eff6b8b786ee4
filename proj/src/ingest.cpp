#include "biotdd/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace biot {

double young_modulus(double phi) {
  if (!(phi >= 0.0 && phi < 0.5))
    throw std::invalid_argument("young_modulus: porosity must lie in [0, 0.5), got " + std::to_string(phi));
  return 100.0 * std::pow(1.0 - phi / 0.5, 2.1);
}

Lame lame_from_E(double E, double nu) {
  if (!(E > 0.0)) throw std::invalid_argument("lame_from_E: E must be > 0");
  if (!(nu >= 0.0 && nu < 0.5)) throw std::invalid_argument("lame_from_E: Poisson ratio must lie in [0, 0.5)");
  return {E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), E / (2.0 * (1.0 + nu))};
}

CellField load_field(const std::string& path, int nx, int ny) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_field: cannot open " + path);
  CellField f{nx, ny, std::vector<double>(static_cast<std::size_t>(nx) * ny)};
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (row >= ny) throw std::runtime_error(path + ": more than " + std::to_string(ny) + " rows");
    std::istringstream ls(line);
    std::string tok;
    int col = 0;
    while (ls >> tok) {
      if (col >= nx)
        throw std::runtime_error(path + ": row " + std::to_string(row) + " has more than " + std::to_string(nx) +
                                 " values");
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || !std::isfinite(v))
        throw std::runtime_error(path + ": non-numeric value '" + tok + "' at row " + std::to_string(row) +
                                 ", column " + std::to_string(col));
      f.values[static_cast<std::size_t>(row) * nx + col] = v;
      ++col;
    }
    if (col != nx)
      throw std::runtime_error(path + ": missing value at row " + std::to_string(row) + ", column " +
                               std::to_string(col));
    ++row;
  }
  if (row != ny)
    throw std::runtime_error(path + ": expected " + std::to_string(ny) + " rows, found " + std::to_string(row));
  return f;
}

void save_field(const std::string& path, const CellField& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_field: cannot write " + path);
  out.precision(std::numeric_limits<double>::max_digits10);
  for (int j = 0; j < f.ny; ++j) {
    for (int i = 0; i < f.nx; ++i) out << (i ? " " : "") << f.at(i, j);
    out << '\n';
  }
  if (!out) throw std::runtime_error("save_field: write failed for " + path);
}

CellField generate_permeability(std::uint64_t seed, const FieldSpec& spec) {
  if (spec.nx < 1 || spec.ny < 1) throw std::invalid_argument("generate_permeability: bad dimensions");
  if (!(spec.span_decades >= 0.0)) throw std::invalid_argument("generate_permeability: span must be >= 0");
  if (!(spec.geo_mean > 0.0)) throw std::invalid_argument("generate_permeability: geo_mean must be > 0");
  const int nx = spec.nx, ny = spec.ny;
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<double> g(static_cast<std::size_t>(nx) * ny);
  for (double& v : g) v = nd(gen);
  // repeated 5-point averaging gives spatial correlation
  std::vector<double> tmp(g.size());
  for (int pass = 0; pass < spec.correlation; ++pass) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        double s = g[j * nx + i];
        int n = 1;
        if (i > 0) s += g[j * nx + i - 1], ++n;
        if (i + 1 < nx) s += g[j * nx + i + 1], ++n;
        if (j > 0) s += g[(j - 1) * nx + i], ++n;
        if (j + 1 < ny) s += g[(j + 1) * nx + i], ++n;
        tmp[j * nx + i] = s / n;
      }
    g.swap(tmp);
  }
  const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
  const double a = *lo, range = *hi - *lo;
  CellField k{nx, ny, std::vector<double>(g.size())};
  const double center = std::log10(spec.geo_mean);
  for (std::size_t c = 0; c < g.size(); ++c) {
    const double s = range > 0.0 ? (g[c] - a) / range : 0.5;
    k.values[c] = std::pow(10.0, center + spec.span_decades * (s - 0.5));
  }
  return k;
}

CellField porosity_from_permeability(const CellField& k, const FieldSpec& spec) {
  if (!(spec.porosity_min >= 0.0 && spec.porosity_max < 0.5 && spec.porosity_min <= spec.porosity_max))
    throw std::invalid_argument("porosity_from_permeability: porosity bounds must satisfy 0 <= min <= max < 0.5");
  std::vector<double> lk(k.values.size());
  for (std::size_t c = 0; c < lk.size(); ++c) {
    if (!(k.values[c] > 0.0)) throw std::invalid_argument("porosity_from_permeability: non-positive permeability");
    lk[c] = std::log10(k.values[c]);
  }
  const auto [lo, hi] = std::minmax_element(lk.begin(), lk.end());
  const double range = *hi - *lo;
  CellField phi{k.nx, k.ny, std::vector<double>(lk.size())};
  for (std::size_t c = 0; c < lk.size(); ++c) {
    const double s = range > 0.0 ? (lk[c] - *lo) / range : 0.5;
    phi.values[c] = spec.porosity_min + s * (spec.porosity_max - spec.porosity_min);
  }
  return phi;
}

MaterialField heterogeneous_material(const CellField& porosity, const CellField& permeability, double nu,
                                     double c0, double alpha) {
  if (porosity.nx != permeability.nx || porosity.ny != permeability.ny)
    throw std::invalid_argument("heterogeneous_material: porosity and permeability dimensions differ");
  MaterialField mat(porosity.values.size());
  for (std::size_t c = 0; c < mat.size(); ++c) {
    const double k = permeability.values[c];
    if (!(k > 0.0)) throw std::invalid_argument("heterogeneous_material: non-positive permeability in cell " +
                                                std::to_string(c));
    const Lame l = lame_from_E(young_modulus(porosity.values[c]), nu);
    mat[c].mu = l.mu;
    mat[c].lambda = l.lambda;
    mat[c].K = k * Mat2::Identity();
    mat[c].c0 = c0;
    mat[c].alpha = alpha;
  }
  return mat;
}

}  // namespace biot
