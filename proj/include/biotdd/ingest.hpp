#pragma once

#include "biotdd/assembly.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace biot {

/// Per-cell scalar field, row-major with row 0 at the bottom.
struct CellField {
  int nx = 0, ny = 0;
  std::vector<double> values;

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
};

/// E = 100 (1 - phi / 0.5)^2.1; throws unless 0 <= phi < 0.5.
double young_modulus(double phi);

struct Lame {
  double lambda = 0.0;
  double mu = 0.0;
};

/// Throws unless E > 0 and 0 <= nu < 0.5.
Lame lame_from_E(double E, double nu);

/// Whitespace-separated text, one line per mesh row, bottom row first.
/// Throws naming the row/column of a missing or malformed value.
CellField load_field(const std::string& path, int nx, int ny);
/// Writes with max_digits10 so load_field(save_field(f)) is exact.
void save_field(const std::string& path, const CellField& f);

struct FieldSpec {
  int nx = 128, ny = 128;
  double span_decades = 7.0;   ///< log10(max / min) of the generated permeability
  double geo_mean = 1.0;       ///< sqrt(min * max) of the permeability
  int correlation = 8;         ///< smoothing passes of the underlying Gaussian field
  double porosity_min = 0.05, porosity_max = 0.35;
};

/// Synthetic log-normal permeability; log10 k is a smoothed Gaussian field
/// rescaled to span exactly `span_decades`.
CellField generate_permeability(std::uint64_t seed, const FieldSpec& spec);
/// Porosity correlated with log k, mapped affinely into [porosity_min, porosity_max].
CellField porosity_from_permeability(const CellField& k, const FieldSpec& spec);

/// Per-cell material from porosity and permeability fields (K = k I).
MaterialField heterogeneous_material(const CellField& porosity, const CellField& permeability, double nu,
                                     double c0, double alpha);

}  // namespace biot
