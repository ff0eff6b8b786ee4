#pragma once

#include "biotdd/schemes.hpp"

#include <string>

namespace biot {

/// Legacy ASCII unstructured grid: points, quads, cell data p, gamma,
/// cell-averaged u, z and the two stress rows.
void write_vtk(const std::string& path, const Solver& solver, const State& state);

/// Raw DOF dump: one line per (subdomain, field, index) with max_digits10
/// values, plus n, t and the displacement multiplier.
void write_state_csv(const std::string& path, const State& state);
State read_state_csv(const std::string& path);

/// Fixed-format number used in every emitted table.
std::string fmt(double x);

}  // namespace biot
