#pragma once

#include "biotdd/interface.hpp"
#include "biotdd/mesh.hpp"
#include "biotdd/schemes.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace biot {

enum class CaseKind { manufactured, heterogeneous };

/// Everything one run or sweep needs.  Defaults reproduce the smooth
/// manufactured case on a 2x2 decomposition.
struct RunConfig {
  // [run]
  std::vector<Scheme> schemes{Scheme::monolithic};
  CaseKind kind = CaseKind::manufactured;
  std::vector<int> levels{16};   ///< cells per direction; one entry for `run`
  int px = 2, py = 2;
  std::vector<int> partitions;   ///< square decompositions k x k to sweep; empty uses px, py
  double dt = 1e-3;
  int steps = 100;
  double tol = 1e-12;
  int max_iter = 5000;
  MultiplierScaling scaling = MultiplierScaling::balanced;
  bool precompute = true;
  std::string output_dir = "out";
  int snapshot_every = 0;        ///< 0 disables field snapshots
  // [material]
  double mu = 100.0, lambda = 100.0, c0 = 1.0, alpha = 1.0, K = 1.0;
  double nu = 0.2;
  std::string porosity_file, permeability_file;
  std::uint64_t field_seed = 11;
  double span_decades = 7.0;
  // [mesh]
  double perturb = 0.0;
  std::uint64_t perturb_seed = 7;
  int perturb_coarse = 4;
  int perturb_grid = 2;          ///< blocks per direction that `perturb_blocks` refers to
  std::vector<int> perturb_blocks;
  // [bc]
  BcMap bc{};
};

/// Key/value pairs "section.key" -> value read from an INI file.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap read_ini(const std::string& path);
/// Builds and validates a config; unknown keys and bad values throw with the key name.
RunConfig parse_config(const ConfigMap& kv);
/// The canonical key/value form of a config (used for the run log).
ConfigMap to_map(const RunConfig& c);
void validate(const RunConfig& c);

}  // namespace biot
