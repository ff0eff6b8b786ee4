#pragma once

#include "biotdd/config.hpp"
#include "biotdd/ingest.hpp"
#include "biotdd/verify.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace biot {

/// Mesh, decomposition, material and data for one mesh size.
struct Problem {
  Mesh mesh;
  Decomposition dec;
  MaterialField mat;
  ProblemData data;
  std::optional<ExactSolution> exact;
};

std::unique_ptr<Problem> build_problem(const RunConfig& c, int n, int px, int py);

/// Iteration averages, monitor and (manufactured case) errors of one run.
struct LevelResult {
  Scheme scheme = Scheme::monolithic;
  int n = 0;
  int px = 1, py = 1;
  RunSummary summary;
  bool has_errors = false;
  VariableNorms errors;
};

using Progress = std::function<void(const std::string&)>;

/// Runs one scheme on one mesh.  Snapshots go to `snapshot_dir` if the
/// config asks for them and the directory is non-empty.
LevelResult run_level(const RunConfig& c, Scheme s, int n, int px, int py, const std::string& snapshot_dir = "");

/// All schemes x partitions x levels of the config, in that order.
std::vector<LevelResult> run_sweep(const RunConfig& c, const Progress& progress = {});

/// Writes iterations.csv, stability.csv and (manufactured) one
/// convergence_<scheme>[_<k>x<k>].csv per scheme and partition.
void write_tables(const std::string& dir, const std::vector<LevelResult>& rows);

}  // namespace biot
