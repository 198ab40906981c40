#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmldd/assembly.hpp"
#include "pmldd/config.hpp"
#include "pmldd/grid.hpp"

namespace pmldd {

enum class RowStatus { Converged, MaxIter, Breakdown, Skipped, Failed };
std::string to_string(RowStatus s);

struct ResultRow {
  std::string fingerprint;
  GlobalBc bc = GlobalBc::Impedance;
  InterfaceCondition ic = InterfaceCondition::Impedance;
  StretchKind sigma_kind = StretchKind::SigmaM2;
  double frequency = 0.0;
  int overlap = 0;
  long long dof_count = 0;
  RowStatus status = RowStatus::Failed;
  int iterations = 0;
  double final_residual = 0.0;
  double wall_time = 0.0;
  /// Interface PML at least as wide as the overlap.
  bool narrow_overlap = false;
  /// Relative L2 distance to a direct solve of the global system, when checked.
  std::optional<double> direct_error;
  std::string message;

  bool converged() const { return status == RowStatus::Converged; }
};

/// Called after each solved row with the global mesh and solution.
using SolutionSink = std::function<void(const Mesh&, const ResultRow&, std::span<const Complex>)>;

/// Runs the overlap sweep row by row. Errors inside a row are recorded in
/// that row (Failed, or Skipped when memory runs out) and the sweep goes on.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, const SolutionSink& sink = {});

/// Global mesh and boundary setup of one row; exposed for tests.
struct Scenario {
  Mesh mesh;
  BoundarySetup boundary;
};
Scenario build_scenario(const ExperimentConfig& config, int overlap);

/// Header plus one line per row. Iterations print as "*" when the row did not
/// converge and "-" when it was skipped or failed.
std::string format_csv(const std::vector<ResultRow>& rows);
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);

/// 0 when every row converged (skipped rows allowed), 2 when some row did not
/// converge, 1 when some row failed.
int exit_code(const std::vector<ResultRow>& rows);

/// Worker count from PMLDD_NUM_THREADS, if set to a positive integer.
std::optional<int> thread_override();

}  // namespace pmldd
