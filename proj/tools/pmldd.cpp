#include <omp.h>

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "pmldd/config.hpp"
#include "pmldd/experiment.hpp"
#include "pmldd/export.hpp"
#include "pmldd/validation.hpp"

using namespace pmldd;

namespace {

int run_solve(const std::string& config_path, const std::string& export_path, const std::string& format,
              const std::string& csv_path) {
  ExperimentConfig config = load_config(config_path);
  if (!export_path.empty()) config.fields_path = export_path;
  if (!format.empty()) config.field_format = format == "csv" ? FieldFormat::Csv : FieldFormat::Vtk;
  if (!csv_path.empty()) config.csv_path = csv_path;
  config.validate();

  SolutionSink sink;
  if (!config.fields_path.empty()) {
    const bool sweep = config.overlaps.size() > 1;
    sink = [&config, sweep](const Mesh& mesh, const ResultRow& row, std::span<const Complex> u) {
      const std::string path = field_path_for_row(config.fields_path, row.overlap, sweep);
      export_fields(mesh, u, path, config.field_format);
      if (config.verbosity >= 1) std::cerr << "[pmldd] fields written to " << path << "\n";
    };
  }
  const std::vector<ResultRow> rows = run_experiment(config, sink);
  const std::string table = format_csv(rows);
  if (config.csv_path.empty())
    std::cout << table;
  else
    write_csv(rows, config.csv_path);
  return exit_code(rows);
}

int run_guide(double frequency, double n_lambda, double length, const std::string& export_path,
              const std::string& format) {
  GuideSpec spec;
  spec.physics.frequency = frequency;
  spec.n_lambda = n_lambda;
  spec.lengths_in_wavelengths[2] = length;
  const GuideResult r = solve_planewave_guide(spec);
  std::printf("dofs,strip_lo,strip_hi,relative_l2_error\n%d,%.6g,%.6g,%.6e\n", r.mesh.edge_count(), r.strip_lo,
              r.strip_hi, r.strip_error);
  if (!export_path.empty())
    export_fields(r.mesh, r.solution, export_path, format == "csv" ? FieldFormat::Csv : FieldFormat::Vtk);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Overlapping Schwarz solver for time-harmonic Maxwell problems with PML"};
  app.require_subcommand(1);

  std::string config_path, export_path, format, csv_path;
  auto* solve = app.add_subcommand("solve", "Run the overlap sweep of a configuration");
  solve->add_option("config", config_path, "Configuration file")->required();
  solve->add_option("--export", export_path, "Write cell-centred fields of each row to this path");
  solve->add_option("--format", format, "Field file format")->check(CLI::IsMember({"vtk", "csv"}));
  solve->add_option("--csv", csv_path, "Write the convergence table here instead of standard output");

  auto* validate = app.add_subcommand("validate", "Parse and check a configuration");
  validate->add_option("config", config_path, "Configuration file")->required();

  double frequency = 1.0, n_lambda = 10.0, length = 3.0;
  auto* guide = app.add_subcommand("guide", "Solve the plane-wave guide and report the error against the exact wave");
  guide->add_option("--frequency", frequency, "Frequency")->check(CLI::PositiveNumber);
  guide->add_option("--n-lambda", n_lambda, "Cells per wavelength")->check(CLI::PositiveNumber);
  guide->add_option("--length", length, "Physical guide length in wavelengths")->check(CLI::PositiveNumber);
  guide->add_option("--export", export_path, "Write cell-centred fields to this path");
  guide->add_option("--format", format, "Field file format")->check(CLI::IsMember({"vtk", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (const auto threads = thread_override()) omp_set_num_threads(*threads);
    if (*solve) return run_solve(config_path, export_path, format, csv_path);
    if (*validate) {
      const ExperimentConfig config = load_config(config_path);
      config.validate();
      std::cout << "ok " << config_fingerprint(config) << "\n";
      return 0;
    }
    return run_guide(frequency, n_lambda, length, export_path, format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
