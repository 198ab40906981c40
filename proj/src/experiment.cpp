#include "pmldd/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <new>
#include <sstream>

#include "pmldd/assembly.hpp"
#include "pmldd/ddm.hpp"
#include "pmldd/gmres.hpp"
#include "pmldd/lu.hpp"
#include "pmldd/oras.hpp"

namespace pmldd {

std::string to_string(RowStatus s) {
  switch (s) {
    case RowStatus::Converged:
      return "converged";
    case RowStatus::MaxIter:
      return "max_iter";
    case RowStatus::Breakdown:
      return "breakdown";
    case RowStatus::Skipped:
      return "skipped";
    default:
      return "failed";
  }
}

namespace {

void log(const ExperimentConfig& c, int level, const std::string& msg) {
  if (c.verbosity >= level) std::cerr << "[pmldd] " << msg << "\n";
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

double relative_distance(std::span<const Complex> u, std::span<const Complex> ref) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    num += std::norm(u[i] - ref[i]);
    den += std::norm(ref[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

struct BudgetExceeded {
  double estimate_mb;
};

// Local factors and matrices, the global matrix and the Krylov basis. Local
// problems are assembled one at a time so the estimate itself stays small.
double estimated_row_mb(const ExperimentConfig& config, const DecompositionPlan& plan, const Mesh& mesh,
                        const BoundarySetup& global, const SparseMatrix& A, const LocalProblemOptions& opts) {
  constexpr double kMb = 1024.0 * 1024.0;
  const double entry = sizeof(Complex) + sizeof(int);
  const int basis = (config.restart > 0 ? config.restart : config.max_iter) + 1;
  double total = (A.nnz() * entry + static_cast<double>(basis) * A.rows() * sizeof(Complex)) / kMb;
  const auto pou = build_partition_of_unity(plan, mesh);
  for (int s = 0; s < plan.size(); ++s) {
    const SubdomainProblem sp = build_local_problem(plan, mesh, config.physics, global, s, opts, pou);
    total += (estimate_factor_bytes(sp.matrix) + sp.matrix.nnz() * entry) / kMb;
    if (total > config.memory_budget_mb) throw BudgetExceeded{total};
  }
  return total;
}

}  // namespace

Scenario build_scenario(const ExperimentConfig& config, int overlap) {
  // The plane wave enters through z = 0, which therefore stays a Robin face.
  FaceMask collar = kAllFacesMask;
  if (config.rhs == RhsKind::PlaneWave) collar &= static_cast<FaceMask>(~face_bit(Face::ZMinus));
  Scenario s;
  s.mesh = build_grid(config.discretization(overlap), config.physics, config.box, config.global_bc, collar);
  s.boundary = global_boundary(s.mesh, config.global_bc, config.sigma_kind, config.sigma_m2_constant);
  return s;
}

namespace {

ResultRow solve_row(const ExperimentConfig& config, int overlap, const std::string& fingerprint,
                    const SolutionSink& sink) {
  ResultRow row;
  row.fingerprint = fingerprint;
  row.bc = config.global_bc;
  row.ic = config.interface_ic;
  row.sigma_kind = config.sigma_kind;
  row.frequency = config.physics.frequency;
  row.overlap = overlap;

  const auto t0 = std::chrono::steady_clock::now();
  Scenario sc = build_scenario(config, overlap);
  const Mesh& mesh = sc.mesh;
  row.dof_count = mesh.edge_count();

  AssembledSystem sys = assemble_global(mesh, config.physics, sc.boundary);
  sys.b = config.rhs == RhsKind::PlaneWave
              ? assemble_rhs_planewave(mesh, config.physics, sc.boundary, config.polarization)
              : assemble_rhs_random(mesh.edge_count(), config.seed, sys.dirichlet);
  const std::vector<char> mask = sys.dirichlet;
  sys = apply_dirichlet(std::move(sys), mask);

  const DecompositionPlan plan = plan_decomposition(mesh, config.subdomains, overlap);
  LocalProblemOptions opts;
  opts.ic = config.interface_ic;
  opts.stretch_kind = config.sigma_kind;
  opts.interface_layers = config.interface_pml_layers;
  opts.m2_constant = config.sigma_m2_constant;
  if (config.memory_budget_mb > 0.0) {
    const double mb = estimated_row_mb(config, plan, mesh, sc.boundary, sys.A, opts);
    log(config, 2, "  estimated memory " + std::to_string(static_cast<long>(mb)) + " MB");
  }
  std::vector<SubdomainProblem> subs = build_subdomain_problems(plan, mesh, config.physics, sc.boundary, opts);
  for (const auto& s : subs) row.narrow_overlap = row.narrow_overlap || s.narrow_overlap;
  if (row.narrow_overlap)
    log(config, 1,
        "warning: overlap " + std::to_string(overlap) + " is not wider than the interface PML (" +
            std::to_string(config.interface_pml_layers) + " layers)");

  const OrasPreconditioner oras(mesh.edge_count(), std::move(subs));
  const SparseMatrix& A = sys.A;
  GmresOptions go;
  go.tol = config.tol;
  go.max_iter = config.max_iter;
  go.restart = config.restart;
  const GmresResult res =
      gmres_right([&A](std::span<const Complex> x, std::span<Complex> y) { A.multiply(x, y); }, oras.as_operator(),
                  sys.b, go);
  row.iterations = res.report.iterations;
  row.final_residual = res.report.final_residual;
  row.status = res.report.status == SolveStatus::Converged ? RowStatus::Converged
               : res.report.status == SolveStatus::MaxIter ? RowStatus::MaxIter
                                                           : RowStatus::Breakdown;

  if (config.verify_direct_max_dofs > 0 && row.dof_count <= config.verify_direct_max_dofs) {
    const SparseLU lu(A);
    const std::vector<Complex> direct = lu.solve(sys.b);
    row.direct_error = relative_distance(res.solution, direct);
  }
  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (sink) sink(mesh, row, res.solution);
  return row;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, const SolutionSink& sink) {
  config.validate();
  const std::string fingerprint = config_fingerprint(config);
  std::vector<ResultRow> rows;
  for (int overlap : config.overlaps) {
    log(config, 1,
        "row bc=" + to_string(config.global_bc) + " ic=" + to_string(config.interface_ic) +
            " sigma=" + to_string(config.sigma_kind) + " overlap=" + std::to_string(overlap));
    ResultRow row;
    try {
      row = solve_row(config, overlap, fingerprint, sink);
    } catch (const std::bad_alloc&) {
      row.status = RowStatus::Skipped;
      row.message = "out of memory";
    } catch (const BudgetExceeded& b) {
      row.status = RowStatus::Skipped;
      char buf[128];
      std::snprintf(buf, sizeof buf, "estimated memory above %.0f MB exceeds the budget of %.0f MB",
                    b.estimate_mb, config.memory_budget_mb);
      row.message = buf;
    } catch (const std::exception& e) {
      row.status = RowStatus::Failed;
      row.message = e.what();
    }
    if (row.status == RowStatus::Skipped || row.status == RowStatus::Failed) {
      row.fingerprint = fingerprint;
      row.bc = config.global_bc;
      row.ic = config.interface_ic;
      row.sigma_kind = config.sigma_kind;
      row.frequency = config.physics.frequency;
      row.overlap = overlap;
      try {
        row.dof_count = build_scenario(config, overlap).mesh.edge_count();
      } catch (const std::exception&) {
      }
      log(config, 0, "row overlap=" + std::to_string(overlap) + " " + to_string(row.status) + ": " + row.message);
    } else {
      std::ostringstream msg;
      msg << "  dofs=" << row.dof_count << " iterations=" << row.iterations << " status=" << to_string(row.status)
          << " residual=" << sci(row.final_residual) << " time=" << row.wall_time << "s";
      if (row.direct_error) msg << " direct_error=" << sci(*row.direct_error);
      log(config, 1, msg.str());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_csv(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw Error("no result rows to write");
  std::ostringstream o;
  o << "fingerprint,bc,ic,sigma,frequency,overlap,dofs,iterations,status,final_residual,direct_error,narrow_overlap\n";
  for (const auto& r : rows) {
    const bool solved = r.status != RowStatus::Skipped && r.status != RowStatus::Failed;
    char freq[32];
    std::snprintf(freq, sizeof freq, "%.17g", r.frequency);
    o << r.fingerprint << ',' << to_string(r.bc) << ',' << to_string(r.ic) << ',' << to_string(r.sigma_kind) << ','
      << freq << ',' << r.overlap << ',';
    o << (r.dof_count > 0 ? std::to_string(r.dof_count) : "-") << ',';
    o << (r.converged() ? std::to_string(r.iterations) : solved ? "*" : "-") << ',';
    o << to_string(r.status) << ',';
    o << (solved ? sci(r.final_residual) : "-") << ',';
    o << (r.direct_error ? sci(*r.direct_error) : "-") << ',';
    o << (r.narrow_overlap ? 1 : 0) << '\n';
  }
  return o.str();
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  const std::string text = format_csv(rows);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path);
}

int exit_code(const std::vector<ResultRow>& rows) {
  int code = 0;
  for (const auto& r : rows) {
    if (r.status == RowStatus::Failed) return 1;
    if (r.status == RowStatus::MaxIter || r.status == RowStatus::Breakdown) code = 2;
  }
  return code;
}

std::optional<int> thread_override() {
  const char* v = std::getenv("PMLDD_NUM_THREADS");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) throw Error(std::string("PMLDD_NUM_THREADS must be a positive integer, got '") + v + "'");
  return static_cast<int>(n);
}

}  // namespace pmldd
