#include <benchmark/benchmark.h>
#include <omp.h>

#include "pmldd/assembly.hpp"
#include "pmldd/ddm.hpp"
#include "pmldd/oras.hpp"
#include "pmldd/rng.hpp"

using namespace pmldd;

namespace {

struct Fixture {
  PhysicsSpec physics;
  Mesh mesh;
  BoundarySetup boundary;
  SparseMatrix A;
  std::vector<Complex> x;
  std::unique_ptr<OrasPreconditioner> oras;

  Fixture() {
    physics.frequency = 0.5;
    DiscretizationSpec d;
    d.domain_lengths = {8.0, 8.0, 8.0};
    d.n_lambda = 5;
    d.pml_wavelengths = 1.0;
    mesh = build_grid(d, physics, std::nullopt, GlobalBc::Pml);
    boundary = global_boundary(mesh, GlobalBc::Pml, StretchKind::SigmaM2);
    AssembledSystem sys = assemble_global(mesh, physics, boundary);
    const std::vector<char> mask = sys.dirichlet;
    A = apply_dirichlet(std::move(sys), mask).A;
    SplitMix64 rng(1);
    x.resize(mesh.edge_count());
    for (auto& v : x) {
      const double re = rng.symmetric();
      v = Complex(re, rng.symmetric());
    }
    const DecompositionPlan plan = plan_decomposition(mesh, {2, 2, 2}, 2);
    LocalProblemOptions o;
    o.ic = InterfaceCondition::Pml;
    o.interface_layers = 2;
    oras = std::make_unique<OrasPreconditioner>(mesh.edge_count(),
                                                build_subdomain_problems(plan, mesh, physics, boundary, o));
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void threads_from(const benchmark::State& state) { omp_set_num_threads(static_cast<int>(state.range(0))); }

void BM_AssembleSerial(benchmark::State& state) {
  Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(assemble_matrix_serial(f.mesh, f.physics, f.boundary));
}

void BM_AssembleParallel(benchmark::State& state) {
  Fixture& f = fixture();
  threads_from(state);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_matrix(f.mesh, f.physics, f.boundary));
}

void BM_MatvecSerial(benchmark::State& state) {
  Fixture& f = fixture();
  std::vector<Complex> y(f.x.size());
  for (auto _ : state) {
    f.A.multiply_serial(f.x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_MatvecParallel(benchmark::State& state) {
  Fixture& f = fixture();
  threads_from(state);
  std::vector<Complex> y(f.x.size());
  for (auto _ : state) {
    f.A.multiply(f.x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_OrasSerial(benchmark::State& state) {
  Fixture& f = fixture();
  std::vector<Complex> z(f.x.size());
  for (auto _ : state) {
    f.oras->apply_serial(f.x, z);
    benchmark::DoNotOptimize(z.data());
  }
}

void BM_OrasParallel(benchmark::State& state) {
  Fixture& f = fixture();
  threads_from(state);
  std::vector<Complex> z(f.x.size());
  for (auto _ : state) {
    f.oras->apply(f.x, z);
    benchmark::DoNotOptimize(z.data());
  }
}

}  // namespace

BENCHMARK(BM_AssembleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatvecSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MatvecParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_OrasSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OrasParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
