#include "curvemag/cross_section.hpp"
#include "curvemag/dimension3d.hpp"
#include "curvemag/optimizer.hpp"
#include "curvemag/reduced_energy.hpp"

#include <benchmark/benchmark.h>

using namespace curvemag;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(1) ? Exec::parallel : Exec::serial; }

void BM_EnergyGradient(benchmark::State& st) {
  const Curve curve = Curve::helix(1.0, 0.5, 4.0, static_cast<int>(st.range(0)));
  const ReducedEnergy e(curve, PerturbationModel::ado(0.7), demag_matrix(CrossSection::unit_disk(), 256));
  MinimizeOptions o;
  o.init = InitKind::random;
  const DirectorField f = initial_field(curve, BoundaryCondition::free(), o);
  std::vector<Vec3> g;
  for (auto _ : st) benchmark::DoNotOptimize(e.energy_and_gradient(f, g, exec_of(st)).total);
}

void BM_Demag(benchmark::State& st) {
  const CrossSection q = CrossSection::unit_disk();
  for (auto _ : st) benchmark::DoNotOptimize(demag_matrix(q, static_cast<int>(st.range(0)), DemagUnits::reduced, exec_of(st)).m(0, 0));
}

void BM_Pullback(benchmark::State& st) {
  const Curve curve = Curve::ring(1.0, static_cast<int>(st.range(0)));
  const PerturbationModel k = PerturbationModel::dmi(0.36);
  const TubeChart chart(curve, 0.05, CrossSection::unit_disk().rho());
  const auto quad = CrossSectionQuadrature::polar(CrossSection::unit_disk(), 6, 32);
  MinimizeOptions o;
  o.init = InitKind::tangent;
  const CylinderField w = recovery_field(initial_field(curve, BoundaryCondition::periodic(), o), chart, k, quad);
  for (auto _ : st) benchmark::DoNotOptimize(pullback_energy(w, chart, k, exec_of(st)));
}

}  // namespace

BENCHMARK(BM_EnergyGradient)->ArgsProduct({{4096, 65536}, {0, 1}});
BENCHMARK(BM_Demag)->ArgsProduct({{1024, 4096}, {0, 1}});
BENCHMARK(BM_Pullback)->ArgsProduct({{512, 2048}, {0, 1}});

BENCHMARK_MAIN();
