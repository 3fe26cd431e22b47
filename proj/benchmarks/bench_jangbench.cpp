#include <benchmark/benchmark.h>

#include "jangbench/random_data.hpp"
#include "jangbench/radial_flows.hpp"
#include "jangbench/schwarzschild_models.hpp"
#include "jangbench/static_spacetime.hpp"

using namespace jangbench;

namespace {

void BM_DeformationJets(benchmark::State& state) {
  const auto cfg = random_configuration(1);
  const Point3 p{0.2, -0.1, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(deformation_jets(cfg.data, cfg.pair, p));
}
BENCHMARK(BM_DeformationJets);

void BM_IdentityResiduals(benchmark::State& state) {
  const auto cfg = random_configuration(2);
  const Point3 p{0.2, -0.1, 0.3};
  for (auto _ : state)
    benchmark::DoNotOptimize(deformation_identity_residuals(cfg.data, cfg.pair, cfg.k_test, p));
}
BENCHMARK(BM_IdentityResiduals);

void BM_SchoenYauResidual(benchmark::State& state) {
  const auto cfg = random_configuration(3);
  const Point3 p{0.2, -0.1, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(schoen_yau_residual(cfg.data, cfg.pair, p));
}
BENCHMARK(BM_SchoenYauResidual);

void BM_StaticCurvature(benchmark::State& state) {
  const auto g = random_metric(4);
  const auto phi = random_trig_scalar(5, 1.0, 0.3);
  const Point3 p{0.1, 0.2, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(static_curvature(g, phi, p));
}
BENCHMARK(BM_StaticCurvature);

void BM_RFromUV(benchmark::State& state) {
  double uv = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(r_from_uv(1.0, uv));
    uv = uv < 100.0 ? uv * 1.1 : 0.1;
  }
}
BENCHMARK(BM_RFromUV);

void BM_RadialImcf(benchmark::State& state) {
  const RadialMetric g = standard_schwarzschild_radial(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(imcf_radial_solve(g, 2.0, 2.0 * state.range(0)));
}
BENCHMARK(BM_RadialImcf)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_RadialJang(benchmark::State& state) {
  CoESliceSpec spec;
  const CoESlice s = coe_slice(1.0, spec);
  JangRadialOptions opt;
  opt.s_end = radial_jet(s.s_radial, 20.0, 0).value;
  for (auto _ : state)
    benchmark::DoNotOptimize(generalized_jang_radial_solve(s.radial, s.phi_radial, 3.0, 20.0, opt));
}
BENCHMARK(BM_RadialJang)->Unit(benchmark::kMillisecond);

void BM_BoundaryFlux(benchmark::State& state) {
  CoESliceSpec spec;
  const CoESlice s = coe_slice(1.0, spec);
  for (auto _ : state)
    benchmark::DoNotOptimize(boundary_flux(s.data, s.pair, LevelSetSurface::coordinate_sphere(6.0)));
}
BENCHMARK(BM_BoundaryFlux)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
