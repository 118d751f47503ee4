#include <benchmark/benchmark.h>

#include <numbers>

#include "packlp/certify.hpp"
#include "packlp/pointprocess.hpp"
#include "packlp/spectra.hpp"
#include "packlp/witness_lp.hpp"

using namespace packlp;

namespace {

const witness::WitnessBasis& h3_basis() {
  static const auto b = witness::make_basis(Geometry::hyperbolic(3), witness::Family::GaussPoly, 0.5, 16);
  return b;
}

// Quadrature transform of a radial function on H^3 over a real-frequency grid.
template <bool Parallel>
void BM_TransformOnGrid(benchmark::State& state) {
  const Geometry g = Geometry::hyperbolic(3);
  const RadialFunction f(g, profile::ExpCosh{1.0, 1.0});
  spectra::GridSpec spec;
  spec.max_lambda = 20.0;
  spec.spacing = 0.25;
  const auto grid = spectra::make_grid(g, spec);
  for (auto _ : state) {
    auto v = Parallel ? spectra::transform_on_grid(g, f, grid) : spectra::transform_on_grid_serial(g, f, grid);
    benchmark::DoNotOptimize(v.data());
  }
  state.counters["points"] = static_cast<double>(grid.points.size());
}
BENCHMARK(BM_TransformOnGrid<false>)->Name("transform_on_grid/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransformOnGrid<true>)->Name("transform_on_grid/parallel")->Unit(benchmark::kMillisecond);

template <bool Parallel>
void BM_BuildLP(benchmark::State& state) {
  const auto& b = h3_basis();
  const auto grid = spectra::make_grid(b.geometry, witness::default_grid_spec(b));
  const auto spatial = witness::default_spatial_spec(b);
  for (auto _ : state) {
    auto inst = Parallel ? witness::build_lp(b, grid, spatial) : witness::build_lp_serial(b, grid, spatial);
    benchmark::DoNotOptimize(inst.rows.data());
  }
}
BENCHMARK(BM_BuildLP<false>)->Name("build_lp/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildLP<true>)->Name("build_lp/parallel")->Unit(benchmark::kMillisecond);

// The spatial certification grid of a certified H^3 witness.
template <bool Parallel>
void BM_CertifyGrid(benchmark::State& state) {
  static const auto res =
      certify::refine_until_certified(h3_basis(), certify::default_refine_options(h3_basis()));
  std::vector<double> ts;
  for (double t = 1.0; t <= 8.0; t += 1e-3 / state.range(0)) ts.push_back(t);
  for (auto _ : state) {
    auto v = Parallel ? certify::evaluate_on_grid(res.certificate.f, ts)
                      : certify::evaluate_on_grid_serial(res.certificate.f, ts);
    benchmark::DoNotOptimize(v.data());
  }
  state.counters["points"] = static_cast<double>(ts.size());
}
BENCHMARK(BM_CertifyGrid<false>)->Name("certify_grid/serial")->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CertifyGrid<true>)->Name("certify_grid/parallel")->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

template <bool Parallel>
void BM_ShortVectors(benchmark::State& state) {
  const auto lat = state.range(0) == 8 ? pointprocess::e8_lattice() : pointprocess::d4_lattice();
  const double radius = state.range(0) == 8 ? 2.5 : 3.0;
  for (auto _ : state) {
    auto v = Parallel ? pointprocess::short_vectors(lat, radius) : pointprocess::short_vectors_serial(lat, radius);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_ShortVectors<false>)->Name("short_vectors/serial")->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShortVectors<true>)->Name("short_vectors/parallel")->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
