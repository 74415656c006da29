// Micro-benchmarks for the hot paths: small-matrix algebra, interface
// coefficients, spectral-point evaluation, and a full force observable.

#include <benchmark/benchmark.h>

#include "caslayer/force.hpp"
#include "caslayer/materials.hpp"
#include "caslayer/matrix.hpp"
#include "caslayer/spectral.hpp"
#include "caslayer/stack.hpp"
#include "caslayer/thermo.hpp"

using namespace caslayer;

namespace {

LayerStack sample_stack() {
  return LayerStack({{PerfectConductor{}, 0.0},
                     {Vacuum{}, 0.9},
                     {Dielectric{DrudeEps{6.0, 0.05}}, 0.4},
                     {Vacuum{}, 1.1},
                     {Dielectric{ConstantEps{4.0}}, 0.5},
                     {Vacuum{}, 0.8},
                     {PerfectConductor{}, 0.0}});
}

void bm_mat_inv(benchmark::State& state) {
  CMat m(2);
  m(0, 0) = {1.3, 0.2};
  m(0, 1) = {-0.4, 0.1};
  m(1, 0) = {0.05, -0.7};
  m(1, 1) = {2.1, 0.3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mat_inv(m));
  }
}
BENCHMARK(bm_mat_inv);

void bm_interface_coeffs(benchmark::State& state) {
  const Material a = Dielectric{DrudeEps{6.0, 0.05}};
  const Material b = Dielectric{ConstantEps{4.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        interface_coeffs(a, b, 0.8, 1.3, Basis::TMTE));
  }
}
BENCHMARK(bm_interface_coeffs);

void bm_weyl_interface(benchmark::State& state) {
  const Material a = Vacuum{};
  const Material b = WeylSemimetal{1.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        interface_coeffs(a, b, 0.8, 1.3, Basis::Helicity));
  }
}
BENCHMARK(bm_weyl_interface);

void bm_segment_coeffs(benchmark::State& state) {
  const LayerStack s = sample_stack();
  const Segment whole{0, s.num_regions() - 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        segment_coeffs(s, whole, 0.8, 1.3, Basis::TMTE));
  }
}
BENCHMARK(bm_segment_coeffs);

void bm_tilde_char_fn(benchmark::State& state) {
  const LayerStack s = sample_stack();
  for (auto _ : state) {
    benchmark::DoNotOptimize(tilde_char_fn(s, 3, 0.8, 1.3, Basis::TMTE));
  }
}
BENCHMARK(bm_tilde_char_fn);

void bm_force_integrand(benchmark::State& state) {
  const LayerStack s = sample_stack();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        force_integrand(s, 3, 0.8, 1.3, Basis::TMTE));
  }
}
BENCHMARK(bm_force_integrand);

void bm_force_observable(benchmark::State& state) {
  const LayerStack s({{PerfectConductor{}, 0.0},
                      {Vacuum{}, 1.0},
                      {PerfectConductor{}, 0.0}});
  for (auto _ : state) {
    ForceQuery q{s, 1, ThermalSpec{1.0}, QuadratureSpec{1e-7}, Basis::TMTE};
    benchmark::DoNotOptimize(force_general(q));
  }
}
BENCHMARK(bm_force_observable)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
