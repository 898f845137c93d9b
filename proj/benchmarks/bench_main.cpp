#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "wsskit/centerline.hpp"
#include "wsskit/delaunay.hpp"
#include "wsskit/indicators.hpp"
#include "wsskit/synthetic.hpp"
#include "wsskit/tangent_fields.hpp"
#include "wsskit/wss.hpp"

using namespace wsskit;

namespace {

void BM_Delaunay(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec3> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) p = {u(rng), u(rng), u(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(delaunay_tetrahedralize(pts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Delaunay)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Unit(benchmark::kMillisecond)->Complexity();

void BM_CenterlineCylinder(benchmark::State& state) {
  const auto mesh = make_cylinder_mesh(3.0, 40.0, 48, 64, CapStyle::dome);
  const Vec3 target{0, 0, 40};
  for (auto _ : state) benchmark::DoNotOptimize(extract_centerline(mesh, {0, 0, 0}, std::span(&target, 1)));
}
BENCHMARK(BM_CenterlineCylinder)->Unit(benchmark::kMillisecond);

void BM_Projection(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto mesh = make_cylinder_mesh(3.0, 40.0, n, 2 * n);
  const auto cl = make_centerline({{{0, 0, -1}, {0, 0, 20}, {0, 0, 41}}}, {{3, 3, 3}});
  for (auto _ : state) benchmark::DoNotOptimize(project_centerline_tangents(mesh, cl));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * mesh.vertex_count()));
}
BENCHMARK(BM_Projection)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Indicators(benchmark::State& state) {
  PoiseuilleParams p;
  const auto mesh = make_cylinder_mesh(p.R, 40.0, 64, 128);
  std::vector<double> times(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = double(i) / double(times.size() - 1);
  const Waveform wave{{0.0, 7.9}, {0.5, -3.0}, {1.0, 7.9}};
  const auto traction = pulsatile_scale(poiseuille_traction(mesh, p, times), mesh.normals(), wave, p.Q);
  const auto wss = wss_vector(traction, mesh.normals());
  for (auto _ : state) {
    benchmark::DoNotOptimize(osi_vector(wss));
    benchmark::DoNotOptimize(tawss(wss));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * mesh.vertex_count() * times.size()));
}
BENCHMARK(BM_Indicators)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
