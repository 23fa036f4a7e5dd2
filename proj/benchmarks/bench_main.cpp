#include <benchmark/benchmark.h>

#include <numbers>

#include "aray/evolution.hpp"
#include "aray/learning.hpp"
#include "aray/rng.hpp"
#include "aray/scene.hpp"

using namespace aray;

namespace {

Mask bench_disk(int size, double radius) {
    Mask m(size, size);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double dx = x + 0.5 - size / 2.0;
            const double dy = y + 0.5 - size / 2.0;
            m.set(x, y, dx * dx + dy * dy <= radius * radius);
        }
    }
    return m;
}

Scene bench_scene(int size) {
    Rng rng(99);
    return build_scene(rng, size, size, 1, ShapeKind::Convex);
}

void bm_distance_transform(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const Mask m = bench_disk(size, size * 0.3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(distance_transform(m));
    }
    state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(bm_distance_transform)->Arg(64)->Arg(256);

void bm_bilinear_sample(benchmark::State& state) {
    Rng rng(3);
    ScalarField f(128, 128);
    for (double& v : f.values) v = rng.uniform(0.0, 1.0);
    double x = 17.3;
    double y = 63.9;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bilinear_sample_grad(f, {x, y}));
        x = x >= 120.0 ? 3.7 : x + 0.37;
        y = y >= 120.0 ? 5.1 : y + 0.53;
    }
}
BENCHMARK(bm_bilinear_sample);

void bm_assemble_system(benchmark::State& state) {
    const Scene scene = bench_scene(64);
    const RayContour seed = seed_for_segment(rasterize(scene.gt_polygons[0], 64, 64), 1.0,
                                             static_cast<int>(state.range(0)));
    const RhoMax rmax = rho_max_for(seed.center, seed.size(), 64, 64);
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_system(seed, scene.fields, rmax));
    }
}
BENCHMARK(bm_assemble_system)->Arg(60)->Arg(240);

void bm_evolve_200_steps(benchmark::State& state) {
    const Scene scene = bench_scene(64);
    const RayContour seed = seed_for_segment(rasterize(scene.gt_polygons[0], 64, 64), 1.0, 60);
    for (auto _ : state) {
        benchmark::DoNotOptimize(evolve(seed, scene.fields, EvolutionConfig{}));
    }
}
BENCHMARK(bm_evolve_200_steps);

void bm_imex_200_steps(benchmark::State& state) {
    const Scene scene = bench_scene(64);
    const RayContour seed = seed_for_segment(rasterize(scene.gt_polygons[0], 64, 64), 1.0, 60);
    for (auto _ : state) {
        benchmark::DoNotOptimize(evolve_implicit_explicit(seed, scene.fields, EvolutionConfig{}));
    }
}
BENCHMARK(bm_imex_200_steps);

void bm_cyclic_solve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(5);
    SystemBands bands;
    for (auto* v : {&bands.upper2, &bands.upper1, &bands.diag, &bands.lower1, &bands.lower2}) {
        v->resize(static_cast<std::size_t>(n));
    }
    std::vector<double> rhs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        bands.upper2[static_cast<std::size_t>(i)] = rng.uniform(-1, 1);
        bands.upper1[static_cast<std::size_t>(i)] = rng.uniform(-1, 1);
        bands.diag[static_cast<std::size_t>(i)] = 12.0 + rng.uniform(0, 1);
        bands.lower1[static_cast<std::size_t>(i)] = rng.uniform(-1, 1);
        bands.lower2[static_cast<std::size_t>(i)] = rng.uniform(-1, 1);
        rhs[static_cast<std::size_t>(i)] = rng.uniform(-5, 5);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_cyclic_pentadiagonal(bands, rhs));
    }
}
BENCHMARK(bm_cyclic_solve)->Arg(60)->Arg(1024);

void bm_backward_pass(benchmark::State& state) {
    const Scene scene = bench_scene(64);
    const RayContour seed = seed_for_segment(rasterize(scene.gt_polygons[0], 64, 64), 1.0, 60);
    EvolutionConfig cfg;
    cfg.steps = 200;
    LearnableFields lf(scene.fields);
    const EvolveResult res = evolve(seed, lf.fields, cfg);
    const std::vector<double> d_loss(60, 1.0);
    for (auto _ : state) {
        lf.zero_grads();
        backward_through_evolution(res.trajectory, lf, d_loss);
    }
}
BENCHMARK(bm_backward_pass);

void bm_rasterize(benchmark::State& state) {
    const Scene scene = bench_scene(128);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rasterize(scene.gt_polygons[0], 128, 128));
    }
}
BENCHMARK(bm_rasterize);

}  // namespace

BENCHMARK_MAIN();
