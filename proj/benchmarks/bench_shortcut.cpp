// Micro benchmarks for the hot paths: group arithmetic, net construction,
// engine queries, itinerary normalization, the vertical search, and the
// jump-sequence sieve.  Run ./benchmarks/bench_shortcut from the build dir.

#include <benchmark/benchmark.h>

#include <array>
#include <memory>
#include <vector>

#include "shortcut/engine.hpp"
#include "shortcut/heis_grid.hpp"
#include "shortcut/heisenberg.hpp"
#include "shortcut/itinerary.hpp"
#include "shortcut/rng.hpp"
#include "shortcut/vertical.hpp"

namespace {

using namespace shortcut;

std::vector<HPoint> random_points(std::size_t n, unsigned long long seed) {
  RngStream rng(seed);
  std::vector<HPoint> pts(n);
  for (HPoint& p : pts)
    p = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
         rng.uniform(-4.0, 4.0)};
  return pts;
}

void BM_GroupMul(benchmark::State& state) {
  auto pts = random_points(1024, 11);
  std::size_t i = 0;
  for (auto _ : state) {
    const HPoint& p = pts[i & 1023];
    const HPoint& q = pts[(i + 517) & 1023];
    benchmark::DoNotOptimize(mul(p, q));
    ++i;
  }
}
BENCHMARK(BM_GroupMul);

void BM_BoxDistance(benchmark::State& state) {
  auto pts = random_points(1024, 12);
  std::size_t i = 0;
  for (auto _ : state) {
    const HPoint& p = pts[i & 1023];
    const HPoint& q = pts[(i + 517) & 1023];
    benchmark::DoNotOptimize(box_distance(p, q));
    ++i;
  }
}
BENCHMARK(BM_BoxDistance);

void BM_SmallGridBuild(benchmark::State& state) {
  for (auto _ : state) {
    HeisenbergBuildOptions opt;
    opt.grid_m = 5;
    opt.cfg = ShortcutConfig::with_lambda(0.5);
    opt.cfg.max_level = 3;
    HeisenbergBuild build = build_heisenberg(opt);
    benchmark::DoNotOptimize(build.family->all().size());
  }
}
BENCHMARK(BM_SmallGridBuild)->Unit(benchmark::kMillisecond);

// Shared level 1..4 construction for the query benchmarks.
struct QueryFixture {
  HeisenbergBuild build;
  std::unique_ptr<FamilySource> src;
  std::vector<PointId> ids;

  static QueryFixture& instance() {
    static QueryFixture f;
    return f;
  }

 private:
  QueryFixture() {
    HeisenbergBuildOptions opt;
    opt.grid_m = 6;
    opt.cfg = ShortcutConfig::with_lambda(0.5);
    opt.cfg.max_level = 4;
    build = build_heisenberg(opt);
    src = std::make_unique<FamilySource>(*build.space, *build.family);
    src->set_coords(
        [this](PointId id) {
          const HPoint& p = build.space->point(id);
          return std::array<double, 2>{p.x, p.y};
        },
        0.03125);
    RngStream rng(77);
    for (int i = 0; i < 256; ++i)
      ids.push_back(build.space->random_sample_point(rng));
  }
};

void BM_EngineDistance(benchmark::State& state) {
  QueryFixture& f = QueryFixture::instance();
  EngineOptions opt;
  opt.trunc = 4;
  TruncatedMetric tm(*f.src, opt);
  std::size_t i = 0;
  for (auto _ : state) {
    PointId x = f.ids[i & 255];
    PointId y = f.ids[(i + 131) & 255];
    benchmark::DoNotOptimize(tm.distance(x, y).value);
    ++i;
  }
}
BENCHMARK(BM_EngineDistance)->Unit(benchmark::kMicrosecond);

void BM_Normalize(benchmark::State& state) {
  QueryFixture& f = QueryFixture::instance();
  const ShortcutFamily& family = *f.build.family;
  RngStream rng(78);
  std::vector<Itinerary> its;
  for (int i = 0; i < 64; ++i) {
    Itinerary it;
    for (int k = 0; k < 5; ++k) {
      const Shortcut& sc = family.at(rng.index(family.all().size()));
      it.points.push_back(sc.a);
      it.points.push_back(sc.b);
    }
    its.push_back(it);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        normalize(its[i & 63], family, *f.build.space).points.size());
    ++i;
  }
}
BENCHMARK(BM_Normalize)->Unit(benchmark::kMicrosecond);

void BM_VerticalSearch(benchmark::State& state) {
  static const ASequence seq(1000);
  JumpMenu menu = JumpMenu::from_sequence(seq, 1, 10);
  RngStream rng(79);
  std::vector<double> heights(256);
  for (double& h : heights) h = rng.uniform(-0.5, 0.5);
  std::size_t i = 0;
  for (auto _ : state) {
    VerticalQuery q;
    q.height = heights[i & 255];
    benchmark::DoNotOptimize(vertical_upper(q, menu).cost);
    ++i;
  }
}
BENCHMARK(BM_VerticalSearch)->Unit(benchmark::kMicrosecond);

void BM_SequenceSieve(benchmark::State& state) {
  for (auto _ : state) {
    ASequence seq(100000);
    benchmark::DoNotOptimize(seq.a(99991));
  }
}
BENCHMARK(BM_SequenceSieve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
