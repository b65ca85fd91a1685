#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "shortcut/engine.hpp"
#include "shortcut/rng.hpp"
#include "shortcut/space.hpp"

using namespace shortcut;

TEST_CASE("truncation error follows the geometric tail") {
  CHECK(truncation_error(0.5, 6) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(truncation_error(0.5, 7) == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(truncation_error(0.5, 8) == doctest::Approx(0.03125).epsilon(1e-15));
  CHECK(truncation_error(0.5, 9) == doctest::Approx(0.015625).epsilon(1e-15));
  // 8 lambda^{N+1} / (1 - lambda) at lambda = 1/4, N = 2.
  CHECK(truncation_error(0.25, 2) ==
        doctest::Approx(8.0 * std::pow(0.25, 3) / 0.75).epsilon(1e-15));
}

TEST_CASE("one shortcut beats the walk") {
  SyntheticSpace sp = SyntheticSpace::line({0.0, 1.0, 2.0});
  ShortcutFamily fam(ShortcutConfig::with_lambda(0.5));
  fam.add(sp, {0, 2, 1, 0.5, -1, 0.0});
  FamilySource src(sp, fam);
  TruncatedMetric metric(src);

  DistanceResult d02 = metric.distance(0, 2);
  CHECK(d02.value == 0.5);
  CHECK(d02.eps == metric.eps());
  CHECK(d02.trunc == 6);
  CHECK(d02.settled >= 1);
  CHECK(d02.discovered >= 2);

  // Walking to an endpoint then jumping cannot beat the direct walk here.
  CHECK(metric.distance(0, 1).value == 1.0);
  CHECK(metric.distance(1, 2).value == 1.0);
  CHECK(metric.distance(2, 0).value == 0.5);
  CHECK(metric.distance(1, 1).value == 0.0);
}

TEST_CASE("an empty family reduces to the base distance") {
  SyntheticSpace sp = SyntheticSpace::line({0.0, 0.7});
  ShortcutFamily fam(ShortcutConfig::with_lambda(0.5));
  FamilySource src(sp, fam);
  TruncatedMetric metric(src);
  CHECK(metric.distance(0, 1).value == 0.7);
  CHECK(metric.distance(0, 0).value == 0.0);
}

TEST_CASE("zero cost shortcuts glue their endpoints") {
  SyntheticSpace sp = SyntheticSpace::line({0.0, 1.0, 2.0, 3.0});
  ShortcutFamily fam(ShortcutConfig::with_lambda(0.5));
  fam.add(sp, {0, 3, 1, 0.0, -1, 0.0});
  FamilySource src(sp, fam);
  TruncatedMetric metric(src);
  CHECK(metric.distance(0, 3).value == 0.0);
  // 1 -> 0 -> (jump) -> 3: cost 1; direct walk costs 2.
  CHECK(metric.distance(1, 3).value == 1.0);
}

TEST_CASE("deep shortcuts are invisible below the truncation level") {
  SyntheticSpace sp = SyntheticSpace::line({0.0, 1.0, 2.0});
  ShortcutFamily fam(ShortcutConfig::with_lambda(0.5));
  fam.add(sp, {0, 2, 7, 0.125, -1, 0.0});
  FamilySource src(sp, fam);
  EngineOptions shallow;
  shallow.trunc = 6;
  TruncatedMetric m6(src, shallow);
  CHECK(m6.distance(0, 2).value == 2.0);
  EngineOptions deep;
  deep.trunc = 7;
  TruncatedMetric m7(src, deep);
  CHECK(m7.distance(0, 2).value == 0.125);
  CHECK(m7.eps() == doctest::Approx(truncation_error(0.5, 7)).epsilon(1e-15));
}

namespace {

struct Instance {
  SyntheticSpace space = SyntheticSpace::plane({});
  ShortcutFamily family{ShortcutConfig::with_lambda(0.5)};
};

Instance random_instance(RngStream& rng, int npts, int nsc) {
  Instance inst;
  std::vector<std::array<double, 2>> pts;
  for (int i = 0; i < npts; ++i)
    pts.push_back({rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)});
  inst.space = SyntheticSpace::plane(pts);
  int placed = 0;
  for (int attempt = 0; attempt < 50 && placed < nsc; ++attempt) {
    PointId a = static_cast<PointId>(rng.index(static_cast<std::size_t>(npts)));
    PointId b = static_cast<PointId>(rng.index(static_cast<std::size_t>(npts)));
    if (a == b || inst.family.find(a, b)) continue;
    int level = 1 + static_cast<int>(rng.index(4));
    double alpha = std::ldexp(1.0, -level);
    double rho = inst.space.rho(a, b);
    inst.family.add(inst.space, {a, b, level, rng.u01() * alpha * rho, -1, 0.0});
    ++placed;
  }
  return inst;
}

// All-pairs shortest path over the complete step-cost graph.
std::vector<std::vector<double>> brute_distances(const Instance& inst) {
  const std::size_t n = static_cast<std::size_t>(inst.space.point_count());
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      d[i][j] = step_cost(static_cast<PointId>(i), static_cast<PointId>(j),
                          inst.family, inst.space);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

}  // namespace

TEST_CASE("engine equals the all-pairs oracle on synthetic instances") {
  for (int inst_id = 0; inst_id < 10; ++inst_id) {
    RngStream rng = RngStream::substream(515, "engine-test", inst_id);
    int npts = 4 + static_cast<int>(rng.index(9));
    Instance inst = random_instance(rng, npts, 2 + static_cast<int>(rng.index(5)));
    auto brute = brute_distances(inst);
    FamilySource src(inst.space, inst.family);
    EngineOptions opt;
    opt.trunc = 8;
    TruncatedMetric metric(src, opt);
    EngineOptions no_prune = opt;
    no_prune.budget_prune = false;
    TruncatedMetric metric_np(src, no_prune);
    for (PointId x = 0; x < inst.space.point_count(); ++x)
      for (PointId y = 0; y < inst.space.point_count(); ++y) {
        double got = metric.distance(x, y).value;
        // Summation order differs from Floyd-Warshall; equal up to roundoff.
        CHECK(std::abs(got - brute[static_cast<std::size_t>(x)]
                                  [static_cast<std::size_t>(y)]) <= 1e-12);
        CHECK(got == metric_np.distance(x, y).value);
      }
  }
}

TEST_CASE("reach reports every endpoint under the budget") {
  RngStream rng = RngStream::substream(515, "engine-reach");
  Instance inst = random_instance(rng, 10, 5);
  FamilySource src(inst.space, inst.family);
  EngineOptions opt;
  opt.trunc = 8;
  TruncatedMetric metric(src, opt);

  std::vector<PointId> endpoints = inst.family.endpoints(8);
  const double budget = 0.8;
  auto reached = metric.reach(0, budget);
  CHECK(std::is_sorted(reached.begin(), reached.end(),
                       [](const auto& a, const auto& b) {
                         return a.point < b.point;
                       }));
  for (PointId e : endpoints) {
    double d = metric.distance(0, e).value;
    auto it = std::find_if(reached.begin(), reached.end(),
                           [&](const auto& r) { return r.point == e; });
    if (d < budget) {
      REQUIRE(it != reached.end());
      CHECK(it->value == d);
    } else {
      CHECK(it == reached.end());
    }
  }
}

TEST_CASE("ball cover counts exactly the truncated metric ball") {
  RngStream rng = RngStream::substream(515, "engine-ball");
  Instance inst = random_instance(rng, 12, 5);
  FamilySource src(inst.space, inst.family);
  EngineOptions opt;
  opt.trunc = 8;
  TruncatedMetric metric(src, opt);

  const double r = 0.9;
  auto cover = metric.ball_cover(0, r);
  std::uint64_t counted = inst.space.count_in_union(cover);
  std::uint64_t brute = 0;
  for (PointId p = 0; p < inst.space.point_count(); ++p)
    if (metric.distance(0, p).value < r) ++brute;
  CHECK(counted == brute);
}

TEST_CASE("low level scan sees shallow shortcuts inside the ball") {
  SyntheticSpace sp = SyntheticSpace::line({0.0, 0.1, 0.2, 5.0, 5.1});
  ShortcutFamily fam(ShortcutConfig::with_lambda(0.5));
  fam.add(sp, {0, 2, 1, 0.05, -1, 0.0});
  fam.add(sp, {3, 4, 1, 0.05, -1, 0.0});
  FamilySource src(sp, fam);
  TruncatedMetric metric(src);

  auto near = low_level_reached(metric, 1, 0.5, 3);
  REQUIRE(near.size() == 1);
  CHECK(near[0].a == 0);
  CHECK(near[0].b == 2);
  auto far = low_level_reached(metric, 1, 0.05, 1);
  CHECK(far.empty());
}
