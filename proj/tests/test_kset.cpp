#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "shortcut/heisenberg.hpp"
#include "shortcut/kset.hpp"
#include "shortcut/rng.hpp"

using namespace shortcut;

TEST_CASE("digit decomposition and fixed points") {
  KsetDigit d0 = kset_digit(0);
  CHECK(d0.i == 0);
  CHECK(d0.j == 0);
  CHECK(d0.k == 0);
  KsetDigit d15 = kset_digit(15);
  CHECK(d15.i == 1);
  CHECK(d15.j == 1);
  CHECK(d15.k == 3);
  KsetDigit d6 = kset_digit(6);
  CHECK(d6.i == 0);
  CHECK(d6.j == 1);
  CHECK(d6.k == 2);

  // Digit 0 is the pure dilation: origin is fixed.
  CHECK(sim_apply(0, HPoint{0, 0, 0}) == HPoint{0, 0, 0});
  // Digit 15 sends the origin to its translation part.
  CHECK(sim_apply(15, HPoint{0, 0, 0}) == HPoint{0.5, 0.5, 0.75});
  // Empty word is the identity.
  CHECK(sim_apply(MultiIndex{}, HPoint{0.25, 0.5, 0.125}) ==
        HPoint{0.25, 0.5, 0.125});
}

TEST_CASE("composed cell maps match repeated application") {
  RngStream rng = RngStream::substream(99, "kset-cellmap");
  for (int trial = 0; trial < 50; ++trial) {
    MultiIndex word;
    int len = static_cast<int>(rng.index(5));
    for (int i = 0; i < len; ++i)
      word.push_back(static_cast<std::uint8_t>(rng.index(16)));
    HPoint p{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0),
             rng.uniform(0.0, 1.0)};
    HPoint direct = sim_apply(word, p);
    HPoint mapped = cell_map(word).apply(p);
    CHECK(mapped.x == doctest::Approx(direct.x).epsilon(1e-14));
    CHECK(mapped.y == doctest::Approx(direct.y).epsilon(1e-14));
    CHECK(mapped.z == doctest::Approx(direct.z).epsilon(1e-14));
    CHECK(cell_map(word).s == std::ldexp(1.0, -len));
  }
  // child() appends a digit.
  MultiIndex w{3, 11};
  CellMap via_child = cell_map(MultiIndex{3}).child(11);
  CellMap full = cell_map(w);
  CHECK(via_child.cx == full.cx);
  CHECK(via_child.cy == full.cy);
  CHECK(via_child.cz == full.cz);
}

TEST_CASE("attractor samples grow sixteen-fold") {
  auto d0 = attractor_sample(0);
  REQUIRE(d0.size() == 1);
  CHECK(d0[0] == HPoint{0, 0, 0});
  auto d1 = attractor_sample(1);
  CHECK(d1.size() == 16);
  CHECK(std::find(d1.begin(), d1.end(), HPoint{0, 0, 0.25}) != d1.end());
  CHECK(std::find(d1.begin(), d1.end(), HPoint{0.5, 0.5, 0.0}) != d1.end());
  auto d3 = attractor_sample(3);
  CHECK(d3.size() == 4096);
  Box3 hull = kset_hull();
  for (const HPoint& p : d3) {
    CHECK(p.x >= hull.xlo - 1e-12);
    CHECK(p.x <= hull.xhi + 1e-12);
    CHECK(p.y >= hull.ylo - 1e-12);
    CHECK(p.y <= hull.yhi + 1e-12);
    CHECK(p.z >= hull.zlo - 1e-12);
    CHECK(p.z <= hull.zhi + 1e-12);
  }
}

TEST_CASE("model pair distance is exactly one eighth and halves per digit") {
  HPoint a = kset_model_a(), b = kset_model_b();
  CHECK(a == HPoint{0.5, 0.5, 0.0});
  CHECK(b == HPoint{0.5, 0.5, 0.015625});
  CHECK(box_distance(a, b) == 0.125);
  for (int d = 0; d < 16; ++d) {
    HPoint ia = sim_apply(d, a), ib = sim_apply(d, b);
    CHECK(box_distance(ia, ib) == 0.0625);
  }
}

TEST_CASE("level center separation matches the frozen values") {
  CHECK(min_center_separation(3) == std::numeric_limits<double>::infinity());
  CHECK(min_center_separation(4) == 0.5);
  CHECK(min_center_separation(5) == 0.25);
  CHECK(min_center_separation(6) == 0.125);
  CHECK(level_centers(3).size() == 1);
  CHECK(level_centers(4).size() == 16);
  CHECK(level_centers(5).size() == 256);
}

TEST_CASE("no center invades a lower level exclusion ball") {
  CHECK(prior_avoidance_violations(4) == 0);
  CHECK(prior_avoidance_violations(5) == 0);
  CHECK(prior_avoidance_violations(6) == 0);
}

TEST_CASE("cover constants stay near the frozen estimates") {
  CHECK(cover_constant_estimate(3, 4) == doctest::Approx(8.95823643358).epsilon(1e-9));
  CHECK(cover_constant_estimate(4, 4) == doctest::Approx(8.83176086633).epsilon(1e-9));
  CHECK(cover_constant_estimate(5, 4) == doctest::Approx(8.48528137424).epsilon(1e-9));
}

TEST_CASE("fiber z spread shrinks with depth exactly") {
  for (int d = 1; d <= 4; ++d)
    CHECK(fiber_z_spread_min(d) ==
          doctest::Approx(1.0 - std::pow(4.0, -d)).epsilon(1e-12));
}

TEST_CASE("interior cell search is reproducible") {
  RngStream rng = RngStream::substream(20260823, "kset-interior");
  MultiIndex cell = find_interior_cell(5, 0.5, 64, rng);
  CHECK(cell == MultiIndex{0, 0, 14});
}

TEST_CASE("kset space counts cells of the sampled attractor") {
  KsetSpace sp(4);
  CHECK(sp.sample_size() == 65536);
  PointId a = sp.add_point(kset_model_a());
  PointId b = sp.add_point(kset_model_b());
  CHECK(sp.add_point(kset_model_a()) == a);
  CHECK(sp.rho(a, b) == 0.125);
  std::vector<SpaceBall> whole = {{a, 10.0}};
  CHECK(sp.count_in_union(whole) == 65536);
  std::vector<SpaceBall> near = {{a, 0.1}};
  CHECK(sp.count_in_union(near) == 46);
}

TEST_CASE("lazy source serves the cell pair shortcuts") {
  KsetSpace sp(3);
  KsetSource src(sp, 9);
  CHECK(src.lambda() == 0.5);
  CHECK(src.max_level() == 9);

  // The root cell pair: level 3, zero cost, the model points.
  PointId a3 = src.endpoint_id(MultiIndex{}, false);
  PointId b3 = src.endpoint_id(MultiIndex{}, true);
  CHECK(sp.point(a3) == kset_model_a());
  CHECK(sp.point(b3) == kset_model_b());

  bool saw_root = false;
  src.shortcuts_at(a3, 9, [&](const Shortcut& sc) {
    if ((sc.a == a3 && sc.b == b3) || (sc.a == b3 && sc.b == a3)) {
      saw_root = true;
      CHECK(sc.level == 3);
      CHECK(sc.cost == 0.0);
    }
  });
  CHECK(saw_root);

  // Distance between the pair is zero through the glued endpoints.
  TruncatedMetric metric(src, EngineOptions{9, true, 0.0});
  CHECK(metric.distance(a3, b3).value == 0.0);
}

TEST_CASE("scaling pair spot check") {
  // One digit-d child: x and Sx with the cell pair of the child cell.
  KsetSpace sp(4);
  KsetSource src(sp, 9);
  PointId x = sp.add_point(kset_model_a());
  HPoint sx_pt = sim_apply(5, kset_model_a());
  PointId sx = sp.add_point(sx_pt);
  double rho = 0.125;

  TruncatedMetric metric(src, EngineOptions{9, true, 0.0});
  src.prefetch(x, 3 * rho);
  DistanceResult base9 = metric.distance(
      x, sp.add_point(sim_apply(MultiIndex{}, kset_model_b())));
  CHECK(base9.value == 0.0);

  // The image pair keeps a quarter of the parent distance budget: the
  // child model pair glues it to zero as well.
  src.prefetch(sx, 0.75 * rho);
  PointId sb = sp.add_point(sim_apply(5, kset_model_b()));
  DistanceResult img = metric.distance(sx, sb);
  CHECK(img.value == 0.0);
}
