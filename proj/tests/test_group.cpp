#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "shortcut/heisenberg.hpp"
#include "shortcut/rng.hpp"

using namespace shortcut;

TEST_CASE("group product twists the vertical coordinate") {
  CHECK(mul({1, 0, 0}, {0, 1, 0}) == HPoint{1, 1, 0.5});
  CHECK(mul({0, 0, 0}, {3, -2, 7}) == HPoint{3, -2, 7});
  CHECK(mul({1, 2, 3}, {-1, -2, -3}) == HPoint{0, 0, 0});
}

TEST_CASE("inverse negates coordinates") {
  CHECK(inverse({0, 0, 0}) == HPoint{0, 0, 0});
  CHECK(inverse({1, 0, 0}) == HPoint{-1, 0, 0});
  CHECK(inverse({1, 2, 3}) == HPoint{-1, -2, -3});
  RngStream rng(7);
  for (int i = 0; i < 100; ++i) {
    HPoint p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-4, 4)};
    HPoint e = mul(p, inverse(p));
    CHECK(std::abs(e.x) == 0.0);
    CHECK(std::abs(e.y) == 0.0);
    CHECK(std::abs(e.z) <= 1e-15);  // bracket cancels, rounding only
  }
}

TEST_CASE("dilation scales the vertical coordinate quadratically") {
  CHECK(dilate(2, {1, 1, 1}) == HPoint{2, 2, 4});
  CHECK(dilate(0.5, {1, 1, 1}) == HPoint{0.5, 0.5, 0.25});
  CHECK(dilate(1, {3, -1, 2}) == HPoint{3, -1, 2});
  CHECK_THROWS_AS(dilate(0, {1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(dilate(-1, {1, 1, 1}), std::invalid_argument);
}

TEST_CASE("box distance on pinned examples") {
  CHECK(box_distance({0, 0, 0}, {0, 0, 1.0 / 64}) == 0.125);
  CHECK(box_distance({1, 0, 0}, {1, 1, 0}) == 1.0);  // max(0, 1, sqrt(1/2))
  CHECK(box_distance({0, 0, 0}, {3, 0, 0}) == 3.0);
  CHECK(box_norm({0.25, -0.5, 0.04}) == 0.5);
}

TEST_CASE("box distance axioms on random configurations") {
  RngStream rng(11);
  for (int i = 0; i < 1000; ++i) {
    HPoint p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-4, 4)};
    HPoint q{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-4, 4)};
    HPoint g{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-4, 4)};
    double lam = rng.uniform(0.25, 4.0);
    CHECK(box_norm(mul(p, q)) <= box_norm(p) + box_norm(q) + 1e-12);
    CHECK(std::abs(box_distance(p, q) - box_distance(q, p)) <= 1e-12);
    CHECK(std::abs(box_distance(mul(g, p), mul(g, q)) - box_distance(p, q)) <=
          1e-12);
    CHECK(std::abs(box_distance(dilate(lam, p), dilate(lam, q)) -
                   lam * box_distance(p, q)) <= 1e-12);
    CHECK(box_distance(p, p) == 0.0);
  }
}

TEST_CASE("vertical normalization") {
  CHECK(vertical_cc(0.0) == 0.0);
  for (int n = 1; n <= 10; ++n) {
    CHECK(vertical_cc(std::pow(4.0, -n)) == std::pow(2.0, -n));
  }
  VerticalNorm carnot = VerticalNorm::carnot();
  CHECK(carnot.kappa == doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-15));
  CHECK(vertical_cc(1.0, carnot) == doctest::Approx(1.1283791670955126));
  CHECK_THROWS_AS(vertical_cc(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(vertical_cc(1.0, VerticalNorm{0.0}), std::invalid_argument);
}

TEST_CASE("vertical shift composes without twist") {
  RngStream rng(13);
  for (int i = 0; i < 100; ++i) {
    HPoint p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-4, 4)};
    double s = rng.uniform(0.0, 1.0);
    HPoint q = vertical_shift(p, s);
    CHECK(q.x == p.x);
    CHECK(q.y == p.y);
    CHECK(q.z == p.z + s);
    CHECK(q == mul(p, HPoint{0, 0, s}));
    // (z + s) - z inside the distance reintroduces one rounding step.
    CHECK(box_distance(p, q) == doctest::Approx(std::sqrt(s)).epsilon(1e-12));
  }
}

TEST_CASE("planar projection and centrality helpers") {
  CHECK(planar({0.5, -0.25, 3}) == std::array<double, 2>{0.5, -0.25});
  CHECK(is_central({0, 0, 5}));
  CHECK(!is_central({1e-9, 0, 0}));
}
