#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "shortcut/itinerary.hpp"
#include "shortcut/rng.hpp"
#include "shortcut/space.hpp"

using namespace shortcut;

TEST_CASE("geometric schedule halves per level") {
  CostSchedule s = CostSchedule::geometric();
  for (int n = 1; n <= 8; ++n) CHECK(s.alpha(n) == doctest::Approx(std::ldexp(1.0, -n)).epsilon(1e-15));
  CHECK(CostSchedule::geometric(0.25).alpha(2) == doctest::Approx(0.0625));
  CHECK_FALSE(s.is_zero());
  CHECK_THROWS_AS(s.alpha(0), std::invalid_argument);
}

TEST_CASE("zero schedule gives a semi-distance discount") {
  CostSchedule z = CostSchedule::zero();
  CHECK(z.is_zero());
  for (int n = 1; n <= 6; ++n) CHECK(z.alpha(n) == 0.0);
  z.validate(8);
}

TEST_CASE("table schedule clamps to its last entry") {
  CostSchedule t = CostSchedule::table({0.5, 0.25, 0.1});
  CHECK(t.alpha(1) == 0.5);
  CHECK(t.alpha(2) == 0.25);
  CHECK(t.alpha(3) == 0.1);
  CHECK(t.alpha(7) == 0.1);
  t.validate(9);
  CHECK_THROWS_AS(CostSchedule::table({0.5, 0.6}).validate(2),
                  std::invalid_argument);
  CHECK_THROWS_AS(CostSchedule::table({1.0}).validate(1),
                  std::invalid_argument);
}

TEST_CASE("config derives the cover constant from the scale ratio") {
  ShortcutConfig cfg = ShortcutConfig::with_lambda(0.5);
  CHECK(cfg.cover_constant == 10.0);
  CHECK(cfg.separation(1) == 2.0);
  CHECK(cfg.separation(3) == 0.5);
  CHECK(cfg.ball_radius(4) == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(cfg.level_gap(2) == 0.125);
  CHECK(ShortcutConfig::with_lambda(0.25).cover_constant == 12.0);
}

TEST_CASE("family rejects geometrically invalid shortcuts") {
  SyntheticSpace sp = SyntheticSpace::line({0.0, 1.0, 3.0});
  ShortcutFamily fam(ShortcutConfig::with_lambda(0.5));
  CHECK_THROWS_AS(fam.add(sp, {0, 1, 1, 1.5, -1, 0.0}), FamilyGeometryError);
  CHECK_THROWS_AS(fam.add(sp, {0, 0, 1, 0.0, -1, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(fam.add(sp, {0, 1, 0, 0.1, -1, 0.0}), std::invalid_argument);
  int idx = fam.add(sp, {0, 1, 1, 0.2, -1, 0.0});
  CHECK(idx == 0);
  CHECK_THROWS_AS(fam.add(sp, {1, 0, 2, 0.1, -1, 0.0}), std::invalid_argument);
  // Endpoints must stay inside the declared ball around the center.
  CHECK_THROWS_AS(fam.add(sp, {1, 2, 1, 0.5, 0, 1.5}), FamilyGeometryError);
  fam.add(sp, {1, 2, 2, 0.5, 2, 2.0});
  CHECK(fam.max_level() == 2);
}

TEST_CASE("lookup works in both orientations") {
  SyntheticSpace sp = SyntheticSpace::line({0.0, 1.0});
  ShortcutFamily fam(ShortcutConfig::with_lambda(0.5));
  fam.add(sp, {0, 1, 3, 0.25, -1, 0.0});
  const Shortcut* fwd = fam.find(0, 1);
  const Shortcut* rev = fam.find(1, 0);
  REQUIRE(fwd != nullptr);
  CHECK(fwd == rev);
  CHECK(fwd->level == 3);
  CHECK(fwd->cost == 0.25);
  CHECK(fam.find(0, 0) == nullptr);
  CHECK(fam.level_indices(3) == std::vector<int>{0});
  CHECK(fam.level_indices(1).empty());
  auto eps = fam.endpoints(8);
  CHECK(eps == std::vector<PointId>{0, 1});
}

TEST_CASE("truncation gap follows the geometric tail") {
  ShortcutFamily fam(ShortcutConfig::with_lambda(0.5));
  CHECK(fam.truncation_error(6) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(fam.truncation_error(7) == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(fam.truncation_error(8) == doctest::Approx(0.03125).epsilon(1e-15));
  CHECK(fam.truncation_error(9) == doctest::Approx(0.015625).epsilon(1e-15));
}

TEST_CASE("step cost picks the cheaper of walk and shortcut") {
  SyntheticSpace sp = SyntheticSpace::line({0.0, 1.0, 1.5});
  ShortcutFamily fam(ShortcutConfig::with_lambda(0.5));
  fam.add(sp, {0, 1, 1, 0.25, -1, 0.0});
  CHECK(step_cost(0, 1, fam, sp) == 0.25);
  CHECK(step_cost(1, 0, fam, sp) == 0.25);
  CHECK(step_cost(1, 2, fam, sp) == 0.5);
  CHECK(step_cost(2, 2, fam, sp) == 0.0);
  Itinerary it{{0, 1, 2}};
  CHECK(itinerary_cost(it, fam, sp) == doctest::Approx(0.75));
}

namespace {

// Line with duplicated coordinates so shortcut jumps can sit between
// stationary walks: ids 2k and 2k+1 share the coordinate xs[k].
SyntheticSpace doubled_line(const std::vector<double>& xs) {
  std::vector<double> out;
  for (double x : xs) {
    out.push_back(x);
    out.push_back(x);
  }
  return SyntheticSpace::line(out);
}

}  // namespace

TEST_CASE("classify recognises alternating itineraries and valleys") {
  // Five sites, four jumps; levels 3,2,2,5.
  SyntheticSpace sp = doubled_line({0.0, 1.0, 2.0, 3.0, 4.0});
  ShortcutFamily fam(ShortcutConfig::with_lambda(0.5));
  fam.add(sp, {1, 2, 3, 0.5, -1, 0.0});
  fam.add(sp, {3, 4, 2, 0.5, -1, 0.0});
  fam.add(sp, {5, 6, 2, 0.5, -1, 0.0});
  fam.add(sp, {7, 8, 5, 0.5, -1, 0.0});
  Itinerary it{{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}};
  ItineraryShape shape = classify(it, fam);
  CHECK(shape.alternating);
  CHECK(shape.levels == std::vector<int>{3, 2, 2, 5});
  CHECK(shape.valley);

  // 2,3,1 rises then falls: no valley.
  SyntheticSpace sp2 = doubled_line({0.0, 1.0, 2.0, 3.0});
  ShortcutFamily fam2(ShortcutConfig::with_lambda(0.5));
  fam2.add(sp2, {1, 2, 2, 0.5, -1, 0.0});
  fam2.add(sp2, {3, 4, 3, 0.5, -1, 0.0});
  fam2.add(sp2, {5, 6, 1, 0.5, -1, 0.0});
  Itinerary it2{{0, 1, 2, 3, 4, 5, 6, 7}};
  ItineraryShape shape2 = classify(it2, fam2);
  CHECK(shape2.alternating);
  CHECK(shape2.levels == std::vector<int>{2, 3, 1});
  CHECK_FALSE(shape2.valley);

  // A bare two-point walk is trivially alternating with no jumps.
  Itinerary walk{{0, 7}};
  ItineraryShape ws = classify(walk, fam2);
  CHECK(ws.alternating);
  CHECK(ws.levels.empty());
  CHECK(ws.valley);

  // Odd length, a walk in jump position, or a shortcut pair in walk
  // position each break the shape.
  CHECK_FALSE(classify(Itinerary{{0, 1, 2}}, fam2).alternating);
  CHECK_FALSE(classify(Itinerary{{0, 0, 3, 4}}, fam2).alternating);
  CHECK_FALSE(classify(Itinerary{{0, 1, 2, 1}}, fam2).alternating);
}

TEST_CASE("make_alternating merges walks and splices jumps") {
  SyntheticSpace sp = SyntheticSpace::line({0.0, 0.2, 0.5, 1.0, 1.4});
  ShortcutFamily fam(ShortcutConfig::with_lambda(0.5));
  fam.add(sp, {2, 3, 1, 0.1, -1, 0.0});

  // Walks before and after the jump merge into single steps.
  Itinerary it{{0, 1, 2, 3, 4}};
  Itinerary alt = make_alternating(it, fam, sp);
  CHECK(alt.points == std::vector<PointId>{0, 2, 3, 4});
  CHECK(itinerary_cost(alt, fam, sp) <= itinerary_cost(it, fam, sp) + 1e-15);
  CHECK(classify(alt, fam).alternating);

  // A walk that lands on a shortcut pair is spliced into a jump between
  // stationary walks.
  Itinerary direct{{2, 3}};
  Itinerary alt2 = make_alternating(direct, fam, sp);
  CHECK(alt2.points == std::vector<PointId>{2, 2, 3, 3});
  CHECK(itinerary_cost(alt2, fam, sp) == 0.1);

  // Out-and-back bounces vanish.
  Itinerary bounce{{0, 2, 3, 2, 1}};
  Itinerary alt3 = make_alternating(bounce, fam, sp);
  CHECK(alt3.points == std::vector<PointId>{0, 1});
  CHECK(itinerary_cost(alt3, fam, sp) <=
        itinerary_cost(bounce, fam, sp) + 1e-15);
}

TEST_CASE("middle shortcut dominated by its level is deleted") {
  // Sites 0/1 at x=0, 2/3 at x=1, 4/5 at x=1.1, 6/7 at x=2.1.
  SyntheticSpace sp = SyntheticSpace::line({0.0, 0.0, 1.0, 1.0, 1.1, 1.1, 2.1, 2.1});
  ShortcutFamily fam(ShortcutConfig::with_lambda(0.5));
  fam.add(sp, {1, 2, 1, 0.2, -1, 0.0});
  fam.add(sp, {3, 4, 3, 0.1, -1, 0.0});  // cost equals the base distance
  fam.add(sp, {5, 6, 1, 0.2, -1, 0.0});
  Itinerary it{{0, 1, 2, 3, 4, 5, 6, 7}};
  CHECK(classify(it, fam).levels == std::vector<int>{1, 3, 1});
  CHECK_FALSE(classify(it, fam).valley);

  auto el = eligible_reductions(it, fam);
  CHECK(el == std::vector<int>{1});
  Itinerary red = reduce_step(it, 1, fam, sp);
  CHECK(red.points == std::vector<PointId>{0, 1, 2, 5, 6, 7});
  CHECK(itinerary_cost(red, fam, sp) ==
        doctest::Approx(itinerary_cost(it, fam, sp)).epsilon(1e-15));

  Itinerary norm = normalize(it, fam, sp);
  CHECK(norm.points == std::vector<PointId>{0, 1, 2, 5, 6, 7});
  ItineraryShape shape = classify(norm, fam);
  CHECK(shape.levels == std::vector<int>{1, 1});
  CHECK(shape.valley);
  CHECK(normalize(norm, fam, sp).points == norm.points);
  CHECK_THROWS_AS(reduce_step(it, 3, fam, sp), std::invalid_argument);
}

TEST_CASE("first and last shortcuts are never eligible") {
  SyntheticSpace sp = doubled_line({0.0, 1.0, 2.0, 3.0, 4.0});
  ShortcutFamily fam(ShortcutConfig::with_lambda(0.5));
  fam.add(sp, {1, 2, 5, 0.5, -1, 0.0});
  fam.add(sp, {3, 4, 1, 0.5, -1, 0.0});
  fam.add(sp, {5, 6, 5, 0.5, -1, 0.0});
  fam.add(sp, {7, 8, 1, 0.5, -1, 0.0});
  Itinerary it{{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}};
  // Levels 5,1,5,1: slot 3 dominates its neighbours, slots 1 and 4 are
  // protected ends, slot 2 is dominated.
  CHECK(eligible_reductions(it, fam) == std::vector<int>{3});
}

TEST_CASE("repeated traversals of one shortcut collapse to a single jump") {
  SyntheticSpace sp = SyntheticSpace::line({0.0, 1.0});
  ShortcutFamily fam(ShortcutConfig::with_lambda(0.5));
  fam.add(sp, {0, 1, 2, 0.3, -1, 0.0});
  // There-and-back-and-there again: three jumps, cost 0.9.
  Itinerary it{{0, 1, 0, 1}};
  CHECK(itinerary_cost(it, fam, sp) == doctest::Approx(0.9));
  Itinerary norm = normalize(it, fam, sp);
  CHECK(norm.points == std::vector<PointId>{0, 0, 1, 1});
  CHECK(itinerary_cost(norm, fam, sp) == doctest::Approx(0.3));
  CHECK(norm.first() == 0);
  CHECK(norm.last() == 1);
}

TEST_CASE("duplicate pair around a dominated middle collapses cleanly") {
  SyntheticSpace sp = SyntheticSpace::line({0.0, 0.0, 1.0, 1.0, 1.05});
  ShortcutFamily fam(ShortcutConfig::with_lambda(0.5));
  fam.add(sp, {1, 2, 1, 0.2, -1, 0.0});
  fam.add(sp, {3, 4, 3, 0.05, -1, 0.0});
  // Jump 1-2, detour over the level-3 pair, then jump 1-2 again.
  Itinerary it{{0, 1, 2, 3, 4, 1, 2, 2}};
  CHECK(classify(it, fam).alternating);
  CHECK(classify(it, fam).levels == std::vector<int>{1, 3, 1});
  double before = itinerary_cost(it, fam, sp);
  Itinerary norm = normalize(it, fam, sp);
  CHECK(norm.points == std::vector<PointId>{0, 1, 2, 2});
  CHECK(itinerary_cost(norm, fam, sp) == doctest::Approx(0.2));
  CHECK(itinerary_cost(norm, fam, sp) < before);
  CHECK(classify(norm, fam).levels == std::vector<int>{1});
}

TEST_CASE("normalization is stable on random itineraries") {
  // Endpoint-disjoint family on a scattered plane.
  RngStream rng = RngStream::substream(20260823, "itinerary-random");
  std::vector<std::array<double, 2>> pts;
  for (int i = 0; i < 14; ++i)
    pts.push_back({rng.uniform(0.0, 4.0), rng.uniform(0.0, 4.0)});
  SyntheticSpace sp = SyntheticSpace::plane(pts);
  ShortcutFamily fam(ShortcutConfig::with_lambda(0.5));
  std::vector<int> levels = {1, 2, 2, 3, 4};
  for (int k = 0; k < 5; ++k) {
    PointId a = static_cast<PointId>(2 * k), b = static_cast<PointId>(2 * k + 1);
    double rho = sp.rho(a, b);
    fam.add(sp, {a, b, levels[static_cast<std::size_t>(k)],
                 0.9 * rng.u01() * rho, -1, 0.0});
  }
  for (int trial = 0; trial < 300; ++trial) {
    Itinerary it;
    int len = 2 + static_cast<int>(rng.index(9));
    for (int i = 0; i < len; ++i)
      it.points.push_back(static_cast<PointId>(rng.index(14)));
    Itinerary norm = normalize(it, fam, sp);
    ItineraryShape shape = classify(norm, fam);
    CHECK(shape.alternating);
    CHECK(shape.valley);
    CHECK(itinerary_cost(norm, fam, sp) <=
          itinerary_cost(it, fam, sp) + 1e-12);
    CHECK(norm.first() == it.first());
    CHECK(norm.last() == it.last());
    Itinerary again = normalize(norm, fam, sp);
    CHECK(again.points == norm.points);
  }
}
