#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "shortcut/heisenberg.hpp"
#include "shortcut/rng.hpp"
#include "shortcut/vertical.hpp"

using namespace shortcut;

namespace {

const ASequence& seq200() {
  static ASequence seq(200000);
  return seq;
}

}  // namespace

TEST_CASE("schedule prefix is frozen") {
  const ASequence& seq = seq200();
  std::vector<int> want = {0, 0, 0, 1, 0, 0, 0, 1, 0, 0,
                           0, 1, 0, 0, 1, 1, 0, 0, 0, 1};
  for (std::size_t i = 1; i <= want.size(); ++i)
    CHECK(seq.a(i) == want[i - 1]);
  CHECK(seq.a(3) == 0);
  CHECK(seq.a(4) == 1);
  CHECK(seq.a(15) == 1);
}

TEST_CASE("primes and progression steps") {
  CHECK(ASequence::nth_prime(1) == 2);
  CHECK(ASequence::nth_prime(2) == 3);
  CHECK(ASequence::nth_prime(3) == 5);
  CHECK(ASequence::nth_prime(4) == 7);
  CHECK(ASequence::nth_prime(5) == 11);
  CHECK(ASequence::progression_step(1) == 2);
  CHECK(ASequence::progression_step(2) == 12);
  CHECK(ASequence::progression_step(3) == 90);
}

TEST_CASE("every fourth index carries a jump") {
  const ASequence& seq = seq200();
  for (std::size_t k = 0; k <= 1000; ++k) CHECK(seq.a(4 * (k + 1)) == 1);
}

TEST_CASE("membership in the first progression alternates") {
  CHECK(ASequence::in_progression(4, 1));
  CHECK_FALSE(ASequence::in_progression(5, 1));
  CHECK(ASequence::in_progression(6, 1));
  CHECK_FALSE(ASequence::in_progression(7, 1));
  CHECK(ASequence::in_progression(2, 1));
  CHECK(ASequence::in_progression(3, 2));
  CHECK(ASequence::in_progression(15, 2));
  CHECK_FALSE(ASequence::in_progression(4, 2));
}

TEST_CASE("windows always contain a flip") {
  const ASequence& seq = seq200();
  for (int ell = 1; ell <= 3; ++ell) {
    FlipCheck fc = window_flip_check(seq, ell, 10000);
    CHECK(fc.windows > 0);
    CHECK(fc.failures == 0);
  }
}

TEST_CASE("lower bound profile on the unit window") {
  CHECK(f_lower_bound(1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f_lower_bound(4.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f_lower_bound(2.0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  for (double t = 1.1; t < 4.0; t += 0.2) CHECK(f_lower_bound(t) > 0.5);
}

TEST_CASE("menu collects the scheduled levels") {
  const ASequence& seq = seq200();
  JumpMenu menu = JumpMenu::from_sequence(seq, 1, 24);
  CHECK(menu.levels == std::vector<int>{4, 8, 12, 15, 16, 20, 24});
  JumpMenu excl = JumpMenu::from_sequence(seq, 1, 24, 16);
  CHECK(excl.levels == std::vector<int>{4, 8, 12, 15, 20, 24});
}

TEST_CASE("single level menu answers exactly") {
  JumpMenu menu;
  menu.levels = {4};
  VerticalQuery q;
  q.height = 2.0 * std::pow(4.0, -4);
  VerticalValue v = vertical_upper(q, menu);
  CHECK(v.cost == doctest::Approx(0.0625).epsilon(1e-12));
  REQUIRE(v.jumps.size() == 1);
  CHECK(v.jumps[0].first == 4);
  CHECK(v.jumps[0].second == 2);
  CHECK(v.residual == doctest::Approx(0.0).epsilon(1e-15));

  JumpMenu root;
  root.levels = {1};
  VerticalQuery q1;
  q1.height = 2.0 * 0.25;
  VerticalValue v1 = vertical_upper(q1, root);
  CHECK(v1.cost == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("search agrees with the explicit odometer") {
  const ASequence& seq = seq200();
  RngStream rng = RngStream::substream(314, "vertical-test");
  for (int trial = 0; trial < 100; ++trial) {
    int count = 1 + static_cast<int>(rng.index(4));
    JumpMenu menu;
    std::vector<BruteEntry> entries;
    int last = 0;
    for (int i = 0; i < count; ++i) {
      int lvl = last + 1 + static_cast<int>(rng.index(3));
      last = lvl;
      menu.levels.push_back(lvl);
      entries.push_back({std::ldexp(1.0, -2 * lvl), true});
    }
    VerticalQuery q;
    q.height = rng.uniform(-0.3, 0.3);
    q.max_jumps_per_level = 3;
    VerticalValue v = vertical_upper(q, menu);
    double brute = vertical_bruteforce(q.height, q.norm, entries, 3);
    CHECK(v.cost == doctest::Approx(brute).epsilon(1e-9));
    (void)seq;
  }
}

TEST_CASE("menu growth never raises the cost") {
  const ASequence& seq = seq200();
  JumpMenu small = JumpMenu::from_sequence(seq, 1, 12);
  JumpMenu big = JumpMenu::from_sequence(seq, 1, 24);
  RngStream rng = RngStream::substream(314, "vertical-mono");
  for (int trial = 0; trial < 50; ++trial) {
    VerticalQuery q;
    q.height = rng.uniform(-0.5, 0.5);
    double c_small = vertical_upper(q, small).cost;
    double c_big = vertical_upper(q, big).cost;
    CHECK(c_big <= c_small + 1e-12);
    CHECK(c_small <= q.norm.kappa * std::sqrt(std::abs(q.height)) + 1e-12);
  }
}

TEST_CASE("upper bound beats the analytic lower bound on grids") {
  const ASequence& seq = seq200();
  BoundGridResult gen = general_bound_grid(seq, 1, 10, 40);
  CHECK(gen.checked == 400);
  CHECK(gen.violations == 0);
  CHECK(gen.worst_margin == doctest::Approx(0.000378221029903).epsilon(1e-6));
  BoundGridResult gap = gap_level_bound_grid(seq, 1, 10, 40);
  CHECK(gap.checked == 320);
  CHECK(gap.violations == 0);
  CHECK(gap.worst_margin == doctest::Approx(0.000300092049198).epsilon(1e-6));
}

TEST_CASE("eta threshold for the five percent certificate") {
  double eta = eta_for_epsilon(0.05);
  CHECK(eta == doctest::Approx(0.0023193359375).epsilon(1e-12));
  CHECK(eta > 0.0);
}

TEST_CASE("jump then walk certificate near scheduled levels") {
  const ASequence& seq = seq200();
  double eta = eta_for_epsilon(0.05);
  for (int n : {4, 8, 12}) {
    for (double sgn : {-1.0, 1.0}) {
      TwoStepCheck ts = two_step_certificate(seq, n, sgn * eta / 2, 0.05);
      CHECK(ts.ok);
      CHECK(ts.cost <= ts.bound + 1e-15);
    }
  }
}

TEST_CASE("column families anchor on dyadic centers") {
  const ASequence& seq = seq200();
  auto centers = dyadic_centers(2, {0.0, 1.0}, {0.0, 1.0});
  CHECK(centers.size() == 16);

  std::vector<double> zs = {0.0, 0.25, 0.5};
  VerticalNorm norm;
  auto fam = column_family(seq, 3, 5, {0.0, 1.0}, {0.0, 1.0}, zs, norm);
  CHECK_FALSE(fam.empty());
  for (const ColumnShortcut& cs : fam) {
    CHECK(cs.a.x == cs.b.x);
    CHECK(cs.a.y == cs.b.y);
    double gap = cs.b.z - cs.a.z;
    CHECK(gap == doctest::Approx(std::pow(4.0, -cs.level)).epsilon(1e-15));
    CHECK(box_distance(cs.a, cs.b) ==
          doctest::Approx(std::ldexp(1.0, -cs.level)).epsilon(1e-15));
    CHECK(cs.level >= 3);
    CHECK(cs.level <= 5);
    CHECK(seq200().a(static_cast<std::size_t>(cs.level)) == 1);
  }
  (void)seq;
}

TEST_CASE("corner columns force the gap level bound") {
  const ASequence& seq = seq200();
  RngStream rng = RngStream::substream(314, "corner-column");
  CornerColumnCheck cc = corner_column_check(seq, 4, 1.0, 0.01, 200, rng);
  CHECK(cc.ok);
  CHECK(cc.delta_admissible);
  CHECK(cc.paths == 200);
  CHECK(cc.escape_violations == 0);
  CHECK(cc.in_column_cost == doctest::Approx(0.0705236979435).epsilon(1e-9));
  CHECK(cc.bound == doctest::Approx(0.0407168759919).epsilon(1e-9));
  CHECK(cc.in_column_cost >= cc.bound);
}

TEST_CASE("column upper certificate stays below the scaled bound") {
  const ASequence& seq = seq200();
  double eta = eta_for_epsilon(0.05);
  ColumnUpperCheck cu = column_upper_check(seq, 4, eta / 2, 0.05, {0.0, 0.0});
  CHECK(cu.ok);
  CHECK(cu.eta > 0.0);
  CHECK(cu.cost <= cu.bound + 1e-15);
}

TEST_CASE("blow up ratios separate neighbouring scales") {
  const ASequence& seq = seq200();
  std::vector<int> js = {3, 4, 5, 6, 7, 8};
  std::vector<double> ss = {1.0};
  auto table = blowup_table(seq, js, ss);
  REQUIRE(table.size() == 6);
  CHECK(table[1].j == 4);
  CHECK(table[1].ratio == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(table[3].j == 6);
  CHECK(table[3].ratio == doctest::Approx(1.0).epsilon(1e-12));

  ContrastPair cp = blowup_contrast(table, 1.0, 2);
  CHECK(cp.found);
  CHECK(cp.j_low == 4);
  CHECK(cp.j_high == 6);
  CHECK(cp.low_ratio <= 0.52);
  CHECK(cp.high_ratio >= 0.55);
}
