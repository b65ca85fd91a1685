#include "shortcut/net.hpp"

#include <cmath>
#include <limits>

#include "shortcut/report.hpp"

namespace shortcut {

NetLevel build_net(NetSpace& space, const ShortcutFamily& family, int level) {
  const auto& cfg = family.config();
  double sep = cfg.separation(level);
  // Endpoints of every lower-level shortcut are excluded at the current
  // separation radius; this is what keeps distinct low-level shortcut
  // pairs far apart when seen from small balls.
  std::vector<PointId> forbidden = family.endpoints(level - 1);

  NetLevel net;
  net.level = level;
  net.centers = space.greedy_net(sep, forbidden, sep);
  // Coverage counts prior endpoints as well: a sample point deep inside
  // a forbidden ball is near a lower-level shortcut rather than a fresh
  // centre.  On a bounded window with a large scale ratio the first few
  // levels can be entirely forbidden, which is fine; a point far from
  // both is a genuine resolution failure.
  double cover = cfg.cover_constant * cfg.ball_radius(level);
  std::vector<PointId> anchors = net.centers;
  anchors.insert(anchors.end(), forbidden.begin(), forbidden.end());
  if (auto witness = space.first_uncovered(anchors, cover)) {
    throw CoverageError(*witness, level);
  }
  if (net.centers.empty()) {
    net.notes.push_back(
        "no admissible centres: the sample window lies inside the "
        "forbidden region of lower-level endpoints");
  }
  if (cfg.lambda >= 0.25) {
    net.notes.push_back(
        "scale ratio " + format_sig(cfg.lambda) +
        " is above the regime with an a priori covering guarantee; "
        "coverage was verified by a full scan instead");
  }
  return net;
}

void place_shortcuts(NetSpace& space, ShortcutFamily& family, NetLevel& net) {
  const auto& cfg = family.config();
  double radius = cfg.ball_radius(net.level);
  double gap = cfg.level_gap(net.level);
  double alpha = cfg.schedule.alpha(net.level);
  for (PointId c : net.centers) {
    auto [q1, q2] = space.choose_endpoints(c, radius, net.level, gap);
    Shortcut sc;
    sc.a = q1;
    sc.b = q2;
    sc.level = net.level;
    sc.cost = alpha * space.rho(q1, q2);
    sc.center = c;
    sc.radius = radius;
    net.shortcut_indices.push_back(family.add(space, sc));
  }
}

NetLevel build_level(NetSpace& space, ShortcutFamily& family, int level) {
  NetLevel net = build_net(space, family, level);
  place_shortcuts(space, family, net);
  return net;
}

ConditionReport verify_shortcut_condition(CountingSpace& space, PointId q1,
                                          PointId q2, PointId center,
                                          double radius, std::uint64_t trials,
                                          RngStream& rng) {
  ConditionReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();

  auto draw_outside = [&](PointId& out) {
    for (int attempt = 0; attempt < 256; ++attempt) {
      PointId p = space.random_sample_point(rng);
      if (space.rho(p, center) >= radius) {
        out = p;
        return true;
      }
    }
    return false;
  };

  for (std::uint64_t t = 0; t < trials; ++t) {
    PointId p1, p2;
    if (!draw_outside(p1) || !draw_outside(p2)) continue;
    ++rep.trials;
    double margin = space.rho(p1, q1) + space.rho(p2, q2) - space.rho(p1, p2);
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < -1e-12) ++rep.violations;
  }
  return rep;
}

}  // namespace shortcut
