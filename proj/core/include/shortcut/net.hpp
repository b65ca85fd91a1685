#pragma once

#include <optional>
#include <string>

#include "shortcut/itinerary.hpp"

namespace shortcut {

// Raised when the sample is not covered at the expected radius after a
// greedy net pass; carries the first uncovered sample point.
class CoverageError : public std::runtime_error {
 public:
  CoverageError(const std::string& witness, int level)
      : std::runtime_error("coverage failure at level " +
                           std::to_string(level) + ": " + witness),
        witness_(witness),
        level_(level) {}
  const std::string& witness() const { return witness_; }
  int level() const { return level_; }

 private:
  std::string witness_;
  int level_;
};

struct NetLevel {
  int level{0};
  std::vector<PointId> centers;
  std::vector<int> shortcut_indices;  // into family.all(), after placement
  std::vector<std::string> notes;
};

// Greedy net for one level: separation 4 lambda^n, prior shortcut
// endpoints excluded at the same radius, coverage verified at
// cover_constant * lambda^n.  Throws CoverageError on failure.
NetLevel build_net(NetSpace& space, const ShortcutFamily& family, int level);

// Chooses endpoints in each center ball and registers the costed
// shortcuts with the family.
void place_shortcuts(NetSpace& space, ShortcutFamily& family, NetLevel& net);

// build_net followed by place_shortcuts.
NetLevel build_level(NetSpace& space, ShortcutFamily& family, int level);

struct ConditionReport {
  int level{0};
  std::uint64_t trials{0};
  std::uint64_t violations{0};
  double worst_margin{0.0};  // min over trials of RHS - LHS; >= 0 iff ok
};

// Samples pairs p1, p2 outside the open ball B(center, radius) and
// checks rho(p1,p2) <= rho(p1,q1) + rho(p2,q2).
ConditionReport verify_shortcut_condition(CountingSpace& space, PointId q1,
                                          PointId q2, PointId center,
                                          double radius, std::uint64_t trials,
                                          RngStream& rng);

}  // namespace shortcut
