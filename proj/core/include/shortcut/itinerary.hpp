#pragma once

#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "shortcut/space.hpp"

namespace shortcut {

// Per-level discount factors alpha_n in [0,1), non-increasing with
// alpha_n -> 0.  alpha_n = 0 for all n yields a semi-distance.
class CostSchedule {
 public:
  static CostSchedule geometric(double ratio = 0.5);
  static CostSchedule zero();
  static CostSchedule table(std::vector<double> alphas);

  double alpha(int level) const;
  bool is_zero() const { return kind_ == Kind::kZero; }
  // Throws std::invalid_argument if alpha is not in [0,1) and
  // non-increasing over levels 1..max_level.
  void validate(int max_level) const;

 private:
  enum class Kind { kGeometric, kZero, kTable };
  Kind kind_{Kind::kGeometric};
  double ratio_{0.5};
  std::vector<double> table_;
};

struct ShortcutConfig {
  double lambda{0.5};
  double cover_constant{10.0};  // 8 + 1/lambda at the default lambda
  int min_level{1};
  int max_level{6};
  CostSchedule schedule{CostSchedule::geometric()};

  static ShortcutConfig with_lambda(double lambda);
  double separation(int level) const;  // 4 lambda^n
  double ball_radius(int level) const; // lambda^n
  double level_gap(int level) const;   // lambda^{n+1}
};

struct Shortcut {
  PointId a{-1};
  PointId b{-1};
  int level{0};
  double cost{0.0};
  PointId center{-1};  // -1 for hand-built shortcuts without a net center
  double radius{0.0};
};

// Raised when a numeric consistency check shows the shortcut family does
// not satisfy the geometric requirements the rewriting relies on.
class FamilyGeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Leveled symmetric collection of shortcuts.  One canonical orientation
// is stored; lookups work with either orientation.
class ShortcutFamily {
 public:
  explicit ShortcutFamily(ShortcutConfig cfg);

  // Validates cost <= rho(a,b) and, when a center is given, that both
  // endpoints lie in the closed ball around it.  Returns the index of
  // the stored shortcut.
  int add(const BaseSpace& space, Shortcut sc);

  const Shortcut* find(PointId a, PointId b) const;
  const Shortcut& at(int index) const { return all_[index]; }
  std::span<const Shortcut> all() const { return all_; }
  std::vector<int> level_indices(int level) const;
  std::span<const int> shortcuts_at(PointId p) const;
  std::vector<PointId> endpoints(int max_level) const;

  int max_level() const { return max_level_; }
  const ShortcutConfig& config() const { return cfg_; }

  // Cost gap bound between the level<=trunc construction and the full
  // one: 8 lambda^{trunc+1} / (1 - lambda).
  double truncation_error(int trunc) const;

 private:
  struct PairHash {
    std::size_t operator()(const std::pair<PointId, PointId>& p) const {
      return std::hash<std::uint64_t>()(
          static_cast<std::uint64_t>(p.first) * 0x9e3779b97f4a7c15ull ^
          static_cast<std::uint64_t>(p.second));
    }
  };

  ShortcutConfig cfg_;
  std::vector<Shortcut> all_;
  std::unordered_map<std::pair<PointId, PointId>, int, PairHash> lookup_;
  std::unordered_map<PointId, std::vector<int>> at_point_;
  int max_level_{0};
};

// A finite point sequence.  Steps are consecutive pairs; the cost of a
// step is the shortcut cost when the pair is in the family and the base
// distance otherwise.
struct Itinerary {
  std::vector<PointId> points;

  std::size_t steps() const { return points.empty() ? 0 : points.size() - 1; }
  PointId first() const { return points.front(); }
  PointId last() const { return points.back(); }
};

double step_cost(PointId a, PointId b, const ShortcutFamily& family,
                 const BaseSpace& space);
double itinerary_cost(const Itinerary& it, const ShortcutFamily& family,
                      const BaseSpace& space);

struct ItineraryShape {
  bool alternating{false};
  // Level of the shortcut at slot k (step 2k), defined when alternating.
  std::vector<int> levels;
  // Levels are non-increasing then non-decreasing.
  bool valley{false};
};

ItineraryShape classify(const Itinerary& it, const ShortcutFamily& family);

// Rewrites an arbitrary itinerary into an alternating one of no greater
// cost: out-and-back bounces collapse, consecutive walks merge, and
// shortcuts move to even steps via stationary walks.  Extremes are
// preserved; traversed shortcuts are preserved up to bounce removal.
Itinerary make_alternating(const Itinerary& it, const ShortcutFamily& family,
                           const BaseSpace& space);

// Odd indices j such that deleting points x_{j+2}, x_{j+3} of the
// alternating itinerary is admissible: the pair is a shortcut with both
// a preceding and a following shortcut, and its level is >= both
// neighbouring levels.  First and last shortcuts are never eligible.
std::vector<int> eligible_reductions(const Itinerary& it,
                                     const ShortcutFamily& family);

// Applies one deletion at odd index j.  Throws std::invalid_argument if
// j is not eligible and FamilyGeometryError if the rewritten itinerary
// would cost more than the original (the family then violates the
// triangle-through-shortcut requirement).
Itinerary reduce_step(const Itinerary& it, int j, const ShortcutFamily& family,
                      const BaseSpace& space);

// Alternates, then repeatedly applies the smallest admissible interior
// deletion until none is left.  The result has valley-shaped levels, at
// most four shortcuts per level, cost no greater than the input, and
// the same extremes and first/last shortcuts.
Itinerary normalize(const Itinerary& it, const ShortcutFamily& family,
                    const BaseSpace& space);

}  // namespace shortcut
