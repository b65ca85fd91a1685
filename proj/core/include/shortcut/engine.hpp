#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "shortcut/itinerary.hpp"
#include "shortcut/space.hpp"

namespace shortcut {

// Certified gap between the level-N truncated distance and the full one:
// a near-optimal itinerary has at most 4 shortcuts per level, and replacing
// one level-k shortcut by a walk costs at most 2*lambda^k.
double truncation_error(double lambda, int trunc);

// Node universe provider for the distance engine.  Implementations may
// materialize endpoints lazily; endpoints_near may report extra points
// (they are filtered by the budget) but must never miss one inside the
// open rho-ball.
class ShortcutSource {
 public:
  virtual ~ShortcutSource() = default;

  virtual CountingSpace& space() = 0;
  virtual double lambda() const = 0;
  virtual int max_level() const = 0;

  // Endpoints of shortcuts with level <= trunc in B_rho(at, radius);
  // radius <= 0 means "all endpoints".
  virtual void endpoints_near(PointId at, double radius, int trunc,
                              const std::function<void(PointId)>& fn) = 0;
  // Shortcuts with level <= trunc having p as one endpoint.
  virtual void shortcuts_at(PointId p, int trunc,
                            const std::function<void(const Shortcut&)>& fn) = 0;
};

// Adapter for a fully materialized family.  An optional coordinate hook
// enables a planar hash over endpoints; it requires that the planar
// l-infinity distance of the first two coordinates never exceeds rho.
class FamilySource final : public ShortcutSource {
 public:
  FamilySource(CountingSpace& space, const ShortcutFamily& family);

  void set_coords(std::function<std::array<double, 2>(PointId)> coords,
                  double cell_size);

  CountingSpace& space() override { return space_; }
  double lambda() const override { return family_.config().lambda; }
  int max_level() const override { return family_.max_level(); }
  void endpoints_near(PointId at, double radius, int trunc,
                      const std::function<void(PointId)>& fn) override;
  void shortcuts_at(PointId p, int trunc,
                    const std::function<void(const Shortcut&)>& fn) override;

 private:
  CountingSpace& space_;
  const ShortcutFamily& family_;
  std::vector<std::pair<PointId, int>> endpoint_levels_;  // unique endpoints
  std::unordered_map<PointId, std::vector<int>> incident_;
  std::function<std::array<double, 2>(PointId)> coords_;
  double cell_ = 0;
  std::unordered_map<std::uint64_t, std::vector<int>> planar_hash_;
};

struct EngineOptions {
  int trunc = 6;
  bool budget_prune = true;   // false explores the whole endpoint graph
  double budget_slack = 0.0;  // additive slack on the initial upper bound
};

struct DistanceResult {
  double value = 0.0;  // truncated shortcut distance
  double eps = 0.0;    // certified truncation error
  int trunc = 0;
  std::uint64_t settled = 0;
  std::uint64_t discovered = 0;
};

// Exact shortest-path evaluation of the truncated shortcut distance.
// Nodes are the two query points plus shortcut endpoints discovered on
// demand; walks may connect any node pair but only walks leaving the
// start or a jump landing can be optimal, which keeps relaxation linear
// in the discovered set.
class TruncatedMetric {
 public:
  explicit TruncatedMetric(ShortcutSource& source, EngineOptions opt = {});

  DistanceResult distance(PointId x, PointId y);

  struct Reached {
    PointId point;
    double value;
  };
  // All shortcut endpoints whose truncated distance from x is < budget,
  // sorted by point id.  Complete: no endpoint below the budget is missed.
  std::vector<Reached> reach(PointId x, double budget);

  // The open metric ball B(x, r) as a finite union of open rho-balls:
  // B_rho(x, r) plus B_rho(e, r - value(e)) per reached endpoint e.
  std::vector<SpaceBall> ball_cover(PointId x, double radius);

  double eps() const;
  const EngineOptions& options() const { return opt_; }
  ShortcutSource& source() { return src_; }

 private:
  ShortcutSource& src_;
  EngineOptions opt_;
};

// Shortcuts of level < level_cut with an endpoint inside the open metric
// ball B(x, r), deduplicated as unordered pairs.  The construction admits
// at most one such pair.
std::vector<Shortcut> low_level_reached(TruncatedMetric& metric, PointId x,
                                        double r, int level_cut);

}  // namespace shortcut
