#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shortcut/rng.hpp"

namespace shortcut {

using PointId = std::int64_t;

// A metric base space exposing distances between registered points.
// Registration is cheap; the (possibly huge) ambient sample used for
// net construction and measure estimates is handled by subclasses and
// never needs to be materialised point by point.
class BaseSpace {
 public:
  virtual ~BaseSpace() = default;

  virtual double rho(PointId a, PointId b) const = 0;
  virtual PointId point_count() const = 0;
  virtual double diameter() const = 0;
  virtual std::string describe(PointId id) const;
};

struct SpaceBall {
  PointId center{-1};
  double radius{0.0};  // open ball
};

// Adds sample bookkeeping: counting sample points inside unions of open
// balls, scanning for union points that escape a set of guard balls
// (closed), and drawing random sample points.
class CountingSpace : public BaseSpace {
 public:
  virtual std::uint64_t sample_size() const = 0;
  virtual std::uint64_t count_in_union(std::span<const SpaceBall> balls) const = 0;
  // First sample point lying in union(members) but not within any
  // closed guard ball; returns a printable witness.
  virtual std::optional<std::string> union_point_outside(
      std::span<const SpaceBall> members,
      std::span<const SpaceBall> guards) const = 0;
  virtual PointId random_sample_point(RngStream& rng) = 0;
};

// Adds the capabilities the net construction needs: a deterministic
// greedy scan of the sample, a coverage check, and endpoint selection
// inside a given ball.
class NetSpace : public CountingSpace {
 public:
  // Greedy maximal separated subset of the sample, visited in the
  // space's canonical scan order.  A candidate is accepted iff it is at
  // distance >= separation from every accepted point and at distance
  // >= forbidden_radius from every forbidden point (open exclusion).
  virtual std::vector<PointId> greedy_net(double separation,
                                          std::span<const PointId> forbidden,
                                          double forbidden_radius) = 0;

  // First sample point further than cover_radius from all centers.
  virtual std::optional<std::string> first_uncovered(
      std::span<const PointId> centers, double cover_radius) = 0;

  // Pick the two shortcut endpoints for a level-`level` center: both in
  // the closed ball B(center, radius), mutual distance >= min_gap.
  virtual std::pair<PointId, PointId> choose_endpoints(PointId center,
                                                       double radius, int level,
                                                       double min_gap) = 0;
};

// Finite hand-built instance with explicit planar coordinates; the
// metric is Euclidean.  Used for small examples and oracle tests.
class SyntheticSpace final : public NetSpace {
 public:
  static SyntheticSpace line(std::vector<double> xs);
  static SyntheticSpace plane(std::vector<std::array<double, 2>> pts);

  PointId add(std::array<double, 2> p);
  std::array<double, 2> coords(PointId id) const { return pts_.at(id); }

  double rho(PointId a, PointId b) const override;
  PointId point_count() const override { return static_cast<PointId>(pts_.size()); }
  double diameter() const override;
  std::string describe(PointId id) const override;

  std::uint64_t sample_size() const override { return pts_.size(); }
  std::uint64_t count_in_union(std::span<const SpaceBall> balls) const override;
  std::optional<std::string> union_point_outside(
      std::span<const SpaceBall> members,
      std::span<const SpaceBall> guards) const override;
  PointId random_sample_point(RngStream& rng) override;

  std::vector<PointId> greedy_net(double separation,
                                  std::span<const PointId> forbidden,
                                  double forbidden_radius) override;
  std::optional<std::string> first_uncovered(std::span<const PointId> centers,
                                             double cover_radius) override;
  std::pair<PointId, PointId> choose_endpoints(PointId center, double radius,
                                               int level,
                                               double min_gap) override;

 private:
  std::vector<std::array<double, 2>> pts_;
};

}  // namespace shortcut
