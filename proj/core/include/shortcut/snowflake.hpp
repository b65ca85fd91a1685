#pragma once

#include "shortcut/net.hpp"

namespace shortcut {

// The unit interval with the snowflaked metric |x - y|^delta on a
// uniform dyadic sample of step 2^-m.  The base line is 1-regular with
// constant 1; the snowflake is (1/delta)-regular.
class SnowflakeLineSpace final : public NetSpace {
 public:
  SnowflakeLineSpace(double delta, int m);

  double delta() const { return delta_; }
  double base_regularity_constant() const { return 1.0; }
  double base_dimension() const { return 1.0; }

  // Scale ratio from the snowflake construction:
  // lambda = (2C)^(-2 delta / Q) * (1 - delta)^delta.
  double lambda() const;
  // Euclidean annulus for a level with snowflake radius r: the second
  // endpoint lies at base distance in (inner, outer] from the first.
  double annulus_outer(double r) const;  // (1-delta) r^(1/delta)
  double annulus_inner(double r) const;  // (2C)^(-2/Q) (1-delta) r^(1/delta)

  PointId add_point(double x);  // snaps to the sample grid
  double coord(PointId id) const { return pts_.at(id); }

  double rho(PointId a, PointId b) const override;
  PointId point_count() const override { return static_cast<PointId>(pts_.size()); }
  double diameter() const override { return 1.0; }
  std::string describe(PointId id) const override;

  std::uint64_t sample_size() const override;
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
  // q1 = center; q2 = first sample point whose base distance from q1
  // lies in the construction annulus for radius = lambda^level.
  std::pair<PointId, PointId> choose_endpoints(PointId center, double radius,
                                               int level,
                                               double min_gap) override;

 private:
  double delta_;
  int m_;
  double step_;
  std::vector<double> pts_;
  std::unordered_map<std::int64_t, PointId> dedup_;
};

}  // namespace shortcut
