#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <unordered_map>

#include "shortcut/heisenberg.hpp"
#include "shortcut/net.hpp"

namespace shortcut {

// Dyadic sample of a box in the Heisenberg group: step 2^-m in x and y,
// 4^-m in z, which is the image of the integer lattice under the
// anisotropic dilation.  The sample is never materialised; scans and
// counts run column by column with exact dyadic interval arithmetic
// (every coordinate and twist term is an exact double).
class HeisenbergGridSpace final : public NetSpace {
 public:
  struct GridSpec {
    int m{7};
    std::array<double, 2> x{0.0, 1.0};
    std::array<double, 2> y{0.0, 1.0};
    std::array<double, 2> z{0.0, 1.0};

    double step_xy() const;
    double step_z() const;
    std::uint64_t columns() const;
    std::uint64_t column_height() const;
    std::uint64_t size() const;
  };

  explicit HeisenbergGridSpace(GridSpec grid);

  const GridSpec& grid() const { return grid_; }
  bool contains(const HPoint& p) const;
  HPoint snap(const HPoint& p) const;

  PointId add_point(const HPoint& p);  // dedups exact coordinates
  const HPoint& point(PointId id) const { return pts_.at(id); }

  // BaseSpace
  double rho(PointId a, PointId b) const override;
  PointId point_count() const override { return static_cast<PointId>(pts_.size()); }
  double diameter() const override;
  std::string describe(PointId id) const override;

  // CountingSpace
  std::uint64_t sample_size() const override { return grid_.size(); }
  std::uint64_t count_in_union(std::span<const SpaceBall> balls) const override;
  std::optional<std::string> union_point_outside(
      std::span<const SpaceBall> members,
      std::span<const SpaceBall> guards) const override;
  PointId random_sample_point(RngStream& rng) override;

  // NetSpace (scans the main grid)
  std::vector<PointId> greedy_net(double separation,
                                  std::span<const PointId> forbidden,
                                  double forbidden_radius) override;
  std::optional<std::string> first_uncovered(std::span<const PointId> centers,
                                             double cover_radius) override;
  // Vertical endpoints: q1 = center, q2 = center * (0,0, radius^2 / 4).
  std::pair<PointId, PointId> choose_endpoints(PointId center, double radius,
                                               int level,
                                               double min_gap) override;

  // Same greedy construction on an alternative (usually finer,
  // windowed) grid; used for deep levels.
  std::vector<PointId> greedy_net_on(const GridSpec& scan, double separation,
                                     std::span<const PointId> forbidden,
                                     double forbidden_radius);
  std::optional<std::string> first_uncovered_on(const GridSpec& scan,
                                                std::span<const PointId> centers,
                                                double cover_radius);

 private:
  struct ExactKey {
    double x, y, z;
    bool operator==(const ExactKey&) const = default;
  };
  struct ExactKeyHash {
    std::size_t operator()(const ExactKey& k) const;
  };

  GridSpec grid_;
  std::vector<HPoint> pts_;
  std::unordered_map<ExactKey, PointId, ExactKeyHash> dedup_;
};

// Result of assembling the full construction on the grid.
struct HeisenbergBuild {
  std::unique_ptr<HeisenbergGridSpace> space;
  std::unique_ptr<ShortcutFamily> family;
  std::vector<NetLevel> levels;
};

struct HeisenbergBuildOptions {
  int grid_m{7};
  ShortcutConfig cfg{};  // levels cfg.min_level .. cfg.max_level on the main grid
  // Extra deep levels built on a finer windowed grid (empty = none).
  int deep_min_level{0};
  int deep_max_level{0};
  HeisenbergGridSpace::GridSpec deep_grid{
      8, {0.0, 0.25}, {0.0, 0.25}, {0.0, 0.03125}};
};

HeisenbergBuild build_heisenberg(const HeisenbergBuildOptions& opt);

}  // namespace shortcut
