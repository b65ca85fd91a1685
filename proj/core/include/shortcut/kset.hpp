#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shortcut/engine.hpp"
#include "shortcut/heisenberg.hpp"
#include "shortcut/space.hpp"

namespace shortcut {

// Word over the 16 self-similar maps; empty word is the identity.
// Composition order: first digit applied last (outermost).
using MultiIndex = std::vector<std::uint8_t>;

inline constexpr int kKsetBranch = 16;

// Digit d = i*8 + j*4 + k with i, j in {0,1}, k in {0,1,2,3}; the map is
// p -> (i/2, j/2, k/4) * dilate(1/2, p).
struct KsetDigit {
  int i, j, k;
};
KsetDigit kset_digit(int d);

HPoint sim_apply(int digit, const HPoint& p);
HPoint sim_apply(const MultiIndex& word, const HPoint& p);

// Composed similitude in closed form:
//   x' = s x + cx,  y' = s y + cy,  z' = s^2 z + zx x + zy y + cz.
struct CellMap {
  double s = 1.0;
  double cx = 0.0, cy = 0.0;
  double zx = 0.0, zy = 0.0, cz = 0.0;

  HPoint apply(const HPoint& p) const;
  CellMap child(int digit) const;  // this composed with one more map
};
CellMap cell_map(const MultiIndex& word);

struct Box3 {
  double xlo, xhi, ylo, yhi, zlo, zhi;
};

// Coordinate box mapped into itself by all 16 maps; contains the attractor.
Box3 kset_hull();
// Image of the hull under a composed map (interval arithmetic).
Box3 cell_bounds(const CellMap& map);
// Conservative: false only if the box certainly misses the open ball.
bool box_meets_ball(const Box3& box, const HPoint& center, double radius);

// Model pair inside the top-level tile; its distance is 1/8 and scales
// exactly by 2^-depth under the maps.
HPoint kset_model_a();  // (1/2, 1/2, 0)
HPoint kset_model_b();  // (1/2, 1/2, 1/64)

std::vector<HPoint> attractor_sample(int depth);  // images of 0; depth <= 6
std::vector<HPoint> level_centers(int level);     // model_a images, depth = level-3

// Exact minimum pairwise box distance over the level centers, by
// exhaustive scan; +inf for a single center.
double min_center_separation(int level);
// Level centers strictly inside open radius 4*2^-level of an endpoint of
// any lower level.  The construction admits none.
int prior_avoidance_violations(int level);
// max over the depth sample of distance to the nearest level center,
// divided by 2^-level.
double cover_constant_estimate(int level, int sample_depth);
// Minimum z-spread over planar fibers of the depth sample.
double fiber_z_spread_min(int depth);

// Growable exact point store on the attractor with cell-counting measure:
// the sample is the 16^depth cell representatives (images of model_a).
class KsetSpace final : public CountingSpace {
 public:
  explicit KsetSpace(int sample_depth = 6);

  PointId add_point(const HPoint& p);
  const HPoint& point(PointId id) const;
  int sample_depth() const { return depth_; }

  double rho(PointId a, PointId b) const override;
  PointId point_count() const override;
  double diameter() const override;
  std::string describe(PointId id) const override;

  std::uint64_t sample_size() const override;
  std::uint64_t count_in_union(std::span<const SpaceBall> balls) const override;
  std::optional<std::string> union_point_outside(
      std::span<const SpaceBall> members,
      std::span<const SpaceBall> guards) const override;
  PointId random_sample_point(RngStream& rng) override;

 private:
  int depth_;
  std::vector<HPoint> pts_;
  std::unordered_map<std::uint64_t, PointId> dedup_;
};

// Lazy zero-cost self-similar family: one model pair per cell, level =
// 3 + word length.  Endpoints are materialized in the space on demand.
class KsetSource final : public ShortcutSource {
 public:
  KsetSource(KsetSpace& space, int max_level);

  CountingSpace& space() override { return space_; }
  double lambda() const override { return 0.5; }
  int max_level() const override { return max_level_; }
  void endpoints_near(PointId at, double radius, int trunc,
                      const std::function<void(PointId)>& fn) override;
  void shortcuts_at(PointId p, int trunc,
                    const std::function<void(const Shortcut&)>& fn) override;

  // Materializes one endpoint of the cell pair (second = the 1/64 lift).
  PointId endpoint_id(const MultiIndex& word, bool second);

  // Optional accelerator for budgeted distance queries: materialize every
  // cell meeting the closed ball and serve endpoint queries from a
  // z-sorted column index while they stay inside it.  Queries escaping
  // the region fall back to the lazy descent, so answers never change.
  void prefetch(PointId around, double radius);

 private:
  struct Role {
    MultiIndex word;
    bool second;
  };
  struct ColEntry {
    double z;
    PointId id;
    int level;
  };
  void descend(const MultiIndex& word, const CellMap& map, const HPoint& at,
               double radius, int trunc, const std::function<void(PointId)>& fn);
  void prefetch_walk(const CellMap& map, int depth, std::uint64_t key);
  bool serve_from_index(const HPoint& at, double radius, int trunc,
                        const std::function<void(PointId)>& fn) const;

  KsetSpace& space_;
  int max_level_;
  std::unordered_multimap<PointId, Role> roles_;
  std::unordered_map<std::uint64_t, std::pair<PointId, PointId>> cells_;

  // Prefetch state; pre_radius_ == 0 means disabled.
  std::unordered_map<std::uint64_t, std::vector<ColEntry>> columns_;
  HPoint pre_center_{};
  double pre_radius_{0.0};
  double pre_cell_{0.0};
};

// First depth-3 cell (lex digit order) whose inflated bounds stay inside
// the sampled attractor; pairs from it are used for scaling equality.
MultiIndex find_interior_cell(int sample_depth, double inflate, int probes,
                              RngStream& rng);

}  // namespace shortcut
