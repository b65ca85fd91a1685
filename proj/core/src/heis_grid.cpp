#include "shortcut/heis_grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace shortcut {

namespace {

std::int64_t axis_count(const std::array<double, 2>& range, double step) {
  return static_cast<std::int64_t>(std::llround((range[1] - range[0]) / step));
}

// Indices are exact: every coordinate we feed in is an exact dyadic
// rational, so the divisions below are exact and floor/ceil never see
// a rounded quotient.
std::int64_t floor_index(double v, double origin, double step) {
  return static_cast<std::int64_t>(std::floor((v - origin) / step));
}

std::int64_t ceil_index(double v, double origin, double step) {
  return static_cast<std::int64_t>(std::ceil((v - origin) / step));
}

std::string format_point(double x, double y, double z) {
  char buf[120];
  std::snprintf(buf, sizeof buf, "(%.12g, %.12g, %.12g)", x, y, z);
  return buf;
}

// The ball around c meets the column through (x, y) in a z-interval
// centred at the twisted height below (box metric: planar sup distance
// plus a pure vertical part after left translation).
double column_center(const HPoint& c, double x, double y) {
  return c.z + 0.5 * (c.x * y - c.y * x);
}

double planar_gap(const HPoint& c, double x, double y) {
  return std::max(std::abs(c.x - x), std::abs(c.y - y));
}

struct ZInterval {
  double lo, hi;
};

void sort_by_lo(std::vector<ZInterval>& ivs) {
  std::sort(ivs.begin(), ivs.end(),
            [](const ZInterval& a, const ZInterval& b) { return a.lo < b.lo; });
}

// Planar sup-norm bucket index; gather returns a superset of the points
// within the query radius.
class PlanarBuckets {
 public:
  explicit PlanarBuckets(double cell) : cell_(cell > 0 ? cell : 1.0) {}

  void add(int idx, double x, double y) {
    map_[key(bucket(x), bucket(y))].push_back(idx);
  }

  void gather(double x, double y, double r, std::vector<int>& out) const {
    out.clear();
    if (map_.empty()) return;
    const std::int64_t kx0 = bucket(x - r), kx1 = bucket(x + r);
    const std::int64_t ky0 = bucket(y - r), ky1 = bucket(y + r);
    for (std::int64_t kx = kx0; kx <= kx1; ++kx) {
      for (std::int64_t ky = ky0; ky <= ky1; ++ky) {
        auto it = map_.find(key(kx, ky));
        if (it != map_.end()) {
          out.insert(out.end(), it->second.begin(), it->second.end());
        }
      }
    }
  }

 private:
  std::int64_t bucket(double v) const {
    return static_cast<std::int64_t>(std::floor(v / cell_));
  }
  static std::uint64_t key(std::int64_t a, std::int64_t b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(b));
  }

  double cell_;
  std::unordered_map<std::uint64_t, std::vector<int>> map_;
};

}  // namespace

double HeisenbergGridSpace::GridSpec::step_xy() const {
  return std::ldexp(1.0, -m);
}

double HeisenbergGridSpace::GridSpec::step_z() const {
  return std::ldexp(1.0, -2 * m);
}

std::uint64_t HeisenbergGridSpace::GridSpec::columns() const {
  return static_cast<std::uint64_t>(axis_count(x, step_xy())) *
         static_cast<std::uint64_t>(axis_count(y, step_xy()));
}

std::uint64_t HeisenbergGridSpace::GridSpec::column_height() const {
  return static_cast<std::uint64_t>(axis_count(z, step_z()));
}

std::uint64_t HeisenbergGridSpace::GridSpec::size() const {
  return columns() * column_height();
}

namespace {

void check_axis(const char* name, const std::array<double, 2>& range,
                double step) {
  const std::int64_t n = axis_count(range, step);
  if (n < 1) {
    throw std::invalid_argument(std::string("grid range on ") + name +
                                " is empty");
  }
  if (range[0] + static_cast<double>(n) * step != range[1]) {
    throw std::invalid_argument(std::string("grid range on ") + name +
                                " is not a whole number of steps");
  }
}

}  // namespace

HeisenbergGridSpace::HeisenbergGridSpace(GridSpec grid) : grid_(grid) {
  if (grid_.m < 1 || grid_.m > 15) {
    throw std::invalid_argument("grid resolution m must be in [1, 15]");
  }
  check_axis("x", grid_.x, grid_.step_xy());
  check_axis("y", grid_.y, grid_.step_xy());
  check_axis("z", grid_.z, grid_.step_z());
}

bool HeisenbergGridSpace::contains(const HPoint& p) const {
  auto on_axis = [](double v, const std::array<double, 2>& range, double step) {
    const std::int64_t i = floor_index(v, range[0], step);
    return i >= 0 && i < axis_count(range, step) &&
           range[0] + static_cast<double>(i) * step == v;
  };
  return on_axis(p.x, grid_.x, grid_.step_xy()) &&
         on_axis(p.y, grid_.y, grid_.step_xy()) &&
         on_axis(p.z, grid_.z, grid_.step_z());
}

HPoint HeisenbergGridSpace::snap(const HPoint& p) const {
  auto clamp_axis = [](double v, const std::array<double, 2>& range,
                       double step) {
    const std::int64_t n = axis_count(range, step);
    std::int64_t i = static_cast<std::int64_t>(std::llround((v - range[0]) / step));
    i = std::clamp<std::int64_t>(i, 0, n - 1);
    return range[0] + static_cast<double>(i) * step;
  };
  return HPoint{clamp_axis(p.x, grid_.x, grid_.step_xy()),
                clamp_axis(p.y, grid_.y, grid_.step_xy()),
                clamp_axis(p.z, grid_.z, grid_.step_z())};
}

PointId HeisenbergGridSpace::add_point(const HPoint& p) {
  const ExactKey key{p.x, p.y, p.z};
  auto it = dedup_.find(key);
  if (it != dedup_.end()) return it->second;
  const PointId id = static_cast<PointId>(pts_.size());
  pts_.push_back(p);
  dedup_.emplace(key, id);
  return id;
}

double HeisenbergGridSpace::rho(PointId a, PointId b) const {
  return box_distance(pts_.at(static_cast<std::size_t>(a)),
                      pts_.at(static_cast<std::size_t>(b)));
}

double HeisenbergGridSpace::diameter() const {
  // Upper bound: the twist term is at most max|x| * max|y|.
  const double sx = grid_.x[1] - grid_.x[0];
  const double sy = grid_.y[1] - grid_.y[0];
  const double sz = grid_.z[1] - grid_.z[0];
  const double mx = std::max(std::abs(grid_.x[0]), std::abs(grid_.x[1]));
  const double my = std::max(std::abs(grid_.y[0]), std::abs(grid_.y[1]));
  return std::max({sx, sy, std::sqrt(sz + mx * my)});
}

std::string HeisenbergGridSpace::describe(PointId id) const {
  const HPoint& p = pts_.at(static_cast<std::size_t>(id));
  return format_point(p.x, p.y, p.z);
}

std::size_t HeisenbergGridSpace::ExactKeyHash::operator()(
    const ExactKey& k) const {
  auto mix = [](std::uint64_t h, double v) {
    h ^= std::bit_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) +
         (h >> 2);
    return h;
  };
  std::uint64_t h = 0x243f6a8885a308d3ull;
  h = mix(h, k.x);
  h = mix(h, k.y);
  h = mix(h, k.z);
  return static_cast<std::size_t>(h);
}

std::vector<PointId> HeisenbergGridSpace::greedy_net_on(
    const GridSpec& scan, double separation, std::span<const PointId> forbidden,
    double forbidden_radius) {
  if (separation <= 0) {
    throw std::invalid_argument("greedy net: separation must be positive");
  }
  const double h = scan.step_xy();
  const double zs = scan.step_z();
  const double z0 = scan.z[0];
  const std::int64_t nx = axis_count(scan.x, h);
  const std::int64_t ny = axis_count(scan.y, h);
  const std::int64_t nz = axis_count(scan.z, zs);
  const double sep2 = separation * separation;
  const double fr2 = forbidden_radius * forbidden_radius;

  PlanarBuckets forb_idx(std::max(forbidden_radius, h));
  for (std::size_t i = 0; i < forbidden.size(); ++i) {
    const HPoint& f = pts_.at(static_cast<std::size_t>(forbidden[i]));
    forb_idx.add(static_cast<int>(i), f.x, f.y);
  }
  PlanarBuckets acc_idx(std::max(separation, h));

  std::vector<PointId> out;
  std::vector<HPoint> accepted;
  std::vector<int> cand;
  std::vector<ZInterval> excl;

  for (std::int64_t ix = 0; ix < nx; ++ix) {
    const double x = scan.x[0] + static_cast<double>(ix) * h;
    for (std::int64_t iy = 0; iy < ny; ++iy) {
      const double y = scan.y[0] + static_cast<double>(iy) * h;
      excl.clear();
      if (forbidden_radius > 0 && !forbidden.empty()) {
        forb_idx.gather(x, y, forbidden_radius, cand);
        for (int ci : cand) {
          const HPoint& c = pts_[static_cast<std::size_t>(forbidden[ci])];
          if (planar_gap(c, x, y) >= forbidden_radius) continue;
          const double t = column_center(c, x, y);
          excl.push_back({t - fr2, t + fr2});
        }
      }
      acc_idx.gather(x, y, separation, cand);
      for (int ci : cand) {
        const HPoint& c = accepted[static_cast<std::size_t>(ci)];
        if (planar_gap(c, x, y) >= separation) continue;
        const double t = column_center(c, x, y);
        excl.push_back({t - sep2, t + sep2});
      }
      sort_by_lo(excl);

      // Ascending z sweep; exclusion intervals are open, so a sample
      // sitting exactly on an interval endpoint stays admissible.
      std::size_t k = 0;
      double maxhi = -std::numeric_limits<double>::infinity();
      std::int64_t iz = 0;
      while (iz < nz) {
        const double z = z0 + static_cast<double>(iz) * zs;
        while (k < excl.size() && excl[k].lo < z) {
          maxhi = std::max(maxhi, excl[k].hi);
          ++k;
        }
        if (z < maxhi) {
          iz = std::max(iz + 1, ceil_index(maxhi, z0, zs));
          continue;
        }
        const HPoint p{x, y, z};
        out.push_back(add_point(p));
        acc_idx.add(static_cast<int>(accepted.size()), x, y);
        accepted.push_back(p);
        // The new point excludes the open window (z - sep^2, z + sep^2)
        // of its own column; later columns see it through acc_idx.
        iz = std::max(iz + 1, ceil_index(z + sep2, z0, zs));
      }
    }
  }
  return out;
}

std::optional<std::string> HeisenbergGridSpace::first_uncovered_on(
    const GridSpec& scan, std::span<const PointId> centers,
    double cover_radius) {
  if (cover_radius <= 0) {
    throw std::invalid_argument("coverage scan: radius must be positive");
  }
  const double h = scan.step_xy();
  const double zs = scan.step_z();
  const double z0 = scan.z[0];
  const std::int64_t nx = axis_count(scan.x, h);
  const std::int64_t ny = axis_count(scan.y, h);
  const std::int64_t nz = axis_count(scan.z, zs);
  const double r2 = cover_radius * cover_radius;

  PlanarBuckets idx(std::max(cover_radius, h));
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const HPoint& c = pts_.at(static_cast<std::size_t>(centers[i]));
    idx.add(static_cast<int>(i), c.x, c.y);
  }

  std::vector<int> cand;
  std::vector<ZInterval> cov;
  for (std::int64_t ix = 0; ix < nx; ++ix) {
    const double x = scan.x[0] + static_cast<double>(ix) * h;
    for (std::int64_t iy = 0; iy < ny; ++iy) {
      const double y = scan.y[0] + static_cast<double>(iy) * h;
      idx.gather(x, y, cover_radius, cand);
      cov.clear();
      for (int ci : cand) {
        const HPoint& c = pts_[static_cast<std::size_t>(centers[ci])];
        if (planar_gap(c, x, y) > cover_radius) continue;
        const double t = column_center(c, x, y);
        cov.push_back({t - r2, t + r2});
      }
      sort_by_lo(cov);

      // Coverage is at closed radius, so intervals are closed too.
      std::size_t k = 0;
      double maxhi = -std::numeric_limits<double>::infinity();
      std::int64_t iz = 0;
      while (iz < nz) {
        const double z = z0 + static_cast<double>(iz) * zs;
        while (k < cov.size() && cov[k].lo <= z) {
          maxhi = std::max(maxhi, cov[k].hi);
          ++k;
        }
        if (z <= maxhi) {
          iz = std::max(iz + 1, floor_index(maxhi, z0, zs) + 1);
          continue;
        }
        return format_point(x, y, z);
      }
    }
  }
  return std::nullopt;
}

std::vector<PointId> HeisenbergGridSpace::greedy_net(
    double separation, std::span<const PointId> forbidden,
    double forbidden_radius) {
  return greedy_net_on(grid_, separation, forbidden, forbidden_radius);
}

std::optional<std::string> HeisenbergGridSpace::first_uncovered(
    std::span<const PointId> centers, double cover_radius) {
  return first_uncovered_on(grid_, centers, cover_radius);
}

std::uint64_t HeisenbergGridSpace::count_in_union(
    std::span<const SpaceBall> balls) const {
  struct Ball {
    HPoint c;
    double r;
  };
  std::vector<Ball> bs;
  double max_r = 0;
  for (const SpaceBall& b : balls) {
    if (b.radius <= 0) continue;
    bs.push_back({pts_.at(static_cast<std::size_t>(b.center)), b.radius});
    max_r = std::max(max_r, b.radius);
  }
  if (bs.empty()) return 0;

  const double h = grid_.step_xy();
  const double zs = grid_.step_z();
  const double z0 = grid_.z[0];
  const std::int64_t nx = axis_count(grid_.x, h);
  const std::int64_t ny = axis_count(grid_.y, h);
  const std::int64_t nz = axis_count(grid_.z, zs);

  PlanarBuckets idx(std::max(max_r, h));
  for (std::size_t i = 0; i < bs.size(); ++i) {
    idx.add(static_cast<int>(i), bs[i].c.x, bs[i].c.y);
  }

  std::uint64_t total = 0;
  std::vector<int> cand;
  std::vector<ZInterval> ivs;
  for (std::int64_t ix = 0; ix < nx; ++ix) {
    const double x = grid_.x[0] + static_cast<double>(ix) * h;
    for (std::int64_t iy = 0; iy < ny; ++iy) {
      const double y = grid_.y[0] + static_cast<double>(iy) * h;
      idx.gather(x, y, max_r, cand);
      ivs.clear();
      for (int ci : cand) {
        const Ball& b = bs[static_cast<std::size_t>(ci)];
        if (planar_gap(b.c, x, y) >= b.r) continue;
        const double t = column_center(b.c, x, y);
        const double r2 = b.r * b.r;
        ivs.push_back({t - r2, t + r2});
      }
      if (ivs.empty()) continue;
      sort_by_lo(ivs);

      // Merge open intervals (strict overlap only) and count the grid
      // heights strictly inside each merged piece.
      double lo = ivs[0].lo, hi = ivs[0].hi;
      auto flush = [&]() {
        const std::int64_t a = std::max<std::int64_t>(
            floor_index(lo, z0, zs) + 1, 0);
        const std::int64_t b = std::min<std::int64_t>(
            ceil_index(hi, z0, zs) - 1, nz - 1);
        if (b >= a) total += static_cast<std::uint64_t>(b - a + 1);
      };
      for (std::size_t i = 1; i < ivs.size(); ++i) {
        if (ivs[i].lo < hi) {
          hi = std::max(hi, ivs[i].hi);
        } else {
          flush();
          lo = ivs[i].lo;
          hi = ivs[i].hi;
        }
      }
      flush();
    }
  }
  return total;
}

std::optional<std::string> HeisenbergGridSpace::union_point_outside(
    std::span<const SpaceBall> members, std::span<const SpaceBall> guards) const {
  struct Ball {
    HPoint c;
    double r;
  };
  std::vector<Ball> mem, grd;
  double mem_r = 0, grd_r = 0;
  for (const SpaceBall& b : members) {
    if (b.radius <= 0) continue;
    mem.push_back({pts_.at(static_cast<std::size_t>(b.center)), b.radius});
    mem_r = std::max(mem_r, b.radius);
  }
  for (const SpaceBall& b : guards) {
    if (b.radius < 0) continue;
    grd.push_back({pts_.at(static_cast<std::size_t>(b.center)), b.radius});
    grd_r = std::max(grd_r, b.radius);
  }
  if (mem.empty()) return std::nullopt;

  const double h = grid_.step_xy();
  const double zs = grid_.step_z();
  const double z0 = grid_.z[0];
  const std::int64_t nx = axis_count(grid_.x, h);
  const std::int64_t ny = axis_count(grid_.y, h);
  const std::int64_t nz = axis_count(grid_.z, zs);

  PlanarBuckets mem_idx(std::max(mem_r, h));
  for (std::size_t i = 0; i < mem.size(); ++i) {
    mem_idx.add(static_cast<int>(i), mem[i].c.x, mem[i].c.y);
  }
  PlanarBuckets grd_idx(std::max(grd_r, h));
  for (std::size_t i = 0; i < grd.size(); ++i) {
    grd_idx.add(static_cast<int>(i), grd[i].c.x, grd[i].c.y);
  }

  std::vector<int> cand;
  std::vector<ZInterval> mem_iv, grd_iv, mem_merged, grd_merged;
  for (std::int64_t ix = 0; ix < nx; ++ix) {
    const double x = grid_.x[0] + static_cast<double>(ix) * h;
    for (std::int64_t iy = 0; iy < ny; ++iy) {
      const double y = grid_.y[0] + static_cast<double>(iy) * h;
      mem_idx.gather(x, y, mem_r, cand);
      mem_iv.clear();
      for (int ci : cand) {
        const Ball& b = mem[static_cast<std::size_t>(ci)];
        if (planar_gap(b.c, x, y) >= b.r) continue;  // members are open balls
        const double t = column_center(b.c, x, y);
        mem_iv.push_back({t - b.r * b.r, t + b.r * b.r});
      }
      if (mem_iv.empty()) continue;

      grd_idx.gather(x, y, grd_r, cand);
      grd_iv.clear();
      for (int ci : cand) {
        const Ball& b = grd[static_cast<std::size_t>(ci)];
        if (planar_gap(b.c, x, y) > b.r) continue;  // guards are closed balls
        const double t = column_center(b.c, x, y);
        grd_iv.push_back({t - b.r * b.r, t + b.r * b.r});
      }

      sort_by_lo(mem_iv);
      mem_merged.clear();
      for (const ZInterval& iv : mem_iv) {
        if (!mem_merged.empty() && iv.lo < mem_merged.back().hi) {
          mem_merged.back().hi = std::max(mem_merged.back().hi, iv.hi);
        } else {
          mem_merged.push_back(iv);
        }
      }
      sort_by_lo(grd_iv);
      grd_merged.clear();
      for (const ZInterval& iv : grd_iv) {
        if (!grd_merged.empty() && iv.lo <= grd_merged.back().hi) {
          grd_merged.back().hi = std::max(grd_merged.back().hi, iv.hi);
        } else {
          grd_merged.push_back(iv);
        }
      }

      for (const ZInterval& piece : mem_merged) {
        std::int64_t iz =
            std::max<std::int64_t>(floor_index(piece.lo, z0, zs) + 1, 0);
        const std::int64_t iz_end =
            std::min<std::int64_t>(ceil_index(piece.hi, z0, zs) - 1, nz - 1);
        while (iz <= iz_end) {
          const double z = z0 + static_cast<double>(iz) * zs;
          // Last guard piece starting at or before z, if any.
          auto it = std::upper_bound(
              grd_merged.begin(), grd_merged.end(), z,
              [](double v, const ZInterval& g) { return v < g.lo; });
          if (it != grd_merged.begin() && std::prev(it)->hi >= z) {
            iz = std::max(iz + 1, floor_index(std::prev(it)->hi, z0, zs) + 1);
            continue;
          }
          return format_point(x, y, z);
        }
      }
    }
  }
  return std::nullopt;
}

PointId HeisenbergGridSpace::random_sample_point(RngStream& rng) {
  const double h = grid_.step_xy();
  const double zs = grid_.step_z();
  const std::uint64_t nx =
      static_cast<std::uint64_t>(axis_count(grid_.x, h));
  const std::uint64_t ny =
      static_cast<std::uint64_t>(axis_count(grid_.y, h));
  const std::uint64_t nz =
      static_cast<std::uint64_t>(axis_count(grid_.z, zs));
  const double x = grid_.x[0] + static_cast<double>(rng.index(nx)) * h;
  const double y = grid_.y[0] + static_cast<double>(rng.index(ny)) * h;
  const double z = grid_.z[0] + static_cast<double>(rng.index(nz)) * zs;
  return add_point(HPoint{x, y, z});
}

std::pair<PointId, PointId> HeisenbergGridSpace::choose_endpoints(
    PointId center, double radius, int level, double min_gap) {
  (void)level;
  const HPoint c = pts_.at(static_cast<std::size_t>(center));
  const PointId b = add_point(mul(c, HPoint{0.0, 0.0, radius * radius / 4.0}));
  const double gap = rho(center, b);  // exactly radius / 2 on dyadic input
  if (gap + 1e-12 * std::max(1.0, min_gap) < min_gap) {
    throw FamilyGeometryError(
        "vertical endpoint rule gives gap " + std::to_string(gap) +
        " below the required minimum " + std::to_string(min_gap) +
        " (needs scale factor <= 1/2)");
  }
  if (gap > radius * (1.0 + 1e-12)) {
    throw FamilyGeometryError("vertical endpoint left the centre ball");
  }
  return {center, b};
}

HeisenbergBuild build_heisenberg(const HeisenbergBuildOptions& opt) {
  HeisenbergGridSpace::GridSpec spec;
  spec.m = opt.grid_m;
  auto space = std::make_unique<HeisenbergGridSpace>(spec);
  auto family = std::make_unique<ShortcutFamily>(opt.cfg);

  HeisenbergBuild out;
  for (int n = opt.cfg.min_level; n <= opt.cfg.max_level; ++n) {
    out.levels.push_back(build_level(*space, *family, n));
  }

  if (opt.deep_max_level >= opt.deep_min_level && opt.deep_min_level > 0) {
    if (opt.deep_min_level <= opt.cfg.max_level) {
      throw std::invalid_argument("deep levels must extend the main range");
    }
    const ShortcutConfig& cfg = opt.cfg;
    for (int n = opt.deep_min_level; n <= opt.deep_max_level; ++n) {
      NetLevel net;
      net.level = n;
      const double sep = cfg.separation(n);
      const std::vector<PointId> forbidden = family->endpoints(n - 1);
      net.centers = space->greedy_net_on(opt.deep_grid, sep, forbidden, sep);
      std::vector<PointId> anchors = net.centers;
      anchors.insert(anchors.end(), forbidden.begin(), forbidden.end());
      if (auto witness = space->first_uncovered_on(
              opt.deep_grid, anchors, cfg.cover_constant * cfg.ball_radius(n))) {
        throw CoverageError(*witness, n);
      }
      net.notes.push_back("level built on a finer windowed sample");
      place_shortcuts(*space, *family, net);
      out.levels.push_back(std::move(net));
    }
  }

  out.space = std::move(space);
  out.family = std::move(family);
  return out;
}

}  // namespace shortcut
