#include "shortcut/kset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace shortcut {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_point(const HPoint& p) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "(%.12g, %.12g, %.12g)", p.x, p.y, p.z);
  return buf;
}

// [lo, hi] scaled by k, sign-aware.
void mul_interval(double k, double lo, double hi, double& out_lo,
                  double& out_hi) {
  if (k >= 0.0) {
    out_lo = k * lo;
    out_hi = k * hi;
  } else {
    out_lo = k * hi;
    out_hi = k * lo;
  }
}

// Range of the vertical part t(p) = z(c^{-1} p) over a coordinate box.
void vertical_range(const Box3& box, const HPoint& c, double& tlo,
                    double& thi) {
  double ax_lo, ax_hi, ay_lo, ay_hi;
  mul_interval(0.5 * c.y, box.xlo, box.xhi, ax_lo, ax_hi);
  mul_interval(-0.5 * c.x, box.ylo, box.yhi, ay_lo, ay_hi);
  tlo = box.zlo - c.z + ax_lo + ay_lo;
  thi = box.zhi - c.z + ax_hi + ay_hi;
}

// Upper bound for sup over the box of the box distance to c.
double sup_dist_bound(const Box3& box, const HPoint& c) {
  double px = std::max(std::abs(box.xlo - c.x), std::abs(box.xhi - c.x));
  double py = std::max(std::abs(box.ylo - c.y), std::abs(box.yhi - c.y));
  double tlo, thi;
  vertical_range(box, c, tlo, thi);
  double tmax = std::max(std::abs(tlo), std::abs(thi));
  return std::max(std::max(px, py), std::sqrt(tmax));
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t pack_word(const MultiIndex& word) {
  if (word.size() > 15) {
    throw std::invalid_argument("cell word longer than 15 digits");
  }
  std::uint64_t key = 1;
  for (std::uint8_t d : word) key = (key << 4) | d;
  return key;
}

MultiIndex unpack_word(std::uint64_t key) {
  int len = (63 - std::countl_zero(key)) / 4;
  MultiIndex word(static_cast<std::size_t>(len));
  for (int t = 0; t < len; ++t) {
    word[static_cast<std::size_t>(t)] =
        static_cast<std::uint8_t>((key >> (4 * (len - 1 - t))) & 15u);
  }
  return word;
}

std::uint64_t column_key(long long ix, long long iy) {
  auto ux = static_cast<std::uint32_t>(ix + 0x40000000ll);
  auto uy = static_cast<std::uint32_t>(iy + 0x40000000ll);
  return (static_cast<std::uint64_t>(ux) << 32) | uy;
}

}  // namespace

KsetDigit kset_digit(int d) {
  if (d < 0 || d >= kKsetBranch) {
    throw std::invalid_argument("map digit out of range");
  }
  return {d / 8, (d / 4) % 2, d % 4};
}

HPoint sim_apply(int digit, const HPoint& p) {
  KsetDigit g = kset_digit(digit);
  return {0.5 * (p.x + g.i), 0.5 * (p.y + g.j),
          0.25 * g.k + 0.25 * p.z + 0.125 * (g.i * p.y - g.j * p.x)};
}

HPoint sim_apply(const MultiIndex& word, const HPoint& p) {
  HPoint q = p;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    q = sim_apply(*it, q);
  }
  return q;
}

HPoint CellMap::apply(const HPoint& p) const {
  return {s * p.x + cx, s * p.y + cy, s * s * p.z + zx * p.x + zy * p.y + cz};
}

CellMap CellMap::child(int digit) const {
  KsetDigit g = kset_digit(digit);
  CellMap m;
  m.s = 0.5 * s;
  m.cx = cx + 0.5 * s * g.i;
  m.cy = cy + 0.5 * s * g.j;
  m.zx = 0.5 * zx - 0.125 * s * s * g.j;
  m.zy = 0.5 * zy + 0.125 * s * s * g.i;
  m.cz = cz + 0.25 * s * s * g.k + 0.5 * zx * g.i + 0.5 * zy * g.j;
  return m;
}

CellMap cell_map(const MultiIndex& word) {
  CellMap m;
  for (std::uint8_t d : word) m = m.child(d);
  return m;
}

Box3 kset_hull() {
  // Mapped exactly onto itself by all sixteen maps: the extreme vertical
  // images are k/4 + z/4 + (i y - j x)/8 at z = -1/6 resp. 7/6.
  return {0.0, 1.0, 0.0, 1.0, -1.0 / 6.0, 7.0 / 6.0};
}

Box3 cell_bounds(const CellMap& m) {
  Box3 h = kset_hull();
  Box3 out;
  out.xlo = m.cx;  // s >= 0 and the hull's planar box is [0,1]^2
  out.xhi = m.cx + m.s;
  out.ylo = m.cy;
  out.yhi = m.cy + m.s;
  double zx_lo, zx_hi, zy_lo, zy_hi;
  mul_interval(m.zx, h.xlo, h.xhi, zx_lo, zx_hi);
  mul_interval(m.zy, h.ylo, h.yhi, zy_lo, zy_hi);
  out.zlo = m.s * m.s * h.zlo + zx_lo + zy_lo + m.cz;
  out.zhi = m.s * m.s * h.zhi + zx_hi + zy_hi + m.cz;
  return out;
}

bool box_meets_ball(const Box3& box, const HPoint& center, double radius) {
  double px = std::max(std::max(box.xlo - center.x, center.x - box.xhi), 0.0);
  double py = std::max(std::max(box.ylo - center.y, center.y - box.yhi), 0.0);
  double tlo, thi;
  vertical_range(box, center, tlo, thi);
  double tmin = std::max(std::max(tlo, -thi), 0.0);
  double lb = std::max(std::max(px, py), std::sqrt(tmin));
  return lb < radius;
}

HPoint kset_model_a() { return {0.5, 0.5, 0.0}; }
HPoint kset_model_b() { return {0.5, 0.5, 1.0 / 64.0}; }

namespace {

void check_depth(int depth) {
  if (depth < 0 || depth > 6) {
    throw std::invalid_argument("sample depth must be between 0 and 6");
  }
}

// Lexicographic walk over all words of the given length.
template <typename Fn>
void for_each_cell(const CellMap& m, int depth, const Fn& fn) {
  if (depth == 0) {
    fn(m);
    return;
  }
  for (int d = 0; d < kKsetBranch; ++d) {
    for_each_cell(m.child(d), depth - 1, fn);
  }
}

std::vector<HPoint> images_at_depth(const HPoint& seed, int depth) {
  check_depth(depth);
  std::vector<HPoint> out;
  out.reserve(static_cast<std::size_t>(1) << (4 * depth));
  for_each_cell(CellMap{}, depth,
                [&](const CellMap& m) { out.push_back(m.apply(seed)); });
  return out;
}

}  // namespace

std::vector<HPoint> attractor_sample(int depth) {
  return images_at_depth(HPoint{}, depth);
}

std::vector<HPoint> level_centers(int level) {
  if (level < 3 || level > 9) {
    throw std::invalid_argument("level centers exist for levels 3..9");
  }
  return images_at_depth(kset_model_a(), level - 3);
}

double min_center_separation(int level) {
  std::vector<HPoint> cs = level_centers(level);
  if (cs.size() < 2) return kInf;
  double best = kInf;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      best = std::min(best, box_distance(cs[i], cs[j]));
    }
  }
  return best;
}

int prior_avoidance_violations(int level) {
  std::vector<HPoint> cs = level_centers(level);
  std::vector<HPoint> prior;
  for (int lower = 3; lower < level; ++lower) {
    for (const HPoint& e : images_at_depth(kset_model_a(), lower - 3)) {
      prior.push_back(e);
    }
    for (const HPoint& e : images_at_depth(kset_model_b(), lower - 3)) {
      prior.push_back(e);
    }
  }
  double r = std::ldexp(4.0, -level);
  int bad = 0;
  for (const HPoint& c : cs) {
    for (const HPoint& e : prior) {
      if (box_distance(c, e) < r) {
        ++bad;
        break;
      }
    }
  }
  return bad;
}

double cover_constant_estimate(int level, int sample_depth) {
  std::vector<HPoint> cs = level_centers(level);
  std::vector<HPoint> sample = attractor_sample(sample_depth);
  double worst = 0.0;
  for (const HPoint& p : sample) {
    double near = kInf;
    for (const HPoint& c : cs) {
      near = std::min(near, box_distance(p, c));
    }
    worst = std::max(worst, near);
  }
  return worst / std::ldexp(1.0, -level);
}

double fiber_z_spread_min(int depth) {
  check_depth(depth);
  std::vector<HPoint> sample = attractor_sample(depth);
  // Planar coordinates are exact multiples of 2^-depth.
  double scale = std::ldexp(1.0, depth);
  std::unordered_map<std::uint64_t, std::pair<double, double>> fibers;
  for (const HPoint& p : sample) {
    auto ix = static_cast<long long>(std::llround(p.x * scale));
    auto iy = static_cast<long long>(std::llround(p.y * scale));
    auto [it, fresh] =
        fibers.try_emplace(column_key(ix, iy), std::make_pair(p.z, p.z));
    if (!fresh) {
      it->second.first = std::min(it->second.first, p.z);
      it->second.second = std::max(it->second.second, p.z);
    }
  }
  double best = kInf;
  for (const auto& [key, mm] : fibers) {
    best = std::min(best, mm.second - mm.first);
  }
  return best;
}

KsetSpace::KsetSpace(int sample_depth) : depth_(sample_depth) {
  check_depth(sample_depth);
}

PointId KsetSpace::add_point(const HPoint& p) {
  HPoint q{p.x + 0.0, p.y + 0.0, p.z + 0.0};  // fold -0.0 into +0.0
  std::uint64_t h = splitmix(std::bit_cast<std::uint64_t>(q.x) ^
                             splitmix(std::bit_cast<std::uint64_t>(q.y) ^
                                      splitmix(std::bit_cast<std::uint64_t>(q.z))));
  for (;;) {
    auto it = dedup_.find(h);
    if (it == dedup_.end()) {
      PointId id = static_cast<PointId>(pts_.size());
      pts_.push_back(q);
      dedup_.emplace(h, id);
      return id;
    }
    if (pts_[static_cast<std::size_t>(it->second)] == q) return it->second;
    h = splitmix(h);  // rare: distinct points sharing a slot
  }
}

const HPoint& KsetSpace::point(PointId id) const {
  return pts_.at(static_cast<std::size_t>(id));
}

double KsetSpace::rho(PointId a, PointId b) const {
  return box_distance(point(a), point(b));
}

PointId KsetSpace::point_count() const {
  return static_cast<PointId>(pts_.size());
}

double KsetSpace::diameter() const {
  // Planar spread of the invariant box is 1; the vertical part of any
  // pair is at most 4/3 + 1/2.
  return std::sqrt(11.0 / 6.0);
}

std::string KsetSpace::describe(PointId id) const {
  return format_point(point(id));
}

std::uint64_t KsetSpace::sample_size() const {
  return static_cast<std::uint64_t>(1) << (4 * depth_);
}

namespace {

struct BallRef {
  HPoint c;
  double r;
};

std::uint64_t count_rec(const CellMap& m, int depth, int leaf_depth,
                        const std::vector<BallRef>& balls) {
  Box3 b = cell_bounds(m);
  bool any = false;
  for (const BallRef& ball : balls) {
    if (box_meets_ball(b, ball.c, ball.r)) {
      any = true;
      break;
    }
  }
  if (!any) return 0;
  for (const BallRef& ball : balls) {
    if (sup_dist_bound(b, ball.c) < ball.r) {
      return static_cast<std::uint64_t>(1) << (4 * (leaf_depth - depth));
    }
  }
  if (depth == leaf_depth) {
    HPoint rep = m.apply(kset_model_a());
    for (const BallRef& ball : balls) {
      if (box_distance(rep, ball.c) < ball.r) return 1;
    }
    return 0;
  }
  std::uint64_t total = 0;
  for (int d = 0; d < kKsetBranch; ++d) {
    total += count_rec(m.child(d), depth + 1, leaf_depth, balls);
  }
  return total;
}

std::optional<std::string> outside_rec(const CellMap& m, int depth,
                                       int leaf_depth,
                                       const std::vector<BallRef>& members,
                                       const std::vector<BallRef>& guards) {
  Box3 b = cell_bounds(m);
  bool any = false;
  for (const BallRef& ball : members) {
    if (box_meets_ball(b, ball.c, ball.r)) {
      any = true;
      break;
    }
  }
  if (!any) return std::nullopt;
  for (const BallRef& g : guards) {
    if (sup_dist_bound(b, g.c) <= g.r) return std::nullopt;  // fully guarded
  }
  if (depth == leaf_depth) {
    HPoint rep = m.apply(kset_model_a());
    bool member = false;
    for (const BallRef& ball : members) {
      if (box_distance(rep, ball.c) < ball.r) {
        member = true;
        break;
      }
    }
    if (!member) return std::nullopt;
    for (const BallRef& g : guards) {
      if (box_distance(rep, g.c) <= g.r) return std::nullopt;
    }
    return format_point(rep);
  }
  for (int d = 0; d < kKsetBranch; ++d) {
    if (auto hit = outside_rec(m.child(d), depth + 1, leaf_depth, members,
                               guards)) {
      return hit;
    }
  }
  return std::nullopt;
}

}  // namespace

std::uint64_t KsetSpace::count_in_union(std::span<const SpaceBall> balls) const {
  std::vector<BallRef> refs;
  refs.reserve(balls.size());
  for (const SpaceBall& b : balls) {
    if (b.radius > 0.0) refs.push_back({point(b.center), b.radius});
  }
  if (refs.empty()) return 0;
  return count_rec(CellMap{}, 0, depth_, refs);
}

std::optional<std::string> KsetSpace::union_point_outside(
    std::span<const SpaceBall> members, std::span<const SpaceBall> guards) const {
  std::vector<BallRef> ms, gs;
  for (const SpaceBall& b : members) {
    if (b.radius > 0.0) ms.push_back({point(b.center), b.radius});
  }
  for (const SpaceBall& b : guards) {
    gs.push_back({point(b.center), b.radius});
  }
  if (ms.empty()) return std::nullopt;
  return outside_rec(CellMap{}, 0, depth_, ms, gs);
}

PointId KsetSpace::random_sample_point(RngStream& rng) {
  CellMap m;
  for (int t = 0; t < depth_; ++t) {
    m = m.child(static_cast<int>(rng.index(kKsetBranch)));
  }
  return add_point(m.apply(kset_model_a()));
}

KsetSource::KsetSource(KsetSpace& space, int max_level)
    : space_(space), max_level_(max_level) {
  if (max_level < 3 || max_level > 18) {
    throw std::invalid_argument("kset source level must be in [3, 18]");
  }
}

PointId KsetSource::endpoint_id(const MultiIndex& word, bool second) {
  int level = 3 + static_cast<int>(word.size());
  if (level > max_level_) {
    throw std::invalid_argument("cell level exceeds the source's max level");
  }
  std::uint64_t key = pack_word(word);
  auto it = cells_.find(key);
  if (it == cells_.end()) {
    CellMap m = cell_map(word);
    PointId pa = space_.add_point(m.apply(kset_model_a()));
    PointId pb = space_.add_point(m.apply(kset_model_b()));
    it = cells_.emplace(key, std::make_pair(pa, pb)).first;
    roles_.emplace(pa, Role{word, false});
    roles_.emplace(pb, Role{word, true});
  }
  return second ? it->second.second : it->second.first;
}

void KsetSource::shortcuts_at(PointId p, int trunc,
                              const std::function<void(const Shortcut&)>& fn) {
  auto [lo, hi] = roles_.equal_range(p);
  for (auto it = lo; it != hi; ++it) {
    int level = 3 + static_cast<int>(it->second.word.size());
    if (level > trunc) continue;
    const auto& pair = cells_.at(pack_word(it->second.word));
    Shortcut sc;
    sc.a = pair.first;
    sc.b = pair.second;
    sc.level = level;
    sc.cost = 0.0;
    sc.center = -1;
    sc.radius = std::ldexp(1.0, -level);
    fn(sc);
  }
}

void KsetSource::descend(const MultiIndex& word, const CellMap& map,
                         const HPoint& at, double radius, int trunc,
                         const std::function<void(PointId)>& fn) {
  if (radius > 0.0 && !box_meets_ball(cell_bounds(map), at, radius)) return;
  PointId pa = endpoint_id(word, false);
  PointId pb = endpoint_id(word, true);
  if (radius <= 0.0 || box_distance(at, space_.point(pa)) < radius) fn(pa);
  if (radius <= 0.0 || box_distance(at, space_.point(pb)) < radius) fn(pb);
  int cap = std::min(trunc, max_level_) - 3;
  if (static_cast<int>(word.size()) >= cap) return;
  MultiIndex child = word;
  child.push_back(0);
  for (int d = 0; d < kKsetBranch; ++d) {
    child.back() = static_cast<std::uint8_t>(d);
    descend(child, map.child(d), at, radius, trunc, fn);
  }
}

void KsetSource::endpoints_near(PointId at, double radius, int trunc,
                                const std::function<void(PointId)>& fn) {
  if (std::min(trunc, max_level_) < 3) return;
  HPoint c = space_.point(at);  // copy: the walk below may grow the store
  if (pre_radius_ > 0.0 && radius > 0.0 &&
      box_distance(pre_center_, c) + radius <= pre_radius_) {
    serve_from_index(c, radius, trunc, fn);
    return;
  }
  descend(MultiIndex{}, CellMap{}, c, radius, trunc, fn);
}

void KsetSource::prefetch(PointId around, double radius) {
  columns_.clear();
  pre_center_ = space_.point(around);
  pre_radius_ = radius;
  pre_cell_ = std::ldexp(1.0, -(max_level_ - 3));
  if (radius <= 0.0) {
    pre_radius_ = 0.0;
    return;
  }
  prefetch_walk(CellMap{}, 0, 1);
  for (auto& [key, col] : columns_) {
    std::sort(col.begin(), col.end(),
              [](const ColEntry& a, const ColEntry& b) { return a.z < b.z; });
  }
}

void KsetSource::prefetch_walk(const CellMap& map, int depth,
                               std::uint64_t key) {
  if (!box_meets_ball(cell_bounds(map), pre_center_, pre_radius_)) return;
  auto it = cells_.find(key);
  if (it == cells_.end()) {
    PointId pa = space_.add_point(map.apply(kset_model_a()));
    PointId pb = space_.add_point(map.apply(kset_model_b()));
    it = cells_.emplace(key, std::make_pair(pa, pb)).first;
    MultiIndex word = unpack_word(key);
    roles_.emplace(pa, Role{word, false});
    roles_.emplace(pb, Role{word, true});
  }
  int level = 3 + depth;
  // Both endpoints share a planar position, hence a column.
  const HPoint& qa = space_.point(it->second.first);
  auto ix = static_cast<long long>(std::floor(qa.x / pre_cell_));
  auto iy = static_cast<long long>(std::floor(qa.y / pre_cell_));
  auto& col = columns_[column_key(ix, iy)];
  col.push_back({qa.z, it->second.first, level});
  col.push_back({space_.point(it->second.second).z, it->second.second, level});
  if (depth >= max_level_ - 3) return;
  for (int d = 0; d < kKsetBranch; ++d) {
    prefetch_walk(map.child(d), depth + 1, (key << 4) | static_cast<unsigned>(d));
  }
}

bool KsetSource::serve_from_index(const HPoint& at, double radius, int trunc,
                                  const std::function<void(PointId)>& fn) const {
  double h = pre_cell_;
  double rr = radius * radius;
  auto ixlo = static_cast<long long>(std::floor((at.x - radius) / h));
  auto ixhi = static_cast<long long>(std::floor((at.x + radius) / h));
  auto iylo = static_cast<long long>(std::floor((at.y - radius) / h));
  auto iyhi = static_cast<long long>(std::floor((at.y + radius) / h));
  for (long long ix = ixlo; ix <= ixhi; ++ix) {
    for (long long iy = iylo; iy <= iyhi; ++iy) {
      auto it = columns_.find(column_key(ix, iy));
      if (it == columns_.end()) continue;
      const std::vector<ColEntry>& col = it->second;
      // z window from the vertical part over this column's footprint.
      double bx = static_cast<double>(ix) * h;
      double by = static_cast<double>(iy) * h;
      double gx_lo, gx_hi, gy_lo, gy_hi;
      mul_interval(-0.5 * at.y, bx, bx + h, gx_lo, gx_hi);
      mul_interval(0.5 * at.x, by, by + h, gy_lo, gy_hi);
      double zlo = at.z + gx_lo + gy_lo - rr;
      double zhi = at.z + gx_hi + gy_hi + rr;
      auto first = std::lower_bound(
          col.begin(), col.end(), zlo,
          [](const ColEntry& e, double v) { return e.z < v; });
      for (auto e = first; e != col.end() && e->z <= zhi; ++e) {
        if (e->level > trunc) continue;
        if (box_distance(at, space_.point(e->id)) < radius) fn(e->id);
      }
    }
  }
  return true;
}

MultiIndex find_interior_cell(int sample_depth, double inflate, int probes,
                              RngStream& rng) {
  std::vector<HPoint> sample = attractor_sample(sample_depth);
  // Tight bound on the distance from any point of a depth-d cell to the
  // cell's representative; escapes beyond it are really off the set.
  double thresh = 1.5 * std::ldexp(1.0, -sample_depth);
  MultiIndex word(3);
  for (int c = 0; c < kKsetBranch * kKsetBranch * kKsetBranch; ++c) {
    word[0] = static_cast<std::uint8_t>(c / (kKsetBranch * kKsetBranch));
    word[1] = static_cast<std::uint8_t>((c / kKsetBranch) % kKsetBranch);
    word[2] = static_cast<std::uint8_t>(c % kKsetBranch);
    Box3 b = cell_bounds(cell_map(word));
    double dx = inflate * (b.xhi - b.xlo);
    double dy = inflate * (b.yhi - b.ylo);
    double dz = inflate * (b.zhi - b.zlo);
    Box3 big{b.xlo - dx, b.xhi + dx, b.ylo - dy, b.yhi + dy,
             b.zlo - dz, b.zhi + dz};
    bool ok = true;
    for (int t = 0; t < probes && ok; ++t) {
      HPoint p{rng.uniform(big.xlo, big.xhi), rng.uniform(big.ylo, big.yhi),
               rng.uniform(big.zlo, big.zhi)};
      bool close = false;
      for (const HPoint& s : sample) {
        if (box_distance(p, s) <= thresh) {
          close = true;
          break;
        }
      }
      ok = close;
    }
    if (ok) return word;
  }
  throw std::runtime_error("no interior cell found at depth 3");
}

}  // namespace shortcut
