#include "shortcut/itinerary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shortcut {

CostSchedule CostSchedule::geometric(double ratio) {
  CostSchedule s;
  s.kind_ = Kind::kGeometric;
  s.ratio_ = ratio;
  return s;
}

CostSchedule CostSchedule::zero() {
  CostSchedule s;
  s.kind_ = Kind::kZero;
  return s;
}

CostSchedule CostSchedule::table(std::vector<double> alphas) {
  CostSchedule s;
  s.kind_ = Kind::kTable;
  s.table_ = std::move(alphas);
  return s;
}

double CostSchedule::alpha(int level) const {
  if (level < 1) throw std::invalid_argument("alpha: level must be >= 1");
  switch (kind_) {
    case Kind::kGeometric:
      return std::pow(ratio_, level);
    case Kind::kZero:
      return 0.0;
    case Kind::kTable: {
      if (table_.empty()) return 0.0;
      std::size_t i = std::min<std::size_t>(level, table_.size());
      return table_[i - 1];
    }
  }
  return 0.0;
}

void CostSchedule::validate(int max_level) const {
  double prev = 1.0;
  for (int n = 1; n <= max_level; ++n) {
    double a = alpha(n);
    if (!(a >= 0.0) || a >= 1.0) {
      throw std::invalid_argument("discount factor out of [0,1) at level " +
                                  std::to_string(n));
    }
    if (a > prev) {
      throw std::invalid_argument("discount factors must be non-increasing");
    }
    prev = a;
  }
}

ShortcutConfig ShortcutConfig::with_lambda(double lambda) {
  ShortcutConfig cfg;
  cfg.lambda = lambda;
  cfg.cover_constant = 8.0 + 1.0 / lambda;
  return cfg;
}

double ShortcutConfig::separation(int level) const {
  return 4.0 * std::pow(lambda, level);
}

double ShortcutConfig::ball_radius(int level) const {
  return std::pow(lambda, level);
}

double ShortcutConfig::level_gap(int level) const {
  return std::pow(lambda, level + 1);
}

ShortcutFamily::ShortcutFamily(ShortcutConfig cfg) : cfg_(cfg) {
  if (!(cfg_.lambda > 0.0) || cfg_.lambda >= 1.0) {
    throw std::invalid_argument("scale ratio must lie in (0,1)");
  }
  if (cfg_.cover_constant < 4.0) {
    throw std::invalid_argument("cover constant must be >= 4");
  }
  if (cfg_.min_level < 1 || cfg_.max_level < cfg_.min_level) {
    throw std::invalid_argument("bad level range");
  }
  cfg_.schedule.validate(cfg_.max_level);
}

int ShortcutFamily::add(const BaseSpace& space, Shortcut sc) {
  if (sc.a == sc.b) throw std::invalid_argument("degenerate shortcut");
  if (sc.level < 1) throw std::invalid_argument("shortcut level must be >= 1");
  double d = space.rho(sc.a, sc.b);
  double tol = 1e-12 * std::max(1.0, d);
  if (!(sc.cost >= 0.0) || sc.cost > d + tol) {
    throw FamilyGeometryError("shortcut cost " + std::to_string(sc.cost) +
                              " exceeds base distance " + std::to_string(d));
  }
  if (sc.center >= 0) {
    double tol_r = 1e-12 * std::max(1.0, sc.radius);
    if (space.rho(sc.a, sc.center) > sc.radius + tol_r ||
        space.rho(sc.b, sc.center) > sc.radius + tol_r) {
      throw FamilyGeometryError("shortcut endpoints escape their ball around " +
                                space.describe(sc.center));
    }
  }
  auto key = std::minmax(sc.a, sc.b);
  if (lookup_.count({key.first, key.second})) {
    throw std::invalid_argument("duplicate shortcut pair");
  }
  int idx = static_cast<int>(all_.size());
  lookup_.emplace(std::make_pair(key.first, key.second), idx);
  at_point_[sc.a].push_back(idx);
  at_point_[sc.b].push_back(idx);
  max_level_ = std::max(max_level_, sc.level);
  all_.push_back(sc);
  return idx;
}

const Shortcut* ShortcutFamily::find(PointId a, PointId b) const {
  auto key = std::minmax(a, b);
  auto it = lookup_.find({key.first, key.second});
  return it == lookup_.end() ? nullptr : &all_[it->second];
}

std::vector<int> ShortcutFamily::level_indices(int level) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < all_.size(); ++i) {
    if (all_[i].level == level) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::span<const int> ShortcutFamily::shortcuts_at(PointId p) const {
  static const std::vector<int> kEmpty;
  auto it = at_point_.find(p);
  return it == at_point_.end() ? std::span<const int>(kEmpty)
                               : std::span<const int>(it->second);
}

std::vector<PointId> ShortcutFamily::endpoints(int max_level) const {
  std::vector<PointId> out;
  for (const auto& sc : all_) {
    if (sc.level > max_level) continue;
    out.push_back(sc.a);
    out.push_back(sc.b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double ShortcutFamily::truncation_error(int trunc) const {
  return 8.0 * std::pow(cfg_.lambda, trunc + 1) / (1.0 - cfg_.lambda);
}

double step_cost(PointId a, PointId b, const ShortcutFamily& family,
                 const BaseSpace& space) {
  if (a == b) return 0.0;
  if (const Shortcut* sc = family.find(a, b)) return sc->cost;
  return space.rho(a, b);
}

double itinerary_cost(const Itinerary& it, const ShortcutFamily& family,
                      const BaseSpace& space) {
  double c = 0.0;
  for (std::size_t i = 0; i + 1 < it.points.size(); ++i) {
    c += step_cost(it.points[i], it.points[i + 1], family, space);
  }
  return c;
}

ItineraryShape classify(const Itinerary& it, const ShortcutFamily& family) {
  ItineraryShape shape;
  const auto& p = it.points;
  if (p.size() < 2 || p.size() % 2 != 0) return shape;
  // Step s joins p[s-1] and p[s]; odd steps are walks (never a shortcut
  // pair, stationary allowed), even steps must be shortcut pairs.
  for (std::size_t s = 1; s < p.size(); ++s) {
    const Shortcut* sc = family.find(p[s - 1], p[s]);
    if (s % 2 == 0) {
      if (!sc) return shape;
      shape.levels.push_back(sc->level);
    } else if (sc) {
      return shape;
    }
  }
  shape.alternating = true;
  shape.valley = true;
  bool rising = false;
  for (std::size_t k = 1; k < shape.levels.size(); ++k) {
    if (shape.levels[k] > shape.levels[k - 1]) {
      rising = true;
    } else if (shape.levels[k] < shape.levels[k - 1] && rising) {
      shape.valley = false;
      break;
    }
  }
  return shape;
}

Itinerary make_alternating(const Itinerary& it, const ShortcutFamily& family,
                           const BaseSpace& space) {
  (void)space;
  if (it.points.empty()) {
    throw std::invalid_argument("empty itinerary");
  }
  // Collapse out-and-back bounces p -> q -> p first: they contribute two
  // steps of equal cost and no displacement, so removal never costs more.
  // Without this, a pair traversed there-and-back-and-there again leaves a
  // merged walk that is itself a shortcut pair and reduction cannot finish.
  std::vector<PointId> pts = it.points;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i + 2 < pts.size(); ++i) {
      if (pts[i] == pts[i + 2] && pts[i] != pts[i + 1]) {
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i + 1),
                  pts.begin() + static_cast<std::ptrdiff_t>(i + 3));
        changed = true;
        break;
      }
    }
  }
  // Shortcut traversals in order; everything between them is merged into
  // single walks, which cannot cost more by the triangle inequality.
  std::vector<std::pair<PointId, PointId>> traversals;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    PointId a = pts[i], b = pts[i + 1];
    if (a != b && family.find(a, b)) traversals.emplace_back(a, b);
  }
  Itinerary out;
  out.points.push_back(pts.front());
  for (const auto& [a, b] : traversals) {
    out.points.push_back(a);
    out.points.push_back(b);
  }
  out.points.push_back(pts.back());
  // A merged walk can itself hit a shortcut pair; splice it in as a
  // traversal between stationary walks so the parity stays intact.
  for (std::size_t s = 1; s < out.points.size(); s += 2) {
    PointId a = out.points[s - 1], b = out.points[s];
    if (a != b && family.find(a, b)) {
      // [.., a, b, ..] -> [.., a, a, b, b, ..]: stationary walk, the pair
      // as an even-step shortcut, stationary walk.
      out.points.insert(out.points.begin() + static_cast<std::ptrdiff_t>(s),
                        {a, b});
    }
  }
  return out;
}

namespace {

// 1-based shortcut slots of an alternating itinerary; slot k is the pair
// (points[2k-1], points[2k]).  Reduction j = 2m-1 removes slot m+1.
int slot_count(const Itinerary& it) {
  return static_cast<int>(it.points.size() / 2) - 1;
}

int slot_level(const Itinerary& it, const ShortcutFamily& family, int slot) {
  const Shortcut* sc =
      family.find(it.points[2 * slot - 1], it.points[2 * slot]);
  if (!sc) throw std::invalid_argument("itinerary is not alternating");
  return sc->level;
}

}  // namespace

std::vector<int> eligible_reductions(const Itinerary& it,
                                     const ShortcutFamily& family) {
  if (!classify(it, family).alternating) {
    throw std::invalid_argument("itinerary is not alternating");
  }
  std::vector<int> out;
  int slots = slot_count(it);
  for (int m = 1; m + 2 <= slots; ++m) {
    int left = slot_level(it, family, m);
    int mid = slot_level(it, family, m + 1);
    int right = slot_level(it, family, m + 2);
    if (mid < std::max(left, right)) continue;
    // Deleting slot m+1 joins points[2m] to points[2m+3].  If that seam is
    // itself a shortcut pair the result is no longer alternating; allow it
    // only when it repeats slot m's pair, which the bounce collapse in
    // make_alternating then removes outright.
    int j = 2 * m - 1;
    PointId u = it.points[j + 1], v = it.points[j + 4];
    if (u != v && family.find(u, v) && v != it.points[j]) continue;
    out.push_back(j);
  }
  return out;
}

Itinerary reduce_step(const Itinerary& it, int j, const ShortcutFamily& family,
                      const BaseSpace& space) {
  auto eligible = eligible_reductions(it, family);
  if (std::find(eligible.begin(), eligible.end(), j) == eligible.end()) {
    throw std::invalid_argument("index " + std::to_string(j) +
                                " is not an eligible reduction");
  }
  Itinerary out = it;
  out.points.erase(out.points.begin() + (j + 2), out.points.begin() + (j + 4));
  double before = itinerary_cost(it, family, space);
  double after = itinerary_cost(out, family, space);
  if (after > before + 1e-12 * std::max(1.0, before)) {
    throw FamilyGeometryError(
        "deleting a dominated shortcut raised the cost from " +
        std::to_string(before) + " to " + std::to_string(after) +
        "; the family violates the pass-through inequality");
  }
  return out;
}

Itinerary normalize(const Itinerary& it, const ShortcutFamily& family,
                    const BaseSpace& space) {
  Itinerary cur = make_alternating(it, family, space);
  for (;;) {
    auto eligible = eligible_reductions(cur, family);
    if (eligible.empty()) break;
    cur = reduce_step(cur, eligible.front(), family, space);
    // The seam of a duplicate-pair reduction re-jumps; re-alternating
    // collapses it.  Each pass strictly shrinks the point list.
    cur = make_alternating(cur, family, space);
  }
  return cur;
}

}  // namespace shortcut
