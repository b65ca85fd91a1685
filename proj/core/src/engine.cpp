#include "shortcut/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

namespace shortcut {

double truncation_error(double lambda, int trunc) {
  if (lambda <= 0 || lambda >= 1) {
    throw std::invalid_argument("scale ratio must be in (0, 1)");
  }
  if (trunc < 0) {
    throw std::invalid_argument("truncation level must be >= 0");
  }
  return 8.0 * std::pow(lambda, trunc + 1) / (1.0 - lambda);
}

FamilySource::FamilySource(CountingSpace& space, const ShortcutFamily& family)
    : space_(space), family_(family) {
  std::unordered_map<PointId, int> level_of;
  const auto& all = family_.all();
  for (std::size_t i = 0; i < all.size(); ++i) {
    const Shortcut& sc = all[i];
    for (PointId p : {sc.a, sc.b}) {
      auto [it, fresh] = level_of.try_emplace(p, sc.level);
      if (!fresh) it->second = std::min(it->second, sc.level);
      incident_[p].push_back(static_cast<int>(i));
    }
  }
  endpoint_levels_.assign(level_of.begin(), level_of.end());
  std::sort(endpoint_levels_.begin(), endpoint_levels_.end());
}

namespace {

std::uint64_t bucket_key(std::int64_t a, std::int64_t b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(b));
}

}  // namespace

void FamilySource::set_coords(
    std::function<std::array<double, 2>(PointId)> coords, double cell_size) {
  if (!coords) throw std::invalid_argument("coordinate hook must be callable");
  if (cell_size <= 0) throw std::invalid_argument("cell size must be positive");
  coords_ = std::move(coords);
  cell_ = cell_size;
  planar_hash_.clear();
  for (std::size_t i = 0; i < endpoint_levels_.size(); ++i) {
    const auto c = coords_(endpoint_levels_[i].first);
    const auto bx = static_cast<std::int64_t>(std::floor(c[0] / cell_));
    const auto by = static_cast<std::int64_t>(std::floor(c[1] / cell_));
    planar_hash_[bucket_key(bx, by)].push_back(static_cast<int>(i));
  }
}

void FamilySource::endpoints_near(PointId at, double radius, int trunc,
                                  const std::function<void(PointId)>& fn) {
  if (radius <= 0) {
    for (const auto& [p, lvl] : endpoint_levels_) {
      if (lvl <= trunc) fn(p);
    }
    return;
  }
  if (coords_) {
    const auto c = coords_(at);
    const auto bx0 = static_cast<std::int64_t>(std::floor((c[0] - radius) / cell_));
    const auto bx1 = static_cast<std::int64_t>(std::floor((c[0] + radius) / cell_));
    const auto by0 = static_cast<std::int64_t>(std::floor((c[1] - radius) / cell_));
    const auto by1 = static_cast<std::int64_t>(std::floor((c[1] + radius) / cell_));
    const auto probes = static_cast<std::uint64_t>(bx1 - bx0 + 1) *
                        static_cast<std::uint64_t>(by1 - by0 + 1);
    if (probes < endpoint_levels_.size()) {
      for (std::int64_t bx = bx0; bx <= bx1; ++bx) {
        for (std::int64_t by = by0; by <= by1; ++by) {
          auto it = planar_hash_.find(bucket_key(bx, by));
          if (it == planar_hash_.end()) continue;
          for (int i : it->second) {
            const auto& [p, lvl] = endpoint_levels_[static_cast<std::size_t>(i)];
            if (lvl <= trunc && space_.rho(at, p) < radius) fn(p);
          }
        }
      }
      return;
    }
  }
  for (const auto& [p, lvl] : endpoint_levels_) {
    if (lvl <= trunc && space_.rho(at, p) < radius) fn(p);
  }
}

void FamilySource::shortcuts_at(PointId p, int trunc,
                                const std::function<void(const Shortcut&)>& fn) {
  auto it = incident_.find(p);
  if (it == incident_.end()) return;
  const auto& all = family_.all();
  for (int i : it->second) {
    const Shortcut& sc = all[static_cast<std::size_t>(i)];
    if (sc.level <= trunc) fn(sc);
  }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SearchStats {
  std::uint64_t settled = 0;
  std::uint64_t discovered = 0;
  double best = kInf;  // only meaningful in target mode
  std::vector<TruncatedMetric::Reached> settled_nodes;
};

// Budget-pruned Dijkstra over the lazily discovered endpoint graph.
// Walk relaxations run only from the start or from nodes whose best
// arrival uses a jump: consecutive walks merge by the triangle
// inequality, so optimal itineraries never need a walk from a
// walk-arrival node.  A node settled as a walk arrival and later tied
// by a jump is re-settled once to release its walks.
//
// target mode (target != nullptr): tracks the best completion
// du + rho(u, target); with a finite budget, candidates at or above
// min(budget, best incumbent) are pruned.  budget mode: enumerates every
// node with value < budget (complete for strict inequality).
SearchStats run_search(ShortcutSource& src, const EngineOptions& opt,
                       PointId x, const PointId* target, double budget) {
  SearchStats out;
  CountingSpace& sp = src.space();

  constexpr char kLanded = 1, kSettled = 2, kWalked = 4;
  std::unordered_map<PointId, double> dist;
  std::unordered_map<PointId, char> flags;
  using Entry = std::pair<double, PointId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> pq;

  dist.emplace(x, 0.0);
  flags.emplace(x, kLanded);
  pq.push({0.0, x});

  auto upper = [&]() {
    if (!target) return budget;
    return budget == kInf ? kInf : std::min(budget, out.best);
  };

  while (!pq.empty()) {
    const auto [du, u] = pq.top();
    pq.pop();
    auto dit = dist.find(u);
    if (dit == dist.end() || du > dit->second) continue;  // stale entry
    // Copy the flags; relaxations below may rehash the map, so no
    // reference into it can be held across them.
    char fl = flags.find(u)->second;
    const bool first = !(fl & kSettled);
    if (!first && ((fl & kWalked) || !(fl & kLanded))) continue;
    if (du >= upper()) break;  // every queued value is at least du

    if (first) {
      flags.find(u)->second = fl = static_cast<char>(fl | kSettled);
      ++out.settled;
      out.settled_nodes.push_back({u, du});
      if (target) out.best = std::min(out.best, du + sp.rho(u, *target));
      src.shortcuts_at(u, opt.trunc, [&](const Shortcut& sc) {
        const PointId v = (sc.a == u) ? sc.b : sc.a;
        const double nv = du + sc.cost;
        if (nv >= upper()) return;
        auto it = dist.find(v);
        if (it == dist.end()) {
          dist.emplace(v, nv);
          flags[v] = kLanded;
          pq.push({nv, v});
        } else if (nv < it->second) {
          it->second = nv;
          flags[v] = kLanded;
          pq.push({nv, v});
        } else if (nv == it->second) {
          char& f = flags[v];
          if (!(f & kLanded)) {
            f = static_cast<char>(f | kLanded);
            if (f & kSettled) pq.push({nv, v});  // release its walks
          }
        }
      });
      fl = flags.find(u)->second;  // refresh after possible rehash
    }

    if ((fl & kLanded) && !(fl & kWalked)) {
      flags.find(u)->second = static_cast<char>(fl | kWalked);
      const double ubw = upper();
      const double radius = (ubw == kInf) ? 0.0 : ubw - du;  // 0 = everything
      if (ubw == kInf || radius > 0) {
        src.endpoints_near(u, radius, opt.trunc, [&](PointId e) {
          if (e == u) return;
          const double nv = du + sp.rho(u, e);
          if (nv >= upper()) return;
          auto it = dist.find(e);
          if (it == dist.end()) {
            dist.emplace(e, nv);
            flags[e] = 0;
            pq.push({nv, e});
          } else if (nv < it->second) {
            it->second = nv;
            flags[e] = 0;
            pq.push({nv, e});
          }
        });
      }
    }
  }

  out.discovered = dist.size();
  return out;
}

}  // namespace

TruncatedMetric::TruncatedMetric(ShortcutSource& source, EngineOptions opt)
    : src_(source), opt_(opt) {
  if (opt_.trunc < 0) {
    throw std::invalid_argument("truncation level must be >= 0");
  }
  if (opt_.budget_slack < 0) {
    throw std::invalid_argument("budget slack must be >= 0");
  }
}

double TruncatedMetric::eps() const {
  return truncation_error(src_.lambda(), opt_.trunc);
}

DistanceResult TruncatedMetric::distance(PointId x, PointId y) {
  DistanceResult res;
  res.trunc = opt_.trunc;
  res.eps = eps();
  if (x == y) return res;
  const double budget =
      opt_.budget_prune ? src_.space().rho(x, y) + opt_.budget_slack : kInf;
  SearchStats st = run_search(src_, opt_, x, &y, budget);
  res.value = st.best;
  res.settled = st.settled;
  res.discovered = st.discovered;
  return res;
}

std::vector<TruncatedMetric::Reached> TruncatedMetric::reach(PointId x,
                                                             double budget) {
  if (budget <= 0) return {};
  SearchStats st = run_search(src_, opt_, x, nullptr, budget);
  std::sort(st.settled_nodes.begin(), st.settled_nodes.end(),
            [](const Reached& a, const Reached& b) { return a.point < b.point; });
  return std::move(st.settled_nodes);
}

std::vector<SpaceBall> TruncatedMetric::ball_cover(PointId x, double radius) {
  std::vector<SpaceBall> out;
  if (radius <= 0) return out;
  out.push_back({x, radius});
  for (const Reached& rc : reach(x, radius)) {
    if (rc.point == x) continue;
    const double rem = radius - rc.value;
    if (rem > 0) out.push_back({rc.point, rem});
  }
  return out;
}

std::vector<Shortcut> low_level_reached(TruncatedMetric& metric, PointId x,
                                        double r, int level_cut) {
  std::vector<Shortcut> out;
  auto record = [&](const Shortcut& sc) {
    for (const Shortcut& have : out) {
      if ((have.a == sc.a && have.b == sc.b) ||
          (have.a == sc.b && have.b == sc.a)) {
        return;
      }
    }
    out.push_back(sc);
  };
  for (const auto& rc : metric.reach(x, r)) {
    metric.source().shortcuts_at(rc.point, level_cut - 1, record);
  }
  return out;
}

}  // namespace shortcut
