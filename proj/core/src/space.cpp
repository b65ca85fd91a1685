#include "shortcut/space.hpp"

#include <cmath>
#include <stdexcept>

#include "shortcut/report.hpp"

namespace shortcut {

std::string BaseSpace::describe(PointId id) const {
  return "#" + std::to_string(id);
}

namespace {

double euclid(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

SyntheticSpace SyntheticSpace::line(std::vector<double> xs) {
  SyntheticSpace s;
  for (double x : xs) s.add({x, 0.0});
  return s;
}

SyntheticSpace SyntheticSpace::plane(std::vector<std::array<double, 2>> pts) {
  SyntheticSpace s;
  for (const auto& p : pts) s.add(p);
  return s;
}

PointId SyntheticSpace::add(std::array<double, 2> p) {
  pts_.push_back(p);
  return static_cast<PointId>(pts_.size()) - 1;
}

double SyntheticSpace::rho(PointId a, PointId b) const {
  return euclid(pts_.at(a), pts_.at(b));
}

double SyntheticSpace::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < pts_.size(); ++i)
    for (std::size_t j = i + 1; j < pts_.size(); ++j)
      d = std::max(d, euclid(pts_[i], pts_[j]));
  return d;
}

std::string SyntheticSpace::describe(PointId id) const {
  const auto& p = pts_.at(id);
  return "(" + format_sig(p[0]) + ", " + format_sig(p[1]) + ")";
}

std::uint64_t SyntheticSpace::count_in_union(
    std::span<const SpaceBall> balls) const {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    for (const auto& b : balls) {
      if (euclid(pts_[i], pts_.at(b.center)) < b.radius) {
        ++n;
        break;
      }
    }
  }
  return n;
}

std::optional<std::string> SyntheticSpace::union_point_outside(
    std::span<const SpaceBall> members, std::span<const SpaceBall> guards) const {
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    bool inside = false;
    for (const auto& b : members) {
      if (euclid(pts_[i], pts_.at(b.center)) < b.radius) {
        inside = true;
        break;
      }
    }
    if (!inside) continue;
    bool guarded = false;
    for (const auto& g : guards) {
      if (euclid(pts_[i], pts_.at(g.center)) <= g.radius) {
        guarded = true;
        break;
      }
    }
    if (!guarded) return describe(static_cast<PointId>(i));
  }
  return std::nullopt;
}

PointId SyntheticSpace::random_sample_point(RngStream& rng) {
  if (pts_.empty()) throw std::logic_error("empty space");
  return static_cast<PointId>(rng.index(pts_.size()));
}

std::vector<PointId> SyntheticSpace::greedy_net(
    double separation, std::span<const PointId> forbidden,
    double forbidden_radius) {
  std::vector<PointId> net;
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    PointId cand = static_cast<PointId>(i);
    bool ok = true;
    for (PointId f : forbidden) {
      if (rho(cand, f) < forbidden_radius) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (PointId c : net) {
      if (rho(cand, c) < separation) {
        ok = false;
        break;
      }
    }
    if (ok) net.push_back(cand);
  }
  return net;
}

std::optional<std::string> SyntheticSpace::first_uncovered(
    std::span<const PointId> centers, double cover_radius) {
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    bool covered = false;
    for (PointId c : centers) {
      if (rho(static_cast<PointId>(i), c) <= cover_radius) {
        covered = true;
        break;
      }
    }
    if (!covered) return describe(static_cast<PointId>(i));
  }
  return std::nullopt;
}

std::pair<PointId, PointId> SyntheticSpace::choose_endpoints(PointId center,
                                                             double radius,
                                                             int level,
                                                             double min_gap) {
  (void)level;
  // First admissible pair in scan order: both in the closed ball, far
  // enough apart.  The center itself is a natural first endpoint when a
  // partner exists for it.
  std::vector<PointId> inside;
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    if (rho(static_cast<PointId>(i), center) <= radius)
      inside.push_back(static_cast<PointId>(i));
  }
  for (PointId b : inside) {
    if (b != center && rho(center, b) >= min_gap) return {center, b};
  }
  for (std::size_t i = 0; i < inside.size(); ++i) {
    for (std::size_t j = i + 1; j < inside.size(); ++j) {
      if (rho(inside[i], inside[j]) >= min_gap) return {inside[i], inside[j]};
    }
  }
  throw std::runtime_error("no admissible endpoint pair in ball around " +
                           describe(center));
}

}  // namespace shortcut
