#include "shortcut/snowflake.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shortcut/report.hpp"

namespace shortcut {

namespace {

// Sorted half-open interval unions over sample indices [0, n].
struct IndexRange {
  std::int64_t lo, hi;  // inclusive
};

std::vector<IndexRange> merge_ranges(std::vector<IndexRange> rs) {
  std::sort(rs.begin(), rs.end(),
            [](const IndexRange& a, const IndexRange& b) { return a.lo < b.lo; });
  std::vector<IndexRange> out;
  for (const auto& r : rs) {
    if (r.lo > r.hi) continue;
    if (!out.empty() && r.lo <= out.back().hi + 1) {
      out.back().hi = std::max(out.back().hi, r.hi);
    } else {
      out.push_back(r);
    }
  }
  return out;
}

}  // namespace

SnowflakeLineSpace::SnowflakeLineSpace(double delta, int m)
    : delta_(delta), m_(m), step_(std::ldexp(1.0, -m)) {
  if (!(delta > 0.0) || delta >= 1.0) {
    throw std::invalid_argument("snowflake exponent must lie in (0,1)");
  }
  if (m < 1 || m > 40) throw std::invalid_argument("bad sample resolution");
}

double SnowflakeLineSpace::lambda() const {
  // (2C)^(-2 delta / Q) (1-delta)^delta with C = Q = 1 for the line.
  return std::pow(2.0, -2.0 * delta_) * std::pow(1.0 - delta_, delta_);
}

double SnowflakeLineSpace::annulus_outer(double r) const {
  return (1.0 - delta_) * std::pow(r, 1.0 / delta_);
}

double SnowflakeLineSpace::annulus_inner(double r) const {
  return 0.25 * (1.0 - delta_) * std::pow(r, 1.0 / delta_);
}

PointId SnowflakeLineSpace::add_point(double x) {
  std::int64_t n = std::int64_t(1) << m_;
  std::int64_t i = std::llround(x / step_);
  i = std::clamp<std::int64_t>(i, 0, n);
  auto it = dedup_.find(i);
  if (it != dedup_.end()) return it->second;
  PointId id = static_cast<PointId>(pts_.size());
  pts_.push_back(static_cast<double>(i) * step_);
  dedup_.emplace(i, id);
  return id;
}

double SnowflakeLineSpace::rho(PointId a, PointId b) const {
  return std::pow(std::abs(pts_.at(a) - pts_.at(b)), delta_);
}

std::string SnowflakeLineSpace::describe(PointId id) const {
  return format_sig(pts_.at(id));
}

std::uint64_t SnowflakeLineSpace::sample_size() const {
  return (std::uint64_t(1) << m_) + 1;
}

std::uint64_t SnowflakeLineSpace::count_in_union(
    std::span<const SpaceBall> balls) const {
  std::int64_t n = std::int64_t(1) << m_;
  std::vector<IndexRange> rs;
  for (const auto& b : balls) {
    if (b.radius <= 0.0) continue;
    // Open metric ball of radius R is the open base interval of
    // half-width R^(1/delta).
    double w = std::pow(b.radius, 1.0 / delta_);
    double c = pts_.at(b.center);
    std::int64_t lo = static_cast<std::int64_t>(std::floor((c - w) / step_)) + 1;
    std::int64_t hi = static_cast<std::int64_t>(std::ceil((c + w) / step_)) - 1;
    rs.push_back({std::max<std::int64_t>(lo, 0), std::min(hi, n)});
  }
  std::uint64_t count = 0;
  for (const auto& r : merge_ranges(std::move(rs))) {
    count += static_cast<std::uint64_t>(r.hi - r.lo + 1);
  }
  return count;
}

std::optional<std::string> SnowflakeLineSpace::union_point_outside(
    std::span<const SpaceBall> members, std::span<const SpaceBall> guards) const {
  std::int64_t n = std::int64_t(1) << m_;
  std::vector<IndexRange> ms;
  for (const auto& b : members) {
    if (b.radius <= 0.0) continue;
    double w = std::pow(b.radius, 1.0 / delta_);
    double c = pts_.at(b.center);
    std::int64_t lo = static_cast<std::int64_t>(std::floor((c - w) / step_)) + 1;
    std::int64_t hi = static_cast<std::int64_t>(std::ceil((c + w) / step_)) - 1;
    ms.push_back({std::max<std::int64_t>(lo, 0), std::min(hi, n)});
  }
  std::vector<IndexRange> gs;
  for (const auto& g : guards) {
    double w = std::pow(std::max(g.radius, 0.0), 1.0 / delta_);
    double c = pts_.at(g.center);
    // Closed guard interval.
    std::int64_t lo = static_cast<std::int64_t>(std::ceil((c - w) / step_));
    std::int64_t hi = static_cast<std::int64_t>(std::floor((c + w) / step_));
    gs.push_back({std::max<std::int64_t>(lo, 0), std::min(hi, n)});
  }
  gs = merge_ranges(std::move(gs));
  for (const auto& piece : merge_ranges(std::move(ms))) {
    std::int64_t i = piece.lo;
    while (i <= piece.hi) {
      auto it = std::upper_bound(
          gs.begin(), gs.end(), i,
          [](std::int64_t v, const IndexRange& r) { return v < r.lo; });
      if (it != gs.begin() && std::prev(it)->hi >= i) {
        i = std::prev(it)->hi + 1;  // jump over the guard piece
        continue;
      }
      return format_sig(static_cast<double>(i) * step_);
    }
  }
  return std::nullopt;
}

PointId SnowflakeLineSpace::random_sample_point(RngStream& rng) {
  std::uint64_t n = (std::uint64_t(1) << m_) + 1;
  std::int64_t i = static_cast<std::int64_t>(rng.index(n));
  return add_point(static_cast<double>(i) * step_);
}

std::vector<PointId> SnowflakeLineSpace::greedy_net(
    double separation, std::span<const PointId> forbidden,
    double forbidden_radius) {
  std::int64_t n = std::int64_t(1) << m_;
  // Thresholds in base coordinates; the metric is monotone in |dx|.
  double sep_base = std::pow(separation, 1.0 / delta_);
  double forb_base = std::pow(std::max(forbidden_radius, 0.0), 1.0 / delta_);
  std::vector<double> fb;
  fb.reserve(forbidden.size());
  for (PointId f : forbidden) fb.push_back(pts_.at(f));
  std::sort(fb.begin(), fb.end());

  std::vector<PointId> net;
  double last = -2.0 * sep_base;
  for (std::int64_t i = 0; i <= n; ++i) {
    double x = static_cast<double>(i) * step_;
    if (x - last < sep_base && !net.empty()) continue;
    if (!fb.empty()) {
      auto it = std::lower_bound(fb.begin(), fb.end(), x);
      bool blocked = false;
      if (it != fb.end() && *it - x < forb_base) blocked = true;
      if (it != fb.begin() && x - *std::prev(it) < forb_base) blocked = true;
      if (blocked) continue;
    }
    net.push_back(add_point(x));
    last = x;
  }
  return net;
}

std::optional<std::string> SnowflakeLineSpace::first_uncovered(
    std::span<const PointId> centers, double cover_radius) {
  std::int64_t n = std::int64_t(1) << m_;
  double cov_base = std::pow(cover_radius, 1.0 / delta_);
  std::vector<double> cs;
  cs.reserve(centers.size());
  for (PointId c : centers) cs.push_back(pts_.at(c));
  std::sort(cs.begin(), cs.end());
  for (std::int64_t i = 0; i <= n; ++i) {
    double x = static_cast<double>(i) * step_;
    auto it = std::lower_bound(cs.begin(), cs.end(), x);
    bool covered = false;
    if (it != cs.end() && *it - x <= cov_base) covered = true;
    if (!covered && it != cs.begin() && x - *std::prev(it) <= cov_base)
      covered = true;
    if (!covered) return format_sig(x);
    // Skip ahead: everything up to nearest_center + cov_base is covered.
    if (it != cs.end() && *it - x <= cov_base) {
      std::int64_t skip =
          static_cast<std::int64_t>(std::floor((*it + cov_base) / step_));
      i = std::max(i, skip);
    } else if (it != cs.begin()) {
      std::int64_t skip = static_cast<std::int64_t>(
          std::floor((*std::prev(it) + cov_base) / step_));
      i = std::max(i, skip);
    }
  }
  return std::nullopt;
}

std::pair<PointId, PointId> SnowflakeLineSpace::choose_endpoints(
    PointId center, double radius, int level, double min_gap) {
  (void)level;
  double inner = annulus_inner(radius);
  double outer = annulus_outer(radius);
  double c = pts_.at(center);
  std::int64_t n = std::int64_t(1) << m_;
  std::int64_t ci = std::llround(c / step_);
  // Smallest grid offset strictly beyond the inner radius.
  std::int64_t off = static_cast<std::int64_t>(std::floor(inner / step_)) + 1;
  if (static_cast<double>(off) * step_ > outer) {
    throw std::runtime_error("annulus around " + describe(center) +
                             " contains no sample point");
  }
  std::int64_t qi;
  if (ci + off <= n) {
    qi = ci + off;
  } else if (ci - off >= 0) {
    qi = ci - off;
  } else {
    throw std::runtime_error("annulus around " + describe(center) +
                             " leaves the sample window");
  }
  PointId q2 = add_point(static_cast<double>(qi) * step_);
  if (rho(center, q2) < min_gap) {
    throw FamilyGeometryError("endpoint pair around " + describe(center) +
                              " is closer than the level gap");
  }
  return {center, q2};
}

}  // namespace shortcut
