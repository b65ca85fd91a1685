#include "shortcut/vertical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shortcut {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-12;

}  // namespace

ASequence::ASequence(std::size_t max_index) {
  if (max_index < 1) {
    throw std::invalid_argument("sequence bound must be at least 1");
  }
  bits_.assign(max_index + 1, 0);
  // Primes up to the bound.
  std::vector<bool> composite(max_index + 1, false);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 2; p <= max_index; ++p) {
    if (composite[p]) continue;
    primes.push_back(p);
    for (std::uint64_t q = p * p; q <= max_index; q += p) composite[q] = true;
  }
  // Mark the odd-k progressions p_l + step*k, step = l * prod_{h<=l} p_h.
  std::uint64_t prim = 1;
  for (std::size_t l = 1; l <= primes.size(); ++l) {
    std::uint64_t p = primes[l - 1];
    if (prim > max_index / p) break;  // step would exceed the bound anyway
    prim *= p;
    std::uint64_t step = prim * l;
    if (step > max_index) break;
    for (std::uint64_t i = p + step; i <= max_index; i += 2 * step) {
      bits_[i] = 1;
    }
  }
}

int ASequence::a(std::size_t i) const {
  if (i < 1 || i >= bits_.size()) {
    throw std::out_of_range("sequence index outside the computed range");
  }
  return bits_[i];
}

std::uint64_t ASequence::nth_prime(int ell) {
  if (ell < 1) throw std::invalid_argument("prime index is 1-based");
  int found = 0;
  for (std::uint64_t c = 2;; ++c) {
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= c; ++d) {
      if (c % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime && ++found == ell) return c;
  }
}

std::uint64_t ASequence::progression_step(int ell) {
  if (ell < 1 || ell > 14) {
    throw std::invalid_argument("progression index out of supported range");
  }
  std::uint64_t prim = 1;
  for (int h = 1; h <= ell; ++h) prim *= nth_prime(h);
  return prim * static_cast<std::uint64_t>(ell);
}

bool ASequence::in_progression(std::uint64_t i, int ell) {
  std::uint64_t p = nth_prime(ell);
  std::uint64_t step = progression_step(ell);
  return i >= p && (i - p) % step == 0;
}

FlipCheck window_flip_check(const ASequence& seq, int ell,
                            std::uint64_t i_max) {
  std::uint64_t p = ASequence::nth_prime(ell);
  std::uint64_t step = ASequence::progression_step(ell);
  if (i_max + 2 * step > seq.max_index()) {
    throw std::invalid_argument("sequence too short for the window scan");
  }
  FlipCheck out;
  out.step = step;
  for (std::uint64_t i = 1; i <= i_max; ++i) {
    // Unique j in {i, ..., i+step-1} congruent to p_ell mod step.
    std::uint64_t j = i + (p % step + step - i % step) % step;
    ++out.windows;
    if (seq.a(j) == seq.a(j + step)) ++out.failures;
  }
  return out;
}

double f_lower_bound(double t) {
  if (!(t >= 1.0 && t <= 4.0)) {
    throw std::invalid_argument("bound function defined on [1, 4]");
  }
  return std::min(1.0 / std::sqrt(t), 0.5 * std::sqrt(2.0 * t / (t + 1.0)));
}

JumpMenu JumpMenu::from_sequence(const ASequence& seq, int min_level,
                                 int max_level, int excluded_level) {
  if (min_level < 1 || max_level > static_cast<int>(seq.max_index())) {
    throw std::invalid_argument("menu levels outside the computed sequence");
  }
  JumpMenu menu;
  for (int n = min_level; n <= max_level; ++n) {
    if (n == excluded_level) continue;
    if (seq.a(static_cast<std::size_t>(n)) == 1) menu.levels.push_back(n);
  }
  return menu;
}

namespace {

struct UpperSearch {
  const std::vector<int>& levels;
  double kappa;
  int cap;
  double best = kInf;
  std::vector<std::pair<int, int>> best_jumps;
  double best_res = 0.0;
  std::vector<std::pair<int, int>> stack;

  void rec(std::size_t idx, double rem, double pc) {
    if (pc >= best) return;
    double cand = pc + kappa * std::sqrt(std::abs(rem));
    if (cand < best) {
      best = cand;
      best_jumps = stack;
      best_res = rem;
    }
    if (idx == levels.size()) return;
    int n = levels[idx];
    double jump_cost = 0.5 * kappa * std::ldexp(1.0, -n);
    double height = std::ldexp(1.0, -2 * n);
    rec(idx + 1, rem, pc);  // unused level first: cheap subtrees early
    for (int c = 1; c <= cap; ++c) {
      double jc = pc + c * jump_cost;
      if (jc >= best) break;
      stack.emplace_back(n, c);
      rec(idx + 1, rem - c * height, jc);
      stack.back().second = -c;
      rec(idx + 1, rem + c * height, jc);
      stack.pop_back();
    }
  }
};

}  // namespace

VerticalValue vertical_upper(const VerticalQuery& query, const JumpMenu& menu) {
  if (query.norm.kappa <= 0.0) {
    throw std::invalid_argument("normalization constant must be positive");
  }
  if (query.max_jumps_per_level < 0) {
    throw std::invalid_argument("negative jump budget");
  }
  UpperSearch s{menu.levels, query.norm.kappa, query.max_jumps_per_level};
  s.rec(0, query.height, 0.0);
  VerticalValue v;
  v.cost = s.best;
  v.jumps = s.best_jumps;
  v.residual = s.best_res;
  std::sort(v.jumps.begin(), v.jumps.end());
  return v;
}

namespace {

void brute_rec(std::span<const BruteEntry> menu, std::size_t idx, int max_jumps,
               double kappa, double sum, double cost, double target,
               double& best) {
  if (idx == menu.size()) {
    best = std::min(best, cost + kappa * std::sqrt(std::abs(target - sum)));
    return;
  }
  const BruteEntry& e = menu[idx];
  double per_use = (e.shortcut ? 0.5 : 1.0) * kappa * std::sqrt(e.height);
  for (int c = -max_jumps; c <= max_jumps; ++c) {
    brute_rec(menu, idx + 1, max_jumps, kappa, sum + c * e.height,
              cost + std::abs(c) * per_use, target, best);
  }
}

}  // namespace

double vertical_bruteforce(double target, VerticalNorm norm,
                           std::span<const BruteEntry> menu, int max_jumps) {
  if (menu.size() > 8 || max_jumps > 6) {
    throw std::invalid_argument("bruteforce caps exceeded");
  }
  if (max_jumps < 0) throw std::invalid_argument("negative jump budget");
  for (const BruteEntry& e : menu) {
    if (e.height <= 0.0) throw std::invalid_argument("entry height must be positive");
  }
  double best = kInf;
  brute_rec(menu, 0, max_jumps, norm.kappa, 0.0, 0.0, target, best);
  return best;
}

namespace {

BoundGridResult run_grid(const ASequence& seq, int n_min, int n_max,
                         int t_points, double t_lo, double t_hi,
                         bool gap_levels_only) {
  if (n_min < 1 || n_max < n_min || t_points < 1) {
    throw std::invalid_argument("malformed bound grid");
  }
  BoundGridResult out;
  out.worst_margin = kInf;
  VerticalNorm norm{};  // ratios are kappa-invariant; fix kappa = 1
  for (int n = n_min; n <= n_max; ++n) {
    if (gap_levels_only && seq.a(static_cast<std::size_t>(n)) != 0) continue;
    JumpMenu menu = JumpMenu::from_sequence(seq, 1, n + 12);
    for (int k = 0; k < t_points; ++k) {
      double t = t_lo + (t_hi - t_lo) * (k + 0.5) / t_points;
      VerticalQuery q;
      q.height = t * std::ldexp(1.0, -2 * n);
      q.norm = norm;
      double upper = vertical_upper(q, menu).cost;
      double lower =
          (gap_levels_only ? 1.0 / std::sqrt(3.0) : f_lower_bound(t)) *
          norm.kappa * std::sqrt(t) * std::ldexp(1.0, -n);
      ++out.checked;
      double margin = upper - lower;
      out.worst_margin = std::min(out.worst_margin, margin);
      if (margin < -kTol) ++out.violations;
    }
  }
  return out;
}

}  // namespace

BoundGridResult general_bound_grid(const ASequence& seq, int n_min, int n_max,
                                   int t_points) {
  return run_grid(seq, n_min, n_max, t_points, 1.0, 4.0, false);
}

BoundGridResult gap_level_bound_grid(const ASequence& seq, int n_min,
                                     int n_max, int t_points) {
  return run_grid(seq, n_min, n_max, t_points, 0.51, 2.0, true);
}

double eta_for_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) {
    throw std::invalid_argument("epsilon must lie in (0, 1/2)");
  }
  // Worst t in |t| < eta is the negative endpoint: the left side grows
  // with |t| while sqrt(1+t) shrinks.
  constexpr int kGrid = 4096;
  for (int i = kGrid - 1; i >= 1; --i) {
    double eta = 0.5 * i / kGrid;
    if (0.5 + std::sqrt(eta) <= (0.5 + eps) * std::sqrt(1.0 - eta)) {
      return eta;
    }
  }
  return 0.0;
}

TwoStepCheck two_step_certificate(const ASequence& seq, int n, double t,
                                  double eps, VerticalNorm norm) {
  if (seq.a(static_cast<std::size_t>(n)) != 1) {
    throw std::invalid_argument("no jump available at this level");
  }
  if (!(t > -1.0)) throw std::invalid_argument("height would be negative");
  double scale = std::ldexp(1.0, -n);
  TwoStepCheck out;
  out.cost = (0.5 + std::sqrt(std::abs(t))) * norm.kappa * scale;
  out.bound = (0.5 + eps) * vertical_cc((1.0 + t) * scale * scale, norm);
  VerticalQuery q;
  q.height = (1.0 + t) * scale * scale;
  q.norm = norm;
  int max_menu = std::min<int>(n + 12, static_cast<int>(seq.max_index()));
  out.search_cost = vertical_upper(q, JumpMenu::from_sequence(seq, 1, max_menu)).cost;
  out.ok = out.cost <= out.bound + kTol && out.search_cost <= out.cost + kTol;
  return out;
}

std::vector<std::array<double, 2>> dyadic_centers(int level,
                                                  std::array<double, 2> xwin,
                                                  std::array<double, 2> ywin) {
  if (level < 0 || level > 30 || xwin[0] > xwin[1] || ywin[0] > ywin[1]) {
    throw std::invalid_argument("malformed dyadic window");
  }
  double h = std::ldexp(1.0, -level);
  std::vector<std::array<double, 2>> out;
  auto first = [&](double lo) {
    return static_cast<long long>(std::ceil(lo / h - 0.5));
  };
  for (long long i = first(xwin[0]); (i + 0.5) * h <= xwin[1]; ++i) {
    for (long long j = first(ywin[0]); (j + 0.5) * h <= ywin[1]; ++j) {
      out.push_back({(i + 0.5) * h, (j + 0.5) * h});
    }
  }
  return out;
}

std::vector<ColumnShortcut> column_family(const ASequence& seq, int min_level,
                                          int max_level,
                                          std::array<double, 2> xwin,
                                          std::array<double, 2> ywin,
                                          std::span<const double> zs,
                                          VerticalNorm norm) {
  if (xwin[0] >= xwin[1] || ywin[0] >= ywin[1]) {
    throw std::invalid_argument("empty planar window");
  }
  std::vector<ColumnShortcut> out;
  for (int n = min_level; n <= max_level; ++n) {
    if (seq.a(static_cast<std::size_t>(n)) != 1) continue;
    double s = std::ldexp(1.0, -2 * n);
    double cost = 0.5 * vertical_cc(s, norm);
    for (const auto& c : dyadic_centers(n, xwin, ywin)) {
      for (double z : zs) {
        HPoint a{c[0], c[1], z};
        out.push_back({a, vertical_shift(a, s), n, cost});
      }
    }
  }
  return out;
}

CornerColumnCheck corner_column_check(const ASequence& seq, int n, double t,
                                      double delta, int paths, RngStream& rng) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw std::invalid_argument("escape margin must lie in (0, 1/2)");
  }
  if (!(t >= 0.51 && t < 2.0)) {
    throw std::invalid_argument("height factor outside the checked band");
  }
  if (paths < 1) throw std::invalid_argument("need at least one sampled path");
  VerticalNorm norm = VerticalNorm::carnot();
  double scale = std::ldexp(1.0, -n);
  CornerColumnCheck out;
  out.paths = paths;
  out.bound = (1.0 / std::sqrt(3.0)) * norm.kappa * std::sqrt(t) * scale;
  out.delta_admissible = (1.0 - 2.0 * delta) * scale >= out.bound - kTol;

  // Case 1: itineraries whose planar image leaves the half-cell ball must
  // walk out past radius scale/2 from a start within delta*scale of the
  // corner, and return; planar walk length is at least (1-2 delta)*scale.
  double escape_bound = (1.0 - 2.0 * delta) * scale;
  out.escape_worst = kInf;
  auto corner_point = [&](double r) {
    // uniform on the l-infinity circle of radius r
    double u = 2.0 * rng.u01() - 1.0;
    double v = rng.coin() ? 1.0 : -1.0;
    if (rng.coin()) return std::array<double, 2>{r * u, r * v};
    return std::array<double, 2>{r * v, r * u};
  };
  for (int k = 0; k < paths; ++k) {
    double rs = delta * scale * rng.u01();
    double re = delta * scale * rng.u01();
    auto p0 = corner_point(rs);
    auto p1 = corner_point(re);
    auto w = corner_point(0.5 * scale * (1.0 + rng.u01()));
    double leg1 = std::max(std::abs(w[0] - p0[0]), std::abs(w[1] - p0[1]));
    double leg2 = std::max(std::abs(p1[0] - w[0]), std::abs(p1[1] - w[1]));
    double cost = leg1 + leg2;
    out.escape_worst = std::min(out.escape_worst, cost - escape_bound);
    if (cost < escape_bound - kTol) ++out.escape_violations;
  }

  // Case 2: in-column itineraries have no level-n jump at the corner.
  VerticalQuery q;
  q.height = t * scale * scale;
  q.norm = norm;
  int max_menu = std::min<int>(n + 12, static_cast<int>(seq.max_index()));
  out.in_column_cost =
      vertical_upper(q, JumpMenu::from_sequence(seq, 1, max_menu, n)).cost;

  out.ok = out.delta_admissible && out.escape_violations == 0 &&
           out.in_column_cost >= out.bound - kTol;
  return out;
}

ColumnUpperCheck column_upper_check(const ASequence& seq, int n, double t,
                                    double eps,
                                    std::array<double, 2> planar_offset) {
  if (seq.a(static_cast<std::size_t>(n)) != 1) {
    throw std::invalid_argument("no jump available at this level");
  }
  if (!(t > -1.0)) throw std::invalid_argument("height would be negative");
  VerticalNorm norm = VerticalNorm::carnot();
  double scale = std::ldexp(1.0, -n);
  double s = scale * scale;
  double u = planar_offset[0], v = planar_offset[1];

  // Walking to the centre column and back conjugates the jump exactly:
  // (u,v,0) * (0,0,s) * (-u,-v,0) = (0,0,s), the twist terms cancel.
  HPoint conj = mul(mul(HPoint{u, v, 0.0}, HPoint{0.0, 0.0, s}),
                    HPoint{-u, -v, 0.0});
  bool exact = conj == HPoint{0.0, 0.0, s};

  // Straight planar legs have zero vertical holonomy, so each costs its
  // Euclidean length; the vertical tail costs kappa * sqrt of the height.
  double two_step = (0.5 + std::sqrt(std::abs(t))) * norm.kappa * scale;
  ColumnUpperCheck out;
  out.cost = 2.0 * std::hypot(u, v) + two_step;
  out.bound = (0.5 + eps) * vertical_cc((1.0 + t) * s, norm);
  double slack = out.bound - two_step;
  out.eta = slack > 0.0 ? slack / (2.0 * std::sqrt(2.0) * scale) : 0.0;
  out.ok = exact && out.cost <= out.bound + kTol;
  return out;
}

std::vector<BlowupRow> blowup_table(const ASequence& seq,
                                    std::span<const int> js,
                                    std::span<const double> ss,
                                    int menu_extra_depth) {
  std::vector<BlowupRow> out;
  for (int j : js) {
    if (j < 1) throw std::invalid_argument("scale index must be positive");
    int max_menu = j + menu_extra_depth;
    if (max_menu > static_cast<int>(seq.max_index())) {
      throw std::invalid_argument("sequence too short for the menu depth");
    }
    JumpMenu menu = JumpMenu::from_sequence(seq, 1, max_menu);
    for (double s : ss) {
      if (!(s >= 1.0 && s <= 16.0)) {
        throw std::invalid_argument("blow-up parameter outside [1, 16]");
      }
      double lam = std::ldexp(1.0, -j);
      VerticalQuery q;
      q.height = lam * lam * s * s;
      double upper = vertical_upper(q, menu).cost;
      out.push_back({j, s, upper / (lam * q.norm.kappa * s)});
    }
  }
  return out;
}

ContrastPair blowup_contrast(std::span<const BlowupRow> table, double s,
                             int gap, double low_threshold,
                             double high_threshold) {
  ContrastPair out;
  auto ratio_at = [&](int j) -> const BlowupRow* {
    for (const BlowupRow& r : table) {
      if (r.j == j && r.s == s) return &r;
    }
    return nullptr;
  };
  for (const BlowupRow& r : table) {
    if (r.s != s) continue;
    const BlowupRow* shifted = ratio_at(r.j + gap);
    if (!shifted) continue;
    const BlowupRow *lo = &r, *hi = shifted;
    if (lo->ratio > hi->ratio) std::swap(lo, hi);
    if (lo->ratio <= low_threshold && hi->ratio >= high_threshold) {
      out.j_low = lo->j;
      out.j_high = hi->j;
      out.low_ratio = lo->ratio;
      out.high_ratio = hi->ratio;
      out.found = true;
      return out;
    }
  }
  return out;
}

}  // namespace shortcut
