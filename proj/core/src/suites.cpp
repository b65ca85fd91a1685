#include "shortcut/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shortcut/engine.hpp"
#include "shortcut/heis_grid.hpp"
#include "shortcut/heisenberg.hpp"
#include "shortcut/itinerary.hpp"
#include "shortcut/kset.hpp"
#include "shortcut/net.hpp"
#include "shortcut/parallel.hpp"
#include "shortcut/rng.hpp"
#include "shortcut/snowflake.hpp"
#include "shortcut/vertical.hpp"

namespace shortcut {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kExactTol = 1e-12;
constexpr double kDerivedTol = 1e-9;

void push_check(VerificationReport& rep, const char* id, const char* group,
                bool ok, double margin, std::string details) {
  rep.checks.push_back({id, group,
                        ok ? CheckStatus::pass : CheckStatus::fail, margin,
                        std::move(details)});
}

std::string count_list(const char* label, const std::vector<NetLevel>& levels) {
  std::string out = label;
  for (const NetLevel& lv : levels) {
    out += " L" + std::to_string(lv.level) + "=" +
           std::to_string(lv.shortcut_indices.size());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cached Heisenberg construction (shared across checks and re-runs).

struct HeisenbergEntry {
  HeisenbergBuild build;
  std::unique_ptr<ShortcutFamily> zero_family;  // same geometry, zero costs
};

HeisenbergEntry& cached_heisenberg(const SuiteConfig& cfg) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<HeisenbergEntry>> cache;
  char key[160];
  std::snprintf(key, sizeof key, "m%d|l=%.17g|c=%.17g", cfg.grid_m, cfg.lambda,
                cfg.cover_constant);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  HeisenbergBuildOptions opt;
  opt.grid_m = cfg.grid_m;
  opt.cfg.lambda = cfg.lambda;
  opt.cfg.cover_constant = cfg.cover_constant;
  opt.cfg.min_level = 1;
  opt.cfg.max_level = 6;
  opt.cfg.schedule = CostSchedule::geometric();
  opt.deep_min_level = 7;
  opt.deep_max_level = 8;

  auto entry = std::make_unique<HeisenbergEntry>();
  entry->build = build_heisenberg(opt);

  // Semi-distance twin: identical nets and endpoints, all costs zero.
  ShortcutConfig zc = opt.cfg;
  zc.max_level = 8;
  zc.schedule = CostSchedule::zero();
  entry->zero_family = std::make_unique<ShortcutFamily>(zc);
  for (const Shortcut& sc : entry->build.family->all()) {
    Shortcut z = sc;
    z.cost = 0.0;
    entry->zero_family->add(*entry->build.space, z);
  }

  auto& ref = *entry;
  cache.emplace(key, std::move(entry));
  return ref;
}

std::unique_ptr<FamilySource> make_source(HeisenbergGridSpace& space,
                                          const ShortcutFamily& family) {
  auto src = std::make_unique<FamilySource>(space, family);
  src->set_coords(
      [&space](PointId id) {
        const HPoint& p = space.point(id);
        return std::array<double, 2>{p.x, p.y};
      },
      0.03125);
  return src;
}

// ---------------------------------------------------------------------------
// Core suite checks.

void check_box_axioms(VerificationReport& rep, const SuiteConfig& cfg) {
  constexpr std::size_t kTrials = 100000;
  std::vector<double> margins(kTrials);
  parallel_for(kTrials, cfg.threads, [&](std::size_t i) {
    RngStream rng = RngStream::substream(cfg.seed, "box-axioms", i);
    auto draw = [&rng] {
      return HPoint{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                    rng.uniform(-4.0, 4.0)};
    };
    HPoint p = draw(), q = draw(), g = draw();
    double lam = rng.uniform(0.25, 4.0);
    double m = box_norm(p) + box_norm(q) - box_norm(mul(p, q));
    m = std::min(m, kExactTol - std::abs(box_distance(p, q) -
                                         box_distance(q, p)));
    m = std::min(m, kExactTol - std::abs(box_distance(mul(g, p), mul(g, q)) -
                                         box_distance(p, q)));
    m = std::min(m,
                 kExactTol - std::abs(box_distance(dilate(lam, p),
                                                   dilate(lam, q)) -
                                      lam * box_distance(p, q)));
    margins[i] = m;
  });
  double worst = kInf;
  std::uint64_t bad = 0;
  for (double m : margins) {
    worst = std::min(worst, m);
    if (m < -kExactTol) ++bad;
  }
  push_check(rep, "box-axioms", "group-axioms", bad == 0, worst,
             "triangle, symmetry, left-invariance, homogeneity on 100000 "
             "random configurations; violations " + std::to_string(bad));
}

void check_shortcut_condition(VerificationReport& rep, const SuiteConfig& cfg,
                              CountingSpace& space,
                              const ShortcutFamily& family, int max_level,
                              const char* id) {
  std::uint64_t violations = 0;
  double worst = kInf;
  std::string skipped;
  for (int n = 1; n <= max_level; ++n) {
    std::vector<int> idx = family.level_indices(n);
    if (idx.empty()) {
      skipped += " L" + std::to_string(n);
      continue;
    }
    std::size_t slots = std::min<std::size_t>(idx.size(), 4);
    std::uint64_t trials = 10000 / slots;
    for (std::size_t s = 0; s < slots; ++s) {
      const Shortcut& sc = family.at(idx[s]);
      RngStream rng = RngStream::substream(
          cfg.seed, std::string(id) + "-condition", n * 16 + s);
      ConditionReport cr = verify_shortcut_condition(
          space, sc.a, sc.b, sc.center, sc.radius, trials, rng);
      violations += cr.violations;
      worst = std::min(worst, cr.worst_margin);
    }
  }
  std::string details = "10000 exterior pairs per level, levels 1.." +
                        std::to_string(max_level);
  if (!skipped.empty()) details += "; empty levels skipped:" + skipped;
  push_check(rep, id, "construction", violations == 0, worst,
             details + "; violations " + std::to_string(violations));
}

Itinerary random_itinerary(const ShortcutFamily& family,
                           const std::vector<PointId>& endpoints,
                           const std::vector<PointId>& pool, RngStream& rng) {
  Itinerary it;
  std::size_t target = 2 + rng.index(10);
  while (it.points.size() < target) {
    if (rng.coin() && it.points.size() + 2 <= 12) {
      const Shortcut& sc = family.at(rng.index(family.all().size()));
      it.points.push_back(sc.a);
      it.points.push_back(sc.b);
    } else if (rng.coin()) {
      it.points.push_back(endpoints[rng.index(endpoints.size())]);
    } else {
      it.points.push_back(pool[rng.index(pool.size())]);
    }
  }
  if (it.points.size() > 12) it.points.resize(12);
  if (it.points.size() < 2) it.points.push_back(pool[0]);
  return it;
}

// Ordered list of family pairs traversed by the itinerary.
std::vector<std::pair<PointId, PointId>> traversed(
    const Itinerary& it, const ShortcutFamily& family) {
  std::vector<std::pair<PointId, PointId>> out;
  for (std::size_t s = 0; s + 1 < it.points.size(); ++s) {
    PointId a = it.points[s], b = it.points[s + 1];
    if (a != b && family.find(a, b)) {
      out.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  return out;
}

// Exhaustive minimum over every maximal reduction order; costs are
// non-increasing along reductions, so this is the best reachable cost.
double min_reduced_cost(const Itinerary& it, const ShortcutFamily& family,
                        const BaseSpace& space) {
  std::vector<int> el = eligible_reductions(it, family);
  if (el.empty()) return itinerary_cost(it, family, space);
  double best = kInf;
  for (int j : el) {
    best = std::min(
        best, min_reduced_cost(
                  make_alternating(reduce_step(it, j, family, space), family,
                                   space),
                  family, space));
  }
  return best;
}

void check_normal_form(VerificationReport& rep, const SuiteConfig& cfg,
                       HeisenbergGridSpace& space,
                       const ShortcutFamily& family) {
  constexpr std::size_t kTrials = 10000;
  std::vector<PointId> endpoints = family.endpoints(8);
  std::vector<PointId> pool;
  {
    RngStream rng = RngStream::substream(cfg.seed, "normal-pool");
    for (int i = 0; i < 64; ++i) pool.push_back(space.random_sample_point(rng));
  }

  struct Item {
    double margin = kInf;
    double oracle_margin = kInf;
    bool ok = true;
    bool oracle_ok = true;
  };
  std::vector<Item> items(kTrials);
  parallel_for(kTrials, cfg.threads, [&](std::size_t i) {
    RngStream rng = RngStream::substream(cfg.seed, "normal-form", i);
    Itinerary it = random_itinerary(family, endpoints, pool, rng);
    Item& out = items[i];
    Itinerary norm;
    try {
      norm = normalize(it, family, space);
    } catch (const FamilyGeometryError&) {
      out.ok = false;
      out.margin = -1.0;
      return;
    }
    ItineraryShape shape = classify(norm, family);
    double c_in = itinerary_cost(it, family, space);
    double c_out = itinerary_cost(norm, family, space);
    out.margin = std::min(out.margin, c_in - c_out + kExactTol);
    if (!shape.alternating || !shape.valley) out.ok = false;
    std::map<int, int> per_level;
    for (int lv : shape.levels)
      if (lv > 0) ++per_level[lv];
    for (const auto& [lv, cnt] : per_level)
      if (cnt > 4) out.ok = false;
    if (norm.first() != it.first() || norm.last() != it.last()) out.ok = false;
    // First/last shortcut preservation is a property of the alternating
    // form: bounce collapse may drop an out-and-back prefix of the raw input.
    Itinerary alt = make_alternating(it, family, space);
    auto sc_in = traversed(alt, family), sc_out = traversed(norm, family);
    if (!sc_in.empty()) {
      if (sc_out.empty() || sc_out.front() != sc_in.front() ||
          sc_out.back() != sc_in.back())
        out.ok = false;
    }
    if (c_out > c_in + kExactTol) out.ok = false;
    // Oracle: greedy reduction reaches the cheapest irreducible rewrite.
    double best = min_reduced_cost(alt, family, space);
    out.oracle_margin = kExactTol - std::abs(c_out - best);
    if (std::abs(c_out - best) > kExactTol) out.oracle_ok = false;
  });
  double worst = kInf, worst_oracle = kInf;
  std::uint64_t bad = 0, bad_oracle = 0;
  for (const Item& it : items) {
    worst = std::min(worst, it.margin);
    worst_oracle = std::min(worst_oracle, it.oracle_margin);
    if (!it.ok) ++bad;
    if (!it.oracle_ok) ++bad_oracle;
  }
  push_check(rep, "normal-form-random", "normal-form", bad == 0, worst,
             "10000 random itineraries: alternating valley output, <= 4 "
             "shortcuts per level, cost non-increasing, extremes and "
             "first/last shortcuts kept; violations " + std::to_string(bad));
  push_check(rep, "normal-form-oracle", "normal-form", bad_oracle == 0,
             worst_oracle,
             "greedy normal form matches the exhaustive minimum over all "
             "reduction orders on every instance (<= 12 points); mismatches " +
                 std::to_string(bad_oracle));
}

void check_engine_oracle(VerificationReport& rep, const SuiteConfig& cfg) {
  constexpr std::size_t kInstances = 100;
  struct Item {
    double oracle_margin = kInf;
    double prune_margin = kInf;
    bool ok = true;
  };
  std::vector<Item> items(kInstances);
  parallel_for(kInstances, cfg.threads, [&](std::size_t i) {
    RngStream rng = RngStream::substream(cfg.seed, "engine-oracle", i);
    std::size_t npts = 4 + rng.index(9);  // 4..12
    std::vector<std::array<double, 2>> pts;
    for (std::size_t k = 0; k < npts; ++k)
      pts.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)});
    SyntheticSpace space = SyntheticSpace::plane(pts);
    ShortcutConfig scfg = ShortcutConfig::with_lambda(0.5);
    ShortcutFamily family(scfg);
    std::set<std::pair<PointId, PointId>> used;
    std::size_t want = 1 + rng.index(6);
    for (std::size_t k = 0; k < 4 * want && used.size() < want; ++k) {
      PointId a = rng.index(npts), b = rng.index(npts);
      if (a == b) continue;
      auto pr = std::minmax(a, b);
      if (!used.insert({pr.first, pr.second}).second) continue;
      int level = 1 + static_cast<int>(rng.index(4));
      Shortcut sc;
      sc.a = a;
      sc.b = b;
      sc.level = level;
      sc.cost = rng.u01() * scfg.schedule.alpha(level) * space.rho(a, b);
      family.add(space, sc);
    }
    // Floyd-Warshall over per-step costs: the exact itinerary minimum.
    std::vector<std::vector<double>> d(npts, std::vector<double>(npts, 0.0));
    for (std::size_t a = 0; a < npts; ++a)
      for (std::size_t b = 0; b < npts; ++b)
        if (a != b) d[a][b] = step_cost(a, b, family, space);
    for (std::size_t k = 0; k < npts; ++k)
      for (std::size_t a = 0; a < npts; ++a)
        for (std::size_t b = 0; b < npts; ++b)
          d[a][b] = std::min(d[a][b], d[a][k] + d[k][b]);

    FamilySource src(space, family);
    PointId x = rng.index(npts), y = rng.index(npts);
    while (y == x) y = rng.index(npts);
    EngineOptions opt;
    opt.trunc = 6;
    TruncatedMetric tm(src, opt);
    double got = tm.distance(x, y).value;
    Item& out = items[i];
    out.oracle_margin = kExactTol - std::abs(got - d[x][y]);
    if (std::abs(got - d[x][y]) > kExactTol) out.ok = false;
    EngineOptions raw = opt;
    raw.budget_prune = false;
    TruncatedMetric tu(src, raw);
    double full = tu.distance(x, y).value;
    out.prune_margin = -std::abs(got - full);
    if (got != full) out.ok = false;
  });
  double worst = kInf, worst_prune = 0.0;
  std::uint64_t bad = 0;
  for (const Item& it : items) {
    worst = std::min(worst, it.oracle_margin);
    worst_prune = std::min(worst_prune, it.prune_margin);
    if (!it.ok) ++bad;
  }
  push_check(rep, "engine-oracle", "engine", bad == 0, worst,
             "distance equals Floyd-Warshall itinerary minimum on 100 "
             "synthetic instances (<= 12 points, <= 6 shortcuts); pruned and "
             "unpruned runs identical; failures " + std::to_string(bad));
}

void check_engine_truncation(VerificationReport& rep, const SuiteConfig& cfg,
                             HeisenbergGridSpace& space,
                             const ShortcutFamily& family) {
  constexpr int kPairs = 12;
  std::vector<std::pair<PointId, PointId>> pairs;
  {
    RngStream rng = RngStream::substream(cfg.seed, "trunc-pairs");
    for (int i = 0; i < kPairs; ++i) {
      HPoint p{rng.uniform(0.02, 0.23), rng.uniform(0.02, 0.23),
               rng.uniform(0.001, 0.03)};
      HPoint q{rng.uniform(0.02, 0.23), rng.uniform(0.02, 0.23),
               rng.uniform(0.001, 0.03)};
      pairs.emplace_back(space.add_point(space.snap(p)),
                         space.add_point(space.snap(q)));
    }
  }
  std::unique_ptr<FamilySource> src = make_source(space, family);
  std::vector<std::array<double, 6>> vals(kPairs);
  parallel_for(kPairs, cfg.threads, [&](std::size_t i) {
    for (int trunc = 3; trunc <= 8; ++trunc) {
      EngineOptions opt;
      opt.trunc = trunc;
      TruncatedMetric tm(*src, opt);
      vals[i][trunc - 3] = tm.distance(pairs[i].first, pairs[i].second).value;
    }
  });
  double worst = kInf;
  std::uint64_t bad = 0;
  for (int i = 0; i < kPairs; ++i) {
    for (int trunc = 3; trunc <= 8; ++trunc) {
      double v = vals[i][trunc - 3];
      if (trunc > 3) {
        double prev = vals[i][trunc - 4];
        worst = std::min(worst, prev - v + kExactTol);
        if (v > prev + kExactTol) ++bad;
      }
      double gap = v - vals[i][5];
      double cap = truncation_error(cfg.lambda, trunc);
      worst = std::min(worst, cap - gap);
      if (gap > cap + kExactTol) ++bad;
    }
  }
  push_check(rep, "engine-truncation", "engine", bad == 0, worst,
             "monotone in the truncation level with certified gap bound, "
             "levels 3..8 on 12 grid pairs; violations " + std::to_string(bad));
}

void check_ball_structure(VerificationReport& rep, const SuiteConfig& cfg,
                          HeisenbergGridSpace& space,
                          const ShortcutFamily& family) {
  constexpr std::size_t kTrials = 1000;
  std::vector<PointId> centers(kTrials);
  {
    RngStream rng = RngStream::substream(cfg.seed, "ball-centers");
    for (std::size_t i = 0; i < kTrials; ++i)
      centers[i] = space.random_sample_point(rng);
  }
  std::unique_ptr<FamilySource> src = make_source(space, family);
  const double inclusion_c = 2.0 + 8.0 / (cfg.lambda - cfg.lambda * cfg.lambda);

  struct Item {
    int low_count = 0;
    double incl_margin = kInf;
    bool incl_ok = true;
  };
  std::vector<Item> items(kTrials);
  parallel_for(kTrials, cfg.threads, [&](std::size_t i) {
    RngStream rng = RngStream::substream(cfg.seed, "ball-structure", i);
    EngineOptions opt;
    opt.trunc = 6;
    TruncatedMetric tm(*src, opt);
    Item& out = items[i];

    int n = 1 + static_cast<int>(rng.index(6));
    double r_low = std::pow(cfg.lambda, n) * rng.u01();
    out.low_count =
        static_cast<int>(low_level_reached(tm, centers[i], r_low, n).size());

    double r = rng.uniform(0.01, 0.1);
    std::vector<SpaceBall> cover = tm.ball_cover(centers[i], r);
    double budget = inclusion_c * r;
    for (const SpaceBall& b : cover) {
      double m = budget - (space.rho(centers[i], b.center) + b.radius);
      out.incl_margin = std::min(out.incl_margin, m);
    }
    if (out.incl_margin < 0.0) {
      // The triangle bound failed; decide at point level.
      SpaceBall guard{centers[i], budget};
      out.incl_ok =
          !space.union_point_outside(cover, std::span<const SpaceBall>(&guard, 1))
               .has_value();
    }
  });
  std::uint64_t low_bad = 0, incl_bad = 0;
  double incl_worst = kInf;
  for (const Item& it : items) {
    if (it.low_count > 1) ++low_bad;
    incl_worst = std::min(incl_worst, it.incl_margin);
    if (!it.incl_ok) ++incl_bad;
  }
  push_check(rep, "ball-low-level", "ball-structure", low_bad == 0,
             low_bad == 0 ? 0.0 : -1.0,
             "at most one lower-level shortcut met by B(x, r), 1000 random "
             "(x, r, n); violations " + std::to_string(low_bad));
  push_check(rep, "ball-inclusion", "ball-structure", incl_bad == 0, incl_worst,
             "metric ball cover inside the rho-ball of " +
                 format_sig(inclusion_c) + " times the radius, 1000 random "
                 "(x, r); violations " + std::to_string(incl_bad));
}

void check_distance_ratio(VerificationReport& rep, const SuiteConfig& cfg,
                          HeisenbergGridSpace& space,
                          const ShortcutFamily& family,
                          const ShortcutFamily& zero_family) {
  std::unique_ptr<FamilySource> src = make_source(space, family);
  double eps = truncation_error(cfg.lambda, 8);
  std::vector<double> level_ratio(9, 0.0);
  double worst = kInf;
  std::uint64_t bad = 0;
  for (int n = 3; n <= 8; ++n) {
    std::vector<int> idx = family.level_indices(n);
    std::size_t take = std::min<std::size_t>(idx.size(), 40);
    std::vector<double> ratios(take);
    parallel_for(take, cfg.threads, [&](std::size_t k) {
      const Shortcut& sc = family.at(idx[k]);
      EngineOptions opt;
      opt.trunc = 8;
      TruncatedMetric tm(*src, opt);
      ratios[k] = tm.distance(sc.a, sc.b).value / space.rho(sc.a, sc.b);
    });
    double alpha = family.config().schedule.alpha(n);
    for (std::size_t k = 0; k < take; ++k) {
      const Shortcut& sc = family.at(idx[k]);
      double rho = space.rho(sc.a, sc.b);
      double bound = alpha + eps / rho;
      worst = std::min(worst, bound - ratios[k]);
      worst = std::min(worst, alpha + kDerivedTol - ratios[k]);
      if (ratios[k] > bound || ratios[k] > alpha + kDerivedTol) ++bad;
      level_ratio[n] = std::max(level_ratio[n], ratios[k]);
    }
  }
  std::string table = "per-level max ratio:";
  for (int n = 3; n <= 8; ++n) {
    table += " L" + std::to_string(n) + "=" + format_sig(level_ratio[n]);
    if (n > 3) {
      worst = std::min(worst, level_ratio[n - 1] - level_ratio[n]);
      if (level_ratio[n] >= level_ratio[n - 1]) ++bad;
    }
  }
  double final_bound = std::pow(2.0, -8.0) + kDerivedTol;
  if (level_ratio[8] > final_bound) ++bad;
  worst = std::min(worst, final_bound - level_ratio[8]);
  push_check(rep, "distance-ratio", "distance-ratio", bad == 0, worst,
             table + "; strictly decreasing with final <= 2^-8 + tol");

  // Zero-cost schedule: the distance at shortcut pairs is exactly zero.
  std::unique_ptr<FamilySource> zsrc = make_source(space, zero_family);
  double zworst = 0.0;
  std::uint64_t zbad = 0;
  for (int n = 3; n <= 6; ++n) {
    std::vector<int> idx = zero_family.level_indices(n);
    std::size_t take = std::min<std::size_t>(idx.size(), 10);
    std::vector<double> vals(take);
    parallel_for(take, cfg.threads, [&](std::size_t k) {
      const Shortcut& sc = zero_family.at(idx[k]);
      EngineOptions opt;
      opt.trunc = 6;
      TruncatedMetric tm(*zsrc, opt);
      vals[k] = tm.distance(sc.a, sc.b).value;
    });
    for (double v : vals) {
      zworst = std::min(zworst, -v);
      if (v != 0.0) ++zbad;
    }
  }
  push_check(rep, "ratio-semidistance", "distance-ratio", zbad == 0, zworst,
             "zero-cost schedule gives exactly zero distance at shortcut "
             "pairs, levels 3..6; violations " + std::to_string(zbad));
}

void check_ahlfors(VerificationReport& rep, const SuiteConfig& cfg,
                   HeisenbergGridSpace& space, const ShortcutFamily& family) {
  constexpr int kCenters = 20;
  const double scales[4] = {0.015625, 0.03125, 0.0625, 0.125};
  std::vector<PointId> centers(kCenters);
  {
    RngStream rng = RngStream::substream(cfg.seed, "ahlfors-centers");
    for (int i = 0; i < kCenters; ++i)
      centers[i] = space.random_sample_point(rng);
  }
  std::unique_ptr<FamilySource> src = make_source(space, family);
  std::vector<std::array<std::uint64_t, 2>> counts(kCenters * 4);
  parallel_for(counts.size(), cfg.threads, [&](std::size_t item) {
    int c = static_cast<int>(item) / 4;
    double r = scales[item % 4];
    SpaceBall ball{centers[c], r};
    counts[item][0] =
        space.count_in_union(std::span<const SpaceBall>(&ball, 1));
    EngineOptions opt;
    opt.trunc = cfg.trunc;
    TruncatedMetric tm(*src, opt);
    std::vector<SpaceBall> cover = tm.ball_cover(centers[c], r);
    counts[item][1] = space.count_in_union(cover);
  });
  double lo = kInf, hi = 0.0;
  bool nonzero = true;
  for (std::size_t item = 0; item < counts.size(); ++item) {
    double r = scales[item % 4];
    for (int metric = 0; metric < 2; ++metric) {
      if (counts[item][metric] == 0) nonzero = false;
      double ratio = counts[item][metric] / (r * r * r * r);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  double band = hi / lo;
  push_check(rep, "ahlfors-band", "ahlfors", nonzero && band <= 1000.0,
             1000.0 - band,
             "count/r^4 over 4 dyadic scales x 20 centers x both metrics in "
             "one band of width " + format_sig(band));
}

void check_net_census(VerificationReport& rep, const SuiteConfig& cfg,
                      const std::vector<NetLevel>& levels) {
  std::string table = count_list("levels:", levels);
  bool defaults = cfg.lambda == 0.5 && cfg.cover_constant == 10.0 &&
                  cfg.grid_m == 7;
  if (!defaults) {
    push_check(rep, "net-census", "construction", true, 0.0,
               table + " (non-default configuration, census not pinned)");
    return;
  }
  static const std::map<int, std::size_t> want = {{1, 1},    {2, 0},
                                                  {3, 17},   {4, 241},
                                                  {5, 3732}, {6, 57346},
                                                  {7, 1842}, {8, 28309}};
  bool ok = true;
  for (const NetLevel& lv : levels) {
    auto it = want.find(lv.level);
    if (it == want.end() || lv.shortcut_indices.size() != it->second)
      ok = false;
  }
  push_check(rep, "net-census", "construction", ok, ok ? 0.0 : -1.0, table);
}

VerificationReport core_suite(const SuiteConfig& cfg) {
  VerificationReport rep;
  rep.suite = "core";
  HeisenbergEntry& entry = cached_heisenberg(cfg);
  HeisenbergGridSpace& space = *entry.build.space;
  ShortcutFamily& family = *entry.build.family;

  check_box_axioms(rep, cfg);
  check_net_census(rep, cfg, entry.build.levels);
  check_shortcut_condition(rep, cfg, space, family, 6, "shortcut-condition");
  check_normal_form(rep, cfg, space, family);
  check_engine_oracle(rep, cfg);
  check_engine_truncation(rep, cfg, space, family);
  check_ball_structure(rep, cfg, space, family);
  check_distance_ratio(rep, cfg, space, family, *entry.zero_family);
  check_ahlfors(rep, cfg, space, family);
  return rep;
}

// ---------------------------------------------------------------------------
// Self-similar set suite.

void check_kset_geometry(VerificationReport& rep) {
  double worst = kInf;
  bool ok = true;
  std::string seps = "min separation:";
  for (int n = 3; n <= 6; ++n) {
    double sep = min_center_separation(n);
    double bound = std::ldexp(4.0, -n);
    seps += " L" + std::to_string(n) + "=" + format_sig(sep);
    if (n > 3) worst = std::min(worst, sep - bound);
    if (sep < bound) ok = false;
  }
  if (min_center_separation(4) != 0.5) ok = false;
  push_check(rep, "center-separation", "self-similar", ok, worst,
             seps + "; bound 4*2^-n, level-4 minimum exactly 1/2 "
             "(observed pattern 8*2^-n)");

  std::uint64_t total = 0;
  for (int n = 4; n <= 6; ++n) total += prior_avoidance_violations(n);
  push_check(rep, "prior-avoidance", "self-similar", total == 0,
             total == 0 ? 0.0 : -static_cast<double>(total),
             "no level center within 4*2^-n of a lower-level endpoint, "
             "levels 4..6; violations " + std::to_string(total));

  double lo = kInf, hi = 0.0;
  std::string covs = "cover estimate:";
  for (int n = 3; n <= 5; ++n) {
    double c = cover_constant_estimate(n, 4);
    covs += " L" + std::to_string(n) + "=" + format_sig(c);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  double spread = hi / lo - 1.0;
  push_check(rep, "cover-stability", "self-similar", spread <= 0.1,
             0.1 - spread, covs + "; relative spread " + format_sig(spread));

  double fworst = kInf;
  bool fok = true;
  std::string fdet = "fiber spread:";
  for (int d = 3; d <= 5; ++d) {
    double got = fiber_z_spread_min(d);
    double claim = 1.0 - std::pow(4.0, 1 - d);
    double exact = 1.0 - std::pow(4.0, -d);
    fdet += " d" + std::to_string(d) + "=" + format_sig(got);
    fworst = std::min(fworst, got - claim);
    if (got < claim) fok = false;
    if (std::abs(got - exact) > kExactTol) fok = false;
  }
  push_check(rep, "fiber-spread", "self-similar", fok, fworst,
             fdet + "; bound 1-4^(1-d), observed exactly 1-4^-d");
}

void check_kset_counting(VerificationReport& rep) {
  KsetSpace sp(4);
  PointId a = sp.add_point(kset_model_a());
  SpaceBall whole{a, 10.0};
  std::uint64_t all = sp.count_in_union(std::span<const SpaceBall>(&whole, 1));
  SpaceBall small{a, 0.1};
  std::uint64_t near = sp.count_in_union(std::span<const SpaceBall>(&small, 1));
  bool ok = all == sp.sample_size() && all == 65536 && near == 46;
  push_check(rep, "counting-measure", "self-similar", ok, ok ? 0.0 : -1.0,
             "depth-4 cell count: whole space " + std::to_string(all) +
                 ", B(model point, 0.1) " + std::to_string(near));

  double d = box_distance(kset_model_a(), kset_model_b());
  bool mok = d == 0.125;
  double scale_err = 0.0;
  for (int digit = 0; digit < kKsetBranch; ++digit) {
    double dd = box_distance(sim_apply(digit, kset_model_a()),
                             sim_apply(digit, kset_model_b()));
    scale_err = std::max(scale_err, std::abs(dd - 0.0625));
  }
  push_check(rep, "model-pair", "self-similar", mok && scale_err == 0.0,
             scale_err == 0.0 ? 0.0 : -scale_err,
             "model pair distance exactly 1/8; halves exactly under each of "
             "the 16 maps");
}

void check_kset_scaling(VerificationReport& rep, const SuiteConfig& cfg) {
  constexpr std::size_t kPairs = 100;
  const double cap = 0.0625;  // pair separation cap 2^-4
  const double eps9 = truncation_error(0.5, 9);
  const double eps7 = truncation_error(0.5, 7);
  const double eq_tol = eps9 + 0.25 * eps7;

  MultiIndex interior;
  {
    RngStream rng = RngStream::substream(cfg.seed, "kset-interior");
    interior = find_interior_cell(5, 0.5, 64, rng);
  }
  CellMap base = cell_map(interior);

  struct Item {
    double eq_margin = kInf;
    double up7_margin = kInf;
    double up9_margin = kInf;
    double rho = 0.0;
    bool ok = true;
  };
  std::vector<Item> items(kPairs);
  parallel_for(kPairs, cfg.threads, [&](std::size_t i) {
    RngStream rng = RngStream::substream(cfg.seed, "kset-scaling", i);
    KsetSpace space(cfg.kset_depth);
    KsetSource src(space, 9);

    auto draw = [&] {
      CellMap m = base;
      for (int k = 0; k < 3; ++k) m = m.child(static_cast<int>(rng.index(16)));
      return m.apply(kset_model_a());
    };
    HPoint px = draw(), py = draw();
    double rho = box_distance(px, py);
    while (rho == 0.0 || rho > cap) {
      px = draw();
      py = draw();
      rho = box_distance(px, py);
    }
    MultiIndex w = {static_cast<std::uint8_t>(rng.index(16)),
                    static_cast<std::uint8_t>(rng.index(16))};
    HPoint sx = sim_apply(w, px), sy = sim_apply(w, py);

    PointId x = space.add_point(px), y = space.add_point(py);
    PointId ix = space.add_point(sx), iy = space.add_point(sy);

    EngineOptions o9, o7;
    o9.trunc = 9;
    o7.trunc = 7;
    TruncatedMetric m9(src, o9), m7(src, o7);

    src.prefetch(x, 3.0 * rho);
    double b9 = m9.distance(x, y).value;
    double b7 = m7.distance(x, y).value;
    src.prefetch(ix, 0.75 * rho);
    double a9 = m9.distance(ix, iy).value;

    Item& out = items[i];
    out.rho = rho;
    out.eq_margin = eq_tol - std::abs(a9 - 0.25 * b9);
    out.up7_margin = 0.25 * b7 + kExactTol - a9;
    out.up9_margin = 0.25 * b9 + eps9 + kExactTol - a9;
    if (out.eq_margin < 0.0 || out.up7_margin < 0.0 || out.up9_margin < 0.0)
      out.ok = false;
  });
  double eq_worst = kInf, up_worst = kInf;
  std::uint64_t bad = 0;
  for (const Item& it : items) {
    eq_worst = std::min(eq_worst, it.eq_margin);
    up_worst = std::min(up_worst, std::min(it.up7_margin, it.up9_margin));
    if (!it.ok) ++bad;
  }
  push_check(rep, "scaling-equality", "scaling", bad == 0, eq_worst,
             "|d9(S x, S y) - d9(x, y)/4| <= " + format_sig(eq_tol) +
                 " on 100 interior pairs (two-map images); failures " +
                 std::to_string(bad));
  push_check(rep, "scaling-upper", "scaling", up_worst >= 0.0, up_worst,
             "unconditional d9(S x, S y) <= d7(x, y)/4 and <= d9(x, y)/4 + "
             "truncation on all pairs");
}

VerificationReport kset_suite(const SuiteConfig& cfg) {
  VerificationReport rep;
  rep.suite = "kset";
  check_kset_geometry(rep);
  check_kset_counting(rep);
  check_kset_scaling(rep, cfg);
  return rep;
}

// ---------------------------------------------------------------------------
// Vertical suite.

const ASequence& cached_sequence() {
  static ASequence seq(100000);
  return seq;
}

void check_sequence(VerificationReport& rep) {
  const ASequence& seq = cached_sequence();
  static const int prefix[9] = {0, 0, 0, 0, 1, 0, 0, 0, 1};
  bool ok = true;
  for (int i = 1; i <= 8; ++i)
    if (seq.a(i) != prefix[i]) ok = false;
  if (seq.a(15) != 1) ok = false;
  std::string bits;
  for (int i = 1; i <= 20; ++i) bits += char('0' + seq.a(i));
  push_check(rep, "sequence-prefix", "sequence", ok, ok ? 0.0 : -1.0,
             "first 20 values " + bits);

  std::uint64_t bad = 0;
  for (int k = 0; k <= 1000; ++k)
    if (seq.a(4 * (k + 1)) != 1) ++bad;
  push_check(rep, "sequence-multiples", "sequence", bad == 0,
             bad == 0 ? 0.0 : -1.0,
             "value 1 at every multiple of 4 up to 4004; misses " +
                 std::to_string(bad));

  std::uint64_t overlaps = 0;
  for (std::uint64_t i = 1; i <= 100000; ++i) {
    int member = 0;
    for (int ell = 1; ell <= 5; ++ell)
      if (ASequence::in_progression(i, ell)) ++member;
    if (member > 1) ++overlaps;
  }
  push_check(rep, "progression-disjoint", "sequence", overlaps == 0,
             overlaps == 0 ? 0.0 : -1.0,
             "progressions 1..5 pairwise disjoint below 100000; overlaps " +
                 std::to_string(overlaps));

  std::uint64_t failures = 0;
  std::string steps = "steps:";
  for (int ell : {1, 2, 3}) {
    FlipCheck fc = window_flip_check(seq, ell, 10000);
    failures += fc.failures;
    steps += " " + std::to_string(fc.step);
  }
  push_check(rep, "window-flips", "sequence", failures == 0,
             failures == 0 ? 0.0 : -1.0,
             "every window of one step length contains a flip, indices 1..10000, "
             "progressions 1..3 (" + steps + "); failures " +
                 std::to_string(failures));
}

void check_vertical_grids(VerificationReport& rep) {
  const ASequence& seq = cached_sequence();
  BoundGridResult g = general_bound_grid(seq, 1, 10, 40);
  push_check(rep, "general-bound-grid", "vertical-bounds",
             g.violations == 0 && g.worst_margin > 0.0, g.worst_margin,
             "search upper bound stays above the closed-form lower bound on "
             "the 10x40 grid; violations " + std::to_string(g.violations));
  BoundGridResult h = gap_level_bound_grid(seq, 1, 10, 40);
  push_check(rep, "gap-bound-grid", "vertical-bounds",
             h.violations == 0 && h.worst_margin > 0.0, h.worst_margin,
             "stronger bound on the jump-free sub-grid (" +
                 std::to_string(h.checked) + " cells); violations " +
                 std::to_string(h.violations));
}

void check_two_step(VerificationReport& rep) {
  const ASequence& seq = cached_sequence();
  double eta = eta_for_epsilon(0.05);
  push_check(rep, "eta-positive", "vertical-bounds", eta > 0.0, eta,
             "largest admissible half-width at epsilon 0.05 is " +
                 format_sig(eta));
  double worst = kInf;
  bool ok = true;
  for (int n : {4, 8, 12}) {
    for (double t : {eta / 2.0, -eta / 2.0}) {
      TwoStepCheck ts = two_step_certificate(seq, n, t, 0.05);
      worst = std::min(worst, ts.bound - ts.cost);
      if (!ts.ok) ok = false;
    }
  }
  push_check(rep, "two-step", "vertical-bounds", ok, worst,
             "jump-then-walk itinerary certifies the (1/2 + eps) bound at "
             "levels 4, 8, 12 for both signs of the offset");
}

void check_search_oracle(VerificationReport& rep, const SuiteConfig& cfg) {
  const ASequence& seq = cached_sequence();
  (void)seq;
  RngStream rng = RngStream::substream(cfg.seed, "vertical-cross");
  double worst = kInf;
  std::uint64_t bad = 0;
  for (int c = 0; c < 200; ++c) {
    std::size_t nlev = 1 + rng.index(4);
    std::vector<int> lv;
    for (std::size_t k = 0; k < nlev; ++k) {
      int n = 1 + static_cast<int>(rng.index(10));
      bool dup = false;
      for (int x : lv) dup |= (x == n);
      if (!dup) lv.push_back(n);
    }
    std::sort(lv.begin(), lv.end());
    JumpMenu menu;
    menu.levels = lv;
    std::vector<BruteEntry> entries;
    for (int n : lv) entries.push_back({std::ldexp(1.0, -2 * n), true});
    VerticalQuery q;
    q.height = rng.uniform(-0.5, 0.5);
    q.norm.kappa = rng.uniform(0.5, 2.0);
    double a = vertical_upper(q, menu).cost;
    double b = vertical_bruteforce(q.height, q.norm, entries, 3);
    worst = std::min(worst, kExactTol - std::abs(a - b));
    if (std::abs(a - b) > kExactTol) ++bad;
  }
  push_check(rep, "search-class-oracle", "vertical-bounds", bad == 0, worst,
             "branch-and-bound equals the exhaustive odometer on 200 random "
             "menus and heights; mismatches " + std::to_string(bad));
}

void check_columns(VerificationReport& rep, const SuiteConfig& cfg) {
  const ASequence& seq = cached_sequence();
  auto d2 = dyadic_centers(2, {0.0, 1.0}, {0.0, 1.0});
  std::vector<double> zs = {0.0, 0.25, 0.5};
  auto fam = column_family(seq, 3, 5, {0.0, 1.0}, {0.0, 1.0}, zs,
                           VerticalNorm{});
  bool exact = d2.size() == 16;
  for (const ColumnShortcut& cs : fam) {
    if (box_distance(cs.a, cs.b) != std::ldexp(1.0, -cs.level)) exact = false;
  }
  push_check(rep, "column-family", "vertical-bounds", exact,
             exact ? 0.0 : -1.0,
             "16 unit-window centers at level 2; every column pair at exact "
             "distance 2^-n (" + std::to_string(fam.size()) + " pairs)");

  RngStream rng = RngStream::substream(cfg.seed, "corner-column");
  CornerColumnCheck cc = corner_column_check(seq, 4, 1.0, 0.01, 200, rng);
  push_check(rep, "corner-column", "vertical-bounds", cc.ok,
             std::min(cc.escape_worst, cc.in_column_cost - cc.bound),
             "escape paths cost at least (1-2 delta) 2^-n and the in-column "
             "search stays above the jump-free bound at level 4");

  double eta = eta_for_epsilon(0.05);
  ColumnUpperCheck cu = column_upper_check(seq, 4, eta / 2.0, 0.05,
                                           {0.0, 0.0});
  push_check(rep, "column-upper", "vertical-bounds", cu.ok && cu.eta > 0.0,
             cu.bound - cu.cost,
             "walk-jump-walk conjugation certificate at level 4; admissible "
             "planar radius " + format_sig(cu.eta) + " cell widths");
}

void check_blowup(VerificationReport& rep) {
  const ASequence& seq = cached_sequence();
  const int js[6] = {3, 4, 5, 6, 7, 8};
  const double ss[1] = {1.0};
  const int extra = 12;
  auto table = blowup_table(seq, js, ss, extra);
  std::string rows = "ratios:";
  for (const BlowupRow& r : table)
    rows += " j" + std::to_string(r.j) + "=" + format_sig(r.ratio);
  ContrastPair cp = blowup_contrast(table, 1.0, 2, 0.52, 0.55);
  // Deepening the menu can lower a value by at most kappa * 2^-(j+extra),
  // i.e. 2^-extra on the reported ratio.
  double slack = std::ldexp(1.0, -extra);
  bool ok = cp.found && slack < 0.01;
  double margin = cp.found
                      ? std::min({0.52 - cp.low_ratio, cp.high_ratio - 0.55,
                                  0.01 - slack})
                      : -1.0;
  push_check(rep, "blowup-contrast", "blowup", ok, margin,
             rows + "; pair (" + std::to_string(cp.j_low) + ", " +
                 std::to_string(cp.j_high) + ") at log-distance 2 with "
                 "menu truncation slack " + format_sig(slack));
}

VerificationReport vertical_suite(const SuiteConfig& cfg) {
  VerificationReport rep;
  rep.suite = "vertical";
  check_sequence(rep);
  check_vertical_grids(rep);
  check_two_step(rep);
  check_search_oracle(rep, cfg);
  check_columns(rep, cfg);
  check_blowup(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// Snowflake suite.

struct SnowflakeEntry {
  std::unique_ptr<SnowflakeLineSpace> space;
  std::unique_ptr<ShortcutFamily> family;
  std::vector<NetLevel> levels;
  std::string failure;
};

SnowflakeEntry& cached_snowflake() {
  static std::mutex mu;
  static std::unique_ptr<SnowflakeEntry> entry;
  std::lock_guard<std::mutex> lock(mu);
  if (entry) return *entry;
  entry = std::make_unique<SnowflakeEntry>();
  entry->space = std::make_unique<SnowflakeLineSpace>(0.5, 22);
  ShortcutConfig cfg = ShortcutConfig::with_lambda(entry->space->lambda());
  cfg.max_level = 6;
  entry->family = std::make_unique<ShortcutFamily>(cfg);
  try {
    for (int n = 1; n <= 6; ++n) {
      entry->levels.push_back(build_level(*entry->space, *entry->family, n));
    }
  } catch (const CoverageError& e) {
    entry->failure = e.what();
  }
  return *entry;
}

VerificationReport snowflake_suite(const SuiteConfig& cfg) {
  VerificationReport rep;
  rep.suite = "snowflake";
  SnowflakeEntry& entry = cached_snowflake();
  SnowflakeLineSpace& space = *entry.space;
  ShortcutFamily& family = *entry.family;

  double lam = space.lambda();
  double want = std::pow(2.0, -2.0 * 0.5) * std::pow(1.0 - 0.5, 0.5);
  push_check(rep, "scale-ratio", "construction",
             std::abs(lam - want) <= kExactTol && lam < 0.5,
             kExactTol - std::abs(lam - want),
             "snowflake scale ratio " + format_sig(lam));

  push_check(rep, "net-coverage", "construction", entry.failure.empty(),
             entry.failure.empty() ? 0.0 : -1.0,
             entry.failure.empty()
                 ? count_list("separated nets cover at every level;", entry.levels)
                 : entry.failure);

  double aworst = kInf;
  std::uint64_t abad = 0;
  for (const NetLevel& lv : entry.levels) {
    double r = std::pow(lam, lv.level);
    double outer = space.annulus_outer(r), inner = space.annulus_inner(r);
    for (int idx : lv.shortcut_indices) {
      const Shortcut& sc = family.at(idx);
      double base = std::abs(space.coord(sc.a) - space.coord(sc.b));
      aworst = std::min({aworst, outer - base, base - inner});
      if (base > outer || base <= inner) ++abad;
    }
  }
  push_check(rep, "endpoint-annulus", "construction", abad == 0, aworst,
             "second endpoints in the base-distance annulus at every level; "
             "violations " + std::to_string(abad));

  check_shortcut_condition(rep, cfg, space, family, 6, "shortcut-condition");
  return rep;
}

}  // namespace

VerificationReport run_suite(const std::string& name, const SuiteConfig& cfg) {
  if (name == "core") return core_suite(cfg);
  if (name == "kset") return kset_suite(cfg);
  if (name == "vertical") return vertical_suite(cfg);
  if (name == "snowflake") return snowflake_suite(cfg);
  throw std::invalid_argument("unknown suite: " + name);
}

// ---------------------------------------------------------------------------
// Scan tables.

CsvTable ratio_series(const SuiteConfig& cfg) {
  HeisenbergEntry& entry = cached_heisenberg(cfg);
  HeisenbergGridSpace& space = *entry.build.space;
  ShortcutFamily& family = *entry.build.family;
  std::unique_ptr<FamilySource> src = make_source(space, family);
  double eps = truncation_error(cfg.lambda, 8);
  CsvTable out;
  out.header = "level,alpha,ratio,eps";
  for (int n = 3; n <= 8; ++n) {
    std::vector<int> idx = family.level_indices(n);
    std::size_t take = std::min<std::size_t>(idx.size(), 40);
    std::vector<double> ratios(take);
    parallel_for(take, cfg.threads, [&](std::size_t k) {
      const Shortcut& sc = family.at(idx[k]);
      EngineOptions opt;
      opt.trunc = 8;
      TruncatedMetric tm(*src, opt);
      ratios[k] = tm.distance(sc.a, sc.b).value / space.rho(sc.a, sc.b);
    });
    double top = 0.0;
    for (double r : ratios) top = std::max(top, r);
    out.rows.push_back(std::to_string(n) + "," +
                       format_sig(family.config().schedule.alpha(n)) + "," +
                       format_sig(top) + "," + format_sig(eps));
  }
  return out;
}

CsvTable ahlfors_series(const SuiteConfig& cfg) {
  HeisenbergEntry& entry = cached_heisenberg(cfg);
  HeisenbergGridSpace& space = *entry.build.space;
  ShortcutFamily& family = *entry.build.family;
  constexpr int kCenters = 20;
  const double scales[4] = {0.015625, 0.03125, 0.0625, 0.125};
  std::vector<PointId> centers(kCenters);
  {
    RngStream rng = RngStream::substream(cfg.seed, "ahlfors-centers");
    for (int i = 0; i < kCenters; ++i)
      centers[i] = space.random_sample_point(rng);
  }
  std::unique_ptr<FamilySource> src = make_source(space, family);
  std::vector<std::array<std::uint64_t, 2>> counts(kCenters * 4);
  parallel_for(counts.size(), cfg.threads, [&](std::size_t item) {
    int c = static_cast<int>(item) / 4;
    double r = scales[item % 4];
    SpaceBall ball{centers[c], r};
    counts[item][0] =
        space.count_in_union(std::span<const SpaceBall>(&ball, 1));
    EngineOptions opt;
    opt.trunc = cfg.trunc;
    TruncatedMetric tm(*src, opt);
    counts[item][1] = space.count_in_union(tm.ball_cover(centers[c], r));
  });
  CsvTable out;
  out.header = "scale,center,metric,count";
  for (int c = 0; c < kCenters; ++c) {
    for (int s = 0; s < 4; ++s) {
      std::size_t item = static_cast<std::size_t>(c) * 4 + s;
      out.rows.push_back(format_sig(scales[s]) + "," + std::to_string(c) +
                         ",rho," + std::to_string(counts[item][0]));
      out.rows.push_back(format_sig(scales[s]) + "," + std::to_string(c) +
                         ",hat," + std::to_string(counts[item][1]));
    }
  }
  return out;
}

CsvTable blowup_series(const SuiteConfig& cfg) {
  (void)cfg;
  const ASequence& seq = cached_sequence();
  const int js[6] = {3, 4, 5, 6, 7, 8};
  const double ss[3] = {1.0, 2.0, 4.0};
  auto table = blowup_table(seq, js, ss, 12);
  CsvTable out;
  out.header = "j,s,ratio";
  for (const BlowupRow& r : table) {
    out.rows.push_back(std::to_string(r.j) + "," + format_sig(r.s) + "," +
                       format_sig(r.ratio));
  }
  return out;
}

CsvTable aseq_series(const SuiteConfig& cfg, unsigned long long max_index) {
  (void)cfg;
  if (max_index < 1) throw std::invalid_argument("need a positive bound");
  ASequence seq(max_index);
  CsvTable out;
  out.header = "i,a";
  for (unsigned long long i = 1; i <= max_index; ++i) {
    out.rows.push_back(std::to_string(i) + "," + std::to_string(seq.a(i)));
  }
  return out;
}

}  // namespace shortcut
