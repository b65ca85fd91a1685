// Command-line front end: build the shortcut constructions, query the
// truncated metric, run verification suites, export data series.

#include <cstdio>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shortcut/engine.hpp"
#include "shortcut/heis_grid.hpp"
#include "shortcut/heisenberg.hpp"
#include "shortcut/kset.hpp"
#include "shortcut/net.hpp"
#include "shortcut/report.hpp"
#include "shortcut/snowflake.hpp"
#include "shortcut/suites.hpp"
#include "shortcut/vertical.hpp"

namespace {

using namespace shortcut;

struct CliConfig {
  SuiteConfig suite;
  std::string space = "heisenberg";
  int grid_m = -1;  // <0: per-space default (heisenberg 7, snowflake 22)
};

int heis_m(const CliConfig& cfg) { return cfg.grid_m < 0 ? 7 : cfg.grid_m; }
int snow_m(const CliConfig& cfg) { return cfg.grid_m < 0 ? 22 : cfg.grid_m; }

void print_report(const VerificationReport& rep) {
  for (const CheckResult& c : rep.checks) {
    std::printf("[%s] %-22s margin=%-18s %s\n", to_string(c.status),
                c.id.c_str(), format_sig(c.margin).c_str(), c.details.c_str());
  }
  std::printf("%s: %d checks, %d passed, %d failed, %d inconclusive\n",
              rep.suite.c_str(), static_cast<int>(rep.checks.size()),
              rep.passed(), rep.failed(), rep.inconclusive());
}

std::string write_report(const VerificationReport& rep,
                         const std::string& outdir, const std::string& stem) {
  std::filesystem::create_directories(outdir);
  std::string path = (std::filesystem::path(outdir) / (stem + ".json")).string();
  write_text_file(path, to_json(rep));
  return path;
}

std::string write_csv(const CsvTable& table, const std::string& outdir,
                      const std::string& stem) {
  std::filesystem::create_directories(outdir);
  std::string path = (std::filesystem::path(outdir) / (stem + ".csv")).string();
  write_text_file(path, table.to_string());
  return path;
}

ShortcutConfig shortcut_config(const CliConfig& cfg, double lambda) {
  ShortcutConfig sc = ShortcutConfig::with_lambda(lambda);
  if (cfg.space == "heisenberg") {
    sc.cover_constant = cfg.suite.cover_constant;
  }
  sc.schedule = cfg.suite.schedule == "zero" ? CostSchedule::zero()
                                             : CostSchedule::geometric();
  return sc;
}

// ---------------------------------------------------------------------------
// build

int run_build(const CliConfig& cfg) {
  VerificationReport rep;
  rep.suite = "build-" + cfg.space;
  std::printf("level,centers,shortcuts\n");
  auto level_check = [&rep](const NetLevel& lv, std::size_t shortcuts) {
    std::printf("%d,%zu,%zu\n", lv.level, lv.centers.size(), shortcuts);
    std::string id = "level-" + std::to_string(lv.level);
    std::string details = std::to_string(lv.centers.size()) + " centers, " +
                          std::to_string(shortcuts) + " shortcuts";
    for (const std::string& note : lv.notes) details += "; " + note;
    rep.checks.push_back({id, "construction", CheckStatus::pass, 0.0, details});
  };
  try {
    if (cfg.space == "heisenberg") {
      HeisenbergBuildOptions opt;
      opt.grid_m = heis_m(cfg);
      opt.cfg = shortcut_config(cfg, cfg.suite.lambda);
      HeisenbergBuild build = build_heisenberg(opt);
      for (const NetLevel& lv : build.levels)
        level_check(lv, lv.shortcut_indices.size());
    } else if (cfg.space == "snowflake") {
      SnowflakeLineSpace space(0.5, snow_m(cfg));
      ShortcutConfig sc = shortcut_config(cfg, space.lambda());
      ShortcutFamily family(sc);
      for (int n = 1; n <= sc.max_level; ++n) {
        NetLevel lv = build_level(space, family, n);
        level_check(lv, lv.shortcut_indices.size());
      }
    } else if (cfg.space == "kset") {
      for (int n = 3; n <= 6; ++n) {
        std::size_t centers = level_centers(n).size();
        std::printf("%d,%zu,%zu\n", n, centers, 2 * centers);
        rep.checks.push_back(
            {"level-" + std::to_string(n), "construction", CheckStatus::pass,
             min_center_separation(n),
             std::to_string(centers) + " centers, separation " +
                 format_sig(min_center_separation(n))});
      }
    } else {
      throw std::invalid_argument("build supports heisenberg, snowflake, kset");
    }
  } catch (const CoverageError& e) {
    rep.checks.push_back(
        {"coverage", "construction", CheckStatus::fail, -1.0, e.what()});
  }
  std::string path = write_report(rep, cfg.suite.outdir, rep.suite);
  std::printf("report: %s\n", path.c_str());
  return rep.exit_code();
}

// ---------------------------------------------------------------------------
// distance

void print_distance(const DistanceResult& res, double rho) {
  std::printf("d_hat = %s\n", format_sig(res.value).c_str());
  std::printf("eps = %s (truncation level %d)\n", format_sig(res.eps).c_str(),
              res.trunc);
  std::printf("d in [%s, %s]\n",
              format_sig(std::max(0.0, res.value - res.eps)).c_str(),
              format_sig(res.value).c_str());
  std::printf("rho = %s, settled %zu, discovered %zu\n",
              format_sig(rho).c_str(), static_cast<std::size_t>(res.settled),
              static_cast<std::size_t>(res.discovered));
}

int run_distance(const CliConfig& cfg, const std::vector<double>& from,
                 const std::vector<double>& to) {
  HPoint a{from[0], from[1], from[2]};
  HPoint b{to[0], to[1], to[2]};
  EngineOptions opt;
  opt.trunc = cfg.suite.trunc;
  if (cfg.space == "heisenberg") {
    HeisenbergBuildOptions bopt;
    bopt.grid_m = heis_m(cfg);
    bopt.cfg = shortcut_config(cfg, cfg.suite.lambda);
    if (opt.trunc > bopt.cfg.max_level) {
      bopt.deep_min_level = bopt.cfg.max_level + 1;
      bopt.deep_max_level = std::min(opt.trunc, 8);
    }
    HeisenbergBuild build = build_heisenberg(bopt);
    const auto& g = build.space->grid();
    auto in_box = [&](const HPoint& p) {
      return p.x >= g.x[0] && p.x <= g.x[1] && p.y >= g.y[0] &&
             p.y <= g.y[1] && p.z >= g.z[0] && p.z <= g.z[1];
    };
    if (!in_box(a) || !in_box(b))
      throw std::invalid_argument("points must lie in the unit sample box");
    PointId x = build.space->add_point(build.space->snap(a));
    PointId y = build.space->add_point(build.space->snap(b));
    const HPoint& pa = build.space->point(x);
    const HPoint& pb = build.space->point(y);
    std::printf("from (%g, %g, %g) snapped to (%g, %g, %g)\n", a.x, a.y, a.z,
                pa.x, pa.y, pa.z);
    std::printf("to   (%g, %g, %g) snapped to (%g, %g, %g)\n", b.x, b.y, b.z,
                pb.x, pb.y, pb.z);
    FamilySource src(*build.space, *build.family);
    src.set_coords(
        [&space = *build.space](PointId id) {
          const HPoint& p = space.point(id);
          return std::array<double, 2>{p.x, p.y};
        },
        0.03125);
    TruncatedMetric tm(src, opt);
    print_distance(tm.distance(x, y), build.space->rho(x, y));
  } else if (cfg.space == "snowflake") {
    SnowflakeLineSpace space(0.5, snow_m(cfg));
    ShortcutConfig sc = shortcut_config(cfg, space.lambda());
    ShortcutFamily family(sc);
    for (int n = 1; n <= sc.max_level; ++n) build_level(space, family, n);
    PointId x = space.add_point(a.x);
    PointId y = space.add_point(b.x);
    std::printf("snowflake points %s and %s (y, z ignored)\n",
                format_sig(space.coord(x)).c_str(),
                format_sig(space.coord(y)).c_str());
    FamilySource src(space, family);
    TruncatedMetric tm(src, opt);
    print_distance(tm.distance(x, y), space.rho(x, y));
  } else if (cfg.space == "kset") {
    KsetSpace space(cfg.suite.kset_depth);
    KsetSource src(space, opt.trunc);
    PointId x = space.add_point(a);
    PointId y = space.add_point(b);
    double rho = space.rho(x, y);
    src.prefetch(x, 3.0 * std::max(rho, 1e-3));
    src.prefetch(y, 3.0 * std::max(rho, 1e-3));
    TruncatedMetric tm(src, opt);
    print_distance(tm.distance(x, y), rho);
  } else {
    throw std::invalid_argument(
        "distance supports heisenberg, snowflake, kset");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify / scan / aseq

int run_verify(const CliConfig& cfg, const std::string& suite) {
  VerificationReport rep = run_suite(suite, cfg.suite);
  print_report(rep);
  std::string path =
      write_report(rep, cfg.suite.outdir, "scmetric-verify-" + suite);
  std::printf("report: %s\n", path.c_str());
  return rep.exit_code();
}

int run_scan(const CliConfig& cfg, const std::string& kind,
             unsigned long long max_index) {
  CsvTable table;
  if (kind == "ratio") {
    table = ratio_series(cfg.suite);
  } else if (kind == "ahlfors") {
    table = ahlfors_series(cfg.suite);
  } else if (kind == "blowup") {
    table = blowup_series(cfg.suite);
  } else if (kind == "aseq") {
    table = aseq_series(cfg.suite, max_index);
  } else {
    throw std::invalid_argument("unknown scan kind: " + kind);
  }
  std::string path = write_csv(table, cfg.suite.outdir, "scmetric-" + kind);
  std::printf("wrote %s (%zu rows)\n", path.c_str(), table.rows.size());
  return 0;
}

int run_aseq(unsigned long long max_index) {
  ASequence seq(max_index);
  std::string line;
  for (unsigned long long i = 1; i <= max_index; ++i) {
    if (i > 1) line += ",";
    line += std::to_string(seq.a(i));
  }
  std::printf("%s\n", line.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "shortcut metrics: constructions, truncated distances, verification "
      "suites, and data series"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "config file with key = value lines");

  CliConfig cfg;
  app.add_option("--space", cfg.space, "heisenberg | snowflake | kset")
      ->check(CLI::IsMember({"heisenberg", "snowflake", "kset"}))
      ->capture_default_str();
  app.add_option("--lambda", cfg.suite.lambda, "scale ratio")
      ->check(CLI::Range(1e-6, 0.999))
      ->capture_default_str();
  app.add_option("--cover", cfg.suite.cover_constant, "coverage constant")
      ->capture_default_str();
  app.add_option("--schedule", cfg.suite.schedule,
                 "cost schedule: geometric | zero")
      ->check(CLI::IsMember({"geometric", "zero"}))
      ->capture_default_str();
  app.add_option("--trunc", cfg.suite.trunc, "truncation level")
      ->check(CLI::Range(1, 12))
      ->capture_default_str();
  app.add_option("--grid-m", cfg.grid_m,
                 "sample resolution exponent (default per space)");
  app.add_option("--seed", cfg.suite.seed, "base seed for randomized sweeps")
      ->capture_default_str();
  app.add_option("--threads", cfg.suite.threads, "worker threads")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  app.add_option("--kset-depth", cfg.suite.kset_depth,
                 "self-similar sample depth")
      ->check(CLI::Range(1, 6))
      ->capture_default_str();
  app.add_option("--outdir", cfg.suite.outdir, "output directory")
      ->envname("SCMETRIC_OUTDIR")
      ->capture_default_str();

  CLI::App* cmd_build =
      app.add_subcommand("build", "construct nets and shortcuts, print census");

  CLI::App* cmd_distance = app.add_subcommand(
      "distance", "truncated shortcut distance between two points");
  std::vector<double> from, to;
  cmd_distance->add_option("--from", from, "source point X,Y,Z")
      ->required()
      ->delimiter(',')
      ->expected(3);
  cmd_distance->add_option("--to", to, "target point X,Y,Z")
      ->required()
      ->delimiter(',')
      ->expected(3);

  CLI::App* cmd_verify =
      app.add_subcommand("verify", "run a named verification suite");
  std::string suite;
  cmd_verify->add_option("--suite", suite,
                         "core | kset | vertical | snowflake")
      ->required();

  CLI::App* cmd_scan = app.add_subcommand("scan", "export a data series CSV");
  std::string kind;
  unsigned long long scan_max = 100;
  cmd_scan->add_option("--kind", kind, "ratio | ahlfors | blowup | aseq")
      ->required();
  cmd_scan->add_option("--max", scan_max, "row bound for the aseq series")
      ->capture_default_str();

  CLI::App* cmd_aseq =
      app.add_subcommand("aseq", "print the jump-availability sequence");
  unsigned long long aseq_max = 20;
  cmd_aseq->add_option("--max", aseq_max, "number of leading values")
      ->check(CLI::Range(1ull, 100000000ull))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 64;
  }

  try {
    if (cmd_build->parsed()) return run_build(cfg);
    if (cmd_distance->parsed()) return run_distance(cfg, from, to);
    if (cmd_verify->parsed()) return run_verify(cfg, suite);
    if (cmd_scan->parsed()) return run_scan(cfg, kind, scan_max);
    if (cmd_aseq->parsed()) return run_aseq(aseq_max);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 64;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 64;
}
