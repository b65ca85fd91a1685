#pragma once

#include <string>

#include "shortcut/report.hpp"

namespace shortcut {

// Shared knobs for the verification suites and scan tables.  Kept plain so
// the CLI can map config-file keys onto fields one-to-one.
struct SuiteConfig {
  double lambda = 0.5;
  double cover_constant = 10.0;
  std::string schedule = "geometric";  // "geometric" | "zero"
  int trunc = 6;
  int grid_m = 7;
  unsigned long long seed = 2026;
  int threads = 1;
  int kset_depth = 6;
  std::string outdir = ".";
};

// name in {"core", "kset", "vertical", "snowflake"}.  Throws
// std::invalid_argument on anything else.
VerificationReport run_suite(const std::string& name, const SuiteConfig& cfg);

// Scan tables.  Row order and formatting are deterministic for a given
// configuration (independent of cfg.threads).
CsvTable ratio_series(const SuiteConfig& cfg);    // level,alpha,ratio,eps
CsvTable ahlfors_series(const SuiteConfig& cfg);  // scale,center,metric,count
CsvTable blowup_series(const SuiteConfig& cfg);   // j,s,ratio
CsvTable aseq_series(const SuiteConfig& cfg, unsigned long long max_index);  // i,a

}  // namespace shortcut
