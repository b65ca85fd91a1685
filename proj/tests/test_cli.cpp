#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string bin_path() {
  // Environment override first (manual runs), then the build-time location.
  if (const char* p = std::getenv("SCMETRIC_BIN")) return p;
#ifdef SCMETRIC_BIN
  return SCMETRIC_BIN;
#else
  REQUIRE_MESSAGE(false, "SCMETRIC_BIN must point at the tool binary");
  return "";
#endif
}

struct RunResult {
  int code = -1;
  std::string out;
};

// Runs the tool via the shell, capturing stdout+stderr.
RunResult run(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  fs::path tmp = fs::temp_directory_path() /
                 ("scmetric-cli-out-" + std::to_string(++counter) + ".txt");
  std::string cmd = env_prefix + "\"" + bin_path() + "\" " + args + " > " +
                    tmp.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  RunResult res;
  res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(tmp);
  std::ostringstream ss;
  ss << in.rdbuf();
  res.out = ss.str();
  fs::remove(tmp);
  return res;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("scmetric-cli-" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("aseq prints the schedule prefix") {
  RunResult r = run("aseq");
  CHECK(r.code == 0);
  CHECK(r.out == "0,0,0,1,0,0,0,1,0,0,0,1,0,0,1,1,0,0,0,1\n");
  RunResult r4 = run("aseq --max 4");
  CHECK(r4.code == 0);
  CHECK(r4.out == "0,0,0,1\n");
}

TEST_CASE("usage errors exit with 64") {
  CHECK(run("").code == 64);
  CHECK(run("migrate").code == 64);
  CHECK(run("verify").code == 64);
  CHECK(run("verify --suite bogus").code == 64);
  CHECK(run("scan --kind bogus").code == 64);
  CHECK(run("distance --from 0,0,0").code == 64);
  CHECK(run("--lambda 2.0 aseq").code == 64);
  CHECK(run("--space mars aseq").code == 64);
  CHECK(run("aseq --max 0").code == 64);
}

TEST_CASE("help exits cleanly") {
  RunResult r = run("--help");
  CHECK(r.code == 0);
  CHECK(r.out.find("verify") != std::string::npos);
  CHECK(r.out.find("distance") != std::string::npos);
}

TEST_CASE("verify writes a report and is thread deterministic") {
  fs::path d1 = fresh_dir("verify1");
  fs::path d2 = fresh_dir("verify2");
  RunResult r1 =
      run("--outdir " + d1.string() + " --threads 1 verify --suite vertical");
  CHECK(r1.code == 0);
  CHECK(r1.out.find("failed") != std::string::npos);
  fs::path rep1 = d1 / "scmetric-verify-vertical.json";
  REQUIRE(fs::exists(rep1));

  RunResult r2 =
      run("--outdir " + d2.string() + " --threads 4 verify --suite vertical");
  CHECK(r2.code == 0);
  fs::path rep2 = d2 / "scmetric-verify-vertical.json";
  REQUIRE(fs::exists(rep2));
  CHECK(slurp(rep1) == slurp(rep2));
}

TEST_CASE("scan emits CSV series") {
  fs::path d = fresh_dir("scan");
  RunResult blow = run("--outdir " + d.string() + " scan --kind blowup");
  CHECK(blow.code == 0);
  std::string csv = slurp(d / "scmetric-blowup.csv");
  CHECK(csv.rfind("j,s,ratio\n", 0) == 0);
  CHECK(csv.find("\n4,") != std::string::npos);

  RunResult aseq = run("--outdir " + d.string() + " scan --kind aseq --max 6");
  CHECK(aseq.code == 0);
  std::string acsv = slurp(d / "scmetric-aseq.csv");
  CHECK(acsv == "i,a\n1,0\n2,0\n3,0\n4,1\n5,0\n6,0\n");
}

TEST_CASE("scan ratio reports the per level decay") {
  fs::path d = fresh_dir("scan-ratio");
  RunResult r = run("--outdir " + d.string() + " scan --kind ratio");
  CHECK(r.code == 0);
  std::string csv = slurp(d / "scmetric-ratio.csv");
  CHECK(csv.rfind("level,alpha,ratio,eps\n", 0) == 0);
  CHECK(csv.find("\n3,") != std::string::npos);
  CHECK(csv.find("\n8,") != std::string::npos);
}

TEST_CASE("outdir honours the environment variable") {
  fs::path d = fresh_dir("envdir");
  RunResult r = run("scan --kind aseq --max 3",
                    "SCMETRIC_OUTDIR=" + d.string() + " ");
  CHECK(r.code == 0);
  CHECK(fs::exists(d / "scmetric-aseq.csv"));
}

TEST_CASE("config file supplies defaults and flags override it") {
  fs::path d_cfg = fresh_dir("cfgdir");
  fs::path d_flag = fresh_dir("flagdir");
  fs::path cfg = d_cfg / "scmetric.ini";
  {
    std::ofstream out(cfg);
    out << "outdir = " << d_cfg.string() << "\n";
    out << "threads = 2\n";
  }
  RunResult r1 = run("--config " + cfg.string() + " scan --kind aseq --max 3");
  CHECK(r1.code == 0);
  CHECK(fs::exists(d_cfg / "scmetric-aseq.csv"));

  RunResult r2 = run("--config " + cfg.string() + " --outdir " +
                     d_flag.string() + " scan --kind aseq --max 3");
  CHECK(r2.code == 0);
  CHECK(fs::exists(d_flag / "scmetric-aseq.csv"));
}

TEST_CASE("distance snaps its endpoints on the small grid") {
  RunResult r = run(
      "--grid-m 5 distance --from 0.1,0.1,0.01 --to 0.3,0.25,0.02");
  CHECK(r.code == 0);
  CHECK(r.out.find("snapped to") != std::string::npos);
  CHECK(r.out.find("d_hat = ") != std::string::npos);
  CHECK(r.out.find("eps = ") != std::string::npos);
  CHECK(r.out.find("d in [") != std::string::npos);

  RunResult bad = run("--grid-m 5 distance --from 2,0,0 --to 0,0,0");
  CHECK(bad.code == 64);
  CHECK(bad.out.find("sample box") != std::string::npos);
}

TEST_CASE("distance runs on the other spaces") {
  // Default resolution (m = 22) supports all six levels.
  RunResult snow = run(
      "--space snowflake distance --from 0.1,0,0 --to 0.9,0,0");
  CHECK(snow.code == 0);
  CHECK(snow.out.find("y, z ignored") != std::string::npos);
  CHECK(snow.out.find("d_hat = ") != std::string::npos);

  // m = 12 cannot resolve the level-6 annulus; that is a hard error, not a
  // silent shallower build.
  RunResult coarse = run(
      "--space snowflake --grid-m 12 distance --from 0.1,0,0 --to 0.9,0,0");
  CHECK(coarse.code == 1);
  CHECK(coarse.out.find("no sample point") != std::string::npos);

  RunResult kset = run(
      "--space kset --kset-depth 3 distance "
      "--from 0.5,0.5,0 --to 0.5,0.5,0.015625");
  CHECK(kset.code == 0);
  CHECK(kset.out.find("d_hat = 0") != std::string::npos);
}
