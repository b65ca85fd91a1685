#pragma once

#include <string>
#include <vector>

namespace shortcut {

enum class CheckStatus { pass, fail, inconclusive };

const char* to_string(CheckStatus s);

struct CheckResult {
  std::string id;     // stable kebab-case identifier
  std::string group;  // property family, or "plumbing"
  CheckStatus status = CheckStatus::pass;
  double margin = 0.0;  // smallest observed slack; negative on failure
  std::string details;
};

struct VerificationReport {
  std::string suite;
  std::vector<CheckResult> checks;

  int passed() const;
  int failed() const;
  int inconclusive() const;
  bool all_passed() const { return failed() == 0 && inconclusive() == 0; }

  // 0 all pass, 1 any failure, 2 inconclusive only.
  int exit_code() const;
};

// Locale-free formatting with 12 significant digits.
std::string format_sig(double v);

// Deterministic field order, no timestamps.
std::string to_json(const VerificationReport& report);
void write_text_file(const std::string& path, const std::string& content);

struct CsvTable {
  std::string header;
  std::vector<std::string> rows;
  std::string to_string() const;
};

}  // namespace shortcut
