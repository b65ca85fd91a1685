#include "shortcut/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace shortcut {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::inconclusive:
      return "inconclusive";
  }
  return "?";
}

int VerificationReport::passed() const {
  int n = 0;
  for (const auto& c : checks) n += c.status == CheckStatus::pass;
  return n;
}

int VerificationReport::failed() const {
  int n = 0;
  for (const auto& c : checks) n += c.status == CheckStatus::fail;
  return n;
}

int VerificationReport::inconclusive() const {
  int n = 0;
  for (const auto& c : checks) n += c.status == CheckStatus::inconclusive;
  return n;
}

int VerificationReport::exit_code() const {
  if (failed() > 0) return 1;
  if (inconclusive() > 0) return 2;
  return 0;
}

std::string format_sig(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string to_json(const VerificationReport& report) {
  nlohmann::ordered_json j;
  j["suite"] = report.suite;
  j["passed"] = report.passed();
  j["failed"] = report.failed();
  j["inconclusive"] = report.inconclusive();
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json e;
    e["id"] = c.id;
    e["group"] = c.group;
    e["status"] = to_string(c.status);
    e["margin"] = format_sig(c.margin);
    e["details"] = c.details;
    arr.push_back(e);
  }
  j["checks"] = arr;
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string CsvTable::to_string() const {
  std::string out = header + "\n";
  for (const auto& r : rows) {
    out += r;
    out += '\n';
  }
  return out;
}

}  // namespace shortcut
