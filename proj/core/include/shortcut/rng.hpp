#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace shortcut {

// Deterministic random stream.  Substreams are derived from a base seed
// and a tag so that independent work items draw independent, repeatable
// values regardless of scheduling.  The uniform generators avoid
// std::uniform_real_distribution on purpose: its output is
// implementation defined, ours is not.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  static RngStream substream(std::uint64_t seed, std::string_view tag,
                             std::uint64_t index = 0) {
    // FNV-1a over the tag, mixed with the index.
    std::uint64_t h = 1469598103934665603ull;
    for (char c : tag) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    h ^= index + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return RngStream(seed ^ h);
  }

  std::uint64_t next() { return eng_(); }

  // Uniform in [0,1).
  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  // Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n) {
    // Rejection-free modulo is fine here; bias is irrelevant for tests
    // but we keep it tiny by using the full 64-bit state.
    return n == 0 ? 0 : eng_() % n;
  }

  bool coin() { return (eng_() & 1u) != 0; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace shortcut
