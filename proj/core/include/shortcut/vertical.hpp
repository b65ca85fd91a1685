#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "shortcut/heisenberg.hpp"
#include "shortcut/rng.hpp"

namespace shortcut {

// Prime-progression 0/1 schedule deciding at which scales 4^-n a vertical
// jump is available.  a(i) = 1 iff i = p_l * (1 + l * k * prod_{h<l} p_h)
// for some l >= 1 and odd k.
class ASequence {
 public:
  explicit ASequence(std::size_t max_index);

  int a(std::size_t i) const;  // i in [1, max_index]
  std::size_t max_index() const { return bits_.size() - 1; }

  static std::uint64_t nth_prime(int ell);         // 1-based: 2, 3, 5, ...
  static std::uint64_t progression_step(int ell);  // ell * prod_{h<=ell} p_h
  // i lies in the ell-th progression {p_ell + step*k : k >= 0} (any parity).
  static bool in_progression(std::uint64_t i, int ell);

 private:
  std::vector<std::uint8_t> bits_;
};

// In every window {i, ..., i+step} there is j with a(j) != a(j+step),
// step = ell * prod_{h<=ell} p_h; the witness is the unique j in the
// window congruent to p_ell mod step.
struct FlipCheck {
  std::uint64_t step = 0;
  std::uint64_t windows = 0;
  std::uint64_t failures = 0;
};
FlipCheck window_flip_check(const ASequence& seq, int ell,
                            std::uint64_t i_max);

// min(1/sqrt(t), (1/2) sqrt(2t/(t+1))) on [1,4]; > 1/2 strictly inside.
double f_lower_bound(double t);

// Levels n with a(n) = 1 available to the vertical search, ascending.
struct JumpMenu {
  std::vector<int> levels;
  static JumpMenu from_sequence(const ASequence& seq, int min_level,
                                int max_level, int excluded_level = 0);
};

struct VerticalQuery {
  double height = 0.0;  // signed vertical displacement to realize
  VerticalNorm norm{};
  int max_jumps_per_level = 3;
};

struct VerticalValue {
  double cost = 0.0;
  std::vector<std::pair<int, int>> jumps;  // (level, signed count), used only
  double residual = 0.0;                   // signed walk height
};

// Best cost over signed menu jumps (kappa/2 * 2^-n each) plus one signed
// residual walk (kappa * sqrt(|height|)); exact branch and bound over the
// restricted class, which upper-bounds the vertical distance.
VerticalValue vertical_upper(const VerticalQuery& query, const JumpMenu& menu);

// Independent odometer over explicit entries; shortcut entries cost
// kappa/2 * sqrt(height), walk entries kappa * sqrt(height) per use.
struct BruteEntry {
  double height;
  bool shortcut;
};
double vertical_bruteforce(double target, VerticalNorm norm,
                           std::span<const BruteEntry> menu, int max_jumps);

// Upper-vs-analytic-lower consistency on (n, t) grids.
struct BoundGridResult {
  int checked = 0;
  int violations = 0;
  double worst_margin = 0.0;  // min of upper - lower
};
// lower = f(t) * kappa * sqrt(t) * 2^-n over t in (1,4), all n.
BoundGridResult general_bound_grid(const ASequence& seq, int n_min, int n_max,
                                   int t_points);
// lower = (1/sqrt 3) * kappa * sqrt(t) * 2^-n over t in [0.51, 2), a(n) = 0.
BoundGridResult gap_level_bound_grid(const ASequence& seq, int n_min,
                                     int n_max, int t_points);

// Largest eta on a fixed grid in (0, 1/2) such that
// 1/2 + sqrt(|t|) <= (1/2 + eps) sqrt(1+t) whenever |t| <= eta.
double eta_for_epsilon(double eps);

// Jump-then-walk certificate at height (1+t) 4^-n.
struct TwoStepCheck {
  double cost = 0.0;
  double bound = 0.0;
  double search_cost = 0.0;
  bool ok = false;
};
TwoStepCheck two_step_certificate(const ASequence& seq, int n, double t,
                                  double eps, VerticalNorm norm = {});

// Shortcut pairs anchored on planar dyadic centers: ((x,y,z), (x,y,z)*(0,0,4^-n)).
struct ColumnShortcut {
  HPoint a, b;
  int level;
  double cost;
};
std::vector<ColumnShortcut> column_family(const ASequence& seq, int min_level,
                                          int max_level,
                                          std::array<double, 2> xwin,
                                          std::array<double, 2> ywin,
                                          std::span<const double> zs,
                                          VerticalNorm norm);
// Planar dyadic centers of sidelength 2^-level inside the window.
std::vector<std::array<double, 2>> dyadic_centers(int level,
                                                  std::array<double, 2> xwin,
                                                  std::array<double, 2> ywin);

// Column anchored near a dyadic-cell corner: itineraries either leave the
// planar ball around the corner (sampled paths; cost at least
// (1-2*delta) 2^-n) or stay inside, where no level-n jump exists and the
// gap-level search bound applies.  Uses the Carnot normalization.
struct CornerColumnCheck {
  int paths = 0;
  int escape_violations = 0;
  double escape_worst = 0.0;   // min sampled escape cost minus bound
  double in_column_cost = 0.0; // constrained search value
  double bound = 0.0;          // (1/sqrt 3) * kappa * sqrt(t) * 2^-n
  bool delta_admissible = false;
  bool ok = false;
};
CornerColumnCheck corner_column_check(const ASequence& seq, int n, double t,
                                      double delta, int paths, RngStream& rng);

// Walk-to-center, jump, walk-back certificate for columns near a dyadic
// center; exact piecewise costs, Carnot normalization.
struct ColumnUpperCheck {
  double cost = 0.0;
  double bound = 0.0;
  double eta = 0.0;
  bool ok = false;
};
ColumnUpperCheck column_upper_check(const ASequence& seq, int n, double t,
                                    double eps,
                                    std::array<double, 2> planar_offset);

// Blow-up ratios r_j(s) = search(4^-j s^2) / (2^-j s) (kappa-invariant).
struct BlowupRow {
  int j;
  double s;
  double ratio;
};
std::vector<BlowupRow> blowup_table(const ASequence& seq,
                                    std::span<const int> js,
                                    std::span<const double> ss,
                                    int menu_extra_depth = 12);
// Scale pair at the given log-gap with one ratio at or below the low
// threshold and the shifted one at or above the high threshold.
struct ContrastPair {
  int j_low = -1, j_high = -1;
  double low_ratio = 0.0, high_ratio = 0.0;
  bool found = false;
};
ContrastPair blowup_contrast(std::span<const BlowupRow> table, double s,
                             int gap, double low_threshold = 0.52,
                             double high_threshold = 0.55);

}  // namespace shortcut
