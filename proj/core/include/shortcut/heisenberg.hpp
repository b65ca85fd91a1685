#pragma once

#include <array>
#include <cmath>

namespace shortcut {

// Point of the first Heisenberg group in exponential coordinates.  The
// group product twists the vertical coordinate by half the planar cross
// term; dilations scale the vertical coordinate quadratically.
struct HPoint {
  double x{0.0};
  double y{0.0};
  double z{0.0};

  friend bool operator==(const HPoint&, const HPoint&) = default;
};

inline HPoint mul(const HPoint& p, const HPoint& q) {
  return {p.x + q.x, p.y + q.y, p.z + q.z + 0.5 * (p.x * q.y - p.y * q.x)};
}

inline HPoint inverse(const HPoint& p) { return {-p.x, -p.y, -p.z}; }

// Anisotropic dilation (x,y,z) -> (l x, l y, l^2 z); throws on l <= 0.
HPoint dilate(double lambda, const HPoint& p);

// Homogeneous quasi-norm max(|x|, |y|, sqrt|z|).
inline double box_norm(const HPoint& p) {
  return std::max(std::max(std::abs(p.x), std::abs(p.y)),
                  std::sqrt(std::abs(p.z)));
}

// Left-invariant box distance ||p^{-1} q||.
inline double box_distance(const HPoint& p, const HPoint& q) {
  return box_norm(mul(inverse(p), q));
}

inline std::array<double, 2> planar(const HPoint& p) { return {p.x, p.y}; }

inline bool is_central(const HPoint& p) { return p.x == 0.0 && p.y == 0.0; }

// Vertical composition: p * (0,0,s) only shifts z, with no twist.
inline HPoint vertical_shift(const HPoint& p, double s) {
  return {p.x, p.y, p.z + s};
}

// Normalization of the sub-Riemannian distance along the center:
// dist(0, (0,0,s)) = kappa * sqrt(s).  The geometric value of kappa is
// 2/sqrt(pi); scale-invariant ratio checks work with any kappa > 0.
struct VerticalNorm {
  double kappa{1.0};
  static VerticalNorm carnot();
};

// kappa * sqrt(s); throws on s < 0 or kappa <= 0.
double vertical_cc(double s, VerticalNorm norm = {});

}  // namespace shortcut
