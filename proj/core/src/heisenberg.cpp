#include "shortcut/heisenberg.hpp"

#include <cmath>
#include <stdexcept>

namespace shortcut {

HPoint dilate(double lambda, const HPoint& p) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("dilate: factor must be positive");
  }
  return {lambda * p.x, lambda * p.y, lambda * lambda * p.z};
}

VerticalNorm VerticalNorm::carnot() { return {2.0 / std::sqrt(M_PI)}; }

double vertical_cc(double s, VerticalNorm norm) {
  if (s < 0.0) throw std::invalid_argument("vertical_cc: negative height");
  if (!(norm.kappa > 0.0)) {
    throw std::invalid_argument("vertical_cc: kappa must be positive");
  }
  return norm.kappa * std::sqrt(s);
}

}  // namespace shortcut
